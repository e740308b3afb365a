#pragma once

// Verification reports: one record per (check, trial) with a status, the
// numeric gap (>= 0 means the inequality holds) and, on failure, a witness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

namespace orlicz {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "unknown";
}

struct CheckRecord {
  std::string name;
  Status status = Status::skipped;
  double gap = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json witness;  // null unless status == fail
  std::string note;
};

struct ReportSummary {
  std::size_t total = 0, passed = 0, failed = 0, skipped = 0;
};

struct CheckStatistics {
  std::size_t evaluated = 0, passed = 0, failed = 0, skipped = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  double mean_gap = 0.0;
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string suite = {}) : suite_(std::move(suite)) {}

  const std::string& suite() const { return suite_; }
  const std::vector<CheckRecord>& records() const { return records_; }
  nlohmann::json& config() { return config_; }
  const nlohmann::json& config() const { return config_; }

  /// Records gap >= -slack as pass; the witness is kept only on failure.
  void add_gap(std::string name, double gap, double slack, std::uint64_t seed, const nlohmann::json& witness = {},
               std::string note = {}) {
    CheckRecord r{std::move(name), gap >= -slack ? Status::pass : Status::fail, gap, seed, {}, std::move(note)};
    if (std::isnan(gap)) r.status = Status::fail;
    if (r.status == Status::fail) r.witness = witness;
    records_.push_back(std::move(r));
  }

  void add_skipped(std::string name, std::uint64_t seed, std::string note) {
    records_.push_back({std::move(name), Status::skipped, 0.0, seed, {}, std::move(note)});
  }

  void add(CheckRecord r) { records_.push_back(std::move(r)); }

  void merge(const VerificationReport& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  }

  ReportSummary summary() const {
    ReportSummary s;
    for (const auto& r : records_) {
      ++s.total;
      if (r.status == Status::pass) ++s.passed;
      else if (r.status == Status::fail) ++s.failed;
      else ++s.skipped;
    }
    return s;
  }

  bool ok() const { return summary().failed == 0; }

  CheckStatistics statistics(const std::string& name) const {
    CheckStatistics st;
    double sum = 0.0;
    for (const auto& r : records_) {
      if (r.name != name) continue;
      if (r.status == Status::skipped) {
        ++st.skipped;
        continue;
      }
      ++st.evaluated;
      r.status == Status::pass ? ++st.passed : ++st.failed;
      st.min_gap = std::min(st.min_gap, r.gap);
      sum += r.gap;
    }
    if (st.evaluated > 0) st.mean_gap = sum / static_cast<double>(st.evaluated);
    return st;
  }

  std::vector<std::string> check_names() const {
    std::vector<std::string> names;
    for (const auto& r : records_)
      if (std::find(names.begin(), names.end(), r.name) == names.end()) names.push_back(r.name);
    std::sort(names.begin(), names.end());
    return names;
  }

  /// Stable order by (check name, seed) so output does not depend on the
  /// order trials finished in.
  void sort() {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return std::tie(a.name, a.seed) < std::tie(b.name, b.seed); });
  }

 private:
  std::string suite_;
  std::vector<CheckRecord> records_;
  nlohmann::json config_ = nlohmann::json::object();
};

/// %.17g, the fixed formatting used in every emitted report.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

// JSON has no inf/nan; those are written as strings.
inline nlohmann::json number(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

}  // namespace detail

inline nlohmann::json to_json(const VerificationReport& report) {
  VerificationReport sorted = report;
  sorted.sort();
  const auto sum = sorted.summary();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& name : sorted.check_names()) {
    const auto st = sorted.statistics(name);
    checks.push_back({{"name", name},
                      {"evaluated", st.evaluated},
                      {"passed", st.passed},
                      {"failed", st.failed},
                      {"skipped", st.skipped},
                      {"min_gap", st.evaluated ? detail::number(st.min_gap) : nlohmann::json()},
                      {"mean_gap", st.evaluated ? detail::number(st.mean_gap) : nlohmann::json()}});
  }
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : sorted.records()) {
    nlohmann::json j = {{"name", r.name}, {"status", to_string(r.status)}, {"gap", detail::number(r.gap)}, {"seed", r.seed}};
    if (!r.witness.is_null()) j["witness"] = r.witness;
    if (!r.note.empty()) j["note"] = r.note;
    records.push_back(std::move(j));
  }
  return {{"suite", sorted.suite()},
          {"config", sorted.config()},
          {"summary", {{"total", sum.total}, {"passed", sum.passed}, {"failed", sum.failed}, {"skipped", sum.skipped}}},
          {"checks", std::move(checks)},
          {"records", std::move(records)}};
}

namespace detail {

inline double read_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("report: expected a number");
}

}  // namespace detail

/// Inverse of to_json; summary and per-check statistics are recomputed.
inline VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport rep(j.at("suite").get<std::string>());
  if (j.contains("config")) rep.config() = j.at("config");
  for (const auto& r : j.at("records")) {
    CheckRecord c;
    c.name = r.at("name").get<std::string>();
    const auto status = r.at("status").get<std::string>();
    if (status == "pass") c.status = Status::pass;
    else if (status == "fail") c.status = Status::fail;
    else if (status == "skipped") c.status = Status::skipped;
    else throw std::invalid_argument("report: unknown status " + status);
    c.gap = detail::read_number(r.at("gap"));
    c.seed = r.at("seed").get<std::uint64_t>();
    if (r.contains("witness")) c.witness = r.at("witness");
    if (r.contains("note")) c.note = r.at("note").get<std::string>();
    rep.add(std::move(c));
  }
  return rep;
}

/// One row per check: name,evaluated,passed,failed,skipped,min_gap,mean_gap.
inline void write_csv(std::ostream& out, const VerificationReport& report) {
  out << "suite,check,evaluated,passed,failed,skipped,min_gap,mean_gap\n";
  for (const auto& name : report.check_names()) {
    const auto st = report.statistics(name);
    out << report.suite() << ',' << name << ',' << st.evaluated << ',' << st.passed << ',' << st.failed << ','
        << st.skipped << ',' << (st.evaluated ? format_double(st.min_gap) : "") << ','
        << (st.evaluated ? format_double(st.mean_gap) : "") << '\n';
  }
}

inline void write_text(std::ostream& out, const VerificationReport& report) {
  const auto sum = report.summary();
  out << "suite " << report.suite() << ": " << sum.passed << " passed, " << sum.failed << " failed, " << sum.skipped
      << " skipped\n";
  for (const auto& name : report.check_names()) {
    const auto st = report.statistics(name);
    out << "  " << (st.failed ? "FAIL " : "ok   ") << name << "  evaluated=" << st.evaluated
        << " skipped=" << st.skipped;
    if (st.evaluated) out << " min_gap=" << format_double(st.min_gap);
    out << '\n';
  }
}

}  // namespace orlicz
