// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

void verdict(int id, const char* name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double min_gap(const VerificationReport& r, const std::string& prefix, std::size_t* evaluated = nullptr) {
  double m = kInf;
  std::size_t n = 0;
  for (const auto& rec : r.records())
    if (rec.name.rfind(prefix, 0) == 0 && rec.status != Status::skipped) {
      m = std::min(m, rec.gap);
      ++n;
    }
  if (evaluated) *evaluated = n;
  return m;
}

double cnj_exact(double p) { return std::max(std::exp2(2.0 / p - 1.0), std::exp2(1.0 - 2.0 / p)); }

void schatten_consistency() {
  Timer t;
  double worst = 0.0;
  Rng rng(20240101);
  for (int i = 0; i < 200; ++i) {
    const Matrix m = random_matrix(rng, 1 + rng.below(8));
    const auto s = singular_values(m);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      double sum = 0.0;
      for (double x : s.values()) sum += std::pow(x, p);
      worst = std::max(worst, std::abs(luxemburg_norm(power_function(p), s).value - std::pow(sum, 1.0 / p)));
    }
  }
  const double secs = t.seconds();
  verdict(1, "schatten consistency", worst <= 1e-9 && secs < 10.0,
          fmt("max |err| = %.3g (tol 1e-9), %.2f s (limit 10 s)", worst, secs));
}

void norm_relation() {
  const std::array<OrliczFunction, 3> phis = {power_function(1.2), power_function(2.0), power_function(3.0)};
  Rng rng(7);
  double lower = kInf, upper = kInf;
  for (int i = 0; i < 500; ++i) {
    const auto& phi = phis[i % 3];
    const Matrix m = random_matrix(rng, 1 + rng.below(6));
    const double lux = luxemburg_norm(phi, m).value, orl = orlicz_norm(phi, m).value;
    lower = std::min(lower, orl - lux);
    upper = std::min(upper, 2.0 * lux + 1e-8 - orl);
  }
  verdict(2, "norm relation", lower >= 0.0 && upper >= 0.0,
          fmt("min(orlicz - luxemburg) = %.3g, min(2 luxemburg + 1e-8 - orlicz) = %.3g over 500", lower, upper));
}

void thm21_suite() {
  SuiteConfig c;
  c.trials = 500;
  c.seed = 42;
  const auto rep = run_suite("thm2.1", c);
  bool ok = rep.ok();
  std::string detail;
  for (const char* part : {"thm2.1(1)", "thm2.1(2)", "holder", "thm2.1(4)", "thm2.1(5)"}) {
    std::size_t n = 0;
    const double g = min_gap(rep, part, &n);
    ok = ok && n >= 500 && g >= -1e-8;
    detail += fmt("%s n=%zu min=%.3g; ", part, n, g);
  }
  // Doubling with k = 2^p on T = B diagonal PSD is the equality 2^p upsilon = (k/2) 2 upsilon.
  double exact = 0.0;
  Rng rng(99);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const TupleSpaceSpec spec(power_function(p), power_function(p), 2.0);
    for (int i = 0; i < 25; ++i) {
      const OperatorPair t{random_matrix(rng, 4, MatrixKind::diagonal_psd), random_matrix(rng, 3, MatrixKind::diagonal_psd)};
      const auto k = delta2_constants(spec, t, t);
      ok = ok && k[0] == std::exp2(p) && k[1] == std::exp2(p);
      const auto r = check_delta2_triangle(spec, t, t, k[0], k[1]);
      exact = std::max(exact, std::abs(r.records().front().gap));
    }
  }
  ok = ok && exact <= 1e-9;
  detail += fmt("k=2^p equality |gap| max %.3g (tol 1e-9)", exact);
  verdict(3, "modular inequality suite", ok, detail);
}

void dual_formula() {
  const TupleSpaceSpec spec(power_function(2.0), power_function(3.0), 2.0);
  double upper = kInf, ratio = kInf;
  for (int i = 0; i < 40; ++i) {
    Rng rng(Rng::derive(4, static_cast<std::uint64_t>(i)));
    const auto kind = i % 2 ? MatrixKind::diagonal : MatrixKind::diagonal_psd;
    const OperatorPair t{random_matrix(rng, 4, kind), random_matrix(rng, 1 + rng.below(4), kind)};
    const double norm = tuple_luxemburg_norm(spec, t);
    const auto est = dual_norm_estimate(spec, t, 10000, i);
    upper = std::min(upper, norm + 1e-9 - est.value);
    ratio = std::min(ratio, est.witness / norm);
  }
  verdict(4, "dual formula", upper >= 0.0 && ratio >= 0.9,
          fmt("min(norm + 1e-9 - estimate) = %.3g, min witness/norm = %.6f (need >= 0.9), 40 diagonal tuples, budget 1e4",
              upper, ratio));
}

void intermediate_identity() {
  double worst = 0.0;
  for (auto [alpha, p] : {std::pair{1.2, 1.5}, std::pair{1.5, 1.8}}) {
    const double s = 2.0 * (p - alpha) / (p * (2.0 - alpha));
    const auto phis = intermediate(power_function(alpha), power_function(2.0), s);
    for (int i = 0; i <= 1000; ++i) {
      const double u = 0.01 * std::pow(1000.0, i / 1000.0);
      worst = std::max(worst, std::abs(phis(u) / std::pow(u, p) - 1.0));
    }
  }
  verdict(5, "intermediate function identity", worst <= 1e-6, fmt("max relative error %.3g (tol 1e-6)", worst));
}

void clarkson_sp() {
  bool ok = true;
  std::string detail;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    SuiteConfig c;
    c.p = p;
    c.dim = 5;
    c.trials = 1000;
    c.seed = 42;
    const auto rep = run_suite("clarkson-sp", c);
    const auto sum = rep.summary();
    ok = ok && rep.ok() && sum.passed >= 1000;
    detail += fmt("p=%g violations=%zu min=%.3g; ", p, sum.failed, min_gap(rep, "clarkson-sp"));
    if (p == 2.0) {
      double worst = 0.0;
      for (const auto& r : rep.records()) worst = std::max(worst, std::abs(r.gap));
      ok = ok && worst <= 1e-9;
      detail += fmt("p=2 max |gap| %.3g; ", worst);
    }
  }
  verdict(6, "clarkson S_p", ok, detail);
}

void clarkson_orlicz() {
  SuiteConfig c;
  c.phi = "power:1.5";
  c.trials = 500;
  c.seed = 42;
  const auto rep = run_suite("clarkson-orlicz", c);
  bool ok = rep.ok();
  std::string detail;
  for (const auto& name : rep.check_names()) {
    const auto st = rep.statistics(name);
    ok = ok && st.evaluated == 500 && st.min_gap >= -1e-8;
    detail += fmt("%s n=%zu min=%.3g; ", name.c_str(), st.evaluated, st.min_gap);
  }
  verdict(7, "clarkson orlicz", ok && rep.check_names().size() == 4, detail);
}

void riesz_thorin() {
  SuiteConfig c;
  c.trials = 500;
  c.seed = 42;
  const auto rep = run_suite("riesz-thorin", c);
  bool ok = rep.ok();
  std::string detail;
  for (const auto& name : rep.check_names()) {
    const auto st = rep.statistics(name);
    ok = ok && st.evaluated == 500;
    detail += fmt("%s violations=%zu min=%.3g; ", name.c_str(), st.failed, st.min_gap);
  }
  verdict(8, "riesz-thorin clarkson configuration", ok && rep.check_names().size() == 3, detail);
}

void cnj_reproduction() {
  bool ok = true;
  std::string detail;
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    Timer t;
    const auto e = estimate_cnj(power_function(p), 4, 20000, 42);
    const double secs = t.seconds();
    const auto [x, y] = extremal_pair(p, 4);
    const double w = nj_functional(NormEvaluator::luxemburg(power_function(p)), x, y);
    const double want = cnj_exact(p);
    ok = ok && std::abs(e.value - want) <= 2e-2 && std::abs(w - want) <= 1e-10 && secs < 60.0;
    detail += fmt("p=%g est=%.6f exact=%.6f witness err=%.1g %.2fs; ", p, e.value, want, std::abs(w - want), secs);
  }
  verdict(9, "von Neumann-Jordan constant of S_p", ok, detail);
}

void indices() {
  double worst = 0.0;
  for (double p : {1.0, 2.0, 4.0}) {
    const auto phi = power_function(p);
    const double want = std::exp2(-1.0 / p);
    worst = std::max({worst, std::abs(index_alpha(phi) - want), std::abs(index_beta(phi) - want)});
  }
  verdict(10, "indices", worst <= 1e-6, fmt("max |index - 2^(-1/p)| = %.3g (tol 1e-6)", worst));
}

void bound_suite() {
  struct Case {
    double base, s;
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : {Case{1.2, 0.5}, Case{1.5, 0.4}, Case{4.0, 1.0 / 3.0}, Case{1.0, 0.5}, Case{3.0, 0.5}}) {
    const auto r = check_bounds(power_function(c.base), c.s, 4, 20000, 42);
    const auto sum = r.report.summary();
    ok = ok && r.report.ok() && sum.skipped == 0 && sum.passed == 5;
    detail += fmt("power:%g s=%.4g c=%.5f J=%.5f pass=%zu/5; ", c.base, c.s, r.cnj.value, r.nonsquare.value, sum.passed);
  }
  verdict(11, "geometric constant bounds", ok, detail);
}

std::string capture(const std::string& cmd, int* code) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {};
  std::string out;
  std::array<char, 65536> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void determinism() {
  const std::string cmd = std::string(ORLICZ_CLI) + " verify --suite all --seed 1";
  int c1 = -1, c2 = -1;
  const std::string a = capture(cmd, &c1), b = capture(cmd, &c2);
  verdict(12, "determinism", !a.empty() && a == b && c1 == c2,
          fmt("two runs: %zu and %zu bytes, %s, exit %d/%d", a.size(), b.size(), a == b ? "identical" : "different", c1, c2));
}

}  // namespace

int main() {
  schatten_consistency();
  norm_relation();
  thm21_suite();
  dual_formula();
  intermediate_identity();
  clarkson_sp();
  clarkson_orlicz();
  riesz_thorin();
  cnj_reproduction();
  indices();
  bound_suite();
  determinism();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
