// orlicz: command-line front end.
//
//   orlicz norm      --phi power:2 --matrix t.csv
//   orlicz conjugate --phi power:3 [--lo 1e-6 --hi 1e3 --count 2048]
//   orlicz indices   --phi grid:phi.csv
//   orlicz verify    --suite all --seed 1
//   orlicz constants --phi power:1.5 --s 0.4 --dim 4 --budget 20000
//   orlicz report    --in report.json --format csv
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage,
// parse or numerical error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "orlicz/orlicz.hpp"

namespace {

using nlohmann::json;
using orlicz::format_double;

enum class Format { json, csv, text };

bool debug_enabled() {
  const char* v = std::getenv("ORLICZ_LOG");
  return v && std::string(v) == "debug";
}

void debug(const std::string& msg) {
  if (debug_enabled()) std::cerr << "[orlicz] " << msg << '\n';
}

struct Output {
  Format format = Format::json;
  std::string path;

  void write(const std::string& body) const {
    if (path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
  }
};

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return orlicz::kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

json norm_result_json(const orlicz::NormResult& r) {
  return {{"value", orlicz::detail::number(r.value)},
          {"method", orlicz::to_string(r.method)},
          {"residual", orlicz::detail::number(r.residual)}};
}

// Flat (key, value) rows for csv and text output of the non-report commands.
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_number_float()) {
    rows.emplace_back(prefix, format_double(j.get<double>()));
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string render(const json& j, Format f) {
  if (f == Format::json) return j.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::ostringstream out;
  if (f == Format::csv) out << "key,value\n";
  for (const auto& [k, v] : rows) out << k << (f == Format::csv ? "," : ": ") << v << '\n';
  return out.str();
}

std::string render(const orlicz::VerificationReport& rep, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::json: out << orlicz::to_json(rep).dump(2) << '\n'; break;
    case Format::csv: orlicz::write_csv(out, rep); break;
    case Format::text: orlicz::write_text(out, rep); break;
  }
  return out.str();
}

int exit_code(const orlicz::VerificationReport& rep) { return rep.ok() ? 0 : 1; }

// ---------------------------------------------------------------------------

int cmd_norm(const std::string& phi_spec, const std::string& matrix_path, int budget, std::uint64_t seed,
             const Output& out) {
  const auto phi = orlicz::parse_function(phi_spec);
  const auto t = orlicz::load_matrix(matrix_path);
  const auto s = orlicz::singular_values(t);
  json j = {{"command", "norm"}, {"phi", phi.label()}, {"dim", t.dim()}};
  json sv = json::array();
  for (double x : s.values()) sv.push_back(orlicz::detail::number(x));
  j["singular_values"] = sv;
  j["luxemburg"] = norm_result_json(orlicz::luxemburg_norm(phi, s));
  j["orlicz"] = norm_result_json(orlicz::orlicz_norm(phi, s));
  if (auto p = phi.power_exponent())
    j["schatten"] = {{"p", *p}, {"value", orlicz::detail::number(orlicz::schatten_norm(*p, s))}};
  if (budget > 0) {
    j["orlicz_dual_search"] = {{"value", orlicz::detail::number(orlicz::orlicz_norm_dual_search(phi, s.values(), budget, seed))},
                               {"budget", budget},
                               {"seed", seed}};
  }
  out.write(render(j, out.format));
  return 0;
}

int cmd_conjugate(const std::string& phi_spec, const orlicz::GridSpec& grid, const Output& out) {
  const auto phi = orlicz::parse_function(phi_spec);
  const auto g = orlicz::tabulate(orlicz::conjugate(phi), grid);
  if (out.format == Format::json) {
    json nodes = json::array(), values = json::array();
    for (double x : g.nodes()) nodes.push_back(x);
    for (double x : g.values()) values.push_back(x);
    out.write(json{{"command", "conjugate"}, {"phi", phi.label()}, {"nodes", nodes}, {"values", values}}.dump(2) + "\n");
  } else {
    std::ostringstream s;
    orlicz::write_grid_csv(s, g);
    out.write(s.str());
  }
  return 0;
}

int cmd_indices(const std::string& phi_spec, double u_max, int samples, const Output& out) {
  const auto phi = orlicz::parse_function(phi_spec);
  const auto est = orlicz::index_estimates(phi);
  json ratios = json::array();
  for (double r : est.ratios) ratios.push_back(r);
  json issues = json::array();
  for (const auto& i : orlicz::validate(phi)) issues.push_back(i);
  json j = {{"command", "indices"},
            {"phi", phi.label()},
            {"alpha", est.alpha},
            {"beta", est.beta},
            {"spread", est.spread},
            {"converged", est.converged},
            {"delta2", {{"k", orlicz::delta2_probe(phi, u_max, samples)}, {"u_max", u_max}, {"samples", samples}}},
            {"ratios", ratios},
            {"issues", issues}};
  out.write(render(j, out.format));
  return issues.empty() ? 0 : 1;
}

int cmd_verify(const std::string& suite, const orlicz::SuiteConfig& cfg, const Output& out) {
  const auto& names = orlicz::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "error: unknown suite '" << suite << "'\n";
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = orlicz::run_suite(suite, cfg);
  debug("suite " + suite + " took " +
        format_double(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
  out.write(render(rep, out.format));
  return exit_code(rep);
}

int cmd_constants(const std::string& phi_spec, std::optional<double> s, std::size_t dim, int budget, std::uint64_t seed,
                  const Output& out) {
  const auto phi = orlicz::parse_function(phi_spec);
  const auto r = orlicz::check_bounds(phi, s, dim, budget, seed);
  if (out.format == Format::json) {
    json j = orlicz::to_json(r.report);
    j["phi_s"] = r.phi_s.label();
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["cnj"] = orlicz::to_json(r.cnj);
    j["nonsquare"] = orlicz::to_json(r.nonsquare);
    out.write(j.dump(2) + "\n");
  } else {
    std::ostringstream o;
    if (out.format == Format::csv) {
      orlicz::write_csv(o, r.report);
      o << "quantity,value\n";
      o << "cnj," << format_double(r.cnj.value) << "\nnonsquare," << format_double(r.nonsquare.value) << "\nalpha,"
        << format_double(r.alpha) << "\nbeta," << format_double(r.beta) << '\n';
    } else {
      o << "phi_s: " << r.phi_s.label() << "\n";
      o << "cnj: " << format_double(r.cnj.value) << "\nnonsquare: " << format_double(r.nonsquare.value)
        << "\nalpha: " << format_double(r.alpha) << "\nbeta: " << format_double(r.beta) << '\n';
      orlicz::write_text(o, r.report);
      o << "cnj witness: " << orlicz::to_json(r.cnj)["witness"].dump() << '\n';
      o << "nonsquare witness: " << orlicz::to_json(r.nonsquare)["witness"].dump() << '\n';
    }
    out.write(o.str());
  }
  return exit_code(r.report);
}

int cmd_report(const std::string& in_path, const Output& out) {
  std::ifstream in(in_path);
  if (!in) throw orlicz::ParseError("cannot open " + in_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw orlicz::ParseError(in_path + ": " + e.what());
  }
  const auto rep = orlicz::report_from_json(j);
  out.write(render(rep, out.format));
  return exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, conjugates and inequality checks for noncommutative Orlicz sequence spaces"};
  app.require_subcommand(1);

  Output out;
  std::string format = "json";
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", out.path, "write to this file instead of stdout");
  };

  std::string phi_spec = "power:2", matrix_path, in_path, suite;
  int budget = 0;
  std::uint64_t seed = 42;

  auto* norm = app.add_subcommand("norm", "Luxemburg, Orlicz and Schatten norms of a matrix");
  norm->add_option("--phi", phi_spec, "power:<p> or grid:<csv>")->required();
  norm->add_option("--matrix", matrix_path, "CSV or JSON matrix")->required();
  norm->add_option("--budget", budget, "also run the dual search for the Orlicz norm with this many evaluations");
  norm->add_option("--seed", seed, "seed of the dual search");
  add_output(norm);

  orlicz::GridSpec grid;
  bool linear = false;
  auto* conj = app.add_subcommand("conjugate", "tabulate the complementary function");
  conj->add_option("--phi", phi_spec, "power:<p> or grid:<csv>")->required();
  conj->add_option("--lo", grid.lo, "first positive node");
  conj->add_option("--hi", grid.hi, "last node");
  conj->add_option("--count", grid.count, "number of nodes");
  conj->add_flag("--linear", linear, "evenly spaced nodes instead of log spacing");
  add_output(conj);

  double u_max = 1.0;
  int samples = 256;
  auto* idx = app.add_subcommand("indices", "indices alpha/beta, doubling constant and axiom checks");
  idx->add_option("--phi", phi_spec, "power:<p> or grid:<csv>")->required();
  idx->add_option("--u-max", u_max, "upper end of the doubling probe");
  idx->add_option("--samples", samples, "doubling probe samples");
  add_output(idx);

  orlicz::SuiteConfig cfg;
  std::string p_text = "2";
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "thm2.1, holder, ideal, dual, riesz-thorin, clarkson-orlicz, clarkson-sp or all")
      ->required();
  verify->add_option("--phi1", cfg.phi1, "first slot function");
  verify->add_option("--phi2", cfg.phi2, "second slot function");
  verify->add_option("--phi", cfg.phi, "base function of the interpolation suites");
  verify->add_option("--p", p_text, "aggregation exponent (1..inf)");
  verify->add_option("--dim", cfg.dim, "matrix dimension")->check(CLI::Range(1, 64));
  verify->add_option("--trials", cfg.trials, "trials per check")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", cfg.seed, "base seed");
  verify->add_option("--budget", cfg.budget, "dual estimator budget per trial")->check(CLI::NonNegativeNumber);
  add_output(verify);

  std::optional<double> s;
  std::size_t dim = 4;
  int const_budget = 20000;
  std::uint64_t const_seed = 42;
  auto* constants = app.add_subcommand("constants", "estimate c_NJ and J and check their bounds");
  constants->add_option("--phi", phi_spec, "power:<p> or grid:<csv>")->required();
  constants->add_option("--s", s, "interpolate with u^2 at this s in (0, 1]");
  constants->add_option("--dim", dim, "matrix dimension")->check(CLI::Range(2, 64));
  constants->add_option("--budget", const_budget, "functional evaluations per constant")->check(CLI::PositiveNumber);
  constants->add_option("--seed", const_seed, "search seed");
  add_output(constants);

  auto* report = app.add_subcommand("report", "re-render a JSON verification report");
  report->add_option("--in", in_path, "report produced by verify")->required();
  add_output(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  out.format = format == "csv" ? Format::csv : format == "text" ? Format::text : Format::json;
  grid.log_spaced = !linear;

  try {
    if (*norm) return cmd_norm(phi_spec, matrix_path, budget, seed, out);
    if (*conj) return cmd_conjugate(phi_spec, grid, out);
    if (*idx) return cmd_indices(phi_spec, u_max, samples, out);
    if (*verify) {
      cfg.p = parse_exponent(p_text);
      debug("verify config " + orlicz::to_json(cfg).dump());
      return cmd_verify(suite, cfg, out);
    }
    if (*constants) return cmd_constants(phi_spec, s, dim, const_budget, const_seed, out);
    if (*report) return cmd_report(in_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
