#pragma once

// Seeded verification suites over random tuples. Each trial draws its inputs
// from Rng(Rng::derive(seed, trial)), so any record can be replayed alone.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orlicz/interpolation.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/random.hpp"
#include "orlicz/report.hpp"
#include "orlicz/tuple_spaces.hpp"

namespace orlicz {

struct SuiteConfig {
  std::string phi1 = "power:2";
  std::string phi2 = "power:3";
  double p = 2.0;
  std::size_t dim = 4;
  int trials = 500;
  std::uint64_t seed = 42;
  int budget = 500;          // per-trial search budget of the dual estimator
  std::string phi = "power:1.5";  // base function of the Clarkson/interpolation suites
};

inline nlohmann::json to_json(const SuiteConfig& c) {
  return {{"phi1", c.phi1}, {"phi2", c.phi2}, {"p", detail::number(c.p)}, {"dim", c.dim},
          {"trials", c.trials}, {"seed", c.seed}, {"budget", c.budget}, {"phi", c.phi}};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"thm2.1",       "holder",          "ideal",       "dual",
                                                 "riesz-thorin", "clarkson-orlicz", "clarkson-sp", "all"};
  return names;
}

namespace detail {

inline std::uint64_t trial_seed(const SuiteConfig& c, int i) { return Rng::derive(c.seed, static_cast<std::uint64_t>(i)); }

inline MatrixKind trial_kind(int i) {
  static constexpr MatrixKind kinds[] = {MatrixKind::dense, MatrixKind::diagonal, MatrixKind::diagonal_psd};
  return kinds[i % 3];
}

/// Random tuple whose second slot may be smaller than the first.
inline OperatorPair random_tuple(Rng& rng, std::size_t dim, MatrixKind kind, std::size_t dim2) {
  return {random_matrix(rng, dim, kind), random_matrix(rng, dim2, kind)};
}

/// Rescale each slot of t to the given Luxemburg norm.
inline OperatorPair with_slot_norms(const TupleSpaceSpec& spec, const OperatorPair& t, double n1, double n2) {
  OperatorPair r = t;
  const double a = luxemburg_norm(spec.phi1, t.t1).value, b = luxemburg_norm(spec.phi2, t.t2).value;
  if (a > 0.0) r.t1 = (n1 / a) * t.t1;
  if (b > 0.0) r.t2 = (n2 / b) * t.t2;
  return r;
}

inline TupleSpaceSpec tuple_spec(const SuiteConfig& c) {
  return {parse_function(c.phi1), parse_function(c.phi2), c.p};
}

}  // namespace detail

/// Parts (1)-(5): (1), (2), (5) on the raw tuple and on copies rescaled into
/// each hypothesis region, (3) via both Hölder forms, (4) with k from the
/// doubling probe (2^p for powers).
inline VerificationReport run_thm21(const SuiteConfig& c) {
  const TupleSpaceSpec spec = detail::tuple_spec(c);
  VerificationReport rep("thm2.1");
  for (int i = 0; i < c.trials; ++i) {
    const auto seed = detail::trial_seed(c, i);
    Rng rng(seed);
    const auto kind = detail::trial_kind(i);
    const std::size_t dim2 = 1 + static_cast<std::size_t>(rng.below(c.dim));
    const OperatorPair t = detail::random_tuple(rng, c.dim, kind, dim2);
    const OperatorPair b = detail::random_tuple(rng, c.dim, kind, dim2);
    const double small1 = rng.uniform(0.05, 1.0), small2 = rng.uniform(0.05, 1.0);
    const double large1 = rng.uniform(1.0, 4.0) + 1e-6, large2 = rng.uniform(1.0, 4.0) + 1e-6;

    rep.merge(check_thm21(spec, t, seed));
    rep.merge(check_thm21(spec, detail::with_slot_norms(spec, t, small1, small2), seed));
    rep.merge(check_thm21(spec, detail::with_slot_norms(spec, t, large1, large2), seed));
    rep.merge(check_holder(spec, t, b, seed));
    const auto k = delta2_constants(spec, t, b);
    rep.merge(check_delta2_triangle(spec, t, b, k[0], k[1], seed));
  }
  return rep;
}

inline VerificationReport run_holder(const SuiteConfig& c) {
  const TupleSpaceSpec spec = detail::tuple_spec(c);
  VerificationReport rep("holder");
  for (int i = 0; i < c.trials; ++i) {
    const auto seed = detail::trial_seed(c, i);
    Rng rng(seed);
    const auto kind = detail::trial_kind(i);
    const std::size_t dim2 = 1 + static_cast<std::size_t>(rng.below(c.dim));
    const OperatorPair t = detail::random_tuple(rng, c.dim, kind, dim2);
    const OperatorPair b = detail::random_tuple(rng, c.dim, kind, dim2);
    rep.merge(check_holder(spec, t, b, seed));
  }
  return rep;
}

inline VerificationReport run_ideal(const SuiteConfig& c) {
  const TupleSpaceSpec spec = detail::tuple_spec(c);
  VerificationReport rep("ideal");
  for (int i = 0; i < c.trials; ++i) {
    const auto seed = detail::trial_seed(c, i);
    Rng rng(seed);
    const auto kind = detail::trial_kind(i);
    const OperatorPair t = detail::random_tuple(rng, c.dim, kind, c.dim);
    const OperatorPair b = detail::random_tuple(rng, c.dim, MatrixKind::dense, c.dim);
    const OperatorPair d = detail::random_tuple(rng, c.dim, MatrixKind::dense, c.dim);
    rep.merge(check_ideal(spec, t, b, d, seed));
  }
  return rep;
}

/// Upper side: the estimate never exceeds the Luxemburg tuple norm.
/// Witness side: the epsilon witness attains at least 0.9 of it.
inline VerificationReport run_dual(const SuiteConfig& c) {
  const TupleSpaceSpec spec = detail::tuple_spec(c);
  VerificationReport rep("dual");
  for (int i = 0; i < c.trials; ++i) {
    const auto seed = detail::trial_seed(c, i);
    Rng rng(seed);
    const auto kind = detail::trial_kind(i);
    const std::size_t dim2 = 1 + static_cast<std::size_t>(rng.below(c.dim));
    const OperatorPair t = detail::random_tuple(rng, c.dim, kind, dim2);
    const double norm = tuple_luxemburg_norm(spec, t);
    const DualEstimate est = dual_norm_estimate(spec, t, c.budget, seed);
    const nlohmann::json witness = {{"T", pair_to_json(t)}, {"norm", norm}, {"estimate", est.value}, {"witness", est.witness}};
    rep.add_gap("dual.upper", norm + 1e-9 - est.value, 0.0, seed, witness);
    rep.add_gap("dual.witness", norm > 0.0 ? est.witness / norm - 0.9 : 0.0, 0.0, seed, witness);
  }
  return rep;
}

inline const std::array<double, 3>& riesz_thorin_s() {
  static const std::array<double, 3> s = {0.25, 0.5, 0.75};
  return s;
}

inline const std::array<double, 4>& clarkson_orlicz_s() {
  static const std::array<double, 4> s = {0.25, 0.5, 0.75, 1.0};
  return s;
}

/// Clarkson configuration: F(T1, T2) = (T1 + T2, T1 - T2), endpoints (phi, phi)
/// and (u^2, u^2), K1 = 1, K2 = sqrt(2).
inline VerificationReport run_riesz_thorin(const SuiteConfig& c) {
  const OrliczFunction phi = parse_function(c.phi), sq = power_function(2.0);
  VerificationReport rep("riesz-thorin");
  for (double s : riesz_thorin_s())
    rep.merge(check_riesz_thorin(TupleLinearMap::clarkson(), {phi, phi}, {sq, sq}, ExponentPath::clarkson(s), 1.0,
                                 std::sqrt(2.0), c.trials, c.seed, c.dim));
  return rep;
}

inline VerificationReport run_clarkson_orlicz(const SuiteConfig& c) {
  const OrliczFunction phi = parse_function(c.phi);
  VerificationReport rep("clarkson-orlicz");
  for (int i = 0; i < c.trials; ++i) {
    const auto seed = detail::trial_seed(c, i);
    Rng rng(seed);
    const OperatorPair t = sample_pair(rng, c.dim, i);
    for (double s : clarkson_orlicz_s()) rep.merge(check_clarkson_orlicz(phi, s, t.t1, t.t2, seed));
  }
  return rep;
}

inline VerificationReport run_clarkson_sp(const SuiteConfig& c) {
  VerificationReport rep("clarkson-sp");
  if (!(c.p > 1.0) || std::isinf(c.p)) {
    rep.add_skipped("clarkson-sp", c.seed, "needs 1 < p < inf");
    return rep;
  }
  for (int i = 0; i < c.trials; ++i) {
    const auto seed = detail::trial_seed(c, i);
    Rng rng(seed);
    const OperatorPair t = sample_pair(rng, c.dim, i);
    rep.merge(check_clarkson_sp(c.p, t.t1, t.t2, seed));
  }
  return rep;
}

/// Runs a named suite; throws std::invalid_argument for unknown names.
inline VerificationReport run_suite(const std::string& name, const SuiteConfig& c) {
  VerificationReport rep(name);
  auto add = [&](VerificationReport r) { rep.merge(r); };
  if (name == "thm2.1") add(run_thm21(c));
  else if (name == "holder") add(run_holder(c));
  else if (name == "ideal") add(run_ideal(c));
  else if (name == "dual") add(run_dual(c));
  else if (name == "riesz-thorin") add(run_riesz_thorin(c));
  else if (name == "clarkson-orlicz") add(run_clarkson_orlicz(c));
  else if (name == "clarkson-sp") add(run_clarkson_sp(c));
  else if (name == "all") {
    for (const auto& n : suite_names())
      if (n != "all") add(run_suite(n, c));
  } else {
    throw std::invalid_argument("unknown suite: " + name);
  }
  rep.config() = to_json(c);
  rep.config()["suite"] = name;
  rep.sort();
  return rep;
}

}  // namespace orlicz
