#pragma once

// Riesz-Thorin bounds between tuple spaces built from intermediate functions,
// and the Clarkson-type inequalities in the Orlicz and Schatten settings.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "orlicz/matrix.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/random.hpp"
#include "orlicz/report.hpp"
#include "orlicz/tuple_spaces.hpp"

namespace orlicz {

/// Exponents r_1, r_2, t_1, t_2 in [1, inf] and the interpolated r_s, t_s.
class ExponentPath {
 public:
  ExponentPath(double r1, double r2, double t1, double t2, double s) : r1_(r1), r2_(r2), t1_(t1), t2_(t2), s_(s) {
    for (double e : {r1, r2, t1, t2})
      if (!(e >= 1.0)) throw std::invalid_argument("ExponentPath: exponents must lie in [1, inf]");
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("ExponentPath: s must lie in [0, 1]");
    rs_ = interpolate(r1, r2);
    ts_ = interpolate(t1, t2);
    check(rs_, r1, r2);
    check(ts_, t1, t2);
  }

  /// r_1 = 1, t_1 = inf, r_2 = t_2 = 2, so r_s = 2/(2-s) and t_s = 2/s.
  static ExponentPath clarkson(double s) { return {1.0, 2.0, kInf, 2.0, s}; }

  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double t1() const { return t1_; }
  double t2() const { return t2_; }
  double s() const { return s_; }
  double r_s() const { return rs_; }
  double t_s() const { return ts_; }

 private:
  double interpolate(double a, double b) const {
    const double inv = (1.0 - s_) * reciprocal(a) + s_ * reciprocal(b);
    return inv == 0.0 ? kInf : 1.0 / inv;
  }

  void check(double e, double a, double b) const {
    const double want = (1.0 - s_) * reciprocal(a) + s_ * reciprocal(b);
    if (std::abs(reciprocal(e) - want) > 4.0 * kEps * std::max(1.0, want))
      throw std::logic_error("ExponentPath: interpolated exponent inconsistent");
  }

  double r1_, r2_, t1_, t2_, s_;
  double rs_ = 1.0, ts_ = 1.0;
};

/// F(T_1, T_2) = (a11 T_1 + a12 T_2, a21 T_1 + a22 T_2).
class TupleLinearMap {
 public:
  TupleLinearMap(double a11, double a12, double a21, double a22) : a_{{{a11, a12}, {a21, a22}}} {
    for (const auto& row : a_)
      for (double x : row)
        if (!std::isfinite(x)) throw std::invalid_argument("TupleLinearMap: coefficients must be finite");
  }

  static TupleLinearMap identity() { return {1, 0, 0, 1}; }
  static TupleLinearMap swap() { return {0, 1, 1, 0}; }
  static TupleLinearMap clarkson() { return {1, 1, 1, -1}; }

  double operator()(std::size_t i, std::size_t j) const { return a_[i][j]; }

  OperatorPair apply(const OperatorPair& t) const {
    auto slot = [&](std::size_t i) {
      if (a_[i][0] == 0.0) return a_[i][1] * t.t2;
      if (a_[i][1] == 0.0) return a_[i][0] * t.t1;
      return a_[i][0] * t.t1 + a_[i][1] * t.t2;
    };
    return {slot(0), slot(1)};
  }

 private:
  std::array<std::array<double, 2>, 2> a_;
};

enum class PairRegime { independent, correlated, one_slot_tiny };

/// A random tuple with both slots of dimension `dim`. Regimes vary the
/// relation between the slots so sampled ratios approach their sups.
inline OperatorPair random_pair(Rng& rng, std::size_t dim, PairRegime regime, MatrixKind kind) {
  OperatorPair t{random_matrix(rng, dim, kind), random_matrix(rng, dim, kind)};
  switch (regime) {
    case PairRegime::independent:
      break;
    case PairRegime::correlated: {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      t.t2 = sign * t.t1 + rng.uniform(0.0, 0.3) * t.t2;
      break;
    }
    case PairRegime::one_slot_tiny:
      t.t2 = 1e-3 * t.t2;
      break;
  }
  return t;
}

inline OperatorPair sample_pair(Rng& rng, std::size_t dim, int index) {
  static constexpr PairRegime regimes[] = {PairRegime::independent, PairRegime::correlated, PairRegime::one_slot_tiny};
  static constexpr MatrixKind kinds[] = {MatrixKind::dense, MatrixKind::diagonal, MatrixKind::dense, MatrixKind::diagonal_psd};
  return random_pair(rng, dim, regimes[index % 3], kinds[(index / 3) % 4]);
}

/// max ||FT||_range / ||T||_domain over sampled nonzero tuples; a lower
/// estimate of the operator bound.
inline double empirical_bound(const TupleLinearMap& f, const TupleSpaceSpec& domain, const TupleSpaceSpec& range,
                              int samples, std::uint64_t seed, std::size_t dim = 4) {
  double k = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const OperatorPair t = sample_pair(rng, dim, i);
    const double den = tuple_luxemburg_norm(domain, t);
    if (den == 0.0) continue;
    k = std::max(k, tuple_luxemburg_norm(range, f.apply(t)) / den);
  }
  return k;
}

inline constexpr double kInterpolationSlack = 1e-8;

/// K_1^{1-s} K_2^s ||T||_(phi_s),r_s - ||FT||_(phi_s),t_s on sampled tuples,
/// with phi_s built slotwise from the endpoint pairs.
inline VerificationReport check_riesz_thorin(const TupleLinearMap& f, const std::array<OrliczFunction, 2>& endpoint1,
                                             const std::array<OrliczFunction, 2>& endpoint2, const ExponentPath& path,
                                             double k1, double k2, int samples, std::uint64_t seed,
                                             std::size_t dim = 4) {
  VerificationReport rep("riesz-thorin");
  const double s = path.s();
  const OrliczFunction f1 = intermediate(endpoint1[0], endpoint2[0], s);
  const OrliczFunction f2 = intermediate(endpoint1[1], endpoint2[1], s);
  const TupleSpaceSpec domain(f1, f2, path.r_s()), range(f1, f2, path.t_s());
  const double bound = std::pow(k1, 1.0 - s) * std::pow(k2, s);
  char name[64];
  std::snprintf(name, sizeof name, "riesz-thorin[s=%.17g]", s);
  for (int i = 0; i < samples; ++i) {
    const auto trial_seed = Rng::derive(seed, static_cast<std::uint64_t>(i));
    Rng rng(trial_seed);
    const OperatorPair t = sample_pair(rng, dim, i);
    const double lhs = tuple_luxemburg_norm(range, f.apply(t));
    const double rhs = bound * tuple_luxemburg_norm(domain, t);
    rep.add_gap(name, relative_gap(lhs, rhs), kInterpolationSlack, trial_seed,
                {{"T", pair_to_json(t)}, {"lhs", lhs}, {"rhs", rhs}, {"s", s}});
  }
  return rep;
}

/// (||T1+T2||^{2/s} + ||T1-T2||^{2/s})^{s/2}
///   <= 2^{s/2} (||T1||^{2/(2-s)} + ||T2||^{2/(2-s)})^{(2-s)/2}
/// in the Luxemburg norm of phi_s, phi_s^{-1} = [phi^{-1}]^{1-s} u^{s/2}.
inline VerificationReport check_clarkson_orlicz(const OrliczFunction& phi, double s, const Matrix& t1, const Matrix& t2,
                                                std::uint64_t seed = 0) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("check_clarkson_orlicz: s must lie in (0, 1]");
  detail::require_same_dim(t1, t2, "check_clarkson_orlicz");
  const OrliczFunction phis = intermediate(phi, power_function(2.0), s);
  auto norm = [&](const Matrix& m) { return luxemburg_norm(phis, m).value; };
  const double lhs = p_aggregate(norm(t1 + t2), norm(t1 - t2), 2.0 / s);
  const double rhs = std::exp2(0.5 * s) * p_aggregate(norm(t1), norm(t2), 2.0 / (2.0 - s));
  VerificationReport rep("clarkson-orlicz");
  char name[64];
  std::snprintf(name, sizeof name, "clarkson-orlicz[s=%.17g]", s);
  rep.add_gap(name, relative_gap(lhs, rhs), kInterpolationSlack, seed,
              {{"T1", matrix_to_json(t1)}, {"T2", matrix_to_json(t2)}, {"lhs", lhs}, {"rhs", rhs}});
  return rep;
}

/// Clarkson inequalities in S_p. For p = 2 both branches are reported.
inline VerificationReport check_clarkson_sp(double p, const Matrix& t1, const Matrix& t2, std::uint64_t seed = 0) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("check_clarkson_sp: p must lie in (1, inf)");
  detail::require_same_dim(t1, t2, "check_clarkson_sp");
  const double q = conjugate_exponent(p);
  const double sum = schatten_norm(p, t1 + t2), diff = schatten_norm(p, t1 - t2);
  const double a = schatten_norm(p, t1), b = schatten_norm(p, t2);
  VerificationReport rep("clarkson-sp");
  const nlohmann::json witness = {{"T1", matrix_to_json(t1)}, {"T2", matrix_to_json(t2)}, {"p", p}};
  if (p <= 2.0) {
    const double lhs = p_aggregate(sum, diff, q);
    const double rhs = std::exp2(1.0 / q) * p_aggregate(a, b, p);
    rep.add_gap("clarkson-sp[p<=2]", relative_gap(lhs, rhs), kCheckSlack, seed, witness);
  }
  if (p >= 2.0) {
    const double lhs = p_aggregate(sum, diff, p);
    const double rhs = std::exp2(1.0 / p) * p_aggregate(a, b, q);
    rep.add_gap("clarkson-sp[p>=2]", relative_gap(lhs, rhs), kCheckSlack, seed, witness);
  }
  return rep;
}

}  // namespace orlicz
