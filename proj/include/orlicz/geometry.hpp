#pragma once

// Finite-dimensional estimates of the von Neumann-Jordan constant and the
// nonsquare constant of S_phi, and checks of the bounds relating them to the
// indices of phi.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "orlicz/matrix.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/report.hpp"
#include "orlicz/spectral.hpp"

namespace orlicz {

/// A unitarily invariant norm given by its action on singular values.
class NormEvaluator {
 public:
  using SpectrumNorm = std::function<double(std::span<const double>)>;

  explicit NormEvaluator(SpectrumNorm f) : f_(std::move(f)) {}

  /// Luxemburg norm of phi; closed-form Schatten when phi is u^p.
  static NormEvaluator luxemburg(const OrliczFunction& phi) {
    if (auto p = phi.power_exponent()) {
      const double e = *p;
      return NormEvaluator([e](std::span<const double> s) { return schatten_norm(e, s); });
    }
    return NormEvaluator([phi](std::span<const double> s) { return luxemburg_norm(phi, s).value; });
  }

  static NormEvaluator schatten(double p) {
    return NormEvaluator([p](std::span<const double> s) { return schatten_norm(p, s); });
  }

  double operator()(const Matrix& m) const {
    if (is_diagonal(m)) {
      std::vector<double> d(m.dim());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(m(i, i));
      return f_(d);
    }
    return f_(singular_values(m).values());
  }

  double of_spectrum(std::span<const double> s) const { return f_(s); }

 private:
  static bool is_diagonal(const Matrix& m) {
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j)
        if (i != j && m(i, j) != 0.0) return false;
    return true;
  }

  SpectrumNorm f_;
};

/// (||x+y||^2 + ||x-y||^2) / (2 (||x||^2 + ||y||^2)).
inline double nj_functional(const NormEvaluator& norm, const Matrix& x, const Matrix& y) {
  detail::require_same_dim(x, y, "nj_functional");
  const double nx = norm(x), ny = norm(y);
  if (nx == 0.0 && ny == 0.0) throw std::invalid_argument("nj_functional: x and y are both zero");
  const double a = norm(x + y), b = norm(x - y);
  return (a * a + b * b) / (2.0 * (nx * nx + ny * ny));
}

/// min(||x+y||, ||x-y||) after scaling x and y onto the unit sphere.
inline double nonsquare_functional(const NormEvaluator& norm, const Matrix& x, const Matrix& y) {
  detail::require_same_dim(x, y, "nonsquare_functional");
  const double nx = norm(x), ny = norm(y);
  if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("nonsquare_functional: x and y must be nonzero");
  const Matrix u = (1.0 / nx) * x, v = (1.0 / ny) * y;
  return std::min(norm(u + v), norm(u - v));
}

struct ConstantEstimate {
  double value = 0.0;
  Matrix x{1};
  Matrix y{1};
  int trials = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
};

inline nlohmann::json to_json(const ConstantEstimate& e) {
  return {{"value", detail::number(e.value)},
          {"trials", e.trials},
          {"seed", e.seed},
          {"dim", e.dim},
          {"witness", {{"x", matrix_to_json(e.x)}, {"y", matrix_to_json(e.y)}}}};
}

/// The pair attaining c_NJ(S_p) = max{2^{2/p-1}, 2^{1-2/p}}: (e1, e2) for
/// p <= 2 and (e1 + e2, e1 - e2) / 2^{1/p} for p >= 2, unit in S_p.
inline std::pair<Matrix, Matrix> extremal_pair(double p, std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("extremal_pair: dim must be >= 2");
  if (!(p >= 1.0)) throw std::invalid_argument("extremal_pair: p must be >= 1");
  Matrix x(dim), y(dim);
  if (p <= 2.0) {
    x(0, 0) = 1.0;
    y(1, 1) = 1.0;
  } else {
    const double c = std::exp2(-1.0 / p);
    x(0, 0) = x(1, 1) = c;
    y(0, 0) = c;
    y(1, 1) = -c;
  }
  return {x, y};
}

struct SearchOptions {
  bool canonical = true;  // seed the search with the classical extremal pairs
};

namespace detail {

enum class Functional { von_neumann_jordan, nonsquare };

struct Candidate {
  bool dense = false;
  std::vector<double> x, y;
};

inline Matrix to_matrix(const std::vector<double>& v, bool dense, std::size_t dim) {
  if (dense) return Matrix(dim, v);
  return Matrix::diagonal(v);
}

/// Sup search shared by both constants. The sequence of evaluated pairs does
/// not depend on the budget, so the best-so-far value is monotone in budget.
class PairSearch {
 public:
  PairSearch(NormEvaluator norm, Functional kind, std::size_t dim, int budget, std::uint64_t seed)
      : norm_(std::move(norm)), kind_(kind), dim_(dim), budget_(budget), seed_(seed) {}

  ConstantEstimate run(const SearchOptions& opt) {
    if (dim_ < 2) throw std::invalid_argument("constant estimate: dim must be >= 2");
    if (opt.canonical) seed_canonical();
    for (std::uint64_t round = 0; used_ < budget_; ++round) {
      Rng rng(Rng::derive(seed_, round));
      Candidate start;
      if (round % 4 == 3 && has_best_) {
        start = best_;
      } else {
        start.dense = round % 2 == 1;
        const std::size_t m = start.dense ? dim_ * dim_ : dim_;
        start.x.resize(m);
        start.y.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
          start.x[i] = rng.normal();
          start.y[i] = rng.normal();
        }
      }
      ascend(start, rng);
    }
    return finish();
  }

 private:
  double evaluate(const Candidate& c) {
    ++used_;
    const Matrix x = to_matrix(c.x, c.dense, dim_), y = to_matrix(c.y, c.dense, dim_);
    const double nx = norm_(x), ny = norm_(y);
    double v = 0.0;
    if (kind_ == Functional::von_neumann_jordan) {
      if (nx > 0.0 || ny > 0.0) v = nj_functional(norm_, x, y);
    } else if (nx > 0.0 && ny > 0.0) {
      v = nonsquare_functional(norm_, x, y);
    }
    if (!std::isfinite(v)) v = 0.0;
    if (v > best_value_) {
      best_value_ = v;
      best_ = c;
      has_best_ = true;
    }
    return v;
  }

  void seed_canonical() {
    const std::size_t n = dim_;
    std::vector<Candidate> seeds;
    auto diag = [&](std::vector<double> x, std::vector<double> y) { seeds.push_back({false, std::move(x), std::move(y)}); };
    std::vector<double> e1(n, 0.0), e2(n, 0.0);
    e1[0] = 1.0;
    e2[1] = 1.0;
    diag(e1, e2);
    std::vector<double> sum(n, 0.0), dif(n, 0.0);
    sum[0] = sum[1] = 1.0;
    dif[0] = 1.0;
    dif[1] = -1.0;
    diag(sum, dif);
    // Block patterns: equal entries on disjoint supports, and on a common
    // support with the signs of the second half flipped.
    const std::size_t h = n / 2;
    for (std::size_t len = 1; len <= h; ++len) {
      std::vector<double> a(n, 0.0), b(n, 0.0);
      for (std::size_t i = 0; i < len; ++i) a[i] = b[h + i] = 1.0;
      diag(a, b);
      std::vector<double> c(n, 0.0), d(n, 0.0);
      for (std::size_t i = 0; i < 2 * len; ++i) {
        c[i] = 1.0;
        d[i] = i < len ? 1.0 : -1.0;
      }
      diag(c, d);
    }
    for (const auto& c : seeds) {
      if (used_ >= budget_) break;
      evaluate(c);
    }
  }

  // Coordinate ascent with additive steps, halved after a pass without gain;
  // a fixed number of evaluations per round.
  void ascend(Candidate c, Rng& rng) {
    const std::size_t m = c.x.size();
    const int length = static_cast<int>(16 * m);
    double value = evaluate(c);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max({scale, std::abs(c.x[i]), std::abs(c.y[i])});
    double delta = 0.5 * (scale > 0.0 ? scale : 1.0);
    int spent = 1;
    while (spent < length && used_ < budget_) {
      bool improved = false;
      const std::size_t offset = static_cast<std::size_t>(rng.below(2 * m));
      for (std::size_t step = 0; step < 2 * m && spent < length && used_ < budget_; ++step) {
        const std::size_t k = (offset + step) % (2 * m);
        double& coord = k < m ? c.x[k] : c.y[k - m];
        for (double sign : {1.0, -1.0}) {
          if (spent >= length || used_ >= budget_) break;
          const double old = coord;
          coord = old + sign * delta;
          const double v = evaluate(c);
          ++spent;
          if (v > value) {
            value = v;
            improved = true;
            break;
          }
          coord = old;
        }
      }
      if (!improved) delta *= 0.5;
    }
  }

  ConstantEstimate finish() {
    ConstantEstimate est;
    est.trials = used_;
    est.seed = seed_;
    est.dim = dim_;
    if (!has_best_) return est;
    Matrix x = to_matrix(best_.x, best_.dense, dim_), y = to_matrix(best_.y, best_.dense, dim_);
    double nx = norm_(x), ny = norm_(y);
    if (kind_ == Functional::von_neumann_jordan) {
      if (ny > nx) std::swap(x, y), std::swap(nx, ny);
      x = (1.0 / nx) * x;
      y = (1.0 / nx) * y;
      est.value = nj_functional(norm_, x, y);
    } else {
      x = (1.0 / nx) * x;
      y = (1.0 / ny) * y;
      est.value = nonsquare_functional(norm_, x, y);
    }
    est.x = std::move(x);
    est.y = std::move(y);
    return est;
  }

  NormEvaluator norm_;
  Functional kind_;
  std::size_t dim_;
  int budget_;
  std::uint64_t seed_;
  int used_ = 0;
  double best_value_ = -1.0;
  Candidate best_;
  bool has_best_ = false;
};

}  // namespace detail

/// Lower estimate of c_NJ(S_phi^dim) from at most `budget` evaluations. The
/// witness has ||x|| = 1 >= ||y||.
inline ConstantEstimate estimate_cnj(const OrliczFunction& phi, std::size_t dim, int budget, std::uint64_t seed,
                                     const SearchOptions& opt = {}) {
  return detail::PairSearch(NormEvaluator::luxemburg(phi), detail::Functional::von_neumann_jordan, dim, budget, seed)
      .run(opt);
}

/// Lower estimate of J(S_phi^dim); the witness is a pair of unit vectors.
inline ConstantEstimate estimate_nonsquare(const OrliczFunction& phi, std::size_t dim, int budget, std::uint64_t seed,
                                           const SearchOptions& opt = {}) {
  return detail::PairSearch(NormEvaluator::luxemburg(phi), detail::Functional::nonsquare, dim, budget, seed).run(opt);
}

inline constexpr double kNonsquareSlack = 0.05;
inline constexpr double kSearchTolerance = 2e-2;
inline constexpr double kUpperSlack = 1e-6;

struct BoundsResult {
  VerificationReport report{"constants"};
  OrliczFunction phi_s;
  std::optional<double> s;
  double alpha = 0.0;
  double beta = 0.0;
  ConstantEstimate cnj;
  ConstantEstimate nonsquare;
};

/// Estimates c_NJ and J for phi_s = intermediate(phi, u^2, s) (phi itself
/// when s is absent) and checks them against the index bounds. Upper bounds
/// pass when no witness exceeds them; lower bounds pass only when the search
/// finds a witness within kSearchTolerance. Lower bounds are calibrated on
/// power functions only; for any other phi they report the attainment ratio
/// and are marked skipped.
inline BoundsResult check_bounds(const OrliczFunction& phi, std::optional<double> s, std::size_t dim, int budget,
                                 std::uint64_t seed) {
  if (s && !(*s > 0.0 && *s <= 1.0)) throw std::invalid_argument("check_bounds: s must lie in (0, 1]");
  BoundsResult r{VerificationReport("constants"), s ? intermediate(phi, power_function(2.0), *s) : phi, s, 0.0, 0.0, {}, {}};
  const auto idx = index_estimates(r.phi_s);
  r.alpha = idx.alpha;
  r.beta = idx.beta;
  r.cnj = estimate_cnj(r.phi_s, dim, budget, seed);
  r.nonsquare = estimate_nonsquare(r.phi_s, dim, budget, seed);
  const double c = r.cnj.value, j = r.nonsquare.value;
  const bool calibrated = phi.power_exponent().has_value();
  auto& rep = r.report;
  rep.config() = {{"phi", phi.label()}, {"dim", dim}, {"budget", budget}, {"seed", seed}};
  if (s) rep.config()["s"] = *s;

  const nlohmann::json witness = {{"cnj", to_json(r.cnj)}, {"nonsquare", to_json(r.nonsquare)}};
  rep.add_gap("nonsquare.cnj", 2.0 * c - j * j, kNonsquareSlack, seed, witness);

  auto lower = [&](const char* name, double estimate, double bound) {
    if (calibrated) {
      rep.add_gap(name, estimate - bound, kSearchTolerance, seed, witness);
    } else {
      char note[96];
      std::snprintf(note, sizeof note, "attainment ratio %.17g (not calibrated for this phi)", estimate / bound);
      rep.add({name, Status::skipped, estimate - bound, seed, {}, note});
    }
  };
  lower("nonsquare.lower", j, std::max(1.0 / r.alpha, 2.0 * r.beta));
  lower("cnj.sandwich.lower", c, std::max(0.5 / (r.alpha * r.alpha), 2.0 * r.beta * r.beta));

  if (s) {
    const double upper = std::exp2(1.0 - *s);
    rep.add_gap("cnj.upper", upper - c, kUpperSlack, seed, witness);
    rep.add_gap("cnj.sandwich.upper", upper - c, kUpperSlack, seed, witness);
  } else {
    rep.add_skipped("cnj.upper", seed, "no s given");
    rep.add_skipped("cnj.sandwich.upper", seed, "no s given");
  }
  return r;
}

}  // namespace orlicz
