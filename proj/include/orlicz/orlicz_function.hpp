#pragma once

// Orlicz (N-)functions on [0, inf): closed-form power functions, tabulated
// grid functions, the complementary function, intermediate functions, and the
// near-zero indices and doubling constant.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/numeric.hpp"

namespace orlicz {

/// Piecewise-linear convex carrier through (u_i, v_i) with u_0 = 0, v_0 = 0,
/// extended past the last node with the last chord slope.
class GridFunction {
 public:
  GridFunction(std::vector<double> nodes, std::vector<double> values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size()) throw std::invalid_argument("GridFunction: nodes and values differ in length");
    if (nodes_.size() < 2) throw std::invalid_argument("GridFunction: need at least two nodes");
    if (nodes_[0] != 0.0 || values_[0] != 0.0) throw std::invalid_argument("GridFunction: first node must be (0, 0)");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]))
        throw std::invalid_argument("GridFunction: nodes and values must be finite");
      if (i == 0) continue;
      if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("GridFunction: nodes must be strictly increasing");
      if (values_[i] < values_[i - 1]) throw std::invalid_argument("GridFunction: values must be nondecreasing");
    }
    for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
      const double left = slope(i), right = slope(i + 1);
      if (right < left - 1e-9 * std::max(1.0, std::abs(left)))
        throw std::invalid_argument("GridFunction: chord slopes must be nondecreasing (convexity)");
    }
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double u) const {
    if (u <= 0.0) return 0.0;
    const std::size_t i = segment(u);
    return values_[i - 1] + slope(i) * (u - nodes_[i - 1]);
  }

  double left_deriv(double u) const {
    if (u <= 0.0) return 0.0;
    return slope(segment(u));
  }

  /// Smallest u with value v on the interpolant.
  double inverse(double v) const {
    if (v <= 0.0) return 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (values_[i] >= v) return nodes_[i - 1] + (v - values_[i - 1]) / slope(i);
    const std::size_t last = nodes_.size() - 1;
    const double m = slope(last);
    if (m <= 0.0) throw std::overflow_error("GridFunction: value beyond a flat tail");
    return nodes_[last] + (v - values_[last]) / m;
  }

 private:
  double slope(std::size_t i) const { return (values_[i] - values_[i - 1]) / (nodes_[i] - nodes_[i - 1]); }

  // Index i >= 1 of the segment (u_{i-1}, u_i] containing u, clamped to the last.
  std::size_t segment(double u) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), u);
    const auto i = static_cast<std::size_t>(it - nodes_.begin());
    return std::clamp<std::size_t>(i, 1, nodes_.size() - 1);
  }

  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// An Orlicz function phi with its left derivative p and an optional inverse.
/// Immutable; copies share state.
class OrliczFunction {
 public:
  using Map = std::function<double(double)>;

  struct Parts {
    std::string label;
    Map eval;
    Map left_deriv;  // numeric left difference when empty
    Map inverse;     // bisection when empty
    std::optional<double> power_exponent;
  };

  explicit OrliczFunction(Parts parts) : data_(std::make_shared<const Parts>(std::move(parts))) {
    if (!data_->eval) throw std::invalid_argument("OrliczFunction: eval is required");
  }

  double operator()(double u) const { return u <= 0.0 ? 0.0 : data_->eval(u); }
  double eval(double u) const { return (*this)(u); }

  double left_deriv(double t) const {
    if (t <= 0.0) return 0.0;
    if (data_->left_deriv) return data_->left_deriv(t);
    const double h = 1e-7 * t;
    return ((*this)(t) - (*this)(t - h)) / h;
  }

  bool has_inverse_hint() const { return static_cast<bool>(data_->inverse); }
  double inverse_hint(double v) const { return data_->inverse(v); }

  const std::string& label() const { return data_->label; }

  /// Set only for u^p built by power_function.
  std::optional<double> power_exponent() const { return data_->power_exponent; }

 private:
  std::shared_ptr<const Parts> data_;
};

/// u^p for p >= 1.
inline OrliczFunction power_function(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power_function: exponent must be finite and >= 1");
  char label[64];
  std::snprintf(label, sizeof label, "power:%.17g", p);
  return OrliczFunction({
      .label = label,
      .eval = [p](double u) { return p == 1.0 ? u : (p == 2.0 ? u * u : std::pow(u, p)); },
      .left_deriv = [p](double t) { return p == 1.0 ? 1.0 : p * std::pow(t, p - 1.0); },
      .inverse = [p](double v) { return v <= 0.0 ? 0.0 : (p == 1.0 ? v : (p == 2.0 ? std::sqrt(v) : std::pow(v, 1.0 / p))); },
      .power_exponent = p,
  });
}

inline OrliczFunction from_grid(GridFunction grid, std::string label = "grid") {
  auto g = std::make_shared<const GridFunction>(std::move(grid));
  if (!(g->values()[1] > 0.0)) throw std::invalid_argument("from_grid: phi(u) must be > 0 for u > 0");
  return OrliczFunction({
      .label = std::move(label),
      .eval = [g](double u) { return (*g)(u); },
      .left_deriv = [g](double t) { return g->left_deriv(t); },
      .inverse = [g](double v) { return g->inverse(v); },
      .power_exponent = std::nullopt,
  });
}

/// u with phi(u) = v: the closed-form inverse when available, otherwise
/// geometric bracketing (factor 4) and bisection.
inline double inverse(const OrliczFunction& phi, double v) {
  if (v < 0.0 || std::isnan(v)) throw std::invalid_argument("inverse: v must be >= 0");
  if (v == 0.0) return 0.0;
  if (phi.has_inverse_hint()) return phi.inverse_hint(v);
  return solve_nondecreasing([&](double u) { return phi(u); }, v, 1.0);
}

// ---------------------------------------------------------------------------
// Complementary function psi(y) = sup_{x >= 0} (x y - phi(x)).

namespace detail {

struct ConjugatePoint {
  double argmax;
  double value;
};

/// Ternary (golden-section) maximization of the concave x y - phi(x) after
/// expanding the bracket until the objective turns down.
inline ConjugatePoint conjugate_point(const OrliczFunction& phi, double y) {
  if (y <= 0.0) return {0.0, 0.0};
  auto f = [&](double x) { return x * y - phi(x); };
  double b = 1.0;
  while (f(2.0 * b) > f(b)) {
    b *= tol::bracket_growth;
    if (b > 1e300) return {kInf, kInf};
  }
  b *= 2.0;
  const auto best = golden_section([&](double x) { return -f(x); }, 0.0, b, 1e-16);
  double x = best.x, value = -best.value;
  if (value < 0.0) x = 0.0, value = 0.0;
  return {x, value};
}

}  // namespace detail

/// psi evaluated on demand; the closed form (p-1)(y/p)^{p/(p-1)} for u^p.
inline OrliczFunction conjugate(const OrliczFunction& phi) {
  if (auto p = phi.power_exponent()) {
    const double e = *p;
    if (e == 1.0) {
      return OrliczFunction({
          .label = "conjugate(" + phi.label() + ")",
          .eval = [](double y) { return y <= 1.0 ? 0.0 : kInf; },
          .left_deriv = [](double y) { return y <= 1.0 ? 0.0 : kInf; },
          .inverse = [](double v) { return v <= 0.0 ? 0.0 : 1.0; },
          .power_exponent = std::nullopt,
      });
    }
    const double q = e / (e - 1.0);
    return OrliczFunction({
        .label = "conjugate(" + phi.label() + ")",
        .eval = [e, q](double y) { return (e - 1.0) * std::pow(y / e, q); },
        .left_deriv = [e](double y) { return std::pow(y / e, 1.0 / (e - 1.0)); },
        .inverse = [e, q](double v) { return v <= 0.0 ? 0.0 : e * std::pow(v / (e - 1.0), 1.0 / q); },
        .power_exponent = std::nullopt,
    });
  }
  return OrliczFunction({
      .label = "conjugate(" + phi.label() + ")",
      .eval = [phi](double y) { return detail::conjugate_point(phi, y).value; },
      .left_deriv = [phi](double y) { return detail::conjugate_point(phi, y).argmax; },
      .inverse = {},
      .power_exponent = std::nullopt,
  });
}

/// Tabulation nodes for a GridFunction: 0 followed by `count` nodes on
/// [lo, hi], log-spaced or linear.
struct GridSpec {
  double lo = 1e-6;
  double hi = 1e3;
  std::size_t count = 2048;
  bool log_spaced = true;

  std::vector<double> nodes() const {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("GridSpec: need 0 < lo < hi and count >= 2");
    std::vector<double> u{0.0};
    for (std::size_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      u.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    u.back() = hi;
    return u;
  }
};

inline GridFunction tabulate(const OrliczFunction& phi, const GridSpec& spec) {
  auto u = spec.nodes();
  std::vector<double> v;
  v.reserve(u.size());
  for (double x : u) {
    const double y = phi(x);
    if (!std::isfinite(y)) throw std::domain_error("tabulate: " + phi.label() + " is not finite on the requested grid");
    v.push_back(y);
  }
  return GridFunction(std::move(u), std::move(v));
}

/// The complementary function carried as a tabulated GridFunction on `spec`.
inline OrliczFunction conjugate(const OrliczFunction& phi, const GridSpec& spec) {
  return from_grid(tabulate(conjugate(phi), spec), "grid-conjugate(" + phi.label() + ")");
}

// ---------------------------------------------------------------------------
// Intermediate function: phi_s^{-1}(u) = [phi1^{-1}(u)]^{1-s} [phi2^{-1}(u)]^s.

namespace detail {

struct IntermediateParts {
  OrliczFunction phi1;
  OrliczFunction phi2;
  double s;

  double composite_inverse(double u) const {
    if (u <= 0.0) return 0.0;
    const double a = inverse(phi1, u), b = inverse(phi2, u);
    return std::pow(a, 1.0 - s) * std::pow(b, s);
  }

  // d log(composite_inverse(e^w)) / dw, the elasticity of the composite.
  double elasticity(double u) const {
    const double a = inverse(phi1, u), b = inverse(phi2, u);
    return (1.0 - s) * u / (a * phi1.left_deriv(a)) + s * u / (b * phi2.left_deriv(b));
  }

  /// phi_s(v): solves composite_inverse(u) = v in log u. Newton from the
  /// exponent-harmonic guess (exact for powers), then bracketed bisection if
  /// Newton has not settled.
  double eval(double v) const {
    if (v <= 0.0) return 0.0;
    const double target = std::log(v);
    const double l1 = std::log(phi1(v)), l2 = std::log(phi2(v));
    double w = (1.0 - s) * l1 + s * l2;
    if (l1 != 0.0 && l2 != 0.0 && std::isfinite(l1) && std::isfinite(l2) && target != 0.0) {
      const double harmonic = target / ((1.0 - s) * target / l1 + s * target / l2);
      if (std::isfinite(harmonic)) w = harmonic;
    }
    if (!std::isfinite(w)) w = target;
    for (int it = 0; it < 40; ++it) {
      const double u = std::exp(w);
      const double a = inverse(phi1, u), b = inverse(phi2, u);
      const double gw = (1.0 - s) * std::log(a) + s * std::log(b) - target;
      if (gw == 0.0) return u;
      const double d = (1.0 - s) * u / (a * phi1.left_deriv(a)) + s * u / (b * phi2.left_deriv(b));
      if (!(std::isfinite(d) && d > 0.0) || !std::isfinite(gw)) break;
      const double step = std::clamp(gw / d, -8.0, 8.0);
      w -= step;
      if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(w))) return std::exp(w);
    }
    return eval_bracketed(v);
  }

  double eval_bracketed(double v) const {
    const double target = std::log(v);
    auto g = [&](double w) { return std::log(composite_inverse(std::exp(w))) - target; };
    double w = target;
    const double step = std::log(tol::bracket_growth);
    double lo = w, hi = w;
    double glo = g(lo), ghi = glo;
    if (glo < 0.0) {
      while (ghi < 0.0) {
        lo = hi, glo = ghi;
        hi += step;
        ghi = g(hi);
        if (hi > 700.0) throw std::overflow_error("intermediate: value out of representable range");
      }
    } else {
      while (glo >= 0.0) {
        hi = lo, ghi = glo;
        lo -= step;
        glo = g(lo);
        if (lo < -700.0) return 0.0;
      }
    }
    // invariant: g(lo) < 0 <= g(hi)
    for (int it = 0; it < 200 && hi - lo > 4.0 * kEps * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) < 0.0) lo = mid; else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
  }

  // From v = composite_inverse(u): phi_s'(v) = u / (v * elasticity(u)).
  double left_deriv(double v) const {
    if (v <= 0.0) return 0.0;
    const double u = eval(v);
    return u / (v * elasticity(u));
  }
};

}  // namespace detail

inline OrliczFunction intermediate(const OrliczFunction& phi1, const OrliczFunction& phi2, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("intermediate: s must lie in [0, 1]");
  if (s == 0.0) return phi1;
  if (s == 1.0) return phi2;
  auto parts = std::make_shared<const detail::IntermediateParts>(detail::IntermediateParts{phi1, phi2, s});
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s);
  return OrliczFunction({
      .label = "intermediate(" + phi1.label() + "," + phi2.label() + "," + buf + ")",
      .eval = [parts](double v) { return parts->eval(v); },
      .left_deriv = [parts](double v) { return parts->left_deriv(v); },
      .inverse = [parts](double u) { return parts->composite_inverse(u); },
      .power_exponent = std::nullopt,
  });
}

// ---------------------------------------------------------------------------
// Indices alpha/beta and the doubling constant near zero.

struct IndexEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  double spread = 0.0;
  bool converged = false;
  std::vector<double> ratios;  // phi^{-1}(2^-k) / phi^{-1}(2^{1-k}), k = k_min..k_max
};

struct IndexLadder {
  int k_min = 8;
  int k_max = 40;
  std::size_t window = 8;
  double tolerance = 1e-6;
};

/// liminf / limsup of phi^{-1}(u)/phi^{-1}(2u) as u -> 0, estimated as the
/// min / max over the tail of the dyadic ladder u_k = 2^-k.
inline IndexEstimate index_estimates(const OrliczFunction& phi, const IndexLadder& ladder = {}) {
  if (ladder.k_max < ladder.k_min || ladder.window == 0 ||
      static_cast<std::size_t>(ladder.k_max - ladder.k_min + 1) < ladder.window)
    throw std::invalid_argument("index_estimates: ladder shorter than its tail window");
  IndexEstimate est;
  for (int k = ladder.k_min; k <= ladder.k_max; ++k) {
    const double u = std::ldexp(1.0, -k);
    est.ratios.push_back(inverse(phi, u) / inverse(phi, 2.0 * u));
  }
  const auto tail = est.ratios.end() - static_cast<std::ptrdiff_t>(ladder.window);
  const auto [mn, mx] = std::minmax_element(tail, est.ratios.end());
  est.alpha = *mn;
  est.beta = *mx;
  est.spread = est.beta - est.alpha;
  est.converged = est.spread <= ladder.tolerance;
  return est;
}

inline double index_alpha(const OrliczFunction& phi) { return index_estimates(phi).alpha; }
inline double index_beta(const OrliczFunction& phi) { return index_estimates(phi).beta; }

/// max phi(2u)/phi(u) over n log-spaced u in [u_max 2^-40, u_max].
inline double delta2_probe(const OrliczFunction& phi, double u_max, int n_samples) {
  if (!(u_max > 0.0) || n_samples < 2) throw std::invalid_argument("delta2_probe: need u_max > 0 and n_samples >= 2");
  double k = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double u = u_max * std::exp2(-40.0 * i / (n_samples - 1));
    const double base = phi(u);
    if (!(base > 0.0)) throw std::domain_error("delta2_probe: " + phi.label() + " vanishes at a positive argument");
    k = std::max(k, phi(2.0 * u) / base);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Sampled invariant checks.

/// Violations of the Orlicz-function axioms on a sampled grid over (0, u_max];
/// empty when none are found.
inline std::vector<std::string> validate(const OrliczFunction& phi, double u_max = 100.0, int samples = 200) {
  std::vector<std::string> issues;
  auto rel = [](double a) { return 1e-9 * std::max(1.0, std::abs(a)); };
  if (phi(0.0) != 0.0) issues.push_back("phi(0) != 0");
  std::vector<double> u;
  for (int i = 0; i < samples; ++i) u.push_back(u_max * std::exp2(-30.0 * (samples - 1 - i) / (samples - 1)));
  double prev_v = 0.0, prev_d = 0.0;
  for (double x : u) {
    const double v = phi(x), d = phi.left_deriv(x);
    if (!(v > 0.0)) issues.push_back("phi(u) <= 0 at u = " + std::to_string(x));
    if (v < prev_v - rel(prev_v)) issues.push_back("phi decreasing at u = " + std::to_string(x));
    if (d < 0.0) issues.push_back("left derivative negative at u = " + std::to_string(x));
    if (d < prev_d - 1e-6 * std::max(1.0, std::abs(prev_d))) issues.push_back("left derivative decreasing at u = " + std::to_string(x));
    prev_v = v, prev_d = d;
  }
  for (std::size_t i = 0; i < u.size(); i += 7)
    for (std::size_t j = i; j < u.size(); j += 11) {
      const double mid = phi(0.5 * (u[i] + u[j])), avg = 0.5 * (phi(u[i]) + phi(u[j]));
      if (mid > avg + rel(avg)) issues.push_back("midpoint convexity fails");
    }
  double prev = phi(1.0);
  for (int k = 1; k <= 30; ++k) {
    const double v = phi(std::ldexp(1.0, k));
    if (!(v > prev)) issues.push_back("not unbounded along the doubling ladder");
    prev = v;
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Parsing: "power:<p>" or "grid:<path>" (CSV with header u,phi).

inline GridFunction load_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("grid csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,phi") throw std::invalid_argument("grid csv: header must be 'u,phi'");
  std::vector<double> u, v;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("grid csv: expected 'u,phi' pair: " + line);
    try {
      std::size_t used = 0;
      u.push_back(std::stod(line.substr(0, comma), &used));
      v.push_back(std::stod(line.substr(comma + 1), &used));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("grid csv: bad number in line: " + line);
    }
  }
  return GridFunction(std::move(u), std::move(v));
}

inline void write_grid_csv(std::ostream& out, const GridFunction& g) {
  out << "u,phi\n";
  char buf[80];
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.nodes()[i], g.values()[i]);
    out << buf;
  }
}

inline OrliczFunction parse_function(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("function spec must be 'power:<p>' or 'grid:<path>': " + spec);
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "power") {
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(arg, &used);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad exponent in function spec: " + spec);
    }
    if (used != arg.size()) throw std::invalid_argument("bad exponent in function spec: " + spec);
    return power_function(p);
  }
  if (kind == "grid") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open grid file: " + arg);
    return from_grid(load_grid_csv(in), spec);
  }
  throw std::invalid_argument("unknown function kind '" + kind + "' in: " + spec);
}

}  // namespace orlicz
