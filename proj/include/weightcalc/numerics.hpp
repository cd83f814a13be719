// weightcalc: log-domain scalars, geometric grids, and summation primitives.
//
// Everything that can grow like e^{M(t)} is kept as its natural logarithm;
// only known-bounded quantities are ever exponentiated.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace weightcalc {

/// exp() of anything above this exceeds double range; callers must renormalize.
inline constexpr double kExpOverflowGuard = 700.0;

/// A nonnegative extended real x in [0, +inf], stored as log x.
///
/// log x = -inf encodes x = 0, log x = +inf encodes x = +inf (divergent
/// suprema). NaN is rejected at every construction point. Addition is
/// performed in the log domain (log-sum-exp), multiplication adds exponents;
/// +inf absorbs both, as does max.
class ExtendedReal {
 public:
  ExtendedReal() : log_(-std::numeric_limits<double>::infinity()) {}

  static ExtendedReal zero() { return ExtendedReal(); }

  static ExtendedReal infinity() {
    ExtendedReal r;
    r.log_ = std::numeric_limits<double>::infinity();
    return r;
  }

  /// Builds from the logarithm of the represented value. Any real or +-inf.
  static ExtendedReal from_log(double log_value) {
    if (std::isnan(log_value)) {
      throw std::invalid_argument("ExtendedReal: log value is NaN");
    }
    ExtendedReal r;
    r.log_ = log_value;
    return r;
  }

  /// Builds from the value itself; negative values are rejected.
  static ExtendedReal from_value(double value) {
    if (std::isnan(value)) {
      throw std::invalid_argument("ExtendedReal: value is NaN");
    }
    if (value < 0.0) {
      throw std::invalid_argument("ExtendedReal: negative value");
    }
    ExtendedReal r;
    r.log_ = std::log(value);  // log(0) = -inf, log(inf) = inf
    return r;
  }

  double log() const { return log_; }

  /// Natural-scale value; may round to 0 or overflow to +inf double.
  double value() const { return std::exp(log_); }

  bool is_infinite() const { return std::isinf(log_) && log_ > 0.0; }
  bool is_zero() const { return std::isinf(log_) && log_ < 0.0; }
  bool is_finite() const { return !is_infinite(); }

  /// Magnitude addition, log-sum-exp in the log domain. +inf absorbs.
  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }

  /// Magnitude multiplication (exponents add). 0 * inf has no sensible value
  /// here and is rejected.
  friend ExtendedReal operator*(ExtendedReal a, ExtendedReal b) {
    if ((a.is_zero() && b.is_infinite()) || (a.is_infinite() && b.is_zero())) {
      throw std::domain_error("ExtendedReal: 0 * inf is undefined");
    }
    return from_log(a.log_ + b.log_);
  }

  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.log_ == b.log_; }
  friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.log_ < b.log_; }
  friend bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }
  friend bool operator<=(ExtendedReal a, ExtendedReal b) { return !(b < a); }
  friend bool operator>=(ExtendedReal a, ExtendedReal b) { return !(a < b); }

  friend ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }

 private:
  double log_;
};

/// Logarithmically equispaced evaluation grid on [t_min, t_max].
///
/// Discretizes "for all t > 0" quantifiers. points.front() == t_min and
/// points.back() == t_max exactly; consecutive ratios agree to ~1 ulp.
struct LogGrid {
  double t_min = 1.0;
  double t_max = 10.0;
  std::size_t n = 2;
  double log_step = 0.0;  // log(points[i+1]) - log(points[i])
  std::vector<double> points;
};

inline LogGrid make_log_grid(double t_min, double t_max, std::size_t n) {
  if (!std::isfinite(t_min) || !std::isfinite(t_max)) {
    throw std::invalid_argument("make_log_grid: bounds must be finite");
  }
  if (t_min <= 0.0) {
    throw std::invalid_argument("make_log_grid: t_min must be positive");
  }
  if (t_max <= t_min) {
    throw std::invalid_argument("make_log_grid: t_max must exceed t_min");
  }
  if (n < 2) {
    throw std::invalid_argument("make_log_grid: need at least two points");
  }
  LogGrid g;
  g.t_min = t_min;
  g.t_max = t_max;
  g.n = n;
  const double l0 = std::log(t_min);
  const double l1 = std::log(t_max);
  g.log_step = (l1 - l0) / static_cast<double>(n - 1);
  g.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.points[i] = std::exp(l0 + static_cast<double>(i) * g.log_step);
  }
  g.points.front() = t_min;
  g.points.back() = t_max;
  return g;
}

struct GridSup {
  ExtendedReal value;
  double argmax = 0.0;       // first grid point attaining the maximum
  std::size_t argmax_index = 0;
};

/// Maximum of f over the grid points, with the first attaining point.
/// +inf propagates: the first infinite value wins outright.
template <typename F>
GridSup sup_over_grid(F&& f, const LogGrid& grid) {
  GridSup best;
  best.value = f(grid.points[0]);
  best.argmax = grid.points[0];
  best.argmax_index = 0;
  if (best.value.is_infinite()) return best;
  for (std::size_t i = 1; i < grid.n; ++i) {
    const ExtendedReal v = f(grid.points[i]);
    if (v > best.value) {
      best.value = v;
      best.argmax = grid.points[i];
      best.argmax_index = i;
      if (v.is_infinite()) break;
    }
  }
  return best;
}

/// Neumaier-compensated accumulator; immune to cancellation of the usual
/// Kahan trick when terms exceed the running sum.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Prefix sums S_j = sum_{k=0..j} exp(e_k) for j = 0..K, where e_k is the
/// log of the k-th term (-inf encodes a zero term). Returns K+1 values,
/// nondecreasing since every term is nonnegative. Terms whose exponent
/// exceeds kExpOverflowGuard cannot be represented and raise overflow_error.
inline std::vector<double> partial_sums(const std::function<ExtendedReal(std::size_t)>& term,
                                        std::size_t K) {
  if (K < 1) {
    throw std::invalid_argument("partial_sums: K must be at least 1");
  }
  std::vector<double> sums;
  sums.reserve(K + 1);
  NeumaierSum acc;
  for (std::size_t k = 0; k <= K; ++k) {
    const ExtendedReal e = term(k);
    if (e.is_infinite() || e.log() > kExpOverflowGuard) {
      throw std::overflow_error("partial_sums: term exponent exceeds overflow guard");
    }
    acc.add(e.value());
    sums.push_back(acc.total());
  }
  return sums;
}

inline std::vector<double> partial_sums(std::span<const ExtendedReal> terms) {
  if (terms.empty()) {
    throw std::invalid_argument("partial_sums: empty term list");
  }
  std::vector<double> sums;
  sums.reserve(terms.size());
  NeumaierSum acc;
  for (const ExtendedReal& e : terms) {
    if (e.is_infinite() || e.log() > kExpOverflowGuard) {
      throw std::overflow_error("partial_sums: term exponent exceeds overflow guard");
    }
    acc.add(e.value());
    sums.push_back(acc.total());
  }
  return sums;
}

/// Discrete second differences f[i-1] - 2 f[i] + f[i+1]; nonnegative values
/// (up to tolerance) certify convexity of equally spaced samples.
inline std::vector<double> second_differences(std::span<const double> f) {
  std::vector<double> d;
  if (f.size() < 3) return d;
  d.reserve(f.size() - 2);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    d.push_back(f[i - 1] - 2.0 * f[i] + f[i + 1]);
  }
  return d;
}

}  // namespace weightcalc
