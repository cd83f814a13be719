// weightcalc: Young conjugation phi*(s) = sup_{x>=0} (s x - phi(x)).
//
// For table weights the supremum over the piecewise-linear interpolant is
// attained at a breakpoint and is computed exactly. For analytic families a
// coarse scan brackets the maximizer of the concave objective and a ternary
// search refines it; the refined values are accurate well beyond the 1e-6
// tolerances used downstream.
//
// Divergence (the omega0 case: phi*(s) = +inf for s > 1) is detected when
// the supremum sits on the right edge of the sampling range AND the slope
// exceeds the final chord slope of phi there; edge attainment alone is
// ambiguous and stays finite.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "weightcalc/numerics.hpp"
#include "weightcalc/weights.hpp"

namespace weightcalc {

struct ConjugateValue {
  double value = 0.0;
  bool infinite = false;
  bool at_right_boundary = false;
};

namespace detail {

template <typename G>
double ternary_max(G&& g, double lo, double hi, int iterations = 100) {
  double best = std::max(g(lo), g(hi));
  for (int it = 0; it < iterations && hi - lo > 0.0; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) < g(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::max(best, g(0.5 * (lo + hi)));
}

}  // namespace detail

inline ConjugateValue conjugate_at(const WeightFunction& w, double slope,
                                   double x_max = 25.0, std::size_t scan_points = 4096) {
  if (std::isnan(slope) || slope < 0.0) {
    throw std::invalid_argument("conjugate_at: slope must be >= 0");
  }
  ConjugateValue out;

  if (w.has_table()) {
    // Exact over the interpolant: the objective is piecewise linear in x.
    const std::span<const double> phi = w.table();
    const double step = w.table_step();
    const std::size_t last = phi.size() - 1;
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i <= last; ++i) {
      const double g = slope * (static_cast<double>(i) * step) - phi[i];
      if (g > best) {
        best = g;
        arg = i;
      }
    }
    out.value = best;
    out.at_right_boundary = (arg == last);
    if (out.at_right_boundary) {
      const double chord = (phi[last] - phi[last - 1]) / step;
      if (slope > chord + 1e-9) {
        out.infinite = true;
        out.value = std::numeric_limits<double>::infinity();
      }
    }
    return out;
  }

  if (scan_points < 3) {
    throw std::invalid_argument("conjugate_at: need at least 3 scan points");
  }
  const double step = x_max / static_cast<double>(scan_points - 1);
  double best = 0.0;  // x = 0 gives s*0 - phi(0) = 0
  std::size_t arg = 0;
  for (std::size_t i = 0; i < scan_points; ++i) {
    const double x = static_cast<double>(i) * step;
    const double g = slope * x - w.phi(x);
    if (g > best) {
      best = g;
      arg = i;
    }
  }
  out.at_right_boundary = (arg == scan_points - 1);
  if (out.at_right_boundary) {
    const double chord = (w.phi(x_max) - w.phi(x_max - step)) / step;
    if (slope > chord + 1e-9) {
      out.infinite = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  const double lo = (arg == 0) ? 0.0 : static_cast<double>(arg - 1) * step;
  const double hi = std::min(x_max, static_cast<double>(arg + 1) * step);
  const double refined =
      detail::ternary_max([&](double x) { return slope * x - w.phi(x); }, lo, hi);
  out.value = std::max({best, refined, 0.0});
  return out;
}

/// Sampled Young conjugate on a uniform slope grid [0, s_max]. Divergent
/// entries are stored as +inf; they form a suffix of the table.
class ConjugateTable {
 public:
  ConjugateTable(std::vector<double> slopes, std::vector<double> values)
      : slopes_(std::move(slopes)), values_(std::move(values)) {
    if (slopes_.size() != values_.size() || slopes_.size() < 2) {
      throw std::invalid_argument("ConjugateTable: mismatched or tiny table");
    }
    finite_up_to_ = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (std::isfinite(values_[i])) finite_up_to_ = i;
    }
  }

  std::size_t size() const { return slopes_.size(); }
  double slope(std::size_t i) const { return slopes_.at(i); }
  double value(std::size_t i) const { return values_.at(i); }
  ExtendedReal extended_value(std::size_t i) const {
    return ExtendedReal::from_log(values_.at(i));
  }
  std::span<const double> slopes() const { return slopes_; }
  std::span<const double> values() const { return values_; }

  /// Index of the largest slope with a finite value.
  std::size_t finite_up_to() const { return finite_up_to_; }
  bool all_finite() const { return finite_up_to_ == values_.size() - 1; }
  double s_max() const { return slopes_.back(); }

 private:
  std::vector<double> slopes_;
  std::vector<double> values_;
  std::size_t finite_up_to_;
};

inline ConjugateTable young_conjugate(const WeightFunction& w, double s_max, std::size_t n,
                                      double x_max = 25.0, std::size_t scan_points = 4096) {
  if (!(s_max > 0.0) || !std::isfinite(s_max)) {
    throw std::invalid_argument("young_conjugate: s_max must be positive");
  }
  if (n < 2) {
    throw std::invalid_argument("young_conjugate: need at least 2 slopes");
  }
  std::vector<double> slopes(n);
  std::vector<double> values(n);
  const double ds = s_max / static_cast<double>(n - 1);
  bool diverged = false;
  for (std::size_t i = 0; i < n; ++i) {
    slopes[i] = static_cast<double>(i) * ds;
    if (diverged) {
      values[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    const ConjugateValue cv = conjugate_at(w, slopes[i], x_max, scan_points);
    if (cv.infinite) {
      diverged = true;  // divergence is monotone in the slope
      values[i] = std::numeric_limits<double>::infinity();
    } else {
      values[i] = cv.value;
    }
  }
  values[0] = 0.0;  // phi*(0) = -inf_{x} phi(x) = 0 under the normalization
  return ConjugateTable(std::move(slopes), std::move(values));
}

/// Max |phi**(x) - phi(x)| over the given x points whose supporting slope
/// lands strictly inside the finite slope range; points supported on the
/// edges of the table see a truncated supremum and are not counted.
inline double biconjugate_check(const WeightFunction& w, const ConjugateTable& table,
                                std::span<const double> x_points) {
  double max_err = 0.0;
  const std::size_t hi = table.finite_up_to();
  for (double x : x_points) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i <= hi; ++i) {
      const double g = x * table.slope(i) - table.value(i);
      if (g > best) {
        best = g;
        arg = i;
      }
    }
    const bool interior = arg > 0 && arg < hi;
    if (!interior) continue;
    max_err = std::max(max_err, std::abs(best - w.phi(x)));
  }
  return max_err;
}

}  // namespace weightcalc
