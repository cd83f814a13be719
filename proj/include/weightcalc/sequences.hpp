// weightcalc: weight sequences (M_p), their associated functions, and the
// growth conditions imposed on them.
//
// Sequences are stored as l_p = log M_p. Every condition check first
// normalizes to M_0 = 1 (i.e. works with l_p - l_0), so verdicts are
// invariant under rescaling the sequence by a constant.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/numerics.hpp"
#include "weightcalc/verdict.hpp"

namespace weightcalc {

namespace detail {

inline std::string format_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return std::string(buf);
}

}  // namespace detail

/// Truncated weight sequence: l_p = log M_p for p = 0..P.
///
/// A sequence whose conjugate diverges at some finite slope (the omega0
/// case) is representable only up to its last finite index; such sequences
/// carry the truncated flag and several bridge operations refuse them.
class WeightSequence {
 public:
  WeightSequence(std::vector<double> log_values, std::string label,
                 bool truncated = false)
      : log_values_(std::move(log_values)),
        label_(std::move(label)),
        truncated_(truncated) {
    if (log_values_.empty()) {
      throw std::invalid_argument("WeightSequence: empty sequence");
    }
    for (double v : log_values_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("WeightSequence: log values must be finite");
      }
    }
  }

  /// Truncation order P; stored indices are 0..P.
  std::size_t order() const { return log_values_.size() - 1; }

  double log_value(std::size_t p) const { return log_values_.at(p); }

  /// l_p - l_0, the M_0 = 1 normalization used by every condition check.
  double normalized(std::size_t p) const { return log_values_.at(p) - log_values_.front(); }

  std::span<const double> log_values() const { return log_values_; }

  const std::string& label() const { return label_; }
  bool truncated() const { return truncated_; }

 private:
  std::vector<double> log_values_;
  std::string label_;
  bool truncated_;
};

/// Gevrey sequence M_p = (p!)^s, built by log-gamma accumulation.
inline WeightSequence gevrey_sequence(double s, std::size_t order) {
  if (!(s >= 1.0) || !std::isfinite(s)) {
    throw std::invalid_argument("gevrey_sequence: s must be >= 1");
  }
  if (order < 8) {
    throw std::invalid_argument("gevrey_sequence: order must be >= 8");
  }
  std::vector<double> lv(order + 1);
  double log_factorial = 0.0;
  lv[0] = 0.0;
  for (std::size_t p = 1; p <= order; ++p) {
    log_factorial += std::log(static_cast<double>(p));
    lv[p] = s * log_factorial;
  }
  return WeightSequence(std::move(lv), "gevreyseq:" + detail::format_short(s));
}

/// Value of the associated function M(t) = max_p (p log t - (l_p - l_0)).
///
/// at_truncation marks evaluations whose maximizing index hits the stored
/// cutoff P: the true supremum may lie beyond the truncation and the value
/// is then only a lower bound.
struct AssociatedValue {
  double value = 0.0;
  std::size_t argmax = 0;
  bool at_truncation = false;
};

inline AssociatedValue associated_function(const WeightSequence& seq, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("associated_function: t must be positive and finite");
  }
  const double log_t = std::log(t);
  const std::size_t P = seq.order();
  AssociatedValue best;
  best.value = 0.0;  // p = 0 term: 0 * log t - (l_0 - l_0)
  best.argmax = 0;
  for (std::size_t p = 1; p <= P; ++p) {
    const double v = static_cast<double>(p) * log_t - seq.normalized(p);
    if (v > best.value) {
      best.value = v;
      best.argmax = p;
    }
  }
  best.at_truncation = (best.argmax == P);
  return best;
}

/// Associated function cached on a grid. M is nondecreasing in t and convex
/// in log t (it is a max of affine functions of log t).
class AssociatedFunctionView {
 public:
  AssociatedFunctionView(WeightSequence seq, LogGrid grid)
      : seq_(std::move(seq)), grid_(std::move(grid)) {
    values_.reserve(grid_.n);
    for (double t : grid_.points) {
      values_.push_back(associated_function(seq_, t));
    }
  }

  const WeightSequence& sequence() const { return seq_; }
  const LogGrid& grid() const { return grid_; }
  const std::vector<AssociatedValue>& values() const { return values_; }

  bool any_truncated() const {
    for (const auto& v : values_) {
      if (v.at_truncation) return true;
    }
    return false;
  }

 private:
  WeightSequence seq_;
  LogGrid grid_;
  std::vector<AssociatedValue> values_;
};

// ---------------------------------------------------------------------------
// Condition checks.

namespace detail {

/// Decides whether g_p <= log A + p log H for all p, over finite witness
/// grids of A and H. When no pair works, the shape of g decides between a
/// genuine failure (g superlinear: the slopes of its successive differences
/// still rising at the cutoff) and an honest Inconclusive.
inline ConditionVerdict dominated_by_affine(std::span<const double> g,
                                            std::span<const double> A_list,
                                            std::span<const double> H_list,
                                            const std::string& what) {
  const auto bound_ok = [&](double A, double H) {
    const double log_A = std::log(A);
    const double log_H = std::log(H);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double rhs = log_A + static_cast<double>(p) * log_H;
      const double tol = 1e-12 * std::max({1.0, std::abs(g[p]), std::abs(rhs)});
      if (g[p] > rhs + tol) return false;
    }
    return true;
  };

  for (double A : A_list) {
    for (double H : H_list) {
      if (bound_ok(A, H)) {
        return ConditionVerdict::holds_with({{"A", A}, {"H", H}},
                                            what + ": witness over full index range");
      }
    }
  }

  // Superlinearity probe: the average slope of g over the last quarter of
  // indices against the quarter before it. A slope that is still rising at
  // the cutoff means g grows faster than any A H^p can absorb. Quarter
  // averages are used so that parity wobbles in g (the (M2) min over q
  // alternates between even and odd splits) cannot mask the growth.
  bool superlinear = false;
  if (g.size() >= 12) {
    const std::size_t q = std::max<std::size_t>(g.size() / 4, 4);
    const std::size_t hi = g.size() - 1;
    const double slope_last = (g[hi] - g[hi - q]) / static_cast<double>(q);
    const double slope_prev = (g[hi - q] - g[hi - 2 * q]) / static_cast<double>(q);
    superlinear = slope_last > slope_prev + std::max(1e-9, 1e-6 * std::abs(slope_prev));
  }
  if (superlinear) {
    const double A_hi = A_list.back();
    const double H_hi = H_list.back();
    std::size_t worst = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double gap = g[p] - (std::log(A_hi) + static_cast<double>(p) * std::log(H_hi));
      if (gap > worst_gap) {
        worst_gap = gap;
        worst = p;
      }
    }
    Counterexample c;
    c.point = static_cast<double>(worst);
    c.lhs = g[worst];
    c.rhs = std::log(A_hi) + static_cast<double>(worst) * std::log(H_hi);
    return ConditionVerdict::fails_with(
        c, what + ": required ratio grows superlinearly at the cutoff (largest candidates shown)");
  }
  return ConditionVerdict::inconclusive_with(
      what + ": no witness on the candidate grid, growth not superlinear at cutoff");
}

inline constexpr double kAffineA[] = {1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
inline constexpr double kAffineH[] = {1.25, 1.5, 2.0, 4.0, 8.0, 16.0};

}  // namespace detail

/// Lower bound on (M_p / M_0)^{1/p}: the hypothesis making M(t) increasing
/// and convex in log t. Holds with the minimal root as witness unless the
/// running minimum is still strictly decreasing at the cutoff.
inline ConditionVerdict check_lower_root_bound(const WeightSequence& seq) {
  const std::size_t P = seq.order();
  if (P < 8) {
    throw std::invalid_argument("check_lower_root_bound: order must be >= 8");
  }
  std::size_t argmin = 1;
  double min_root = std::numeric_limits<double>::infinity();
  std::vector<double> roots(P + 1, 0.0);
  for (std::size_t p = 1; p <= P; ++p) {
    roots[p] = std::exp(seq.normalized(p) / static_cast<double>(p));
    if (roots[p] < min_root) {
      min_root = roots[p];
      argmin = p;
    }
  }
  const bool decreasing_at_cutoff = (argmin == P) && (roots[P] < roots[P - 1] - 1e-15);
  if (decreasing_at_cutoff) {
    return ConditionVerdict::inconclusive_with(
        "running minimum of (M_p/M_0)^{1/p} still strictly decreasing at p = P");
  }
  if (!(min_root > 0.0)) {
    return ConditionVerdict::inconclusive_with(
        "root underflowed to zero; no positive witness representable");
  }
  return ConditionVerdict::holds_with({{"c", min_root}, {"p", static_cast<double>(argmin)}});
}

/// Logarithmic convexity (M1): M_p^2 <= M_{p-1} M_{p+1} for 1 <= p <= P-1.
inline ConditionVerdict check_M1(const WeightSequence& seq) {
  const std::size_t P = seq.order();
  if (P < 2) {
    throw std::invalid_argument("check_M1: order must be >= 2");
  }
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 1; p + 1 <= P; ++p) {
    const double lhs = 2.0 * seq.normalized(p);
    const double rhs = seq.normalized(p - 1) + seq.normalized(p + 1);
    const double tol = 1e-12 * std::max(1.0, std::abs(seq.normalized(p + 1)));
    if (lhs > rhs + tol) {
      Counterexample c;
      c.point = static_cast<double>(p);
      c.lhs = lhs;
      c.rhs = rhs;
      return ConditionVerdict::fails_with(c, "log-convexity violated");
    }
    min_slack = std::min(min_slack, rhs - lhs);
  }
  return ConditionVerdict::holds_with({{"min_slack", min_slack}});
}

/// Stability under differential operators (M2)': M_{p+1} <= A H^p M_p.
inline ConditionVerdict check_M2prime(const WeightSequence& seq) {
  const std::size_t P = seq.order();
  if (P < 4) {
    throw std::invalid_argument("check_M2prime: order must be >= 4");
  }
  std::vector<double> g(P);
  for (std::size_t p = 0; p < P; ++p) {
    g[p] = seq.normalized(p + 1) - seq.normalized(p);
  }
  return detail::dominated_by_affine(g, detail::kAffineA, detail::kAffineH, "(M2)'");
}

/// Stability under ultradifferential operators (M2):
/// M_p <= A H^p min_{0<=q<=p} M_q M_{p-q}.
inline ConditionVerdict check_M2(const WeightSequence& seq) {
  const std::size_t P = seq.order();
  if (P < 4) {
    throw std::invalid_argument("check_M2: order must be >= 4");
  }
  std::vector<double> g(P + 1);
  for (std::size_t p = 0; p <= P; ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q <= p; ++q) {
      best = std::min(best, seq.normalized(q) + seq.normalized(p - q));
    }
    g[p] = seq.normalized(p) - best;
  }
  return detail::dominated_by_affine(g, detail::kAffineA, detail::kAffineH, "(M2)");
}

/// Hermite-basis stability: for the given C > 0 and some listed H, a finite
/// B with s^{s/2} M_p <= B C^s H^{s+p} M_{s+p} over the swept (s, p) range.
///
/// B is the empirical maximum of the required quotient. The verdict is
/// Inconclusive when that maximum sits at the truncation boundary s+p = P,
/// since the true supremum may then escape the sweep.
inline ConditionVerdict check_condition_1_1(const WeightSequence& seq, double C,
                                            std::span<const double> H_list = {}) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw std::invalid_argument("check_condition_1_1: C must be positive and finite");
  }
  static constexpr double kDefaultH[] = {1.5, 2.0, 4.0, 8.0};
  if (H_list.empty()) H_list = kDefaultH;

  const std::size_t P = seq.order();
  const double log_C = std::log(C);
  const std::size_t interior_cap = (P * 7) / 8;

  for (double H : H_list) {
    const double log_H = std::log(H);
    double max_full = -std::numeric_limits<double>::infinity();
    double max_interior = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= P; ++s) {
      const double sd = static_cast<double>(s);
      const double s_part = 0.5 * sd * std::log(std::max(sd, 1.0)) - sd * log_C;
      for (std::size_t p = 0; s + p <= P; ++p) {
        const double e = s_part + seq.normalized(p) -
                         static_cast<double>(s + p) * log_H - seq.normalized(s + p);
        if (e > max_full) max_full = e;
        if (s + p <= interior_cap && e > max_interior) max_interior = e;
      }
    }
    if (max_full > kExpOverflowGuard) continue;  // B not representable for this H
    const bool interior_attained = max_full <= max_interior + 1e-6;
    if (interior_attained) {
      return ConditionVerdict::holds_with(
          {{"H", H}, {"B", std::exp(max_full)}, {"logB", max_full}, {"C", C}});
    }
  }
  return ConditionVerdict::inconclusive_with(
      "maximum attained at the truncation boundary s+p = P for every candidate H");
}

}  // namespace weightcalc
