// weightcalc: weight functions, their axioms, and the growth conditions
// (BMM) and (4) that govern nuclearity of the associated sequence spaces.
//
// Built-in families (t >= 1; all weights vanish on [0,1]):
//   omega0      log t
//   log^a       (log t)^a, a >= 1
//   power:a     t^a - 1, 0 < a <= 1 (a = 1 violates the o(t) axiom and is
//               kept constructible, flagged, for negative tests)
//   gevrey:s    t^{1/s} - 1, s > 1
//   table       convex samples of phi(x) = omega(e^x) on a uniform x grid
//
// The "- 1" hinge on the power families keeps the weights continuous at
// t = 1 under the omega|[0,1] = 0 normalization; it shifts nothing that
// matters, since every condition here is stable under adding a constant.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/numerics.hpp"
#include "weightcalc/sequences.hpp"
#include "weightcalc/verdict.hpp"

namespace weightcalc {

class WeightFunction {
 public:
  enum class Family { Omega0, Power, LogPower, Gevrey, Table };

  static WeightFunction omega0() { return WeightFunction(Family::Omega0, 0.0, "omega0"); }

  static WeightFunction power(double a) {
    if (!(a > 0.0) || a > 1.0 || !std::isfinite(a)) {
      throw std::invalid_argument("WeightFunction::power: need 0 < a <= 1");
    }
    return WeightFunction(Family::Power, a, "power:" + detail::format_short(a));
  }

  static WeightFunction log_power(double a) {
    if (!(a >= 1.0) || !std::isfinite(a)) {
      throw std::invalid_argument("WeightFunction::log_power: need a >= 1");
    }
    return WeightFunction(Family::LogPower, a, "log^" + detail::format_short(a));
  }

  static WeightFunction gevrey(double s) {
    if (!(s > 1.0) || !std::isfinite(s)) {
      throw std::invalid_argument("WeightFunction::gevrey: need s > 1");
    }
    return WeightFunction(Family::Gevrey, s, "gevrey:" + detail::format_short(s));
  }

  /// Builds a table weight from samples of phi(x) = omega(e^x) on the
  /// uniform grid x_i = i * x_max / (n-1). Samples must start at 0, be
  /// nondecreasing and convex; anything else is rejected.
  static WeightFunction from_phi_samples(std::vector<double> phi, double x_max) {
    if (phi.size() < 3) {
      throw std::invalid_argument("WeightFunction: table needs at least 3 samples");
    }
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
      throw std::invalid_argument("WeightFunction: table x_max must be positive");
    }
    for (double v : phi) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("WeightFunction: table samples must be finite");
      }
    }
    if (std::abs(phi.front()) > 1e-9) {
      throw std::invalid_argument("WeightFunction: table must satisfy phi(0) = 0");
    }
    for (std::size_t i = 1; i < phi.size(); ++i) {
      if (phi[i] < phi[i - 1] - 1e-9 * std::max(1.0, std::abs(phi[i - 1]))) {
        throw std::invalid_argument("WeightFunction: table samples must be nondecreasing");
      }
    }
    for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
      const double d2 = phi[i - 1] - 2.0 * phi[i] + phi[i + 1];
      if (d2 < -1e-9 * std::max(1.0, std::abs(phi[i]))) {
        throw std::invalid_argument("WeightFunction: non-convex phi table rejected");
      }
    }
    WeightFunction w(Family::Table, 0.0, "table");
    w.table_ = std::move(phi);
    w.table_x_max_ = x_max;
    return w;
  }

  Family family() const { return family_; }
  double param() const { return param_; }
  const std::string& label() const { return label_; }

  /// power(1) fails the o(t) axiom; it exists only as a negative test subject.
  bool is_weight() const { return !(family_ == Family::Power && param_ == 1.0); }

  bool has_table() const { return family_ == Family::Table; }
  std::span<const double> table() const { return table_; }
  double table_x_max() const { return table_x_max_; }
  double table_step() const { return table_x_max_ / static_cast<double>(table_.size() - 1); }

  /// omega(t). Exactly 0 on [0, 1].
  double operator()(double t) const {
    if (std::isnan(t) || t < 0.0) {
      throw std::invalid_argument("WeightFunction: t must be >= 0");
    }
    if (t <= 1.0) return 0.0;
    switch (family_) {
      case Family::Omega0: return std::log(t);
      case Family::LogPower: return std::pow(std::log(t), param_);
      case Family::Power: return std::pow(t, param_) - 1.0;
      case Family::Gevrey: return std::pow(t, 1.0 / param_) - 1.0;
      case Family::Table: return phi(std::log(t));
    }
    return 0.0;
  }

  /// phi(x) = omega(e^x); 0 for x <= 0. Convex for every admissible family.
  double phi(double x) const {
    if (std::isnan(x)) {
      throw std::invalid_argument("WeightFunction: phi argument is NaN");
    }
    if (x <= 0.0) return 0.0;
    switch (family_) {
      case Family::Omega0: return x;
      case Family::LogPower: return std::pow(x, param_);
      case Family::Power: return std::expm1(param_ * x);
      case Family::Gevrey: return std::expm1(x / param_);
      case Family::Table: {
        const double step = table_step();
        const double pos = x / step;
        const std::size_t last = table_.size() - 1;
        if (pos >= static_cast<double>(last)) {
          // linear continuation with the final chord slope
          const double slope = (table_[last] - table_[last - 1]) / step;
          return table_[last] + slope * (x - table_x_max_);
        }
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return table_[i] + frac * (table_[i + 1] - table_[i]);
      }
    }
    return 0.0;
  }

 private:
  WeightFunction(Family f, double p, std::string label)
      : family_(f), param_(p), label_(std::move(label)) {}

  Family family_;
  double param_;
  std::string label_;
  std::vector<double> table_;
  double table_x_max_ = 0.0;
};

/// Samples an existing weight into a table family (same uniform phi grid
/// the conjugation machinery uses).
inline WeightFunction sample_phi_table(const WeightFunction& w, double x_max = 25.0,
                                       std::size_t n = 4096) {
  if (n < 3) throw std::invalid_argument("sample_phi_table: need at least 3 samples");
  std::vector<double> phi(n);
  const double step = x_max / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = w.phi(static_cast<double>(i) * step);
  }
  phi.front() = 0.0;
  return WeightFunction::from_phi_samples(std::move(phi), x_max);
}

// ---------------------------------------------------------------------------
// Exponent maps: the common currency of the growth checks. A map returns
// the exponent-scale value at t, or nullopt where the evaluation is not
// reliable (associated functions beyond their truncation range).

using ExponentMap = std::function<std::optional<double>(double)>;

inline ExponentMap exponent_map(const WeightFunction& w) {
  return [w](double t) -> std::optional<double> { return w(t); };
}

inline ExponentMap exponent_map(const WeightSequence& seq) {
  return [seq](double t) -> std::optional<double> {
    const AssociatedValue v = associated_function(seq, t);
    if (v.at_truncation) return std::nullopt;
    return v.value;
  };
}

// ---------------------------------------------------------------------------
// Shared decision core for "exists c in a finite list with lhs <= rhs(c)
// for all t" checks.

namespace detail {

/// A candidate certifies only if the inequality holds at every evaluable
/// grid point AND the violation margin is not rising along the grid tail:
/// a margin that is still climbing would cross zero just beyond any finite
/// grid, so pointwise validity alone proves nothing about the quantifier
/// over all t. Symmetrically, Fails requires every candidate's margin to be
/// climbing at the tail with at least one actual violation on the grid.
inline ConditionVerdict exists_witness_over_grid(
    const LogGrid& grid, const std::function<std::optional<double>(double)>& lhs,
    const std::function<std::optional<double>(double, double)>& rhs,
    std::span<const double> candidates, const std::string& witness_key,
    const std::string& what) {
  bool any_violated = false;
  bool all_tails_increasing = true;
  bool any_unevaluable = false;
  std::optional<Counterexample> first_violation;
  ConditionVerdict result;

  for (double c : candidates) {
    std::vector<double> margin;
    margin.reserve(grid.n);
    std::size_t skipped = 0;
    double worst = -std::numeric_limits<double>::infinity();
    double worst_excess = 0.0;
    Counterexample worst_point;
    bool valid = true;
    for (double t : grid.points) {
      const std::optional<double> l = lhs(t);
      const std::optional<double> r = rhs(t, c);
      if (!l || !r) {
        ++skipped;
        continue;
      }
      const double v = *l - *r;
      margin.push_back(v);
      worst = std::max(worst, v);
      const double tol = 1e-9 + 1e-12 * std::max(std::abs(*l), std::abs(*r));
      if (v - tol > worst_excess) {
        valid = false;
        worst_excess = v - tol;
        worst_point = Counterexample{t, *l, *r};
      }
    }
    if (margin.empty()) {
      any_unevaluable = true;
      continue;
    }
    const TailTrend trend = tail_trend(margin);
    if (valid && !trend.increasing) {
      ConditionVerdict verdict = ConditionVerdict::holds_with(
          {{std::string(witness_key), c}, {"max_margin", worst}},
          what + (skipped > 0 ? " (skipped " + std::to_string(skipped) +
                                    " unevaluable points)"
                              : ""));
      verdict.grid = grid_ref(grid);
      return verdict;
    }
    if (!valid) {
      any_violated = true;
      if (!first_violation) first_violation = worst_point;
    }
    all_tails_increasing = all_tails_increasing && trend.increasing;
  }

  if (any_violated && all_tails_increasing && !any_unevaluable) {
    result = ConditionVerdict::fails_with(
        *first_violation, what + ": violation margin positive and rising at the grid tail "
                                 "for every candidate");
  } else {
    result = ConditionVerdict::inconclusive_with(
        what + ": no candidate certifies on the tested range and the failure "
               "evidence is incomplete");
  }
  result.grid = grid_ref(grid);
  return result;
}

inline constexpr double kAlphaL[] = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
inline constexpr double kBmmH[] = {1.5, 2.0, 2.718281828459045, 4.0, 8.0,
                                   16.0, 32.0, 1e2, 1e3};
inline constexpr double kCond4H[] = {1.5, 2.0, 2.718281828459045, 4.0, 8.0,
                                     16.0, 1e2, 1e3};

}  // namespace detail

// ---------------------------------------------------------------------------
// Weight-function axioms.

/// (alpha): omega(2t) <= L (omega(t) + 1) for some L.
inline ConditionVerdict check_alpha(const WeightFunction& w, const LogGrid& grid) {
  return detail::exists_witness_over_grid(
      grid, [&](double t) -> std::optional<double> { return w(2.0 * t); },
      [&](double t, double L) -> std::optional<double> { return L * (w(t) + 1.0); },
      detail::kAlphaL, "L", "(alpha)");
}

/// (beta): omega(t) = o(t). Certified when omega(t)/t is not rising along
/// the grid tail and has dropped below 1e-3 at t_max; falsified when the
/// ratio is not falling and still above the threshold.
inline ConditionVerdict check_beta(const WeightFunction& w, const LogGrid& grid) {
  std::vector<double> ratio;
  ratio.reserve(grid.n);
  for (double t : grid.points) ratio.push_back(w(t) / t);

  static constexpr double kThreshold = 1e-3;
  std::vector<double> neg(ratio.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) neg[i] = -ratio[i];
  const bool tail_falling = detail::tail_trend(neg).increasing;
  const bool tail_rising = detail::tail_trend(ratio).increasing;

  ConditionVerdict v;
  if (!tail_rising && ratio.back() < kThreshold) {
    v = ConditionVerdict::holds_with({{"ratio_at_tmax", ratio.back()}},
                                     "omega(t)/t below threshold and not rising at the tail");
  } else if (!tail_falling && ratio.back() >= kThreshold) {
    v = ConditionVerdict::fails_with(Counterexample{grid.t_max, ratio.back(), kThreshold},
                                     "omega(t)/t not decaying on the tested range");
  } else {
    v = ConditionVerdict::inconclusive_with("omega(t)/t still above threshold at t_max");
  }
  v.grid = grid_ref(grid);
  return v;
}

/// (gamma): omega(t) >= a + b log(1+t) for some real a and b > 0. With a
/// fitted as a grid minimum the inequality holds trivially, so the check
/// demands a margin omega - b log(1+t) that is not falling at the tail;
/// failure is evidenced by fitting a on the first half of the grid and
/// exhibiting a tail violation.
inline ConditionVerdict check_gamma(const WeightFunction& w, const LogGrid& grid) {
  std::vector<double> b_list;
  for (int k = 0; k <= 10; ++k) b_list.push_back(std::pow(2.0, -k));

  for (double b : b_list) {
    std::vector<double> m;
    m.reserve(grid.n);
    for (double t : grid.points) m.push_back(w(t) - b * std::log1p(t));
    std::vector<double> neg(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) neg[i] = -m[i];
    const bool tail_falling = detail::tail_trend(neg).increasing;
    if (!tail_falling) {
      double a = std::numeric_limits<double>::infinity();
      for (double mi : m) a = std::min(a, mi);
      ConditionVerdict v = ConditionVerdict::holds_with({{"a", a}, {"b", b}});
      v.grid = grid_ref(grid);
      return v;
    }
  }

  // Even the flattest b has a falling margin: fit a on the head, look for a
  // concrete violation on the tail.
  const double b = b_list.back();
  double a_head = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.n / 2; ++i) {
    a_head = std::min(a_head, w(grid.points[i]) - b * std::log1p(grid.points[i]));
  }
  ConditionVerdict v;
  double worst_gap = 0.0;
  std::optional<Counterexample> cex;
  for (std::size_t i = grid.n / 2; i < grid.n; ++i) {
    const double t = grid.points[i];
    const double lhs = w(t);
    const double rhs = a_head + b * std::log1p(t);
    if (rhs - lhs > worst_gap + 1e-9) {
      worst_gap = rhs - lhs;
      cex = Counterexample{t, lhs, rhs};
    }
  }
  if (cex) {
    v = ConditionVerdict::fails_with(*cex,
                                     "margin against b log(1+t) falls for every b; head-fitted "
                                     "a violated on the tail");
  } else {
    v = ConditionVerdict::inconclusive_with("margins falling but no tail violation materialized");
  }
  v.grid = grid_ref(grid);
  return v;
}

/// (delta): phi(x) = omega(e^x) is convex, checked by discrete second
/// differences on a uniform x grid.
inline ConditionVerdict check_delta(const WeightFunction& w, double x_max = 25.0,
                                    std::size_t n = 4096) {
  if (n < 3) throw std::invalid_argument("check_delta: need at least 3 samples");
  std::vector<double> phi(n);
  const double step = x_max / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) phi[i] = w.phi(static_cast<double>(i) * step);

  double min_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = phi[i - 1] - 2.0 * phi[i] + phi[i + 1];
    if (d2 < -1e-9 * std::max(1.0, std::abs(phi[i]))) {
      return ConditionVerdict::fails_with(
          Counterexample{static_cast<double>(i) * step, 2.0 * phi[i], phi[i - 1] + phi[i + 1]},
          "phi not convex at sampled point");
    }
    min_d2 = std::min(min_d2, d2);
  }
  return ConditionVerdict::holds_with({{"min_second_difference", min_d2},
                                       {"x_max", x_max},
                                       {"n", static_cast<double>(n)}});
}

/// (BMM): 2 omega(t) <= omega(Ht) + H for some H > 1.
inline ConditionVerdict check_BMM(const WeightFunction& w, const LogGrid& grid) {
  return detail::exists_witness_over_grid(
      grid, [&](double t) -> std::optional<double> { return 2.0 * w(t); },
      [&](double t, double H) -> std::optional<double> { return w(H * t) + H; },
      detail::kBmmH, "H", "(BMM)");
}

/// Condition (4): M(t) + log t <= M(Ht) + H for some H > 1. Applies to an
/// associated function or to a weight itself.
inline ConditionVerdict check_condition4(const ExponentMap& M, const LogGrid& grid) {
  return detail::exists_witness_over_grid(
      grid,
      [&](double t) -> std::optional<double> {
        const std::optional<double> v = M(t);
        if (!v) return std::nullopt;
        return *v + std::log(t);
      },
      [&](double t, double H) -> std::optional<double> {
        const std::optional<double> v = M(H * t);
        if (!v) return std::nullopt;
        return *v + H;
      },
      detail::kCond4H, "H", "condition (4)");
}

inline ConditionVerdict check_condition4(const WeightFunction& w, const LogGrid& grid) {
  return check_condition4(exponent_map(w), grid);
}

inline ConditionVerdict check_condition4(const WeightSequence& seq, const LogGrid& grid) {
  return check_condition4(exponent_map(seq), grid);
}

/// N-fold chaining of condition (4): M(t) + N log t <= M(H^N t) + C. Returns
/// the measured constant C (grid maximum) rather than asserting the chained
/// bound; Holds when the measurement stays within the N*H budget.
struct IterateCondition4Result {
  double constant = -std::numeric_limits<double>::infinity();
  std::size_t skipped = 0;
  ConditionVerdict verdict;
};

inline IterateCondition4Result iterate_condition4(const ExponentMap& M, const LogGrid& grid,
                                                  double H, unsigned N) {
  if (!(H > 1.0) || !std::isfinite(H)) {
    throw std::invalid_argument("iterate_condition4: H must exceed 1");
  }
  if (N < 1) {
    throw std::invalid_argument("iterate_condition4: N must be >= 1");
  }
  const double HN = std::pow(H, static_cast<double>(N));
  IterateCondition4Result r;
  for (double t : grid.points) {
    const std::optional<double> a = M(t);
    const std::optional<double> b = M(HN * t);
    if (!a || !b) {
      ++r.skipped;
      continue;
    }
    r.constant = std::max(r.constant, *a + static_cast<double>(N) * std::log(t) - *b);
  }
  if (!std::isfinite(r.constant)) {
    r.verdict = ConditionVerdict::inconclusive_with("no evaluable grid points");
  } else if (r.constant <= static_cast<double>(N) * H + 1e-9) {
    r.verdict = ConditionVerdict::holds_with({{"C", r.constant},
                                              {"H", H},
                                              {"N", static_cast<double>(N)},
                                              {"budget", static_cast<double>(N) * H}});
  } else {
    r.verdict = ConditionVerdict::inconclusive_with(
        "measured constant " + detail::format_short(r.constant) + " exceeds the N*H budget");
  }
  r.verdict.grid = grid_ref(grid);
  if (r.skipped > 0) {
    r.verdict.note += " (skipped " + std::to_string(r.skipped) + " unevaluable points)";
  }
  return r;
}

inline IterateCondition4Result iterate_condition4(const WeightFunction& w, const LogGrid& grid,
                                                  double H, unsigned N) {
  return iterate_condition4(exponent_map(w), grid, H, N);
}

}  // namespace weightcalc
