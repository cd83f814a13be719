// weightcalc: tri-state outcomes for growth/regularity conditions.
//
// Asymptotic conditions can only be certified or falsified on a tested
// range, so every verdict carries its evidence: a witness parameter set,
// a violating point, and the grid that was swept.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "weightcalc/numerics.hpp"

namespace weightcalc {

enum class VerdictStatus {
  HoldsWithWitness,
  FailsWithCounterexample,
  Inconclusive,
};

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::HoldsWithWitness: return "HoldsWithWitness";
    case VerdictStatus::FailsWithCounterexample: return "FailsWithCounterexample";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

/// A point where "lhs <= rhs" is violated beyond tolerance. The point is a
/// grid abscissa t for weight-side checks and an index p for sequence-side
/// checks.
struct Counterexample {
  double point = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Compact, reproducible description of the LogGrid a check swept.
struct GridRef {
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t n = 0;
};

inline GridRef grid_ref(const LogGrid& g) { return GridRef{g.t_min, g.t_max, g.n}; }

struct ConditionVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::map<std::string, double> witness;  // ordered keys keep reports deterministic
  std::optional<Counterexample> counterexample;
  std::optional<GridRef> grid;
  std::string note;

  bool holds() const { return status == VerdictStatus::HoldsWithWitness; }
  bool fails() const { return status == VerdictStatus::FailsWithCounterexample; }
  bool inconclusive() const { return status == VerdictStatus::Inconclusive; }

  static ConditionVerdict holds_with(std::map<std::string, double> witness,
                                     std::string note = {}) {
    ConditionVerdict v;
    v.status = VerdictStatus::HoldsWithWitness;
    v.witness = std::move(witness);
    v.note = std::move(note);
    return v;
  }

  static ConditionVerdict fails_with(Counterexample c, std::string note = {}) {
    ConditionVerdict v;
    v.status = VerdictStatus::FailsWithCounterexample;
    v.counterexample = c;
    v.note = std::move(note);
    return v;
  }

  static ConditionVerdict inconclusive_with(std::string note = {}) {
    ConditionVerdict v;
    v.note = std::move(note);
    return v;
  }
};

namespace detail {

/// Trend of the violation margin over the trailing quarter of a sweep.
/// "Increasing" means the margin rises essentially monotonically with a
/// nonnegligible net gain -- the signature of a genuine asymptotic failure
/// rather than grid-edge noise.
struct TailTrend {
  bool increasing = false;
  double net = 0.0;
};

inline TailTrend tail_trend(std::span<const double> v) {
  TailTrend t;
  if (v.size() < 4) return t;
  const std::size_t start = v.size() - std::max<std::size_t>(v.size() / 4, 2);
  bool monotone = true;
  for (std::size_t i = start + 1; i < v.size(); ++i) {
    const double scale = std::max({1.0, std::abs(v[i]), std::abs(v[i - 1])});
    if (v[i] < v[i - 1] - 1e-9 * scale) {
      monotone = false;
      break;
    }
  }
  t.net = v.back() - v[start];
  t.increasing = monotone && t.net > 1e-7;
  return t;
}

}  // namespace detail

}  // namespace weightcalc
