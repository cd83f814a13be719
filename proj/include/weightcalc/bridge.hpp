// weightcalc: the two-way bridge between weight functions and weight
// sequences: M_p = e^{phi*(p)}, the equivalence sandwich between omega and
// the associated function of (M_p), transfer of (BMM) across the bridge,
// and the seminorm-equivalence witnesses.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "weightcalc/conjugate.hpp"
#include "weightcalc/numerics.hpp"
#include "weightcalc/sequences.hpp"
#include "weightcalc/verdict.hpp"
#include "weightcalc/weights.hpp"

namespace weightcalc {

/// Sequence l_p = phi*(p) for p = 0..order. Truncated (and flagged) at the
/// last slope with a finite conjugate; for omega0 that is p = 1.
inline WeightSequence sequence_from_weight(const WeightFunction& w, std::size_t order,
                                           double x_max = 25.0,
                                           std::size_t scan_points = 4096) {
  std::vector<double> lv;
  lv.reserve(order + 1);
  bool truncated = false;
  for (std::size_t p = 0; p <= order; ++p) {
    const ConjugateValue cv = conjugate_at(w, static_cast<double>(p), x_max, scan_points);
    if (cv.infinite) {
      truncated = true;
      break;
    }
    lv.push_back(cv.value);
  }
  if (lv.empty()) {
    throw std::domain_error("sequence_from_weight: conjugate diverges already at p = 0");
  }
  lv[0] = 0.0;
  return WeightSequence(std::move(lv), w.label(), truncated);
}

/// The same sequence computed directly in the s domain:
/// l_p = sup_{s >= 1} (p log s - omega(s)). Cross-validation route for
/// sequence_from_weight; the two must agree to ~1e-6 per entry.
inline WeightSequence sequence_from_weight_product_form(const WeightFunction& w,
                                                        std::size_t order,
                                                        double s_max = 7.2e10,
                                                        std::size_t scan_points = 4096) {
  const LogGrid grid = make_log_grid(1.0, s_max, scan_points);
  std::vector<double> lv;
  lv.reserve(order + 1);
  bool truncated = false;
  for (std::size_t p = 0; p <= order; ++p) {
    const double pd = static_cast<double>(p);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double s = grid.points[i];
      const double g = pd * std::log(s) - w(s);
      if (g > best) {
        best = g;
        arg = i;
      }
    }
    if (arg == grid.n - 1) {
      const double sa = grid.points[grid.n - 2];
      const double sb = grid.points[grid.n - 1];
      const double chord = (w(sb) - w(sa)) / (std::log(sb) - std::log(sa));
      if (pd > chord + 1e-9) {
        truncated = true;
        break;
      }
    }
    const double lo = grid.points[arg == 0 ? 0 : arg - 1];
    const double hi = grid.points[std::min(arg + 1, grid.n - 1)];
    const double refined = detail::ternary_max(
        [&](double s) { return pd * std::log(s) - w(s); }, lo, hi);
    lv.push_back(std::max({best, refined, 0.0}));
  }
  if (lv.empty()) {
    throw std::domain_error("sequence_from_weight_product_form: diverges at p = 0");
  }
  lv[0] = 0.0;
  return WeightSequence(std::move(lv), w.label(), truncated);
}

/// Pointwise verification of M(t) <= omega(t) <= M(t) + log t on the grid,
/// plus the minimal empirical A with omega(t) <= 2 M(t) + A. Grid points
/// whose associated-function evaluation hits the truncation order are
/// skipped and counted.
struct SandwichResult {
  double A = -std::numeric_limits<double>::infinity();
  std::size_t skipped = 0;
  ConditionVerdict verdict;
};

inline SandwichResult equivalence_sandwich(const WeightFunction& w, const WeightSequence& seq,
                                           const LogGrid& grid) {
  if (seq.truncated()) {
    throw std::domain_error("equivalence_sandwich: truncated sequence rejected");
  }
  static constexpr double kTol = 1e-6;
  SandwichResult r;
  std::size_t checked = 0;
  for (double t : grid.points) {
    const AssociatedValue mv = associated_function(seq, t);
    if (mv.at_truncation) {
      ++r.skipped;
      continue;
    }
    ++checked;
    const double M = mv.value;
    const double omega = w(t);
    if (M > omega + kTol) {
      r.verdict = ConditionVerdict::fails_with(Counterexample{t, M, omega},
                                               "lower sandwich M(t) <= omega(t) violated");
      r.verdict.grid = grid_ref(grid);
      return r;
    }
    if (omega > M + std::log(t) + kTol) {
      r.verdict = ConditionVerdict::fails_with(
          Counterexample{t, omega, M + std::log(t)},
          "upper sandwich omega(t) <= M(t) + log t violated");
      r.verdict.grid = grid_ref(grid);
      return r;
    }
    r.A = std::max(r.A, omega - 2.0 * M);
  }
  if (checked == 0) {
    r.verdict = ConditionVerdict::inconclusive_with("no evaluable grid points");
    r.verdict.grid = grid_ref(grid);
    return r;
  }
  r.verdict = ConditionVerdict::holds_with(
      {{"A", r.A}, {"checked", static_cast<double>(checked)}},
      r.skipped > 0 ? "skipped " + std::to_string(r.skipped) + " truncated points" : "");
  r.verdict.grid = grid_ref(grid);
  return r;
}

/// Verifies that M inherits (BMM): 2 M(t) <= M(H^2 t) + A/2 + 3H/2 on the
/// grid, where H is the (BMM) witness of the weight and A the sandwich
/// constant.
inline ConditionVerdict bmm_transfer_check(const WeightSequence& seq, const LogGrid& grid,
                                           double H, double A) {
  if (!(H > 1.0) || !std::isfinite(H) || !std::isfinite(A)) {
    throw std::invalid_argument("bmm_transfer_check: need H > 1 and finite A");
  }
  static constexpr double kTol = 1e-6;
  const double H2 = H * H;
  const double constant = 0.5 * A + 1.5 * H;
  std::size_t skipped = 0;
  double max_margin = -std::numeric_limits<double>::infinity();
  for (double t : grid.points) {
    const AssociatedValue a = associated_function(seq, t);
    const AssociatedValue b = associated_function(seq, H2 * t);
    if (a.at_truncation || b.at_truncation) {
      ++skipped;
      continue;
    }
    const double lhs = 2.0 * a.value;
    const double rhs = b.value + constant;
    if (lhs > rhs + kTol) {
      ConditionVerdict v = ConditionVerdict::fails_with(Counterexample{t, lhs, rhs},
                                                        "transferred (BMM) bound violated");
      v.grid = grid_ref(grid);
      return v;
    }
    max_margin = std::max(max_margin, lhs - rhs);
  }
  if (!std::isfinite(max_margin)) {
    ConditionVerdict v = ConditionVerdict::inconclusive_with("no evaluable grid points");
    v.grid = grid_ref(grid);
    return v;
  }
  ConditionVerdict v = ConditionVerdict::holds_with(
      {{"H", H}, {"H_squared", H2}, {"constant", constant}, {"max_margin", max_margin}},
      skipped > 0 ? "skipped " + std::to_string(skipped) + " truncated points" : "");
  v.grid = grid_ref(grid);
  return v;
}

/// Convenience chain: (BMM) witness, sandwich constant, then the transfer
/// bound. Refuses (Inconclusive with note) when (BMM) does not certify.
inline ConditionVerdict run_bmm_transfer(const WeightFunction& w, const WeightSequence& seq,
                                         const LogGrid& bmm_grid,
                                         const LogGrid& transfer_grid) {
  const ConditionVerdict bmm = check_BMM(w, bmm_grid);
  if (!bmm.holds()) {
    return ConditionVerdict::inconclusive_with(
        "refused: (BMM) precondition not certified for " + w.label());
  }
  const SandwichResult sandwich = equivalence_sandwich(w, seq, transfer_grid);
  if (!sandwich.verdict.holds()) {
    return ConditionVerdict::inconclusive_with("refused: sandwich precondition failed");
  }
  return bmm_transfer_check(seq, transfer_grid, bmm.witness.at("H"), sandwich.A);
}

/// Seminorm-equivalence witnesses: for each j a pair (lambda, c) with
///   e^{lambda phi*(p/lambda)} <= c j^{-p} M_p   for all p <= P,
/// and for each lambda a pair (j, C) with
///   j^{-p} M_p <= C e^{lambda phi*(p/lambda)}  for all p <= P.
/// Each one-sided maximum must be attained away from the truncation
/// boundary; a search that exhausts its grid yields Inconclusive.
inline ConditionVerdict seminorm_equivalence_check(
    const WeightFunction& w, const WeightSequence& seq,
    std::span<const double> lambda_list, std::span<const int> j_list,
    double x_max = 25.0, std::size_t scan_points = 4096) {
  if (seq.truncated()) {
    throw std::domain_error("seminorm_equivalence_check: truncated sequence rejected");
  }
  static constexpr double kDefaultLambda[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  static constexpr int kDefaultJ[] = {1, 2, 3, 4, 5, 6, 7, 8};
  if (lambda_list.empty()) lambda_list = kDefaultLambda;
  if (j_list.empty()) j_list = kDefaultJ;

  const std::size_t P = seq.order();
  const std::size_t interior_cap = (P * 7) / 8;

  // phi*(p/lambda), precomputed per lambda; +inf marks divergent slopes.
  std::map<double, std::vector<double>> conj;
  for (double lam : lambda_list) {
    std::vector<double> v(P + 1);
    for (std::size_t p = 0; p <= P; ++p) {
      const ConjugateValue cv =
          conjugate_at(w, static_cast<double>(p) / lam, x_max, scan_points);
      v[p] = cv.infinite ? std::numeric_limits<double>::infinity() : cv.value;
    }
    conj[lam] = std::move(v);
  }

  const auto interior_max = [&](const std::function<double(std::size_t)>& f,
                                double& out_max) {
    double max_full = -std::numeric_limits<double>::infinity();
    double max_int = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= P; ++p) {
      const double e = f(p);
      if (e > max_full) max_full = e;
      if (p <= interior_cap && e > max_int) max_int = e;
    }
    out_max = max_full;
    return std::isfinite(max_full) && max_full <= max_int + 1e-6;
  };

  std::map<std::string, double> witness;

  for (int j : j_list) {
    const double log_j = std::log(static_cast<double>(j));
    bool found = false;
    for (double lam : lambda_list) {
      const std::vector<double>& cj = conj[lam];
      double log_c = 0.0;
      const bool ok = interior_max(
          [&](std::size_t p) {
            return lam * cj[p] + static_cast<double>(p) * log_j - seq.normalized(p);
          },
          log_c);
      if (ok) {
        const std::string key = "j" + std::to_string(j);
        witness[key + ".lambda"] = lam;
        witness[key + ".logc"] = log_c;
        found = true;
        break;
      }
    }
    if (!found) {
      return ConditionVerdict::inconclusive_with(
          "no lambda on the grid certifies the forward bound for j = " + std::to_string(j));
    }
  }

  for (double lam : lambda_list) {
    const std::vector<double>& cj = conj[lam];
    bool found = false;
    for (int j : j_list) {
      const double log_j = std::log(static_cast<double>(j));
      double log_C = 0.0;
      const bool ok = interior_max(
          [&](std::size_t p) {
            const double conj_term = lam * cj[p];
            if (!std::isfinite(conj_term)) {
              return -std::numeric_limits<double>::infinity();
            }
            return seq.normalized(p) - static_cast<double>(p) * log_j - conj_term;
          },
          log_C);
      if (ok) {
        const std::string key = "lambda" + detail::format_short(lam);
        witness[key + ".j"] = static_cast<double>(j);
        witness[key + ".logC"] = log_C;
        found = true;
        break;
      }
    }
    if (!found) {
      return ConditionVerdict::inconclusive_with(
          "no j on the grid certifies the reverse bound for lambda = " +
          detail::format_short(lam));
    }
  }

  return ConditionVerdict::holds_with(std::move(witness));
}

}  // namespace weightcalc
