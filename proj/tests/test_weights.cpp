#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "weightcalc/weights.hpp"

using namespace weightcalc;

namespace {
const double kE = std::exp(1.0);
}

TEST_CASE("family evaluation") {
  const WeightFunction w0 = WeightFunction::omega0();
  REQUIRE(w0(std::exp(2.0)) == Catch::Approx(2.0));
  REQUIRE(w0(1.0) == 0.0);
  REQUIRE(w0(0.25) == 0.0);

  const WeightFunction l2 = WeightFunction::log_power(2.0);
  REQUIRE(l2(std::exp(3.0)) == Catch::Approx(9.0));
  REQUIRE(l2.label() == "log^2");

  const WeightFunction p12 = WeightFunction::power(0.5);
  REQUIRE(p12(0.5) == 0.0);
  REQUIRE(p12(4.0) == Catch::Approx(1.0));  // sqrt(4) - 1

  const WeightFunction g2 = WeightFunction::gevrey(2.0);
  REQUIRE(g2(4.0) == Catch::Approx(p12(4.0)));  // same family
  REQUIRE(g2(1e8) == Catch::Approx(1e4 - 1.0));

  REQUIRE_THROWS_AS(w0(-1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(WeightFunction::power(1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(WeightFunction::power(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(WeightFunction::log_power(0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(WeightFunction::gevrey(1.0), std::invalid_argument);

  REQUIRE(WeightFunction::power(1.0).is_weight() == false);
  REQUIRE(p12.is_weight());
}

TEST_CASE("phi tables: validation and interpolation") {
  // phi(x) = x^2 sampled on [0, 4]
  std::vector<double> phi(101);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double x = 4.0 * static_cast<double>(i) / 100.0;
    phi[i] = x * x;
  }
  const WeightFunction table = WeightFunction::from_phi_samples(phi, 4.0);
  REQUIRE(table.phi(2.0) == Catch::Approx(4.0).margin(2e-3));
  REQUIRE(table(std::exp(1.0)) == Catch::Approx(1.0).margin(2e-3));
  REQUIRE(table(0.5) == 0.0);
  // beyond the sampled range: linear continuation
  REQUIRE(table.phi(5.0) == Catch::Approx(table.phi(4.0) + (8.0 - 0.04) * 1.0).epsilon(1e-2));

  std::vector<double> bad = {0.0, 2.0, 1.0, 6.0};
  REQUIRE_THROWS_AS(WeightFunction::from_phi_samples(bad, 3.0), std::invalid_argument);
  std::vector<double> drop = {0.0, 1.0, 0.5, 2.0};
  REQUIRE_THROWS_AS(WeightFunction::from_phi_samples(drop, 3.0), std::invalid_argument);
  std::vector<double> off = {1.0, 2.0, 3.0};
  REQUIRE_THROWS_AS(WeightFunction::from_phi_samples(off, 2.0), std::invalid_argument);
}

TEST_CASE("axioms hold for the built-in families") {
  const LogGrid grid = make_log_grid(1.0, 1e8, 512);

  const WeightFunction w0 = WeightFunction::omega0();
  const ConditionVerdict a0 = check_alpha(w0, grid);
  REQUIRE(a0.holds());
  REQUIRE(a0.witness.at("L") == 1.0);  // log 2t <= log t + 1
  REQUIRE(check_beta(w0, grid).holds());
  REQUIRE(check_gamma(w0, grid).holds());
  REQUIRE(check_delta(w0).holds());

  const WeightFunction l2 = WeightFunction::log_power(2.0);
  const ConditionVerdict a2 = check_alpha(l2, grid);
  REQUIRE(a2.holds());
  REQUIRE(a2.witness.at("L") == 2.0);  // (log t + log 2)^2 <= 2(log^2 t + 1)
  REQUIRE(check_beta(l2, grid).holds());
  REQUIRE(check_gamma(l2, grid).holds());
  REQUIRE(check_delta(l2).holds());

  for (double s : {1.5, 2.0, 3.0}) {
    const WeightFunction g = WeightFunction::gevrey(s);
    REQUIRE(check_alpha(g, grid).holds());
    REQUIRE(check_gamma(g, grid).holds());
    REQUIRE(check_delta(g).holds());
  }
  REQUIRE(check_beta(WeightFunction::gevrey(2.0), grid).holds());
  REQUIRE(check_beta(WeightFunction::gevrey(3.0), grid).holds());

  // t^{-1/3} only crosses the o(t) threshold around t = 1e9: on the default
  // range the verdict is an honest Inconclusive, certifying on a longer one
  const WeightFunction g15 = WeightFunction::gevrey(1.5);
  REQUIRE(check_beta(g15, grid).inconclusive());
  REQUIRE(check_beta(g15, make_log_grid(1.0, 1e10, 512)).holds());
}

TEST_CASE("beta fails for a linear weight") {
  const LogGrid grid = make_log_grid(1.0, 1e8, 512);
  const ConditionVerdict v = check_beta(WeightFunction::power(1.0), grid);
  REQUIRE(v.fails());
  REQUIRE(v.counterexample->point == grid.t_max);
}

TEST_CASE("degenerate zero weight: beta holds, gamma fails") {
  const LogGrid grid = make_log_grid(1.0, 1e8, 512);
  const WeightFunction zero =
      WeightFunction::from_phi_samples(std::vector<double>(64, 0.0), 25.0);
  REQUIRE(check_beta(zero, grid).holds());

  const ConditionVerdict gamma = check_gamma(zero, grid);
  REQUIRE(gamma.fails());
  REQUIRE(gamma.counterexample.has_value());
}

TEST_CASE("BMM verdicts") {
  const LogGrid grid = make_log_grid(1.0, 1e8, 512);

  const ConditionVerdict g2 = check_BMM(WeightFunction::gevrey(2.0), grid);
  REQUIRE(g2.holds());
  REQUIRE(g2.witness.at("H") == 4.0);  // 2 sqrt(t) <= sqrt(4t) + 4

  const ConditionVerdict l2 = check_BMM(WeightFunction::log_power(2.0), grid);
  REQUIRE(l2.fails());
  REQUIRE(l2.counterexample.has_value());

  const ConditionVerdict w0 = check_BMM(WeightFunction::omega0(), grid);
  REQUIRE(w0.fails());

  // BMM witnesses for the powers used downstream
  REQUIRE(check_BMM(WeightFunction::power(1.0 / 3.0), grid).witness.at("H") == 8.0);
  REQUIRE(check_BMM(WeightFunction::power(2.0 / 3.0), grid).witness.at("H") == 4.0);
}

TEST_CASE("condition (4) verdicts") {
  const LogGrid grid = make_log_grid(1.0, 1e8, 512);

  const ConditionVerdict l2 = check_condition4(WeightFunction::log_power(2.0), grid);
  REQUIRE(l2.holds());
  REQUIRE(l2.witness.at("H") <= kE * kE);

  const ConditionVerdict w0 = check_condition4(WeightFunction::omega0(), grid);
  REQUIRE(w0.fails());

  const ConditionVerdict g2 = check_condition4(WeightFunction::gevrey(2.0), grid);
  REQUIRE(g2.holds());

  // any weight growing at least linearly satisfies (4) immediately
  const ConditionVerdict lin = check_condition4(WeightFunction::power(1.0), grid);
  REQUIRE(lin.holds());
  REQUIRE(lin.witness.at("H") == 1.5);
}

TEST_CASE("iterate_condition4") {
  const LogGrid grid = make_log_grid(1.0, 1e8, 512);
  const WeightFunction l2 = WeightFunction::log_power(2.0);

  // N = 1 is the base condition: C <= H
  const IterateCondition4Result base = iterate_condition4(l2, grid, 2.0, 1);
  REQUIRE(base.verdict.holds());
  REQUIRE(base.constant <= 2.0);

  // the two-step chain stays within 2H - log H
  const IterateCondition4Result two = iterate_condition4(l2, grid, kE, 2);
  REQUIRE(two.verdict.holds());
  REQUIRE(two.constant <= 2.0 * kE - 1.0);

  const IterateCondition4Result three = iterate_condition4(WeightFunction::gevrey(2.0), grid, 4.0, 3);
  REQUIRE(three.verdict.holds());
  REQUIRE(std::isfinite(three.constant));

  REQUIRE_THROWS_AS(iterate_condition4(l2, grid, 1.0, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(iterate_condition4(l2, grid, 2.0, 0), std::invalid_argument);
}

TEST_CASE("verdicts are invariant under table resampling") {
  // normalization idempotence: a table rebuilt from the same weight carries
  // the same statuses and witnesses
  const LogGrid grid = make_log_grid(1.0, 1e8, 256);
  const WeightFunction g2 = WeightFunction::gevrey(2.0);
  const WeightFunction tab = sample_phi_table(g2, 25.0, 4096);

  const ConditionVerdict bmm_a = check_BMM(g2, grid);
  const ConditionVerdict bmm_b = check_BMM(tab, grid);
  REQUIRE(bmm_a.status == bmm_b.status);
  REQUIRE(bmm_a.witness.at("H") == bmm_b.witness.at("H"));

  const ConditionVerdict c4_a = check_condition4(g2, grid);
  const ConditionVerdict c4_b = check_condition4(tab, grid);
  REQUIRE(c4_a.status == c4_b.status);
  REQUIRE(c4_a.witness.at("H") == c4_b.witness.at("H"));
}
