#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "weightcalc/bridge.hpp"

using namespace weightcalc;

TEST_CASE("sequence_from_weight: omega0 truncates after p = 1") {
  const WeightSequence seq = sequence_from_weight(WeightFunction::omega0(), 64);
  REQUIRE(seq.truncated());
  REQUIRE(seq.order() == 1);
  REQUIRE(seq.log_value(0) == 0.0);
  REQUIRE(seq.log_value(1) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("sequence_from_weight: square-root weight matches the closed form") {
  const WeightSequence seq = sequence_from_weight(WeightFunction::gevrey(2.0), 256);
  REQUIRE_FALSE(seq.truncated());
  REQUIRE(seq.order() == 256);
  REQUIRE(seq.log_value(0) == 0.0);
  for (std::size_t p : {1u, 4u, 64u, 256u}) {
    const double pd = static_cast<double>(p);
    REQUIRE(seq.log_value(p) ==
            Catch::Approx(2.0 * pd * std::log(2.0 * pd) - 2.0 * pd + 1.0).margin(1e-7));
  }
  REQUIRE(check_M1(seq).holds());
}

TEST_CASE("product form basics") {
  const WeightSequence w0 = sequence_from_weight_product_form(WeightFunction::omega0(), 16);
  REQUIRE(w0.truncated());
  REQUIRE(w0.order() == 1);
  REQUIRE(w0.log_value(1) == Catch::Approx(0.0).margin(1e-9));

  const WeightSequence p13 =
      sequence_from_weight_product_form(WeightFunction::power(1.0 / 3.0), 16);
  REQUIRE(p13.log_value(0) == 0.0);
}

TEST_CASE("conjugate and product routes agree per entry") {
  const std::vector<WeightFunction> families = {
      WeightFunction::omega0(),          WeightFunction::log_power(2.0),
      WeightFunction::power(1.0 / 3.0),  WeightFunction::power(0.5),
      WeightFunction::power(2.0 / 3.0),  WeightFunction::gevrey(1.5),
      WeightFunction::gevrey(2.0),       WeightFunction::gevrey(3.0),
  };
  for (const WeightFunction& w : families) {
    const WeightSequence a = sequence_from_weight(w, 64);
    const WeightSequence b = sequence_from_weight_product_form(w, 64);
    REQUIRE(a.truncated() == b.truncated());
    const std::size_t n = std::min(a.order(), b.order());
    REQUIRE(a.order() <= n + 1);
    REQUIRE(b.order() <= n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
      REQUIRE(a.log_value(p) == Catch::Approx(b.log_value(p)).margin(1e-6));
    }
  }
}

TEST_CASE("power(1/2) and gevrey(2) produce the same sequence") {
  const WeightSequence a = sequence_from_weight(WeightFunction::power(0.5), 64);
  const WeightSequence b = sequence_from_weight(WeightFunction::gevrey(2.0), 64);
  for (std::size_t p = 0; p <= 64; ++p) {
    REQUIRE(a.log_value(p) == Catch::Approx(b.log_value(p)).margin(1e-12));
  }
}

TEST_CASE("equivalence sandwich") {
  const LogGrid grid = make_log_grid(1.0, 5e3, 512);

  for (double s : {1.5, 2.0, 3.0}) {
    const WeightFunction w = WeightFunction::gevrey(s);
    const WeightSequence seq = sequence_from_weight(w, 256);
    const SandwichResult r = equivalence_sandwich(w, seq, grid);
    REQUIRE(r.verdict.holds());
    REQUIRE(r.skipped == 0);
    REQUIRE(std::isfinite(r.A));
    // omega <= 2M + log M_1 is the theoretical cap for the constant
    REQUIRE(r.A <= seq.normalized(1) + 1e-6);
    REQUIRE(r.A >= 0.0);  // equality at t = 1
  }

  const WeightSequence trunc = sequence_from_weight(WeightFunction::omega0(), 16);
  REQUIRE_THROWS_AS(equivalence_sandwich(WeightFunction::omega0(), trunc, grid),
                    std::domain_error);
}

TEST_CASE("BMM transfer across the bridge") {
  const LogGrid bmm_grid = make_log_grid(1.0, 1e8, 512);
  const LogGrid transfer_grid = make_log_grid(1.0, 256.0, 128);

  const WeightFunction g2 = WeightFunction::gevrey(2.0);
  const WeightSequence seq = sequence_from_weight(g2, 256);
  const ConditionVerdict bmm = check_BMM(g2, bmm_grid);
  REQUIRE(bmm.holds());
  const SandwichResult sand = equivalence_sandwich(g2, seq, transfer_grid);
  REQUIRE(sand.verdict.holds());

  const ConditionVerdict transfer =
      bmm_transfer_check(seq, transfer_grid, bmm.witness.at("H"), sand.A);
  REQUIRE(transfer.holds());
  REQUIRE(transfer.witness.at("H_squared") == 16.0);

  // orchestrated variant agrees
  REQUIRE(run_bmm_transfer(g2, seq, bmm_grid, transfer_grid).holds());

  // log^2 weight: (BMM) precondition fails, transfer refuses
  const WeightFunction l2 = WeightFunction::log_power(2.0);
  const WeightSequence l2seq = sequence_from_weight(l2, 64);
  const ConditionVerdict refused = run_bmm_transfer(l2, l2seq, bmm_grid, transfer_grid);
  REQUIRE(refused.inconclusive());
  REQUIRE(refused.note.find("refused") != std::string::npos);
}

TEST_CASE("condition (4) statuses agree between a weight and its associated function") {
  // shared grid kept inside the truncation-reliable range of the sequences
  const LogGrid shared = make_log_grid(1.0, 1e3, 256);
  for (const WeightFunction& w :
       {WeightFunction::gevrey(1.5), WeightFunction::gevrey(2.0), WeightFunction::gevrey(3.0),
        WeightFunction::power(0.5)}) {
    const WeightSequence seq = sequence_from_weight(w, 256);
    REQUIRE(equivalence_sandwich(w, seq, shared).verdict.holds());
    const ConditionVerdict on_weight = check_condition4(w, shared);
    const ConditionVerdict on_assoc = check_condition4(seq, shared);
    REQUIRE(on_weight.status == on_assoc.status);
  }
}

TEST_CASE("seminorm equivalence with matched parameter sets") {
  const WeightFunction g2 = WeightFunction::gevrey(2.0);
  const WeightSequence seq = sequence_from_weight(g2, 128);

  static constexpr double lambdas[] = {0.5, 1.0, 2.0};
  static constexpr int js[] = {1, 2, 4};
  const ConditionVerdict v = seminorm_equivalence_check(g2, seq, lambdas, js);
  REQUIRE(v.holds());
  // identity witness at j = 1: lambda = 1, c = 1 exactly
  REQUIRE(v.witness.at("j1.lambda") == 1.0);
  REQUIRE(v.witness.at("j1.logc") == Catch::Approx(0.0).margin(1e-12));
  // j = 2 requires lambda > 1
  REQUIRE(v.witness.at("j2.lambda") == 2.0);
  REQUIRE(std::isfinite(v.witness.at("j2.logc")));

  // the full default sets exhaust the reverse search at lambda = 4
  const ConditionVerdict full = seminorm_equivalence_check(g2, seq, {}, {});
  REQUIRE(full.inconclusive());

  const WeightSequence trunc = sequence_from_weight(WeightFunction::omega0(), 16);
  REQUIRE_THROWS_AS(seminorm_equivalence_check(WeightFunction::omega0(), trunc, {}, {}),
                    std::domain_error);
}

TEST_CASE("gevrey(3) certifies with its matched parameter sets") {
  const WeightFunction g3 = WeightFunction::gevrey(3.0);
  const WeightSequence seq = sequence_from_weight(g3, 128);
  static constexpr double lambdas[] = {0.5, 1.0, 2.0};
  static constexpr int js[] = {1, 2, 4, 8};
  REQUIRE(seminorm_equivalence_check(g3, seq, lambdas, js).holds());
}
