#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pandemic/mask_game.hpp"
#include "pandemic/oracle.hpp"
#include "test_support.hpp"

using namespace pandemic;
using pandemic::test::example_costs;
using pandemic::test::kIn;
using pandemic::test::kNo;
using pandemic::test::kOut;
using enum HealthStatus;

namespace {
using Profiles = std::vector<StrategyProfile>;

MaskCosts with_use(double c_use, double c_infection = 1000.0) { return {1.0, 10.0, c_use, c_infection}; }
}  // namespace

TEST(MaskCosts, OrderingInvariantNamesCOut) {
  try {
    MaskCosts{10.0, 10.0, 100.0, 1000.0}.validate();
    FAIL();
  } catch (const InvalidParameter& e) {
    EXPECT_EQ(e.field(), "c_out");
    EXPECT_NE(std::string(e.what()).find("ordering"), std::string::npos);
  }
  EXPECT_THROW((MaskCosts{1, 10, 1000, 1000}.validate()), InvalidParameter);
  EXPECT_THROW((MaskCosts{0, 10, 100, 1000}.validate()), InvalidParameter);
  EXPECT_NO_THROW(example_costs().validate());
}

TEST(PairGame, BothSusceptibleCells) {
  const auto g = pair_game(susceptible, susceptible, example_costs());
  EXPECT_EQ(g.at(kNo, kNo), (CostPair{0, 0}));
  EXPECT_EQ(g.at(kOut, kIn), (CostPair{1, 10}));
  EXPECT_EQ(g.at(kIn, kNo), (CostPair{10, 0}));
}

TEST(PairGame, OneInfectedCells) {
  const auto g = pair_game(susceptible, infected, example_costs());
  EXPECT_EQ(g.at(kNo, kNo), (CostPair{1000, 1000}));
  EXPECT_EQ(g.at(kNo, kOut), (CostPair{0, 1001}));
  EXPECT_EQ(g.at(kIn, kNo), (CostPair{10, 1000}));
  EXPECT_EQ(g.at(kOut, kOut), (CostPair{1, 1001}));
  EXPECT_EQ(g.at(kOut, kIn), (CostPair{1001, 1010}));
  EXPECT_EQ(pure_nash_equilibria(g), (Profiles{{kIn, kNo}}));
  EXPECT_EQ(social_optima(g), (Profiles{{kNo, kOut}}));
}

TEST(PairGame, InfectedFirstIsTransposeOfInfectedSecond) {
  const auto c = example_costs();
  EXPECT_EQ(pair_game(infected, susceptible, c), pair_game(susceptible, infected, c).transposed());
  EXPECT_EQ(pure_nash_equilibria(pair_game(infected, susceptible, c)), (Profiles{{kNo, kIn}}));
}

TEST(PairGame, BothInfectedAddsInfectionCost) {
  const auto c = example_costs();
  const auto ss = pair_game(susceptible, susceptible, c);
  const auto ii = pair_game(infected, infected, c);
  EXPECT_EQ(ii, ss.shifted(Player::first, 1000).shifted(Player::second, 1000));
  EXPECT_EQ(pure_nash_equilibria(ii), (Profiles{{kNo, kNo}}));
}

TEST(PairGame, SymmetricWhenStatusesMatch) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto c = pandemic::test::random_costs(rng);
    for (auto s : {susceptible, infected}) {
      const auto g = pair_game(s, s, c);
      EXPECT_EQ(g, g.transposed());
    }
  }
}

TEST(PairGame, EquilibriaHoldForRandomOrderedCosts) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto c = pandemic::test::random_costs(rng);
    EXPECT_EQ(pure_nash_equilibria(pair_game(susceptible, susceptible, c)), (Profiles{{kNo, kNo}}));
    EXPECT_EQ(social_optima(pair_game(susceptible, susceptible, c)), (Profiles{{kNo, kNo}}));
    EXPECT_EQ(pure_nash_equilibria(pair_game(susceptible, infected, c)), (Profiles{{kIn, kNo}}));
    EXPECT_EQ(social_optima(pair_game(susceptible, infected, c)), (Profiles{{kNo, kOut}}));
  }
}

TEST(Bayesian, ExpectedCostExamples) {
  const BayesianSetting half{0.5, 0.5};
  EXPECT_NEAR(bayesian_expected_cost(half, 1.0, with_use(100)), 600.0, 1e-9);
  EXPECT_NEAR(bayesian_expected_cost({0.5, 0.0}, 0.0, with_use(100)), 750.0, 1e-9);
}

TEST(Bayesian, ThresholdExample) {
  const auto cond = bayesian_mask_condition({0.5, 0.5}, with_use(100));
  EXPECT_NEAR(cond.threshold, 0.125, 1e-15);
  EXPECT_NEAR(cond.threshold_cost(), 125.0, 1e-9);
  EXPECT_TRUE(cond.wear);
  EXPECT_EQ(bayesian_best_p2({0.5, 0.5}, with_use(100)), 1.0);
}

TEST(Bayesian, DecisionFlipsAtThresholdCost) {
  const BayesianSetting half{0.5, 0.5};
  EXPECT_TRUE(bayesian_mask_condition(half, with_use(124.999)).wear);
  EXPECT_FALSE(bayesian_mask_condition(half, with_use(125.0)).wear);
  EXPECT_EQ(bayesian_best_p2(half, with_use(125.0)), 0.0);
  EXPECT_FALSE(bayesian_mask_condition(half, with_use(125.001)).wear);
}

TEST(Bayesian, CertainOpponentMaskNeverWorthWearing) {
  EXPECT_EQ(bayesian_mask_condition({0.5, 1.0}, with_use(1e-6)).threshold, 0.0);
  EXPECT_FALSE(bayesian_mask_condition({0.5, 1.0}, with_use(1e-6)).wear);
  EXPECT_FALSE(bayesian_mask_condition({0.0, 0.0}, with_use(1e-6)).wear);
  EXPECT_FALSE(bayesian_mask_condition({1.0, 0.0}, with_use(1e-6)).wear);
}

TEST(Bayesian, RejectsOutOfRangeProbabilities) {
  EXPECT_THROW(bayesian_expected_cost({1.5, 0.5}, 0.5, example_costs()), InvalidParameter);
  EXPECT_THROW(bayesian_expected_cost({0.5, -0.1}, 0.5, example_costs()), InvalidParameter);
  EXPECT_THROW(bayesian_expected_cost({0.5, 0.5}, 2.0, example_costs()), InvalidParameter);
}

TEST(BayesianProperty, AffineInP2AndSlopeMatchesThreshold) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto c = pandemic::test::random_costs(rng);
    const BayesianSetting s{u(rng), u(rng)};
    auto f = [&](double p) { return bayesian_expected_cost(s, p, c); };
    EXPECT_TRUE(oracle::check_affine(f, 0.0, 0.5, 1.0, 1e-9 * c.c_infection));
    // slope = c_use - c_i rho (1 - rho) (1 - p1)
    const double slope = f(1.0) - f(0.0);
    EXPECT_NEAR(slope, c.c_use - c.c_infection * bayesian_mask_condition(s, c).threshold, 1e-9 * c.c_infection);
    const double best = bayesian_best_p2(s, c);
    EXPECT_LE(f(best), std::min(f(0.0), f(1.0)) + 1e-9 * c.c_infection);
  }
}

TEST(Efficiency, ExpectedCostExamples) {
  const EfficiencyParams eff{};
  EXPECT_NEAR(efficiency_expected_cost(1.0, eff, with_use(100)), 322.2222222222, 1e-7);
  EXPECT_NEAR(efficiency_expected_cost(0.5, eff, with_use(100)), 605.5555555556, 1e-7);
  EXPECT_NEAR(efficiency_expected_cost(0.0, eff, with_use(100)), 1000.0, 1e-12);
}

TEST(Efficiency, ClosedFormMatchesDefinition) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto c = pandemic::test::random_costs(rng);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double p = u(rng);
    const double closed =
        p * c.c_use + c.c_infection * ((1 - a) * (1 - b) * p * p - (2 - a - b) * p + 1);
    EXPECT_NEAR(efficiency_expected_cost(p, {a, b}, c), closed, 1e-9 * c.c_infection);
  }
}

TEST(Efficiency, DefaultConstants) {
  const auto c = with_use(100);
  const auto r = efficiency_analysis({}, c);
  EXPECT_NEAR(r.use_beats_no_threshold, 7.0 / 9.0, 1e-12);
  EXPECT_TRUE(r.use_beats_no);
  EXPECT_NEAR(r.second_derivative, 4.0 / 9.0 * 1000.0, 1e-9);
  ASSERT_TRUE(r.stationary_p.has_value());
  EXPECT_NEAR(*r.stationary_p, 9.0 / 4.0 * (1000.0 - 100.0) / 1000.0, 1e-12);
  // The vertex lies beyond p = 1, so full use is best.
  EXPECT_EQ(r.best_p, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Efficiency, SecondDerivativeByFiniteDifferences) {
  const auto c = with_use(100);
  const double h = 1e-3, p = 0.5;
  auto f = [&](double x) { return efficiency_expected_cost(x, {}, c); };
  const double fd = (f(p + h) - 2 * f(p) + f(p - h)) / (h * h);
  EXPECT_NEAR(fd / efficiency_analysis({}, c).second_derivative, 1.0, 1e-6);
}

TEST(Efficiency, PerfectMasksBestPMatchesGrid) {
  // a = b = 0: minimum at (2 C_i - C_use) / (2 C_i) = 0.95.
  const auto c = with_use(100);
  const auto r = efficiency_analysis({0.0, 0.0}, c);
  EXPECT_NEAR(r.best_p, 0.95, 1e-12);
  const auto grid = oracle::grid_argmin([&](double p) { return efficiency_expected_cost(p, {0.0, 0.0}, c); }, 0, 1,
                                        10001);
  EXPECT_NEAR(grid.x_star, 0.95, 1e-4);
}

TEST(Efficiency, UselessMaskIsDegenerate) {
  const auto r = efficiency_analysis({0.5, 1.0}, with_use(100));
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.stationary_p.has_value());
  EXPECT_EQ(r.second_derivative, 0.0);
  // U(p) = p c_use + c_i (1 - 0.5 p): slope 100 - 500 < 0.
  EXPECT_EQ(r.best_p, 1.0);
}

TEST(Efficiency, RejectsBadParameters) {
  EXPECT_THROW(efficiency_analysis({0.8, 0.2}, with_use(100)), InvalidParameter);
  EXPECT_THROW(efficiency_analysis({-0.1, 0.2}, with_use(100)), InvalidParameter);
  EXPECT_THROW(efficiency_expected_cost(1.1, {}, with_use(100)), InvalidParameter);
}

TEST(EfficiencyProperty, BestPWithinOneGridStepOfOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto c = pandemic::test::random_costs(rng);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const EfficiencyParams eff{a, b};
    auto f = [&](double p) { return efficiency_expected_cost(p, eff, c); };
    const auto r = efficiency_analysis(eff, c);
    const auto grid = oracle::grid_argmin(f, 0.0, 1.0, 10001);
    EXPECT_LE(f(r.best_p), grid.f_star + 1e-9 * c.c_infection);
    // Near-flat costs can move the argmin; the values must agree regardless.
    if (r.second_derivative > 1e-3 * c.c_infection) {
      EXPECT_NEAR(r.best_p, grid.x_star, 1e-4 + 1e-9);
    }
    EXPECT_EQ(r.use_beats_no, f(1.0) < f(0.0));
  }
}

TEST(Multiplayer, InfectedPlayNoSusceptiblePlayIn) {
  const auto eq = multiplayer_equilibrium({infected, susceptible, susceptible}, example_costs());
  EXPECT_EQ(eq.actions, (std::vector<MaskAction>{MaskAction::no, MaskAction::in, MaskAction::in}));
  EXPECT_FALSE(eq.no_infected_player);
  EXPECT_TRUE(multiplayer_equilibrium({susceptible, susceptible}, example_costs()).no_infected_player);
  EXPECT_THROW(multiplayer_equilibrium({}, example_costs()), std::invalid_argument);
}

TEST(Multiplayer, SocialOptimumCondition) {
  const auto c = example_costs();  // c_in / c_out = 10
  EXPECT_FALSE(multiplayer_so_condition(0.5, c).holds);
  EXPECT_TRUE(multiplayer_so_condition(0.95, c).holds);
  EXPECT_FALSE(multiplayer_so_condition(0.0, c).holds);
  const auto one = multiplayer_so_condition(1.0, c);
  EXPECT_TRUE(one.holds);
  EXPECT_TRUE(one.rhs_infinite);
  EXPECT_THROW(multiplayer_so_condition(1.5, c), InvalidParameter);
}

TEST(MultiplayerProperty, ConditionMatchesDirectRecomputation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto c = pandemic::test::random_costs(rng);
    const double rho = u(rng);
    EXPECT_EQ(multiplayer_so_condition(rho, c).holds, c.c_in / c.c_out < rho / (1.0 - rho));
    EXPECT_FALSE(multiplayer_so_condition(0.0, c).holds);
  }
}
