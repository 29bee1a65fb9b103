#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pandemic/game_core.hpp"
#include "pandemic/oracle.hpp"
#include "test_support.hpp"

using namespace pandemic;
using pandemic::test::kIn;
using pandemic::test::kNo;
using pandemic::test::kOut;

namespace {

ActionSet masks() { return ActionSet({"no", "out", "in"}); }

// Both susceptible, written out cell by cell.
CostTable both_susceptible(double co, double ci) {
  return CostTable(masks(), masks(),
                   {{0, 0}, {0, co}, {0, ci},  //
                    {co, 0}, {co, co}, {co, ci},
                    {ci, 0}, {ci, co}, {ci, ci}});
}

// Player 1 susceptible, player 2 infected.
CostTable one_infected(double co, double cin, double cinf) {
  return CostTable(masks(), masks(),
                   {{cinf, cinf}, {0, co + cinf}, {cinf, cin + cinf},
                    {co + cinf, cinf}, {co, co + cinf}, {co + cinf, cin + cinf},
                    {cin, cinf}, {cin, co + cinf}, {cin, cin + cinf}});
}

CostTable constant_game(double v) {
  return CostTable(ActionSet({"a", "b"}), ActionSet({"x", "y", "z"}), std::vector<CostPair>(6, {v, v}));
}

CostTable single(double c1, double c2) { return CostTable(ActionSet({"only"}), ActionSet({"only"}), {{c1, c2}}); }

using Profiles = std::vector<StrategyProfile>;
using Indices = std::vector<std::size_t>;

}  // namespace

TEST(ActionSet, RejectsEmptyAndDuplicateLabels) {
  EXPECT_THROW(ActionSet({}), std::invalid_argument);
  EXPECT_THROW(ActionSet({"no", "no"}), std::invalid_argument);
  ActionSet a({"no", "out"});
  EXPECT_EQ(a.index_of("out"), 1u);
  EXPECT_FALSE(a.index_of("in").has_value());
}

TEST(CostTable, ValidatesShapeAndEntries) {
  EXPECT_THROW(CostTable(masks(), masks(), std::vector<CostPair>(8)), std::invalid_argument);
  EXPECT_THROW(CostTable(ActionSet({"a"}), ActionSet({"b"}), {{-1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(CostTable(ActionSet({"a"}), ActionSet({"b"}), {{std::nan(""), 0.0}}), std::invalid_argument);
  EXPECT_THROW(CostTable(ActionSet({"a"}), ActionSet({"b"}), {{INFINITY, 0.0}}), std::invalid_argument);
}

TEST(CostTable, TransposeSwapsRolesAndCoordinates) {
  const auto g = one_infected(1, 10, 1000);
  const auto t = g.transposed();
  for (auto s : g.profiles()) {
    EXPECT_EQ(t.at(s.action_p2, s.action_p1).p1, g.at(s).p2);
    EXPECT_EQ(t.at(s.action_p2, s.action_p1).p2, g.at(s).p1);
  }
  EXPECT_EQ(t.transposed(), g);
}

TEST(PureNash, BothSusceptibleIsNoNo) {
  EXPECT_EQ(pure_nash_equilibria(both_susceptible(1, 10)), (Profiles{{kNo, kNo}}));
}

TEST(PureNash, OneInfectedIsInNo) {
  EXPECT_EQ(pure_nash_equilibria(one_infected(1, 10, 1000)), (Profiles{{kIn, kNo}}));
}

TEST(PureNash, SingleProfileGameIsItsOwnEquilibrium) {
  EXPECT_EQ(pure_nash_equilibria(single(3, 7)), (Profiles{{0, 0}}));
  EXPECT_TRUE(is_pure_nash(single(0, 1e6), {0, 0}));
}

TEST(PureNash, ToleranceAbsorbsSmallGains) {
  // Player 1 gains 0.5 by deviating from row 0; invisible at tol = 1.
  CostTable g(ActionSet({"a", "b"}), ActionSet({"x"}), {{1.5, 0}, {1.0, 0}});
  EXPECT_EQ(pure_nash_equilibria(g), (Profiles{{1, 0}}));
  EXPECT_EQ(pure_nash_equilibria(g, 1.0), (Profiles{{0, 0}, {1, 0}}));
  EXPECT_THROW(pure_nash_equilibria(g, -1.0), std::invalid_argument);
}

TEST(SocialOptima, OneInfectedIsNoOut) {
  EXPECT_EQ(social_optima(one_infected(1, 10, 1000)), (Profiles{{kNo, kOut}}));
}

TEST(SocialOptima, BothSusceptibleIsNoNo) {
  EXPECT_EQ(social_optima(both_susceptible(1, 10)), (Profiles{{kNo, kNo}}));
}

TEST(SocialOptima, FullTieReturnsEveryProfile) {
  const auto g = constant_game(4);
  EXPECT_EQ(social_optima(g), g.profiles());
}

TEST(Dominance, InfectedPlayerWeaklyPrefersNoMask) {
  EXPECT_EQ(dominant_actions(one_infected(1, 10, 1000), Player::second, Dominance::weak), (Indices{kNo}));
}

TEST(Dominance, StrictNoMaskWhenBothSusceptible) {
  const auto g = both_susceptible(1, 10);
  EXPECT_EQ(dominant_actions(g, Player::first, Dominance::strict), (Indices{kNo}));
  EXPECT_EQ(dominant_actions(g, Player::second, Dominance::strict), (Indices{kNo}));
}

TEST(Dominance, ConstantGameHasNoStrictButAllWeak) {
  const auto g = constant_game(2);
  EXPECT_TRUE(dominant_actions(g, Player::first, Dominance::strict).empty());
  EXPECT_EQ(dominant_actions(g, Player::first, Dominance::weak), (Indices{0, 1}));
  EXPECT_EQ(dominant_actions(g, Player::second, Dominance::weak), (Indices{0, 1, 2}));
}

TEST(BestResponses, SusceptibleAgainstMasklessInfectedPlaysIn) {
  EXPECT_EQ(best_responses(one_infected(1, 10, 1000), Player::first, kNo), (Indices{kIn}));
}

TEST(BestResponses, NoMaskInEveryColumnWhenBothSusceptible) {
  const auto g = both_susceptible(1, 10);
  for (std::size_t o = 0; o < 3; ++o) {
    EXPECT_EQ(best_responses(g, Player::first, o), (Indices{kNo}));
    EXPECT_EQ(best_responses(g, Player::second, o), (Indices{kNo}));
  }
}

TEST(BestResponses, ConstantGameReturnsAllActions) {
  EXPECT_EQ(best_responses(constant_game(1), Player::first, 2), (Indices{0, 1}));
  EXPECT_THROW(best_responses(constant_game(1), Player::first, 3), std::out_of_range);
}

TEST(IsPureNash, Examples) {
  EXPECT_TRUE(is_pure_nash(both_susceptible(1, 10), {kNo, kNo}));
  // The susceptible player escapes C_i by switching to `in`.
  EXPECT_FALSE(is_pure_nash(one_infected(1, 10, 1000), {kNo, kNo}));
  EXPECT_THROW(is_pure_nash(single(1, 1), {1, 0}), std::out_of_range);
}

TEST(PureNashProperty, SoundAndCompleteOnSmallTables) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    const auto g = trial % 2 ? pandemic::test::random_tied_table(rng, r, c) : pandemic::test::random_table(rng, r, c);
    const auto ne = pure_nash_equilibria(g);
    for (auto s : g.profiles()) {
      const bool listed = std::find(ne.begin(), ne.end(), s) != ne.end();
      EXPECT_EQ(listed, is_pure_nash(g, s));
    }
  }
}

TEST(PureNashProperty, MatchesEnumerationOracleOnRandom3x3) {
  std::mt19937_64 rng(2020);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = pandemic::test::random_table(rng, 3, 3);
    EXPECT_EQ(pure_nash_equilibria(g), oracle::enumerate_pure_ne(g));
  }
}

TEST(SocialOptimaProperty, NothingStrictlyCheaper) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = pandemic::test::random_tied_table(rng, 3, 4);
    const auto so = social_optima(g);
    ASSERT_FALSE(so.empty());
    for (auto s : so)
      for (auto t : g.profiles()) EXPECT_LE(g.total_cost(s), g.total_cost(t) + kDefaultTolerance);
  }
}

TEST(DominanceProperty, StrictIsSubsetOfWeak) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = pandemic::test::random_tied_table(rng, 3, 2);
    for (auto p : {Player::first, Player::second}) {
      const auto strict = dominant_actions(g, p, Dominance::strict);
      const auto weak = dominant_actions(g, p, Dominance::weak);
      EXPECT_TRUE(std::includes(weak.begin(), weak.end(), strict.begin(), strict.end()));
    }
  }
}

TEST(ShiftProperty, ConstantShiftKeepsEquilibriaAndDominance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shift(0.0, 500.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = trial % 2 ? pandemic::test::random_tied_table(rng, 3, 3) : pandemic::test::random_table(rng, 3, 3);
    const auto p = trial % 3 ? Player::first : Player::second;
    // Integer shifts keep tied integer costs exactly tied.
    const double c = trial % 2 ? std::floor(shift(rng)) : shift(rng);
    const auto h = g.shifted(p, c);
    EXPECT_EQ(pure_nash_equilibria(g), pure_nash_equilibria(h));
    for (auto q : {Player::first, Player::second}) {
      EXPECT_EQ(dominant_actions(g, q, Dominance::weak), dominant_actions(h, q, Dominance::weak));
      EXPECT_EQ(dominant_actions(g, q, Dominance::strict), dominant_actions(h, q, Dominance::strict));
    }
  }
}

TEST(Restricted, KeepsOnlyListedActions) {
  const auto g = both_susceptible(1, 10);
  const std::size_t out[] = {kOut};
  const auto r = g.restricted(out, out);
  EXPECT_EQ(r.rows(), 1u);
  EXPECT_EQ(r.actions(Player::first).label(0), "out");
  EXPECT_EQ(r.at(0, 0), (CostPair{1, 1}));
}
