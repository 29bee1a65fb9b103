#pragma once

// The Mask Game: full-information pair games over {no, out, in}, the
// Bayesian game with unknown infection status, the efficiency game with
// imperfect masks, and the multi-player assignment.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pandemic/errors.hpp"
#include "pandemic/game_core.hpp"

namespace pandemic {

enum class MaskAction { no = 0, out = 1, in = 2 };

inline constexpr std::array<std::string_view, 3> kMaskActionLabels = {"no", "out", "in"};

inline std::string_view to_string(MaskAction a) {
  return kMaskActionLabels[static_cast<std::size_t>(a)];
}

enum class HealthStatus { susceptible, infected };

inline std::string_view to_string(HealthStatus s) {
  return s == HealthStatus::susceptible ? "susceptible" : "infected";
}

struct MaskCosts {
  double c_out = 0.0;
  double c_in = 0.0;
  double c_use = 0.0;
  double c_infection = 0.0;

  /// 0 < c_out < c_in < c_infection and 0 < c_use < c_infection.
  void validate() const {
    auto finite = [](const char* f, double v) {
      if (!std::isfinite(v)) throw InvalidParameter(f, "must be finite");
    };
    finite("c_out", c_out);
    finite("c_in", c_in);
    finite("c_use", c_use);
    finite("c_infection", c_infection);
    if (!(c_out > 0.0)) throw InvalidParameter("c_out", "must be > 0");
    if (!(c_use > 0.0)) throw InvalidParameter("c_use", "must be > 0");
    if (!(c_out < c_in))
      throw InvalidParameter("c_out", "ordering invariant 0 < c_out < c_in < c_infection violated (c_out >= c_in)");
    if (!(c_in < c_infection))
      throw InvalidParameter("c_in", "ordering invariant 0 < c_out < c_in < c_infection violated (c_in >= c_infection)");
    if (!(c_use < c_infection))
      throw InvalidParameter("c_use", "must satisfy c_use < c_infection");
  }

  bool operator==(const MaskCosts&) const = default;
};

struct BayesianSetting {
  double rho = 0.0;  ///< probability of being infected
  double p1 = 0.0;   ///< probability the opponent plays `use`

  void validate() const {
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidParameter("rho", "must lie in [0, 1]");
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvalidParameter("p1", "must lie in [0, 1]");
  }

  bool operator==(const BayesianSetting&) const = default;
};

/// Per-encounter multipliers of a worn mask; smaller is better protection.
/// `a` scales the wearer's own infection risk, `b` the risk it spreads.
struct EfficiencyParams {
  double a = 1.0 / 3.0;
  double b = 2.0 / 3.0;

  void validate() const {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidParameter("a", "must lie in [0, 1]");
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidParameter("b", "must lie in [0, 1]");
    if (!(a <= b)) throw InvalidParameter("a", "must satisfy a <= b");
  }

  bool operator==(const EfficiencyParams&) const = default;
};

inline ActionSet mask_actions() {
  return ActionSet({std::string(kMaskActionLabels[0]), std::string(kMaskActionLabels[1]),
                    std::string(kMaskActionLabels[2])});
}

namespace detail {

inline void check_probability(const char* name, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter(name, "must lie in [0, 1]");
}

// Cost pair for a susceptible row player facing an infected column player.
// An infected player wearing `out` shields the other; a susceptible one
// wearing `in` shields itself. The infected player always carries C_i.
inline CostPair susceptible_vs_infected(MaskAction s, MaskAction i, const MaskCosts& c) {
  const std::array<double, 3> price = {0.0, c.c_out, c.c_in};
  const bool protected_ = s == MaskAction::in || i == MaskAction::out;
  const double own = price[static_cast<std::size_t>(s)] + (protected_ ? 0.0 : c.c_infection);
  return {own, price[static_cast<std::size_t>(i)] + c.c_infection};
}

}  // namespace detail

/// 3x3 game over (no, out, in) for the given health statuses.
inline CostTable pair_game(HealthStatus status1, HealthStatus status2, const MaskCosts& costs) {
  using enum HealthStatus;
  const std::array<double, 3> price = {0.0, costs.c_out, costs.c_in};
  constexpr std::array<MaskAction, 3> acts = {MaskAction::no, MaskAction::out, MaskAction::in};
  std::vector<CostPair> cells;
  cells.reserve(9);
  if (status1 == status2) {
    const double base = status1 == infected ? costs.c_infection : 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) cells.push_back({price[i] + base, price[j] + base});
    return CostTable(mask_actions(), mask_actions(), std::move(cells));
  }
  for (auto r : acts)
    for (auto c : acts) cells.push_back(detail::susceptible_vs_infected(r, c, costs));
  CostTable game(mask_actions(), mask_actions(), std::move(cells));
  return status1 == susceptible ? game : game.transposed();
}

/// Expected cost of player 2 in the Bayesian game when it plays `use` with
/// probability `p2` against an opponent playing `use` with probability p1.
inline double bayesian_expected_cost(const BayesianSetting& setting, double p2, const MaskCosts& costs) {
  setting.validate();
  detail::check_probability("p2", p2);
  const double rho = setting.rho, p1 = setting.p1;
  const double cu = costs.c_use, ci = costs.c_infection;
  const double healthy = (1.0 - rho) * (p2 * cu) + rho * (p2 * cu + (1.0 - p2) * (1.0 - p1) * ci);
  const double sick = p2 * (ci + cu) + (1.0 - p2) * ci;
  return (1.0 - rho) * healthy + rho * sick;
}

struct MaskCondition {
  double threshold = 0.0;  ///< rho (1 - rho) (1 - p1), compared to c_use / c_infection
  bool wear = false;
  double cost_scale = 0.0;  ///< c_infection

  /// Mask price at which wearing and not wearing cost the same.
  double threshold_cost() const noexcept { return threshold * cost_scale; }
};

/// Wearing lowers the expected cost iff c_use / c_infection < rho (1 - rho) (1 - p1).
inline MaskCondition bayesian_mask_condition(const BayesianSetting& setting, const MaskCosts& costs) {
  setting.validate();
  MaskCondition out;
  out.threshold = setting.rho * (1.0 - setting.rho) * (1.0 - setting.p1);
  out.wear = costs.c_use / costs.c_infection < out.threshold;
  out.cost_scale = costs.c_infection;
  return out;
}

/// Optimal `use` probability. The cost is affine in p2, so this is 0 or 1;
/// exact indifference resolves to 0.
inline double bayesian_best_p2(const BayesianSetting& setting, const MaskCosts& costs) {
  return bayesian_mask_condition(setting, costs).wear ? 1.0 : 0.0;
}

/// Expected cost of a susceptible player facing an infected one when both
/// play `use` with the same probability p.
inline double efficiency_expected_cost(double p, const EfficiencyParams& eff, const MaskCosts& costs) {
  detail::check_probability("p", p);
  const double a = eff.a, b = eff.b, cu = costs.c_use, ci = costs.c_infection;
  return p * p * (cu + ci * a * b) + p * (1.0 - p) * (cu + ci * a) + (1.0 - p) * p * (ci * b) +
         (1.0 - p) * (1.0 - p) * ci;
}

struct EfficiencyAnalysis {
  /// Vertex of the cost parabola; empty when a == 1 or b == 1 (cost affine in p).
  std::optional<double> stationary_p;
  double second_derivative = 0.0;
  double use_beats_no_threshold = 0.0;  ///< 1 - a b
  bool use_beats_no = false;            ///< c_use / c_infection < 1 - a b
  double best_p = 0.0;
  bool degenerate = false;
  bool mask_cheap = false;  ///< c_use at most 1% of c_infection
};

inline EfficiencyAnalysis efficiency_analysis(const EfficiencyParams& eff, const MaskCosts& costs) {
  eff.validate();
  const double a = eff.a, b = eff.b, cu = costs.c_use, ci = costs.c_infection;
  EfficiencyAnalysis r;
  // U(p) = p c_use + c_i [ (1-a)(1-b) p^2 - (2 - a - b) p + 1 ]
  r.second_derivative = 2.0 * ci * (1.0 - a) * (1.0 - b);
  r.use_beats_no_threshold = 1.0 - a * b;
  r.use_beats_no = cu / ci < r.use_beats_no_threshold;
  r.mask_cheap = cu <= 0.01 * ci;
  r.degenerate = a >= 1.0 || b >= 1.0;

  const double u0 = efficiency_expected_cost(0.0, eff, costs);
  const double u1 = efficiency_expected_cost(1.0, eff, costs);
  double best = u1 < u0 ? 1.0 : 0.0;
  double best_u = std::min(u0, u1);
  if (!r.degenerate) {
    r.stationary_p = (2.0 * ci - ci * (a + b) - cu) / r.second_derivative;
    const double inner = std::clamp(*r.stationary_p, 0.0, 1.0);
    const double ui = efficiency_expected_cost(inner, eff, costs);
    if (ui <= best_u) {
      best = inner;
      best_u = ui;
    }
  }
  r.best_p = best;
  return r;
}

struct MultiplayerEquilibrium {
  std::vector<MaskAction> actions;
  /// Set when no player is infected; the two-player analysis then predicts
  /// (no, no) rather than the stated `in` rule.
  bool no_infected_player = false;
};

/// Infected players play `no`, susceptible players play `in`, assuming
/// every pair of players meets.
inline MultiplayerEquilibrium multiplayer_equilibrium(const std::vector<HealthStatus>& statuses,
                                                      const MaskCosts& costs) {
  (void)costs;
  if (statuses.empty()) throw std::invalid_argument("multiplayer_equilibrium: at least one player required");
  MultiplayerEquilibrium out;
  out.actions.reserve(statuses.size());
  out.no_infected_player = true;
  for (auto s : statuses) {
    out.actions.push_back(s == HealthStatus::infected ? MaskAction::no : MaskAction::in);
    if (s == HealthStatus::infected) out.no_infected_player = false;
  }
  return out;
}

struct SocialOptimumCondition {
  bool holds = false;
  double lhs = 0.0;  ///< c_in / c_out
  double rhs = 0.0;  ///< rho / (1 - rho)
  bool rhs_infinite = false;
};

/// The multi-player equilibrium is also socially optimal iff
/// c_in / c_out < rho / (1 - rho).
inline SocialOptimumCondition multiplayer_so_condition(double rho, const MaskCosts& costs) {
  detail::check_probability("rho", rho);
  SocialOptimumCondition out;
  out.lhs = costs.c_in / costs.c_out;
  if (rho >= 1.0) {
    out.rhs = std::numeric_limits<double>::infinity();
    out.rhs_infinite = true;
    out.holds = true;
    return out;
  }
  out.rhs = rho / (1.0 - rho);
  out.holds = out.lhs < out.rhs;
  return out;
}

}  // namespace pandemic
