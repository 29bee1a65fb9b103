#pragma once

// Government policies as transformations of a scenario, and evaluation of
// the resulting citizen games into social and designer costs.
//
// Evaluation is mean-field over a population of N citizens. A fraction
// rho (the Bayesian prior) is infected. Citizens first play the
// distancing game; if they go out, each meeting of exposure z is a series
// of encounters where the partner is infectious with probability rho and
// transmission is scaled by a for a susceptible mask wearer and by b for an
// infected one. Citizens whose status was revealed by testing play the
// full-information pair games; the rest play the Bayesian game.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "pandemic/distancing.hpp"
#include "pandemic/errors.hpp"
#include "pandemic/game_core.hpp"
#include "pandemic/mask_game.hpp"

namespace pandemic {

struct MaskMandate {
  bool operator==(const MaskMandate&) const = default;
};
struct FreeMasks {
  double subsidy = 0.0;
  bool operator==(const FreeMasks&) const = default;
};
struct GatheringCap {
  int limit = 1;
  bool operator==(const GatheringCap&) const = default;
};
struct Lockdown {
  bool operator==(const Lockdown&) const = default;
};
struct MassTesting {
  double per_test_cost = 0.0;
  bool operator==(const MassTesting&) const = default;
};
struct TargetedTesting {
  double per_test_cost = 0.0;
  double traced_fraction = 0.0;
  bool operator==(const TargetedTesting&) const = default;
};

using Policy = std::variant<MaskMandate, FreeMasks, GatheringCap, Lockdown, MassTesting, TargetedTesting>;
using PolicySet = std::vector<Policy>;

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void check_nonneg(const char* field, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter(field, "must be finite and >= 0");
}
}  // namespace detail

inline void validate(const Policy& policy) {
  std::visit(detail::overloaded{
                 [](const MaskMandate&) {},
                 [](const Lockdown&) {},
                 [](const FreeMasks& p) { detail::check_nonneg("subsidy", p.subsidy); },
                 [](const GatheringCap& p) {
                   if (p.limit <= 0) throw InvalidParameter("limit", "gathering cap must be a positive integer");
                 },
                 [](const MassTesting& p) { detail::check_nonneg("per_test_cost", p.per_test_cost); },
                 [](const TargetedTesting& p) {
                   detail::check_nonneg("per_test_cost", p.per_test_cost);
                   if (!(p.traced_fraction >= 0.0 && p.traced_fraction <= 1.0))
                     throw InvalidParameter("traced_fraction", "must lie in [0, 1]");
                 },
             },
             policy);
}

/// Human-readable name, e.g. "free_masks(50)" or "targeted_testing(20 0.1)".
inline std::string label(const Policy& policy) {
  using detail::short_number;
  return std::visit(detail::overloaded{
                        [](const MaskMandate&) -> std::string { return "mask_mandate"; },
                        [](const Lockdown&) -> std::string { return "lockdown"; },
                        [](const FreeMasks& p) { return "free_masks(" + short_number(p.subsidy) + ")"; },
                        [](const GatheringCap& p) { return "gathering_cap(" + std::to_string(p.limit) + ")"; },
                        [](const MassTesting& p) { return "mass_testing(" + short_number(p.per_test_cost) + ")"; },
                        [](const TargetedTesting& p) {
                          return "targeted_testing(" + short_number(p.per_test_cost) + " " +
                                 short_number(p.traced_fraction) + ")";
                        },
                    },
                    policy);
}

/// Policies joined with '+'; "none" for the empty set.
inline std::string label(const PolicySet& set) {
  if (set.empty()) return "none";
  std::string out;
  for (const auto& p : set) {
    if (!out.empty()) out += '+';
    out += label(p);
  }
  return out;
}

/// Effect of the policies applied so far.
struct PolicyState {
  bool mask_mandate = false;
  bool lockdown = false;
  std::optional<int> gathering_cap;
  double cap_max_duration = 0.0;  ///< z_max / l while a cap is active
  double revealed_fraction = 0.0;
  PolicySet applied;
  std::vector<std::string> warnings;

  bool operator==(const PolicyState&) const = default;
};

struct Scenario {
  MaskCosts mask_costs;
  EfficiencyParams efficiency;
  BayesianSetting bayesian;
  DistancingParams distancing;
  CostBenefitFunction benefit_fn = CostBenefitFunction::constant(0.0);
  CostBenefitFunction cost_fn = CostBenefitFunction::constant(0.0);
  MeetingDomain meeting_domain;
  int population = 2;
  PolicyState policy;

  void validate() const {
    const bool subsidized = std::any_of(policy.applied.begin(), policy.applied.end(),
                                        [](const Policy& p) { return std::holds_alternative<FreeMasks>(p); });
    if (subsidized) {
      // Subsidies may drive mask prices to zero; only the ordering of what is left is kept.
      detail::check_nonneg("c_out", mask_costs.c_out);
      detail::check_nonneg("c_use", mask_costs.c_use);
      if (!(mask_costs.c_out < mask_costs.c_in && mask_costs.c_in < mask_costs.c_infection))
        throw InvalidParameter("c_out", "ordering invariant c_out < c_in < c_infection violated");
    } else {
      mask_costs.validate();
    }
    efficiency.validate();
    bayesian.validate();
    distancing.validate();
    meeting_domain.validate();
    if (population < 2) throw InvalidParameter("n", "population must be >= 2");
  }

  bool operator==(const Scenario&) const = default;
};

struct DesignerCostModel {
  double weight_infection = 0.0;
  double weight_test = 0.0;
  double weight_economic = 0.0;

  void validate() const {
    detail::check_nonneg("weight_infection", weight_infection);
    detail::check_nonneg("weight_test", weight_test);
    detail::check_nonneg("weight_economic", weight_economic);
  }

  bool operator==(const DesignerCostModel&) const = default;
};

/// Returns the scenario with `policy` applied and recorded.
inline Scenario apply_policy(Scenario scenario, const Policy& policy) {
  validate(policy);
  auto& state = scenario.policy;
  std::visit(detail::overloaded{
                 [&](const MaskMandate&) { state.mask_mandate = true; },
                 [&](const FreeMasks& p) {
                   scenario.mask_costs.c_use = std::max(0.0, scenario.mask_costs.c_use - p.subsidy);
                   scenario.mask_costs.c_out = std::max(0.0, scenario.mask_costs.c_out - p.subsidy);
                 },
                 [&](const GatheringCap& p) {
                   if (state.lockdown) {
                     state.warnings.push_back(label(policy) + " ignored: lockdown in effect");
                     return;
                   }
                   const int limit = state.gathering_cap ? std::min(*state.gathering_cap, p.limit) : p.limit;
                   if (state.gathering_cap && limit != p.limit)
                     state.warnings.push_back(label(policy) + " ignored: stricter gathering cap " +
                                              std::to_string(limit) + " in effect");
                   state.gathering_cap = limit;
                   state.cap_max_duration = scenario.meeting_domain.z_max / limit;
                 },
                 [&](const Lockdown&) {
                   if (state.gathering_cap) {
                     state.warnings.push_back("gathering_cap(" + std::to_string(*state.gathering_cap) +
                                              ") superseded: lockdown in effect");
                     state.gathering_cap.reset();
                     state.cap_max_duration = 0.0;
                   }
                   state.lockdown = true;
                 },
                 [&](const MassTesting&) { state.revealed_fraction = 1.0; },
                 [&](const TargetedTesting& p) {
                   state.revealed_fraction = std::max(state.revealed_fraction, p.traced_fraction);
                 },
             },
             policy);
  state.applied.push_back(policy);
  return scenario;
}

inline Scenario apply_policies(Scenario scenario, const PolicySet& policies) {
  for (const auto& p : policies) scenario = apply_policy(std::move(scenario), p);
  return scenario;
}

/// Mask pair game as citizens face it, restricted to `out` under a mandate.
inline CostTable citizen_pair_game(const Scenario& scenario, HealthStatus s1, HealthStatus s2) {
  auto game = pair_game(s1, s2, scenario.mask_costs);
  if (!scenario.policy.mask_mandate) return game;
  const std::size_t out[] = {static_cast<std::size_t>(MaskAction::out)};
  return game.restricted(out, out);
}

/// Meeting shape for exposure z: a group of z for one time unit, or the
/// capped group meeting for correspondingly longer.
inline GroupMeeting plan_meeting(double z, std::optional<int> cap) {
  if (cap && static_cast<double>(*cap) < z) return {static_cast<double>(*cap), z / *cap};
  return {z, 1.0};
}

/// Testing bill: N c for mass testing, traced_fraction N c for targeted.
inline double testing_outlay(int population, const PolicySet& policies) {
  double total = 0.0;
  for (const auto& p : policies) {
    if (auto* mass = std::get_if<MassTesting>(&p)) total += population * mass->per_test_cost;
    if (auto* targeted = std::get_if<TargetedTesting>(&p))
      total += targeted->traced_fraction * (population * targeted->per_test_cost);
  }
  return total;
}

struct DesignerInputs {
  int population = 0;
  double expected_infections = 0.0;
  double suppressed_benefit = 0.0;
};

inline double designer_cost(const DesignerInputs& inputs, const PolicySet& policies, const DesignerCostModel& model) {
  model.validate();
  return model.weight_infection * inputs.expected_infections +
         model.weight_test * testing_outlay(inputs.population, policies) +
         model.weight_economic * inputs.suppressed_benefit;
}

struct MaskOutcome {
  std::string game;     ///< "bayesian" or "<status>-<status>"
  std::string profile;  ///< e.g. "(in, no)"
  double share = 0.0;   ///< fraction of encounters played under this game
};

struct CitizenOutcome {
  GoDecision decision = GoDecision::stay;
  bool locked_down = false;
  std::optional<double> z_star;
  std::optional<GroupMeeting> meeting;
  std::vector<MaskOutcome> mask_games;
  /// Infection probability of a susceptible citizen who goes out.
  double infection_probability = 0.0;
};

struct MechanismReport {
  CitizenOutcome citizen_outcome;
  double expected_infections = 0.0;
  double social_cost = 0.0;
  double designer_cost = 0.0;
  double suppressed_benefit = 0.0;
  double testing_outlay = 0.0;
  PolicySet policies_applied;
  std::vector<std::string> warnings;
};

namespace detail {

inline double mask_price(const MaskCosts& c, std::string_view action) {
  if (action == "out") return c.c_out;
  if (action == "in") return c.c_in;
  if (action == "use") return c.c_use;
  return 0.0;
}

struct PlayedProfile {
  std::string row;
  std::string col;
  std::string text;
};

// First pure equilibrium in row-major order, or (no, no) if none exists.
inline PlayedProfile played_profile(const CostTable& game, std::vector<std::string>& warnings) {
  const auto ne = pure_nash_equilibria(game);
  if (ne.empty()) {
    warnings.push_back("mask game without pure equilibrium; assuming (no, no)");
    return {"no", "no", "(no, no)"};
  }
  return {game.actions(Player::first).label(ne.front().action_p1),
          game.actions(Player::second).label(ne.front().action_p2), format_profile(game, ne.front())};
}

// Go/stay outcome and total benefit, ignoring lockdown.
inline ExtendedDecision distancing_outcome(const Scenario& s) {
  return extended_go_decision(s.benefit_fn, s.cost_fn, s.distancing.infection_prob, s.distancing.mortality,
                              s.distancing.life_value, s.meeting_domain);
}

}  // namespace detail

/// Applies `policies` in order and evaluates the citizen games.
inline MechanismReport evaluate_mechanism(const Scenario& scenario, const PolicySet& policies,
                                          const DesignerCostModel& model) {
  scenario.validate();
  model.validate();
  const Scenario s = apply_policies(scenario, policies);
  const double n = s.population;

  MechanismReport report;
  report.policies_applied = s.policy.applied;
  report.warnings = s.policy.warnings;
  auto& citizen = report.citizen_outcome;

  const auto baseline = detail::distancing_outcome(scenario);
  const double baseline_benefit = baseline.decision == GoDecision::go ? n * scenario.benefit_fn(*baseline.z_star) : 0.0;

  double realized_benefit = 0.0;
  const auto decision = s.policy.lockdown ? ExtendedDecision{} : detail::distancing_outcome(s);
  citizen.locked_down = s.policy.lockdown;
  citizen.decision = decision.decision;

  if (decision.decision == GoDecision::stay) {
    report.social_cost = n * s.cost_fn(s.meeting_domain.z_min);
  } else {
    const double z = *decision.z_star;
    const auto meeting = plan_meeting(z, s.policy.gathering_cap);
    citizen.z_star = z;
    citizen.meeting = meeting;
    realized_benefit = n * s.benefit_fn(z);

    const auto& costs = s.mask_costs;
    const double rho = s.bayesian.rho;
    const double a = s.efficiency.a, b = s.efficiency.b;
    const double revealed = s.policy.revealed_fraction;
    auto protection = [&](std::string_view act) { return act == "no" ? 1.0 : a; };
    auto spreading = [&](std::string_view act) { return act == "no" ? 1.0 : b; };

    // Status unknown: symmetric Bayesian play.
    std::string act_u;
    if (s.policy.mask_mandate) {
      act_u = "out";
    } else {
      act_u = bayesian_best_p2(s.bayesian, costs) == 1.0 ? "use" : "no";
    }
    const double k_u = protection(act_u) * spreading(act_u);
    const double p_inf_u = group_infection_probability(rho * k_u, meeting);
    const double cost_u = detail::mask_price(costs, act_u);

    // Status revealed: full-information pair games.
    using enum HealthStatus;
    const auto ss = detail::played_profile(citizen_pair_game(s, susceptible, susceptible), report.warnings);
    const auto si = detail::played_profile(citizen_pair_game(s, susceptible, infected), report.warnings);
    const auto ii = detail::played_profile(citizen_pair_game(s, infected, infected), report.warnings);
    const double k_r = protection(si.row) * spreading(si.col);
    const double p_inf_r = group_infection_probability(rho * k_r, meeting);
    const double cost_sus = rho * detail::mask_price(costs, si.row) + (1.0 - rho) * detail::mask_price(costs, ss.row);
    const double cost_inf = rho * detail::mask_price(costs, ii.row) + (1.0 - rho) * detail::mask_price(costs, si.col);
    const double cost_r = (1.0 - rho) * cost_sus + rho * cost_inf;

    if (revealed < 1.0)
      citizen.mask_games.push_back({"bayesian", "(" + act_u + ", " + act_u + ")", 1.0 - revealed});
    if (revealed > 0.0) {
      citizen.mask_games.push_back({"susceptible-susceptible", ss.text, revealed * (1.0 - rho) * (1.0 - rho)});
      citizen.mask_games.push_back({"susceptible-infected", si.text, revealed * 2.0 * rho * (1.0 - rho)});
      citizen.mask_games.push_back({"infected-infected", ii.text, revealed * rho * rho});
    }

    citizen.infection_probability = (1.0 - revealed) * p_inf_u + revealed * p_inf_r;
    report.expected_infections = n * (1.0 - rho) * citizen.infection_probability;
    report.social_cost =
        n * ((1.0 - revealed) * cost_u + revealed * cost_r) + report.expected_infections * costs.c_infection;
  }

  report.suppressed_benefit = std::max(0.0, baseline_benefit - realized_benefit);
  report.testing_outlay = testing_outlay(s.population, s.policy.applied);
  report.designer_cost =
      designer_cost({s.population, report.expected_infections, report.suppressed_benefit}, s.policy.applied, model);
  return report;
}

struct RankedPolicySet {
  PolicySet policies;
  MechanismReport report;
  std::size_t input_index = 0;
};

/// Evaluates every set and ranks ascending by designer cost, then social
/// cost, then input order.
inline std::vector<RankedPolicySet> compare_policies(const Scenario& scenario, const std::vector<PolicySet>& policy_sets,
                                                     const DesignerCostModel& model) {
  if (policy_sets.empty()) throw std::invalid_argument("compare_policies: at least one policy set required");
  std::vector<RankedPolicySet> ranked;
  ranked.reserve(policy_sets.size());
  for (std::size_t i = 0; i < policy_sets.size(); ++i)
    ranked.push_back({policy_sets[i], evaluate_mechanism(scenario, policy_sets[i], model), i});
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedPolicySet& x, const RankedPolicySet& y) {
    if (x.report.designer_cost != y.report.designer_cost) return x.report.designer_cost < y.report.designer_cost;
    return x.report.social_cost < y.report.social_cost;
  });
  return ranked;
}

}  // namespace pandemic
