#pragma once

// Subcommand dispatch and report emission for the command-line tool. Kept
// in the library so the exit-code contract can be tested in-process.
//
// Exit codes: 0 success, 1 configuration error, 2 computation domain
// error, 3 --verify mismatch between analytic and brute-force results.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pandemic/distancing.hpp"
#include "pandemic/errors.hpp"
#include "pandemic/game_core.hpp"
#include "pandemic/mask_game.hpp"
#include "pandemic/oracle.hpp"
#include "pandemic/policy.hpp"
#include "pandemic/scenario_io.hpp"

namespace pandemic::cli {

enum class ExitCode : int { ok = 0, config = 1, domain = 2, verify = 3 };

enum class ReportFormat { table, csv };

using Cell = std::variant<std::string, double, long long, bool>;

/// One table per report. A record report holds exactly one row and is
/// printed as `name value` lines in table format.
struct Report {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool record = false;
};

namespace detail {

inline std::string format_double(double v, ReportFormat format, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[128];
  if (format == ReportFormat::table)
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  else
    std::snprintf(buf, sizeof buf, "%.*g", std::max(precision, 1), v);
  std::string s = buf;
  // "-0.000" and friends print as zero
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string format_cell(const Cell& cell, ReportFormat format, int precision) {
  return std::visit(pandemic::detail::overloaded{
                        [](const std::string& s) { return s; },
                        [&](double v) { return format_double(v, format, precision); },
                        [](long long v) { return std::to_string(v); },
                        [](bool v) -> std::string { return v ? "true" : "false"; },
                    },
                    cell);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline void render(const Report& report, ReportFormat format, int precision, std::ostream& os) {
  if (format == ReportFormat::csv) {
    for (std::size_t i = 0; i < report.columns.size(); ++i)
      os << (i ? "," : "") << detail::csv_escape(report.columns[i]);
    os << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << detail::csv_escape(detail::format_cell(row[i], format, precision));
      os << '\n';
    }
    return;
  }

  os << "# " << report.title << '\n';
  if (report.record && report.rows.size() == 1) {
    std::size_t width = 0;
    for (const auto& c : report.columns) width = std::max(width, c.size());
    for (std::size_t i = 0; i < report.columns.size(); ++i)
      os << std::left << std::setw(static_cast<int>(width + 2)) << report.columns[i]
         << detail::format_cell(report.rows[0][i], format, precision) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(report.columns.size());
  for (std::size_t i = 0; i < report.columns.size(); ++i) width[i] = report.columns[i].size();
  for (const auto& row : report.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(detail::format_cell(row[i], format, precision));
      width[i] = std::max(width[i], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::string cell = cells[i];
      if (i + 1 < cells.size()) cell.resize(width[i] + 2, ' ');
      line += cell;
    }
    os << line << '\n';
  };
  emit(report.columns);
  for (const auto& line : text) emit(line);
}

/// Collects analytic-versus-oracle comparisons for --verify.
class Verifier {
 public:
  explicit Verifier(bool enabled) : enabled_(enabled) {}

  bool enabled() const noexcept { return enabled_; }

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }

  int checks() const noexcept { return checks_; }
  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  bool enabled_;
  int checks_ = 0;
  std::vector<std::string> failures_;
};

// ---------------------------------------------------------------------------
// Subcommand reports

inline Report mask_basic_report(const ScenarioFile& file, Verifier& verify) {
  const auto& costs = require_mask(file);
  using enum HealthStatus;
  struct Named {
    const char* name;
    HealthStatus s1, s2;
  };
  const Named games[] = {{"susceptible-susceptible", susceptible, susceptible},
                         {"susceptible-infected", susceptible, infected},
                         {"infected-susceptible", infected, susceptible},
                         {"infected-infected", infected, infected}};

  Report r{"mask-basic: pure equilibria, social optima and weakly dominant actions", {"game", "concept", "value"}, {}, false};
  auto join_actions = [](const CostTable& g, Player p, const std::vector<std::size_t>& acts) {
    if (acts.empty()) return std::string("-");
    std::string out;
    for (auto a : acts) out += (out.empty() ? "" : " ") + g.actions(p).label(a);
    return out;
  };
  for (const auto& named : games) {
    const auto game = pair_game(named.s1, named.s2, costs);
    const auto sol = solve(game);
    if (sol.pure_nash.empty()) r.rows.push_back({std::string(named.name), std::string("nash"), std::string("-")});
    for (auto s : sol.pure_nash)
      r.rows.push_back({std::string(named.name), std::string("nash"), format_profile(game, s)});
    for (auto s : sol.social_optima)
      r.rows.push_back({std::string(named.name), std::string("social_optimum"), format_profile(game, s)});
    r.rows.push_back({std::string(named.name), std::string("dominant_p1"), join_actions(game, Player::first, sol.dominant_p1)});
    r.rows.push_back({std::string(named.name), std::string("dominant_p2"), join_actions(game, Player::second, sol.dominant_p2)});

    if (verify.enabled()) {
      verify.check(oracle::enumerate_pure_ne(game) == sol.pure_nash,
                   std::string("pure equilibria of ") + named.name + " differ from exhaustive enumeration");
      for (auto s : game.profiles()) {
        const bool listed = std::find(sol.pure_nash.begin(), sol.pure_nash.end(), s) != sol.pure_nash.end();
        verify.check(listed == is_pure_nash(game, s),
                     std::string("equilibrium predicate disagrees on ") + named.name + " " + format_profile(game, s));
      }
    }
  }
  return r;
}

inline Report mask_bayesian_report(const ScenarioFile& file, Verifier& verify) {
  const auto& costs = require_mask(file);
  const auto& setting = require_bayesian(file);
  const auto cond = bayesian_mask_condition(setting, costs);
  const double best = bayesian_best_p2(setting, costs);
  const double u0 = bayesian_expected_cost(setting, 0.0, costs);
  const double u1 = bayesian_expected_cost(setting, 1.0, costs);
  if (verify.enabled()) {
    const auto u = [&](double p2) { return bayesian_expected_cost(setting, p2, costs); };
    verify.check(oracle::check_affine(u, 0.0, 0.5, 1.0, 1e-9 * std::max(1.0, costs.c_infection)),
                 "expected cost is not affine in p2");
    verify.check((best == 1.0) == (u1 < u0), "best p2 disagrees with direct comparison of expected costs");
  }
  Report r{"mask-bayesian: mask choice under unknown infection status",
           {"rho", "p1", "c_use", "c_infection", "threshold", "threshold_cost", "decision", "best_p2",
            "cost_no_mask", "cost_mask"},
           {},
           true};
  r.rows.push_back({setting.rho, setting.p1, costs.c_use, costs.c_infection, cond.threshold, cond.threshold_cost(),
                    std::string(cond.wear ? "wear" : "no-mask"), best, u0, u1});
  return r;
}

inline Report mask_efficiency_report(const ScenarioFile& file, Verifier& verify) {
  const auto& costs = require_mask(file);
  const auto& eff = file.efficiency;
  const auto an = efficiency_analysis(eff, costs);
  if (verify.enabled()) {
    const std::size_t points = 10001;
    const auto grid = oracle::grid_argmin([&](double p) { return efficiency_expected_cost(p, eff, costs); }, 0.0, 1.0,
                                          points);
    verify.check(std::abs(grid.x_star - an.best_p) <= 1.0 / (points - 1) + 1e-12,
                 "best p differs from grid minimum by more than one grid step");
    const double h = 1e-3;
    const double fd = (efficiency_expected_cost(0.5 + h, eff, costs) - 2.0 * efficiency_expected_cost(0.5, eff, costs) +
                       efficiency_expected_cost(0.5 - h, eff, costs)) /
                      (h * h);
    verify.check(std::abs(fd - an.second_derivative) <= 1e-6 * std::max(1.0, std::abs(an.second_derivative)),
                 "finite-difference curvature differs from the closed form");
  }
  Report r{"mask-efficiency: symmetric mask probability against an infected player",
           {"a", "b", "c_use", "c_infection", "stationary_p", "second_derivative", "use_beats_no_threshold",
            "use_beats_no", "best_p", "cost_at_best", "cost_p0", "cost_p1", "degenerate", "mask_cheap"},
           {},
           true};
  r.rows.push_back({eff.a, eff.b, costs.c_use, costs.c_infection, an.stationary_p.value_or(std::nan("")),
                    an.second_derivative, an.use_beats_no_threshold, an.use_beats_no, an.best_p,
                    efficiency_expected_cost(an.best_p, eff, costs), efficiency_expected_cost(0.0, eff, costs),
                    efficiency_expected_cost(1.0, eff, costs), an.degenerate, an.mask_cheap});
  return r;
}

inline Report distancing_report(const ScenarioFile& file, Verifier& verify) {
  const auto& d = require_distancing(file);
  const auto res = stay_home_decision(d);
  const double go = distancing_utility(1.0, d), stay = distancing_utility(0.0, d);
  const double risk = d.infection_prob * d.mortality;
  if (verify.enabled())
    verify.check((res.decision == GoDecision::stay) == (go < stay), "stay/go decision disagrees with utility comparison");
  Report r{"distancing: go out or stay home",
           {"B", "C", "m", "L", "rho", "utility_go", "utility_stay", "life_value_multiplier", "life_value_threshold",
            "decision"},
           {},
           true};
  r.rows.push_back({d.benefit, d.home_cost, d.mortality, d.life_value, d.infection_prob, go, stay,
                    risk > 0.0 ? 1.0 / risk : std::numeric_limits<double>::infinity(), res.life_value_threshold,
                    std::string(to_string(res.decision))});
  return r;
}

namespace detail {
inline std::string describe(const CostBenefitFunction& f) { return io_detail::format_function(f); }

inline void verify_meeting(const ScenarioFile& file, double z_star, Verifier& verify) {
  const auto& d = *file.distancing;
  const auto& dom = file.meeting;
  const std::size_t fine = dom.grid_steps * 10 + 1;
  const auto grid = oracle::grid_argmin(
      [&](double z) { return -z_objective(z, *file.benefit_fn, *file.cost_fn, d.infection_prob, d.mortality); },
      dom.z_min, dom.z_max, fine);
  verify.check(std::abs(grid.x_star - z_star) <= dom.step() + 1e-12,
               "optimal exposure differs from the fine-grid oracle by more than one grid step");
}
}  // namespace detail

inline Report meeting_opt_report(const ScenarioFile& file, Verifier& verify) {
  const auto& d = require_distancing(file);
  require_functions(file);
  const auto opt = optimal_meeting(*file.benefit_fn, *file.cost_fn, d.infection_prob, d.mortality, file.meeting);
  const auto dec =
      extended_go_decision(*file.benefit_fn, *file.cost_fn, d.infection_prob, d.mortality, d.life_value, file.meeting);
  if (verify.enabled()) {
    detail::verify_meeting(file, opt.z_star, verify);
    verify.check((dec.decision == GoDecision::go) == (opt.value > d.life_value), "go decision disagrees with optimum");
  }
  Report r{"meeting-opt: exposure z = g t maximizing the life-value threshold",
           {"benefit", "cost", "rho", "m", "L", "z_min", "z_max", "grid_steps", "z_star", "value", "decision"},
           {},
           true};
  r.rows.push_back({detail::describe(*file.benefit_fn), detail::describe(*file.cost_fn), d.infection_prob, d.mortality,
                    d.life_value, file.meeting.z_min, file.meeting.z_max,
                    static_cast<long long>(file.meeting.grid_steps), opt.z_star, opt.value,
                    std::string(to_string(dec.decision))});
  return r;
}

inline Report curves_report(const ScenarioFile& file, Verifier& verify) {
  const auto& d = require_distancing(file);
  require_functions(file);
  const auto series = curve_series(*file.benefit_fn, *file.cost_fn, d.infection_prob, d.mortality, file.meeting);
  if (verify.enabled()) {
    verify.check(series.size() == file.meeting.grid_steps + 1, "series length differs from grid_steps + 1");
    verify.check(series.front().z == file.meeting.z_min && series.back().z == file.meeting.z_max,
                 "series does not span the meeting domain");
    const auto opt = optimal_meeting(*file.benefit_fn, *file.cost_fn, d.infection_prob, d.mortality, file.meeting);
    const auto top = std::max_element(series.begin(), series.end(),
                                      [](const CurvePoint& x, const CurvePoint& y) { return x.objective < y.objective; });
    verify.check(opt.value >= top->objective, "optimum is dominated by a sampled point");
  }
  Report r{"curves: life-value threshold over exposure z", {"z", "objective"}, {}, false};
  r.rows.reserve(series.size());
  for (const auto& p : series) r.rows.push_back({p.z, p.objective});
  return r;
}

inline Report policy_compare_report(const ScenarioFile& file, Verifier& verify, std::ostream& err) {
  const Scenario scenario = to_scenario(file);
  try {
    scenario.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("", e.field(), e.constraint());
  }
  // `apply` policies are in force for every compared set.
  std::vector<PolicySet> sets;
  if (file.compare.empty()) sets.push_back(file.policies);
  for (const auto& extra : file.compare) {
    PolicySet set = file.policies;
    set.insert(set.end(), extra.begin(), extra.end());
    sets.push_back(std::move(set));
  }
  const auto ranked = compare_policies(scenario, sets, file.designer);

  if (verify.enabled()) {
    for (std::size_t i = 1; i < ranked.size(); ++i)
      verify.check(ranked[i - 1].report.designer_cost <= ranked[i].report.designer_cost, "ranking not ascending");
    for (const auto& entry : ranked) {
      const Scenario applied = apply_policies(scenario, entry.policies);
      using enum HealthStatus;
      for (auto [s1, s2] : {std::pair{susceptible, susceptible}, std::pair{susceptible, infected},
                            std::pair{infected, infected}}) {
        const auto game = citizen_pair_game(applied, s1, s2);
        verify.check(oracle::enumerate_pure_ne(game) == pure_nash_equilibria(game),
                     "citizen game equilibria differ from enumeration under " + label(entry.policies));
      }
      verify.check(entry.report.expected_infections >= 0.0 && entry.report.expected_infections <= scenario.population,
                   "expected infections outside [0, N]");
    }
  }

  Report r{"policy-compare: policy sets ranked by designer cost",
           {"rank", "policy_set", "designer_cost", "social_cost", "expected_infections", "testing_outlay",
            "suppressed_benefit", "decision", "z_star", "group_size", "duration", "mask_profile"},
           {},
           false};
  long long rank = 0;
  for (const auto& entry : ranked) {
    const auto& rep = entry.report;
    const auto& c = rep.citizen_outcome;
    std::string masks;
    for (const auto& g : c.mask_games) masks += (masks.empty() ? "" : "; ") + g.game + " " + g.profile;
    if (masks.empty()) masks = "-";
    const double nan = std::nan("");
    r.rows.push_back({++rank, label(entry.policies), rep.designer_cost, rep.social_cost, rep.expected_infections,
                      rep.testing_outlay, rep.suppressed_benefit,
                      std::string(c.locked_down ? "lockdown" : to_string(c.decision)), c.z_star.value_or(nan),
                      c.meeting ? c.meeting->group_size : nan, c.meeting ? c.meeting->duration : nan, masks});
    for (const auto& w : rep.warnings) err << "warning: " << label(entry.policies) << ": " << w << '\n';
  }
  return r;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"mask-basic", "mask-bayesian", "mask-efficiency", "distancing",
                                                 "meeting-opt", "curves",       "policy-compare"};
  return names;
}

struct RunOptions {
  std::string command;
  std::string scenario_path;
  std::string out_path;  ///< empty: the `out` stream
  ReportFormat format = ReportFormat::table;
  std::optional<long long> grid_steps;
  bool verify = false;
  int precision = 6;
};

inline Report build_report(const std::string& command, const ScenarioFile& file, Verifier& verify, std::ostream& err) {
  if (command == "mask-basic") return mask_basic_report(file, verify);
  if (command == "mask-bayesian") return mask_bayesian_report(file, verify);
  if (command == "mask-efficiency") return mask_efficiency_report(file, verify);
  if (command == "distancing") return distancing_report(file, verify);
  if (command == "meeting-opt") return meeting_opt_report(file, verify);
  if (command == "curves") return curves_report(file, verify);
  if (command == "policy-compare") return policy_compare_report(file, verify, err);
  throw ConfigError("", "", "unknown command '" + command + "'");
}

/// Parses the scenario, runs `options.command` and emits the report.
inline int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.precision < 0 || options.precision > 17)
      throw ConfigError("", "", "--precision must lie in [0, 17]");
    ScenarioFile file = parse_scenario_file(options.scenario_path);
    if (options.grid_steps) {
      if (*options.grid_steps < 1) throw ConfigError("meeting", "grid_steps", "--grid-steps must be >= 1");
      file.meeting.grid_steps = static_cast<std::size_t>(*options.grid_steps);
    }

    Verifier verifier(options.verify);
    const Report report = build_report(options.command, file, verifier, err);

    if (options.verify) {
      for (const auto& f : verifier.failures()) err << "verify: mismatch: " << f << '\n';
      if (!verifier.failures().empty()) return static_cast<int>(ExitCode::verify);
      err << "verify: ok (" << verifier.checks() << " checks)\n";
    }

    std::ostringstream text;
    render(report, options.format, options.precision, text);
    if (options.out_path.empty()) {
      out << text.str();
    } else {
      std::ofstream f(options.out_path, std::ios::binary);
      if (!f) throw ConfigError("", "", "cannot write output file '" + options.out_path + "'");
      f << text.str();
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::domain);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::domain);
  }
}

}  // namespace pandemic::cli
