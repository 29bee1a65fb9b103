#pragma once

// Scenario files: an INI-style document of [section] headers and
// `key = value` lines. '#' and ';' start comment lines.
//
//   [mask]        c_out, c_in, c_use, c_infection, a (opt), b (opt)
//   [bayesian]    rho, p1
//   [distancing]  B, C, m, L, rho
//   [functions]   benefit, cost        -- constant:k | linear:slope,intercept
//   [meeting]     z_min, z_max, grid_steps   (all optional)
//   [population]  n
//   [policies]    apply = <policy>           (repeatable; in force for every compared set)
//                 compare = <set>            (repeatable; set = policy;policy or none)
//   [designer]    weight_infection, weight_test, weight_economic (optional, default 0)
//
// Policies: mask_mandate | free_masks:s | gathering_cap:l | lockdown |
// mass_testing:c | targeted_testing:c,f. Numbers may be written as p/q.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pandemic/distancing.hpp"
#include "pandemic/errors.hpp"
#include "pandemic/mask_game.hpp"
#include "pandemic/policy.hpp"

namespace pandemic {

/// Invalid scenario document. `section()`/`key()` locate the problem.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string section, std::string key, const std::string& message)
      : std::runtime_error(locate(section, key) + message), section_(std::move(section)), key_(std::move(key)) {}

  const std::string& section() const noexcept { return section_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string locate(const std::string& section, const std::string& key) {
    if (section.empty()) return "";
    return "[" + section + "]" + (key.empty() ? "" : "." + key) + ": ";
  }

  std::string section_;
  std::string key_;
};

struct ScenarioFile {
  std::optional<MaskCosts> mask;
  EfficiencyParams efficiency;
  std::optional<BayesianSetting> bayesian;
  std::optional<DistancingParams> distancing;
  std::optional<CostBenefitFunction> benefit_fn;
  std::optional<CostBenefitFunction> cost_fn;
  MeetingDomain meeting;
  std::optional<int> population;
  PolicySet policies;
  std::vector<PolicySet> compare;
  DesignerCostModel designer;

  bool operator==(const ScenarioFile&) const = default;
};

namespace io_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_plain(const std::string& text) {
  if (text.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline double parse_number(const std::string& section, const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  std::optional<double> v;
  if (slash == std::string::npos) {
    v = parse_plain(text);
  } else {
    const auto num = parse_plain(trim(std::string_view(text).substr(0, slash)));
    const auto den = parse_plain(trim(std::string_view(text).substr(slash + 1)));
    if (num && den && *den != 0.0) v = *num / *den;
  }
  if (!v) throw ConfigError(section, key, "expected a finite number, got '" + text + "'");
  return *v;
}

inline long long parse_integer(const std::string& section, const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError(section, key, "expected an integer, got '" + text + "'");
  return v;
}

inline CostBenefitFunction parse_function(const std::string& section, const std::string& key, const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = trim(std::string_view(text).substr(0, colon));
  const std::string args = colon == std::string::npos ? std::string() : trim(std::string_view(text).substr(colon + 1));
  const auto parts = split(args, ',');
  try {
    if (kind == "constant" && colon != std::string::npos && parts.size() == 1)
      return CostBenefitFunction::constant(parse_number(section, key, parts[0]));
    if (kind == "linear" && colon != std::string::npos && parts.size() == 2)
      return CostBenefitFunction::linear(parse_number(section, key, parts[0]), parse_number(section, key, parts[1]));
  } catch (const InvalidParameter& e) {
    throw ConfigError(section, key, "malformed function spec '" + text + "': " + e.what());
  }
  throw ConfigError(section, key,
                    "malformed function spec '" + text + "' (expected constant:k or linear:slope,intercept)");
}

inline Policy parse_policy(const std::string& section, const std::string& key, const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = trim(std::string_view(text).substr(0, colon));
  const bool has_args = colon != std::string::npos;
  const auto args = has_args ? split(std::string_view(text).substr(colon + 1), ',') : std::vector<std::string>{};
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError(section, key, "policy '" + name + "' takes " + std::to_string(n) + " argument(s)");
  };
  auto num = [&](std::size_t i) { return parse_number(section, key, args[i]); };
  Policy p;
  if (name == "mask_mandate") {
    want(0);
    p = MaskMandate{};
  } else if (name == "lockdown") {
    want(0);
    p = Lockdown{};
  } else if (name == "free_masks") {
    want(1);
    p = FreeMasks{num(0)};
  } else if (name == "gathering_cap") {
    want(1);
    const auto l = parse_integer(section, key, args[0]);
    if (l <= 0 || l > std::numeric_limits<int>::max())
      throw ConfigError(section, key, "gathering_cap limit must be a positive integer");
    p = GatheringCap{static_cast<int>(l)};
  } else if (name == "mass_testing") {
    want(1);
    p = MassTesting{num(0)};
  } else if (name == "targeted_testing") {
    want(2);
    p = TargetedTesting{num(0), num(1)};
  } else {
    throw ConfigError(section, key, "unknown policy '" + name + "'");
  }
  try {
    validate(p);
  } catch (const InvalidParameter& e) {
    throw ConfigError(section, key, "policy '" + name + "': " + e.what());
  }
  return p;
}

inline PolicySet parse_policy_set(const std::string& section, const std::string& key, const std::string& text) {
  PolicySet set;
  if (text == "none") return set;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) throw ConfigError(section, key, "empty policy in set '" + text + "'");
    set.push_back(parse_policy(section, key, item));
  }
  return set;
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

using Sections = std::map<std::string, std::vector<Entry>>;

// Key lookup within one section with unknown/duplicate key detection.
class SectionReader {
 public:
  SectionReader(std::string name, const std::vector<Entry>& entries, std::set<std::string> known,
                std::set<std::string> repeatable = {})
      : name_(std::move(name)), entries_(entries) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
      if (!known.count(e.key)) throw ConfigError(name_, e.key, "unknown key (line " + std::to_string(e.line) + ")");
      if (!repeatable.count(e.key) && !seen.insert(e.key).second)
        throw ConfigError(name_, e.key, "duplicate key (line " + std::to_string(e.line) + ")");
    }
  }

  std::optional<std::string> find(const std::string& key) const {
    for (const auto& e : entries_)
      if (e.key == key) return e.value;
    return std::nullopt;
  }

  std::vector<std::string> all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
      if (e.key == key) out.push_back(e.value);
    return out;
  }

  std::string require(const std::string& key) const {
    auto v = find(key);
    if (!v) throw ConfigError(name_, key, "missing required key");
    return *v;
  }

  double number(const std::string& key) const { return parse_number(name_, key, require(key)); }
  double number_or(const std::string& key, double fallback) const {
    auto v = find(key);
    return v ? parse_number(name_, key, *v) : fallback;
  }

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  const std::vector<Entry>& entries_;
};

template <class T>
void validate_section(const std::string& section, const T& value) {
  try {
    value.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(section, e.field(), e.constraint());
  }
}

inline Sections tokenize(std::istream& in) {
  Sections sections;
  std::string current;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("", "", "line " + std::to_string(line_no) + ": malformed section header '" + line + "'");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (sections.count(current))
        throw ConfigError(current, "", "duplicate section (line " + std::to_string(line_no) + ")");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(current, "", "line " + std::to_string(line_no) + ": expected 'key = value'");
    if (current.empty())
      throw ConfigError("", "", "line " + std::to_string(line_no) + ": key outside of any section");
    Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (e.key.empty()) throw ConfigError(current, "", "line " + std::to_string(line_no) + ": empty key");
    sections[current].push_back(std::move(e));
  }
  return sections;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_function(const CostBenefitFunction& f) {
  if (f.kind() == CostBenefitFunction::Kind::constant) return "constant:" + format_number(f.intercept());
  return "linear:" + format_number(f.slope()) + "," + format_number(f.intercept());
}

inline std::string format_policy(const Policy& p) {
  return std::visit(detail::overloaded{
                        [](const MaskMandate&) -> std::string { return "mask_mandate"; },
                        [](const Lockdown&) -> std::string { return "lockdown"; },
                        [](const FreeMasks& x) { return "free_masks:" + format_number(x.subsidy); },
                        [](const GatheringCap& x) { return "gathering_cap:" + std::to_string(x.limit); },
                        [](const MassTesting& x) { return "mass_testing:" + format_number(x.per_test_cost); },
                        [](const TargetedTesting& x) {
                          return "targeted_testing:" + format_number(x.per_test_cost) + "," +
                                 format_number(x.traced_fraction);
                        },
                    },
                    p);
}

inline std::string format_policy_set(const PolicySet& set) {
  if (set.empty()) return "none";
  std::string out;
  for (const auto& p : set) {
    if (!out.empty()) out += "; ";
    out += format_policy(p);
  }
  return out;
}

}  // namespace io_detail

/// Parses and validates a scenario document.
inline ScenarioFile parse_scenario(std::istream& in) {
  using namespace io_detail;
  const Sections sections = tokenize(in);
  static const std::set<std::string> known_sections = {"mask",      "bayesian",   "distancing", "functions",
                                                       "meeting",   "population", "policies",   "designer"};
  for (const auto& [name, entries] : sections)
    if (!known_sections.count(name)) throw ConfigError(name, "", "unknown section");

  ScenarioFile file;
  auto section = [&](const std::string& name) -> const std::vector<Entry>* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };

  if (auto* e = section("mask")) {
    SectionReader r("mask", *e, {"c_out", "c_in", "c_use", "c_infection", "a", "b"});
    MaskCosts c{r.number("c_out"), r.number("c_in"), r.number("c_use"), r.number("c_infection")};
    validate_section("mask", c);
    file.mask = c;
    EfficiencyParams eff{r.number_or("a", EfficiencyParams{}.a), r.number_or("b", EfficiencyParams{}.b)};
    validate_section("mask", eff);
    file.efficiency = eff;
  }
  if (auto* e = section("bayesian")) {
    SectionReader r("bayesian", *e, {"rho", "p1"});
    BayesianSetting b{r.number("rho"), r.number("p1")};
    validate_section("bayesian", b);
    file.bayesian = b;
  }
  if (auto* e = section("distancing")) {
    SectionReader r("distancing", *e, {"B", "C", "m", "L", "rho"});
    DistancingParams d{r.number("B"), r.number("C"), r.number("m"), r.number("L"), r.number("rho")};
    validate_section("distancing", d);
    file.distancing = d;
  }
  if (auto* e = section("functions")) {
    SectionReader r("functions", *e, {"benefit", "cost"});
    file.benefit_fn = parse_function("functions", "benefit", r.require("benefit"));
    file.cost_fn = parse_function("functions", "cost", r.require("cost"));
  }
  if (auto* e = section("meeting")) {
    SectionReader r("meeting", *e, {"z_min", "z_max", "grid_steps"});
    MeetingDomain m;
    m.z_min = r.number_or("z_min", m.z_min);
    m.z_max = r.number_or("z_max", m.z_max);
    if (auto g = r.find("grid_steps")) {
      const auto steps = parse_integer("meeting", "grid_steps", *g);
      if (steps < 1) throw ConfigError("meeting", "grid_steps", "must be >= 1");
      m.grid_steps = static_cast<std::size_t>(steps);
    }
    validate_section("meeting", m);
    file.meeting = m;
  }
  if (auto* e = section("population")) {
    SectionReader r("population", *e, {"n"});
    const auto n = parse_integer("population", "n", r.require("n"));
    if (n < 2 || n > std::numeric_limits<int>::max())
      throw ConfigError("population", "n", "population must be an integer >= 2");
    file.population = static_cast<int>(n);
  }
  if (auto* e = section("policies")) {
    SectionReader r("policies", *e, {"apply", "compare"}, {"apply", "compare"});
    for (const auto& v : r.all("apply")) file.policies.push_back(parse_policy("policies", "apply", v));
    for (const auto& v : r.all("compare")) file.compare.push_back(parse_policy_set("policies", "compare", v));
  }
  if (auto* e = section("designer")) {
    SectionReader r("designer", *e, {"weight_infection", "weight_test", "weight_economic"});
    DesignerCostModel d{r.number_or("weight_infection", 0.0), r.number_or("weight_test", 0.0),
                        r.number_or("weight_economic", 0.0)};
    validate_section("designer", d);
    file.designer = d;
  }
  return file;
}

inline ScenarioFile parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "", "cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

/// Writes a document that parses back to an equal ScenarioFile.
inline std::string serialize_scenario(const ScenarioFile& file) {
  using io_detail::format_number;
  std::ostringstream out;
  if (file.mask) {
    out << "[mask]\n"
        << "c_out = " << format_number(file.mask->c_out) << "\n"
        << "c_in = " << format_number(file.mask->c_in) << "\n"
        << "c_use = " << format_number(file.mask->c_use) << "\n"
        << "c_infection = " << format_number(file.mask->c_infection) << "\n"
        << "a = " << format_number(file.efficiency.a) << "\n"
        << "b = " << format_number(file.efficiency.b) << "\n\n";
  }
  if (file.bayesian) {
    out << "[bayesian]\n"
        << "rho = " << format_number(file.bayesian->rho) << "\n"
        << "p1 = " << format_number(file.bayesian->p1) << "\n\n";
  }
  if (file.distancing) {
    const auto& d = *file.distancing;
    out << "[distancing]\n"
        << "B = " << format_number(d.benefit) << "\n"
        << "C = " << format_number(d.home_cost) << "\n"
        << "m = " << format_number(d.mortality) << "\n"
        << "L = " << format_number(d.life_value) << "\n"
        << "rho = " << format_number(d.infection_prob) << "\n\n";
  }
  if (file.benefit_fn && file.cost_fn) {
    out << "[functions]\n"
        << "benefit = " << io_detail::format_function(*file.benefit_fn) << "\n"
        << "cost = " << io_detail::format_function(*file.cost_fn) << "\n\n";
  }
  out << "[meeting]\n"
      << "z_min = " << format_number(file.meeting.z_min) << "\n"
      << "z_max = " << format_number(file.meeting.z_max) << "\n"
      << "grid_steps = " << file.meeting.grid_steps << "\n\n";
  if (file.population) out << "[population]\nn = " << *file.population << "\n\n";
  if (!file.policies.empty() || !file.compare.empty()) {
    out << "[policies]\n";
    for (const auto& p : file.policies) out << "apply = " << io_detail::format_policy(p) << "\n";
    for (const auto& s : file.compare) out << "compare = " << io_detail::format_policy_set(s) << "\n";
    out << "\n";
  }
  out << "[designer]\n"
      << "weight_infection = " << format_number(file.designer.weight_infection) << "\n"
      << "weight_test = " << format_number(file.designer.weight_test) << "\n"
      << "weight_economic = " << format_number(file.designer.weight_economic) << "\n";
  return out.str();
}

namespace io_detail {
[[noreturn]] inline void missing(const std::string& section) {
  throw ConfigError(section, "", "missing required section");
}
}  // namespace io_detail

inline const MaskCosts& require_mask(const ScenarioFile& f) {
  if (!f.mask) io_detail::missing("mask");
  return *f.mask;
}
inline const BayesianSetting& require_bayesian(const ScenarioFile& f) {
  if (!f.bayesian) io_detail::missing("bayesian");
  return *f.bayesian;
}
inline const DistancingParams& require_distancing(const ScenarioFile& f) {
  if (!f.distancing) io_detail::missing("distancing");
  return *f.distancing;
}
inline void require_functions(const ScenarioFile& f) {
  if (!f.benefit_fn || !f.cost_fn) io_detail::missing("functions");
}

/// Full scenario bundle for mechanism evaluation. Policies in [policies]
/// are not applied here.
inline Scenario to_scenario(const ScenarioFile& f) {
  Scenario s;
  s.mask_costs = require_mask(f);
  s.efficiency = f.efficiency;
  s.bayesian = require_bayesian(f);
  s.distancing = require_distancing(f);
  require_functions(f);
  s.benefit_fn = *f.benefit_fn;
  s.cost_fn = *f.cost_fn;
  s.meeting_domain = f.meeting;
  if (!f.population) io_detail::missing("population");
  s.population = *f.population;
  return s;
}

}  // namespace pandemic
