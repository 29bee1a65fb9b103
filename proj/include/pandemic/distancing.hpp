#pragma once

// The Distancing Game: go-out versus stay-home under infection risk, and
// the meeting-exposure extension where z = group size x duration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pandemic/errors.hpp"

namespace pandemic {

struct DistancingParams {
  double benefit = 0.0;         ///< B, benefit of going out
  double home_cost = 0.0;       ///< C, cost of staying home
  double mortality = 0.0;       ///< m
  double life_value = 0.0;      ///< L
  double infection_prob = 0.0;  ///< rho

  void validate() const {
    auto nonneg = [](const char* f, double v) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter(f, "must be finite and >= 0");
    };
    nonneg("B", benefit);
    nonneg("C", home_cost);
    nonneg("L", life_value);
    if (!(mortality >= 0.0 && mortality <= 1.0)) throw InvalidParameter("m", "must lie in [0, 1]");
    if (!(infection_prob >= 0.0 && infection_prob <= 1.0))
      throw InvalidParameter("rho", "must lie in [0, 1]");
  }

  bool operator==(const DistancingParams&) const = default;
};

enum class GoDecision { stay, go };

inline const char* to_string(GoDecision d) { return d == GoDecision::go ? "go" : "stay"; }

/// p (B - rho m L) - (1 - p) C, with p the probability of going out.
inline double distancing_utility(double p, const DistancingParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("p", "must lie in [0, 1]");
  const auto& d = params;
  return p * (d.benefit - d.infection_prob * d.mortality * d.life_value) - (1.0 - p) * d.home_cost;
}

struct StayHomeResult {
  GoDecision decision = GoDecision::go;
  /// (B + C) / (rho m); +inf when rho m == 0.
  double life_value_threshold = 0.0;
  bool unbounded() const noexcept { return std::isinf(life_value_threshold); }
};

/// Stay iff (B + C) / (rho m) < L.
inline StayHomeResult stay_home_decision(const DistancingParams& params) {
  params.validate();
  const double risk = params.infection_prob * params.mortality;
  StayHomeResult r;
  if (risk == 0.0) {
    r.life_value_threshold = std::numeric_limits<double>::infinity();
    r.decision = GoDecision::go;
    return r;
  }
  r.life_value_threshold = (params.benefit + params.home_cost) / risk;
  r.decision = r.life_value_threshold < params.life_value ? GoDecision::stay : GoDecision::go;
  return r;
}

struct GroupMeeting {
  double group_size = 1.0;  ///< g
  double duration = 1.0;    ///< t
  double exposure() const noexcept { return group_size * duration; }
  bool operator==(const GroupMeeting&) const = default;
};

/// 1 - (1 - rho)^(g t): chance that at least one of g t exposure units is infectious.
inline double group_infection_probability(double rho, GroupMeeting meeting) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidParameter("rho", "must lie in [0, 1]");
  if (!(meeting.group_size > 0.0) || !(meeting.duration > 0.0))
    throw InvalidParameter("meeting", "group size and duration must be > 0");
  // -expm1(z log1p(-rho)) keeps precision for small rho; log1p(-1) = -inf gives 1.
  return -std::expm1(meeting.exposure() * std::log1p(-rho));
}

/// Benefit or cost as a function of the exposure z: constant k, or
/// slope z + intercept. Coefficients are non-negative.
class CostBenefitFunction {
 public:
  enum class Kind { constant, linear };

  static CostBenefitFunction constant(double k) {
    check("constant", k);
    return CostBenefitFunction(Kind::constant, 0.0, k);
  }
  static CostBenefitFunction linear(double slope, double intercept) {
    check("slope", slope);
    check("intercept", intercept);
    return CostBenefitFunction(Kind::linear, slope, intercept);
  }

  double operator()(double z) const noexcept { return slope_ * z + intercept_; }

  Kind kind() const noexcept { return kind_; }
  double slope() const noexcept { return slope_; }
  /// Value at z = 0; the constant for constant functions.
  double intercept() const noexcept { return intercept_; }

  bool operator==(const CostBenefitFunction&) const = default;

 private:
  CostBenefitFunction(Kind kind, double slope, double intercept)
      : kind_(kind), slope_(slope), intercept_(intercept) {}

  static void check(const char* what, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter(what, "must be finite and >= 0");
  }

  Kind kind_;
  double slope_;
  double intercept_;
};

struct MeetingDomain {
  double z_min = 0.1;
  double z_max = 100.0;
  std::size_t grid_steps = 10000;

  void validate() const {
    if (!(z_min > 0.0)) throw InvalidParameter("z_min", "must be > 0");
    if (!(z_max <= 100.0)) throw InvalidParameter("z_max", "must be <= 100");
    if (!(z_min < z_max)) throw InvalidParameter("z_min", "must be < z_max");
    if (grid_steps < 1) throw InvalidParameter("grid_steps", "must be >= 1");
  }

  double step() const noexcept { return (z_max - z_min) / static_cast<double>(grid_steps); }
  double sample(std::size_t k) const noexcept {
    return k == grid_steps ? z_max : z_min + static_cast<double>(k) * step();
  }

  bool operator==(const MeetingDomain&) const = default;
};

namespace detail {
inline void check_meeting_risk(double rho, double m) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw DomainError("meeting objective undefined: rho must lie in (0, 1], got " + std::to_string(rho));
  if (!(m > 0.0 && m <= 1.0))
    throw DomainError("meeting objective undefined: m must lie in (0, 1], got " + std::to_string(m));
}
}  // namespace detail

/// Life value at which a meeting of exposure z is exactly worth its risk:
/// (B(z) + C(z)) / ((1 - (1 - rho)^z) m).
inline double z_objective(double z, const CostBenefitFunction& benefit_fn,
                          const CostBenefitFunction& cost_fn, double rho, double m) {
  detail::check_meeting_risk(rho, m);
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("meeting objective undefined: z must be > 0");
  const double risk = group_infection_probability(rho, {z, 1.0});
  return (benefit_fn(z) + cost_fn(z)) / (risk * m);
}

struct MeetingOptimum {
  double z_star = 0.0;
  double value = 0.0;
};

namespace detail {

// Golden-section search for a maximum of f on [lo, hi].
template <class F>
MeetingOptimum golden_section_max(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = fc >= fd ? c : d;
  return {x, std::max(fc, fd)};
}

}  // namespace detail

/// Maximizes z_objective over the domain: uniform grid of grid_steps
/// intervals, then one golden-section pass on the bracket around the best
/// grid point. Ties go to the smaller z.
inline MeetingOptimum optimal_meeting(const CostBenefitFunction& benefit_fn,
                                      const CostBenefitFunction& cost_fn, double rho, double m,
                                      const MeetingDomain& domain) {
  domain.validate();
  detail::check_meeting_risk(rho, m);
  auto f = [&](double z) { return z_objective(z, benefit_fn, cost_fn, rho, m); };

  std::size_t best_k = 0;
  double best = f(domain.sample(0));
  for (std::size_t k = 1; k <= domain.grid_steps; ++k) {
    const double v = f(domain.sample(k));
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  MeetingOptimum result{domain.sample(best_k), best};

  const double lo = domain.sample(best_k == 0 ? 0 : best_k - 1);
  const double hi = domain.sample(std::min(best_k + 1, domain.grid_steps));
  const auto refined = detail::golden_section_max(f, lo, hi);
  if (refined.value > result.value) result = refined;
  return result;
}

struct ExtendedDecision {
  GoDecision decision = GoDecision::stay;
  std::optional<double> z_star;  ///< set on go
  double value = 0.0;            ///< maximum of the objective
};

/// Go (at the maximizing exposure) iff the maximized objective exceeds L.
inline ExtendedDecision extended_go_decision(const CostBenefitFunction& benefit_fn,
                                             const CostBenefitFunction& cost_fn, double rho, double m,
                                             double life_value, const MeetingDomain& domain) {
  const auto opt = optimal_meeting(benefit_fn, cost_fn, rho, m, domain);
  ExtendedDecision d;
  d.value = opt.value;
  if (opt.value > life_value) {
    d.decision = GoDecision::go;
    d.z_star = opt.z_star;
  }
  return d;
}

struct CurvePoint {
  double z = 0.0;
  double objective = 0.0;
};

/// grid_steps + 1 evenly spaced samples of z_objective over [z_min, z_max].
inline std::vector<CurvePoint> curve_series(const CostBenefitFunction& benefit_fn,
                                            const CostBenefitFunction& cost_fn, double rho, double m,
                                            const MeetingDomain& domain) {
  domain.validate();
  detail::check_meeting_risk(rho, m);
  std::vector<CurvePoint> out;
  out.reserve(domain.grid_steps + 1);
  for (std::size_t k = 0; k <= domain.grid_steps; ++k) {
    const double z = domain.sample(k);
    out.push_back({z, z_objective(z, benefit_fn, cost_fn, rho, m)});
  }
  return out;
}

}  // namespace pandemic
