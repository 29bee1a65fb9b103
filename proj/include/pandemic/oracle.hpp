#pragma once

// Brute-force cross-checks for the analytic results. These deliberately
// avoid the solver code paths they are used to verify.

#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pandemic/errors.hpp"
#include "pandemic/game_core.hpp"

namespace pandemic::oracle {

/// Tests every unilateral deviation of every profile directly.
inline std::vector<StrategyProfile> enumerate_pure_ne(const CostTable& game, double tol = kDefaultTolerance) {
  if (!(tol >= 0.0)) throw std::invalid_argument("enumerate_pure_ne: tol must be >= 0");
  std::vector<StrategyProfile> out;
  const auto& raw = game.raw();
  const std::size_t rows = game.rows(), cols = game.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& here = raw[i * cols + j];
      bool stable = true;
      for (std::size_t k = 0; k < rows && stable; ++k)
        if (raw[k * cols + j].p1 < here.p1 - tol) stable = false;
      for (std::size_t k = 0; k < cols && stable; ++k)
        if (raw[i * cols + k].p2 < here.p2 - tol) stable = false;
      if (stable) out.push_back({i, j});
    }
  }
  return out;
}

struct GridMinimum {
  double x_star = 0.0;
  double f_star = 0.0;
};

/// Minimum of fn over `steps` evenly spaced samples of [lo, hi] (both
/// endpoints included); ties go to the smaller x.
inline GridMinimum grid_argmin(const std::function<double(double)>& fn, double lo, double hi, std::size_t steps) {
  if (!(lo < hi)) throw std::invalid_argument("grid_argmin: requires lo < hi");
  if (steps < 2) throw std::invalid_argument("grid_argmin: requires steps >= 2");
  GridMinimum best{lo, 0.0};
  bool first = true;
  const double h = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t k = 0; k < steps; ++k) {
    const double x = k + 1 == steps ? hi : lo + static_cast<double>(k) * h;
    const double f = fn(x);
    if (!std::isfinite(f)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "grid_argmin: non-finite value at x = " << x;
      throw DomainError(msg.str());
    }
    if (first || f < best.f_star) {
      best = {x, f};
      first = false;
    }
  }
  return best;
}

/// True iff (x_k, fn(x_k)) lie on one line within `tol`.
inline bool check_affine(const std::function<double(double)>& fn, double x1, double x2, double x3, double tol) {
  if (x1 == x2 || x2 == x3 || x1 == x3) throw std::invalid_argument("check_affine: sample points must be distinct");
  const double f1 = fn(x1), f2 = fn(x2), f3 = fn(x3);
  const double predicted = f1 + (f2 - f1) * (x3 - x1) / (x2 - x1);
  return std::abs(f3 - predicted) <= tol;
}

}  // namespace pandemic::oracle
