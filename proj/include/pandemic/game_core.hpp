#pragma once

// Two-player normal-form games over costs (lower is better) and the pure
// solution concepts used throughout: best responses, pure Nash equilibria,
// dominant actions and social optima.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pandemic {

inline constexpr double kDefaultTolerance = 1e-9;

enum class Player { first = 1, second = 2 };

inline Player opponent(Player p) {
  return p == Player::first ? Player::second : Player::first;
}

/// Ordered, non-empty list of uniquely labelled actions of one player.
class ActionSet {
 public:
  explicit ActionSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("ActionSet: at least one action required");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second)
        throw std::invalid_argument("ActionSet: duplicate action label '" + l + "'");
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  bool operator==(const ActionSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct CostPair {
  double p1 = 0.0;
  double p2 = 0.0;
  bool operator==(const CostPair&) const = default;
};

struct StrategyProfile {
  std::size_t action_p1 = 0;
  std::size_t action_p2 = 0;
  auto operator<=>(const StrategyProfile&) const = default;
};

/// Bimatrix of cost pairs, stored row-major: rows are player 1 actions,
/// columns player 2 actions. All entries finite and non-negative.
class CostTable {
 public:
  CostTable(ActionSet actions_p1, ActionSet actions_p2, std::vector<CostPair> costs)
      : actions_p1_(std::move(actions_p1)),
        actions_p2_(std::move(actions_p2)),
        costs_(std::move(costs)) {
    if (costs_.size() != actions_p1_.size() * actions_p2_.size())
      throw std::invalid_argument("CostTable: cost table must cover every action profile");
    for (const auto& c : costs_) {
      if (!std::isfinite(c.p1) || !std::isfinite(c.p2) || c.p1 < 0.0 || c.p2 < 0.0)
        throw std::invalid_argument("CostTable: costs must be finite and non-negative");
    }
  }

  std::size_t rows() const noexcept { return actions_p1_.size(); }
  std::size_t cols() const noexcept { return actions_p2_.size(); }

  const ActionSet& actions(Player p) const noexcept {
    return p == Player::first ? actions_p1_ : actions_p2_;
  }
  std::size_t num_actions(Player p) const noexcept { return actions(p).size(); }

  const CostPair& at(std::size_t row, std::size_t col) const {
    if (row >= rows() || col >= cols()) throw std::out_of_range("CostTable: profile out of range");
    return costs_[row * cols() + col];
  }
  const CostPair& at(StrategyProfile s) const { return at(s.action_p1, s.action_p2); }

  double cost(Player p, StrategyProfile s) const {
    const auto& c = at(s);
    return p == Player::first ? c.p1 : c.p2;
  }

  /// Cost of `player` when playing `own` against the opponent's `other`.
  double cost(Player player, std::size_t own, std::size_t other) const {
    return player == Player::first ? at(own, other).p1 : at(other, own).p2;
  }

  double total_cost(StrategyProfile s) const { return at(s).p1 + at(s).p2; }

  bool contains(StrategyProfile s) const noexcept {
    return s.action_p1 < rows() && s.action_p2 < cols();
  }

  /// All profiles in row-major order.
  std::vector<StrategyProfile> profiles() const {
    std::vector<StrategyProfile> out;
    out.reserve(costs_.size());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) out.push_back({i, j});
    return out;
  }

  /// The same game with the roles of the two players exchanged.
  CostTable transposed() const {
    std::vector<CostPair> t;
    t.reserve(costs_.size());
    for (std::size_t j = 0; j < cols(); ++j)
      for (std::size_t i = 0; i < rows(); ++i) t.push_back({at(i, j).p2, at(i, j).p1});
    return CostTable(actions_p2_, actions_p1_, std::move(t));
  }

  /// Adds `shift` to every cost of one player.
  CostTable shifted(Player p, double shift) const {
    auto c = costs_;
    for (auto& e : c) (p == Player::first ? e.p1 : e.p2) += shift;
    return CostTable(actions_p1_, actions_p2_, std::move(c));
  }

  /// Sub-game keeping only the listed action indices (in the given order).
  CostTable restricted(std::span<const std::size_t> keep_p1, std::span<const std::size_t> keep_p2) const {
    std::vector<std::string> l1, l2;
    for (auto i : keep_p1) l1.push_back(actions_p1_.label(i));
    for (auto j : keep_p2) l2.push_back(actions_p2_.label(j));
    std::vector<CostPair> c;
    for (auto i : keep_p1)
      for (auto j : keep_p2) c.push_back(at(i, j));
    return CostTable(ActionSet(std::move(l1)), ActionSet(std::move(l2)), std::move(c));
  }

  const std::vector<CostPair>& raw() const noexcept { return costs_; }

  bool operator==(const CostTable&) const = default;

 private:
  ActionSet actions_p1_;
  ActionSet actions_p2_;
  std::vector<CostPair> costs_;
};

/// "(in, no)" style rendering of a profile.
inline std::string format_profile(const CostTable& game, StrategyProfile s) {
  return "(" + game.actions(Player::first).label(s.action_p1) + ", " +
         game.actions(Player::second).label(s.action_p2) + ")";
}

namespace detail {
inline void check_tolerance(double tol) {
  if (!(tol >= 0.0) || !std::isfinite(tol))
    throw std::invalid_argument("tolerance must be finite and non-negative");
}
}  // namespace detail

/// Actions of `player` minimizing its cost against a fixed opponent action;
/// every action within `tol` of the minimum is returned, in index order.
inline std::vector<std::size_t> best_responses(const CostTable& game, Player player,
                                               std::size_t opponent_action,
                                               double tol = kDefaultTolerance) {
  detail::check_tolerance(tol);
  if (opponent_action >= game.num_actions(opponent(player)))
    throw std::out_of_range("best_responses: opponent action out of range");
  const std::size_t n = game.num_actions(player);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) best = std::min(best, game.cost(player, a, opponent_action));
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < n; ++a)
    if (game.cost(player, a, opponent_action) <= best + tol) out.push_back(a);
  return out;
}

inline bool is_pure_nash(const CostTable& game, StrategyProfile s, double tol = kDefaultTolerance) {
  if (!game.contains(s)) throw std::out_of_range("is_pure_nash: profile out of range");
  auto br1 = best_responses(game, Player::first, s.action_p2, tol);
  auto br2 = best_responses(game, Player::second, s.action_p1, tol);
  return std::binary_search(br1.begin(), br1.end(), s.action_p1) &&
         std::binary_search(br2.begin(), br2.end(), s.action_p2);
}

/// Profiles where neither player can cut its own cost by more than `tol`
/// through a unilateral deviation. Row-major order.
inline std::vector<StrategyProfile> pure_nash_equilibria(const CostTable& game,
                                                         double tol = kDefaultTolerance) {
  detail::check_tolerance(tol);
  const std::size_t r = game.rows(), c = game.cols();
  // br1[i*c+j]: row i is a best response to column j; br2 likewise for columns.
  std::vector<char> br1(r * c, 0), br2(r * c, 0);
  for (std::size_t j = 0; j < c; ++j)
    for (auto i : best_responses(game, Player::first, j, tol)) br1[i * c + j] = 1;
  for (std::size_t i = 0; i < r; ++i)
    for (auto j : best_responses(game, Player::second, i, tol)) br2[i * c + j] = 1;
  std::vector<StrategyProfile> out;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (br1[i * c + j] && br2[i * c + j]) out.push_back({i, j});
  return out;
}

/// Profiles whose total cost is within `tol` of the global minimum.
inline std::vector<StrategyProfile> social_optima(const CostTable& game,
                                                  double tol = kDefaultTolerance) {
  detail::check_tolerance(tol);
  double best = std::numeric_limits<double>::infinity();
  for (auto s : game.profiles()) best = std::min(best, game.total_cost(s));
  std::vector<StrategyProfile> out;
  for (auto s : game.profiles())
    if (game.total_cost(s) <= best + tol) out.push_back(s);
  return out;
}

enum class Dominance { weak, strict };

/// Actions that minimize `player`'s cost against every opponent action.
/// Weak: ties within `tol` allowed. Strict: beats every other action by
/// more than `tol` in every column.
inline std::vector<std::size_t> dominant_actions(const CostTable& game, Player player,
                                                 Dominance kind = Dominance::weak,
                                                 double tol = kDefaultTolerance) {
  detail::check_tolerance(tol);
  const std::size_t n = game.num_actions(player);
  const std::size_t m = game.num_actions(opponent(player));
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < n; ++a) {
    bool dominant = true;
    for (std::size_t o = 0; o < m && dominant; ++o) {
      const double own = game.cost(player, a, o);
      for (std::size_t alt = 0; alt < n && dominant; ++alt) {
        if (alt == a) continue;
        const double other = game.cost(player, alt, o);
        dominant = kind == Dominance::weak ? own <= other + tol : own < other - tol;
      }
    }
    if (dominant) out.push_back(a);
  }
  return out;
}

struct SolutionReport {
  std::vector<StrategyProfile> pure_nash;
  std::vector<StrategyProfile> social_optima;
  std::vector<std::size_t> dominant_p1;
  std::vector<std::size_t> dominant_p2;
};

inline SolutionReport solve(const CostTable& game, Dominance kind = Dominance::weak,
                            double tol = kDefaultTolerance) {
  return {pure_nash_equilibria(game, tol), social_optima(game, tol),
          dominant_actions(game, Player::first, kind, tol),
          dominant_actions(game, Player::second, kind, tol)};
}

}  // namespace pandemic
