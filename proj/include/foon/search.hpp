#pragma once

// Task-tree retrieval: iterative deepening search and greedy best-first
// search with two unit-selection heuristics.

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "foon/core.hpp"

namespace foon {

enum class Heuristic {
  success_rate,  // highest motion success rate
  input_count,   // fewest input nodes
};

enum class Algorithm { ids, gbfs_a, gbfs_b };

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::ids:
      return "ids";
    case Algorithm::gbfs_a:
      return "gbfs_a";
    case Algorithm::gbfs_b:
      return "gbfs_b";
  }
  return "?";
}

struct SearchConfig {
  int max_depth = 100;
  Heuristic heuristic = Heuristic::success_rate;
};

enum class SearchStatus { solved, unsolvable, depth_exhausted };

inline std::string_view status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::solved:
      return "solved";
    case SearchStatus::unsolvable:
      return "unsolvable";
    case SearchStatus::depth_exhausted:
      return "depth_exhausted";
  }
  return "?";
}

struct SearchStats {
  std::size_t functional_unit_count = 0;
  std::size_t nodes_expanded = 0;
  std::optional<int> final_depth_bound;
  std::chrono::nanoseconds elapsed{0};
};

/// One greedy decision: the item expanded, its producers and the pick.
struct SelectionStep {
  NodeKey item;
  std::vector<std::size_t> candidates;
  std::size_t chosen = 0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::unsolvable;
  std::optional<TaskTree> tree;  // present iff status == solved
  SearchStats stats;
  /// GBFS: the item that could not be produced. IDS: the goal, when the
  /// search space was exhausted without reaching the depth bound.
  std::optional<NodeKey> missing_item;
  std::string message;
  std::vector<SelectionStep> selections;  // GBFS only, in expansion order

  bool solved() const noexcept { return status == SearchStatus::solved; }
};

/// Reverses the goal-first discovery list into execution order and drops
/// repeated units, keeping each unit's earliest execution-order occurrence.
inline TaskTree finalize_tree(std::span<const FunctionalUnit> discovery, NodeKey goal) {
  TaskTree tree;
  tree.goal = std::move(goal);
  std::unordered_set<std::string> seen;
  for (auto it = discovery.rbegin(); it != discovery.rend(); ++it) {
    if (seen.insert(unit_signature(*it)).second) tree.steps.push_back(*it);
  }
  return tree;
}

namespace detail {

inline double heuristic_score(const FunctionalUnit& unit, Heuristic mode) {
  if (mode == Heuristic::success_rate) return unit.motion.success_rate;
  return -static_cast<double>(unit.inputs.size());
}

// Position of the best candidate; ties go to the lowest unit_index.
template <typename UnitAt>
std::size_t select_position(std::size_t count, UnitAt&& unit_at, Heuristic mode) {
  if (count == 0) throw std::invalid_argument("heuristic_select: no candidates");
  std::size_t best = 0;
  double best_score = heuristic_score(unit_at(0), mode);
  for (std::size_t i = 1; i < count; ++i) {
    const FunctionalUnit& u = unit_at(i);
    const double score = heuristic_score(u, mode);
    if (score > best_score ||
        (score == best_score && u.unit_index < unit_at(best).unit_index)) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace detail

inline const FunctionalUnit& heuristic_select(std::span<const FunctionalUnit> candidates,
                                              Heuristic mode) {
  return candidates[detail::select_position(
      candidates.size(), [&](std::size_t i) -> const FunctionalUnit& { return candidates[i]; },
      mode)];
}

inline const FunctionalUnit& heuristic_select(
    std::span<const std::reference_wrapper<const FunctionalUnit>> candidates, Heuristic mode) {
  return candidates[detail::select_position(
      candidates.size(),
      [&](std::size_t i) -> const FunctionalUnit& { return candidates[i].get(); }, mode)];
}

namespace detail {

// One depth-limited pass of the backward recursion. Outputs of accepted units
// are shared with sibling subgoals; a failed unit rolls back everything it
// added. Items already on the recursion path fail immediately.
class DepthLimitedResolver {
 public:
  DepthLimitedResolver(const FoonGraph& graph, const Kitchen& kitchen)
      : graph_(graph), kitchen_(kitchen) {}

  bool run(const NodeKey& goal, int bound) {
    resolved_.clear();
    resolved_log_.clear();
    on_path_.clear();
    completed_.clear();
    cutoff_ = false;
    return resolve(goal, bound);
  }

  bool cutoff() const noexcept { return cutoff_; }
  std::size_t calls() const noexcept { return calls_; }
  /// Accepted units in completion order (leaves first).
  const std::vector<std::size_t>& completed() const noexcept { return completed_; }

 private:
  bool resolve(const NodeKey& item, int depth) {
    ++calls_;
    if (depth < 1) {
      cutoff_ = true;
      return false;
    }
    if (kitchen_.contains(item) || resolved_.contains(item)) return true;
    const auto candidates = graph_.producer_indices(item);
    if (candidates.empty() || on_path_.contains(item)) return false;

    on_path_.insert(item);
    for (std::size_t unit : candidates) {
      const auto completed_mark = completed_.size();
      const auto resolved_mark = resolved_log_.size();
      bool ok = true;
      for (const auto& input : graph_.input_keys(unit)) {
        if (!resolve(input, depth - 1)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        completed_.push_back(unit);
        for (const auto& out : graph_.output_keys(unit)) {
          if (resolved_.insert(out).second) resolved_log_.push_back(out);
        }
        on_path_.erase(item);
        return true;
      }
      completed_.resize(completed_mark);
      while (resolved_log_.size() > resolved_mark) {
        resolved_.erase(resolved_log_.back());
        resolved_log_.pop_back();
      }
    }
    on_path_.erase(item);
    return false;
  }

  const FoonGraph& graph_;
  const Kitchen& kitchen_;
  std::unordered_set<NodeKey> resolved_;
  std::vector<NodeKey> resolved_log_;
  std::unordered_set<NodeKey> on_path_;
  std::vector<std::size_t> completed_;
  std::size_t calls_ = 0;
  bool cutoff_ = false;
};

inline std::vector<FunctionalUnit> goal_first(const FoonGraph& graph,
                                              const std::vector<std::size_t>& execution) {
  std::vector<FunctionalUnit> discovery;
  discovery.reserve(execution.size());
  for (auto it = execution.rbegin(); it != execution.rend(); ++it) {
    discovery.push_back(graph.unit(*it));
  }
  return discovery;
}

}  // namespace detail

/// Depth-limited resolve at exactly `bound`. Exposed for tests of the
/// iterative deepening loop.
inline bool depth_limited_resolve(const FoonGraph& graph, const Kitchen& kitchen,
                                  const NodeKey& goal, int bound) {
  detail::DepthLimitedResolver resolver(graph, kitchen);
  return resolver.run(goal, bound);
}

/// Iterative deepening: bounds 0, 1, ... up to config.max_depth. A pass that
/// fails without ever hitting the bound has explored everything, so larger
/// bounds cannot help and the goal is reported unsolvable.
inline SearchOutcome ids_search(const FoonGraph& graph, const Kitchen& kitchen,
                                const ObjectNode& goal, const SearchConfig& config) {
  if (config.max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const auto goal_key = node_key(goal);

  SearchOutcome outcome;
  detail::DepthLimitedResolver resolver(graph, kitchen);
  for (int bound = 0; bound <= config.max_depth; ++bound) {
    outcome.stats.final_depth_bound = bound;
    if (resolver.run(goal_key, bound)) {
      const auto discovery = detail::goal_first(graph, resolver.completed());
      outcome.tree = finalize_tree(discovery, goal_key);
      outcome.status = SearchStatus::solved;
      outcome.stats.functional_unit_count = outcome.tree->steps.size();
      break;
    }
    if (!resolver.cutoff()) {
      outcome.status = SearchStatus::unsolvable;
      outcome.missing_item = goal_key;
      outcome.message = graph.producer_indices(goal_key).empty()
                            ? "goal has no producers and is not in the kitchen"
                            : "no derivation of the goal from the kitchen exists";
      break;
    }
    if (bound == config.max_depth) {
      outcome.status = SearchStatus::depth_exhausted;
      outcome.message = "depth bound " + std::to_string(bound) + " exhausted";
    }
  }
  outcome.stats.nodes_expanded = resolver.calls();
  outcome.stats.elapsed = std::chrono::steady_clock::now() - start;
  return outcome;
}

/// Greedy best-first search over a FIFO list of items to produce. Each item
/// gets exactly one producing unit chosen by the heuristic; there is no
/// backtracking. The chosen units are then ordered so that every unit runs
/// after the producers of its inputs; a cycle among the choices is a failure.
inline SearchOutcome gbfs_search(const FoonGraph& graph, const Kitchen& kitchen,
                                 const ObjectNode& goal, const SearchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto goal_key = node_key(goal);
  SearchOutcome outcome;
  auto finish = [&]() -> SearchOutcome {
    outcome.stats.elapsed = std::chrono::steady_clock::now() - start;
    return outcome;
  };

  std::deque<NodeKey> items_to_search{goal_key};
  std::unordered_set<NodeKey> visited;
  std::unordered_map<NodeKey, std::size_t> choice;
  while (!items_to_search.empty()) {
    NodeKey item = std::move(items_to_search.front());
    items_to_search.pop_front();
    if (visited.contains(item) || kitchen.contains(item)) continue;
    visited.insert(item);
    ++outcome.stats.nodes_expanded;

    const auto candidates = graph.producer_indices(item);
    if (candidates.empty()) {
      outcome.status = SearchStatus::unsolvable;
      outcome.message = "no functional unit produces '" + item.str() + "'";
      outcome.missing_item = std::move(item);
      return finish();
    }
    const std::size_t chosen = candidates[detail::select_position(
        candidates.size(),
        [&](std::size_t i) -> const FunctionalUnit& { return graph.unit(candidates[i]); },
        config.heuristic)];
    outcome.selections.push_back({item, {candidates.begin(), candidates.end()}, chosen});
    choice.emplace(std::move(item), chosen);
    for (const auto& input : graph.input_keys(chosen)) items_to_search.push_back(input);
  }

  // Depth-first ordering of the chosen units from the goal.
  enum class Mark : unsigned char { none, active, done };
  std::vector<Mark> mark(graph.size(), Mark::none);
  std::vector<std::size_t> execution;
  std::optional<NodeKey> cycle_at;
  std::function<bool(const NodeKey&)> place = [&](const NodeKey& key) {
    if (kitchen.contains(key)) return true;
    const std::size_t unit = choice.at(key);
    if (mark[unit] == Mark::done) return true;
    if (mark[unit] == Mark::active) {
      cycle_at = key;
      return false;
    }
    mark[unit] = Mark::active;
    for (const auto& input : graph.input_keys(unit)) {
      if (!place(input)) return false;
    }
    mark[unit] = Mark::done;
    execution.push_back(unit);
    return true;
  };
  if (!place(goal_key)) {
    outcome.status = SearchStatus::unsolvable;
    outcome.message = "greedy choices form a cycle through '" + cycle_at->str() + "'";
    outcome.missing_item = std::move(cycle_at);
    return finish();
  }

  const auto discovery = detail::goal_first(graph, execution);
  outcome.tree = finalize_tree(discovery, goal_key);
  outcome.status = SearchStatus::solved;
  outcome.stats.functional_unit_count = outcome.tree->steps.size();
  return finish();
}

inline SearchOutcome run_search(const FoonGraph& graph, const Kitchen& kitchen,
                                const ObjectNode& goal, Algorithm algorithm,
                                SearchConfig config = {}) {
  switch (algorithm) {
    case Algorithm::ids:
      return ids_search(graph, kitchen, goal, config);
    case Algorithm::gbfs_a:
      config.heuristic = Heuristic::success_rate;
      return gbfs_search(graph, kitchen, goal, config);
    case Algorithm::gbfs_b:
      config.heuristic = Heuristic::input_count;
      return gbfs_search(graph, kitchen, goal, config);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace foon
