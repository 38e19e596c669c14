#pragma once

// Domain types for functional object-oriented networks: object and motion
// nodes, functional units, the deduplicated graph with its producer index,
// kitchens, task trees, a tree validator and a forward-chaining oracle.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace foon {

enum class ErrorKind {
  invalid_node,
  invalid_unit,
  schema,
  range,
  duplicate,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Unit index or entry index the error refers to, when there is one.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

/// Lowercases ASCII letters, trims surrounding whitespace and collapses
/// internal whitespace runs to a single space. Non-ASCII bytes pass through.
inline std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

struct StateDescriptor {
  std::string label;
  std::optional<std::string> relative_container;

  auto operator<=>(const StateDescriptor&) const = default;
  bool operator==(const StateDescriptor&) const = default;
};

inline StateDescriptor normalize(const StateDescriptor& state) {
  StateDescriptor out{normalize(state.label), std::nullopt};
  if (state.relative_container) {
    auto container = normalize(*state.relative_container);
    if (!container.empty()) out.relative_container = std::move(container);
  }
  return out;
}

/// "label" or "label [container]".
inline std::string state_text(const StateDescriptor& state) {
  if (!state.relative_container) return state.label;
  return state.label + " [" + *state.relative_container + "]";
}

struct ObjectNode {
  std::string label;
  std::set<StateDescriptor> states;
  std::set<std::string> ingredients;

  bool operator==(const ObjectNode&) const = default;
};

/// Normalized copy. Throws invalid_node when the label or a state label is
/// empty after normalization.
inline ObjectNode normalize(const ObjectNode& node) {
  ObjectNode out;
  out.label = normalize(node.label);
  if (out.label.empty()) {
    throw Error(ErrorKind::invalid_node, "object node has an empty label");
  }
  for (const auto& state : node.states) {
    auto s = normalize(state);
    if (s.label.empty()) {
      throw Error(ErrorKind::invalid_node,
                  "object '" + out.label + "' has a state with an empty label");
    }
    out.states.insert(std::move(s));
  }
  for (const auto& ingredient : node.ingredients) {
    auto i = normalize(ingredient);
    if (!i.empty()) out.ingredients.insert(std::move(i));
  }
  return out;
}

/// Canonical identity of an object node.
class NodeKey {
 public:
  NodeKey() = default;
  explicit NodeKey(std::string canonical) : canonical_(std::move(canonical)) {}

  const std::string& str() const noexcept { return canonical_; }

  auto operator<=>(const NodeKey&) const = default;
  bool operator==(const NodeKey&) const = default;

 private:
  std::string canonical_;
};

namespace detail {

// Escapes every delimiter used by the key grammar so that field boundaries
// are unambiguous.
inline void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '\\':
      case '|':
      case ';':
      case ',':
      case '[':
      case ']':
        out.push_back('\\');
        break;
      default:
        break;
    }
    out.push_back(c);
  }
}

inline std::string canonical_form(const ObjectNode& n) {
  std::string out;
  append_escaped(out, n.label);
  out.push_back('|');
  bool first = true;
  for (const auto& s : n.states) {
    if (!first) out.push_back(';');
    first = false;
    append_escaped(out, s.label);
    if (s.relative_container) {
      out.push_back('[');
      append_escaped(out, *s.relative_container);
      out.push_back(']');
    }
  }
  out.push_back('|');
  first = true;
  for (const auto& i : n.ingredients) {
    if (!first) out.push_back(',');
    first = false;
    append_escaped(out, i);
  }
  return out;
}

}  // namespace detail

inline NodeKey node_key(const ObjectNode& node) {
  return NodeKey(detail::canonical_form(normalize(node)));
}

struct MotionNode {
  std::string label;
  double success_rate = 1.0;

  bool operator==(const MotionNode&) const = default;
};

struct FunctionalUnit {
  std::vector<ObjectNode> inputs;
  MotionNode motion;
  std::vector<ObjectNode> outputs;
  std::size_t unit_index = 0;

  bool operator==(const FunctionalUnit&) const = default;
};

/// Structural identity of a unit: sorted input keys, motion label, sorted
/// output keys. unit_index and success_rate do not participate.
inline std::string unit_signature(const FunctionalUnit& unit) {
  auto sorted_keys = [](const std::vector<ObjectNode>& nodes) {
    std::vector<std::string> keys;
    keys.reserve(nodes.size());
    for (const auto& n : nodes) keys.push_back(node_key(n).str());
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  std::string sig;
  auto append_field = [&sig](std::string_view field) {
    sig += std::to_string(field.size());
    sig.push_back(':');
    sig += field;
  };
  const auto in = sorted_keys(unit.inputs);
  const auto out = sorted_keys(unit.outputs);
  sig += std::to_string(in.size()) + "<";
  for (const auto& k : in) append_field(k);
  append_field(normalize(unit.motion.label));
  sig += std::to_string(out.size()) + ">";
  for (const auto& k : out) append_field(k);
  return sig;
}

}  // namespace foon

template <>
struct std::hash<foon::NodeKey> {
  std::size_t operator()(const foon::NodeKey& key) const noexcept {
    return std::hash<std::string>{}(key.str());
  }
};

namespace foon {

class FoonGraph;
inline FoonGraph build_graph(std::vector<FunctionalUnit> units);

/// Deduplicated unit store with a producer index. Immutable once built.
class FoonGraph {
 public:
  FoonGraph() = default;

  std::span<const FunctionalUnit> units() const noexcept { return units_; }
  const FunctionalUnit& unit(std::size_t index) const { return units_.at(index); }
  std::size_t size() const noexcept { return units_.size(); }
  bool empty() const noexcept { return units_.empty(); }

  std::span<const NodeKey> input_keys(std::size_t index) const {
    return input_keys_.at(index);
  }
  std::span<const NodeKey> output_keys(std::size_t index) const {
    return output_keys_.at(index);
  }
  const std::string& signature(std::size_t index) const {
    return signatures_.at(index);
  }

  /// Ascending unit indices of the units that output `key`.
  std::span<const std::size_t> producer_indices(const NodeKey& key) const {
    auto it = producers_.find(key);
    if (it == producers_.end()) return {};
    return it->second;
  }

  std::optional<std::size_t> find_unit(const std::string& signature) const {
    auto it = by_signature_.find(signature);
    if (it == by_signature_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of distinct object-node keys appearing in any unit.
  std::size_t node_count() const noexcept { return node_count_; }

  const std::unordered_map<NodeKey, std::vector<std::size_t>>& producer_index()
      const noexcept {
    return producers_;
  }

  bool operator==(const FoonGraph& other) const {
    return units_ == other.units_ && producers_ == other.producers_;
  }

 private:
  friend FoonGraph build_graph(std::vector<FunctionalUnit> units);

  std::vector<FunctionalUnit> units_;
  std::vector<std::vector<NodeKey>> input_keys_;
  std::vector<std::vector<NodeKey>> output_keys_;
  std::vector<std::string> signatures_;
  std::unordered_map<NodeKey, std::vector<std::size_t>> producers_;
  std::unordered_map<std::string, std::size_t> by_signature_;
  std::size_t node_count_ = 0;
};

/// Builds the graph, dropping structural duplicates (first occurrence wins)
/// and renumbering surviving units densely in their original order.
inline FoonGraph build_graph(std::vector<FunctionalUnit> units) {
  FoonGraph g;
  std::unordered_set<NodeKey> seen_keys;
  for (auto& unit : units) {
    if (unit.inputs.empty() || unit.outputs.empty()) {
      throw Error(ErrorKind::invalid_unit,
                  "functional unit " + std::to_string(unit.unit_index) +
                      " has no " + (unit.inputs.empty() ? "inputs" : "outputs"),
                  unit.unit_index);
    }
    const double rate = unit.motion.success_rate;
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw Error(ErrorKind::range,
                  "functional unit " + std::to_string(unit.unit_index) +
                      " has a motion success rate outside [0, 1]",
                  unit.unit_index);
    }
    FunctionalUnit normalized;
    try {
      for (const auto& n : unit.inputs) normalized.inputs.push_back(normalize(n));
      for (const auto& n : unit.outputs) normalized.outputs.push_back(normalize(n));
    } catch (const Error& e) {
      throw Error(ErrorKind::invalid_unit,
                  "functional unit " + std::to_string(unit.unit_index) + ": " +
                      e.what(),
                  unit.unit_index);
    }
    normalized.motion = {normalize(unit.motion.label), rate};

    auto sig = unit_signature(normalized);
    if (g.by_signature_.contains(sig)) continue;

    const std::size_t index = g.units_.size();
    normalized.unit_index = index;
    std::vector<NodeKey> in_keys, out_keys;
    for (const auto& n : normalized.inputs) in_keys.push_back(node_key(n));
    for (const auto& n : normalized.outputs) out_keys.push_back(node_key(n));
    for (const auto& k : out_keys) {
      auto& list = g.producers_[k];
      if (list.empty() || list.back() != index) list.push_back(index);
    }
    seen_keys.insert(in_keys.begin(), in_keys.end());
    seen_keys.insert(out_keys.begin(), out_keys.end());

    g.by_signature_.emplace(sig, index);
    g.signatures_.push_back(std::move(sig));
    g.input_keys_.push_back(std::move(in_keys));
    g.output_keys_.push_back(std::move(out_keys));
    g.units_.push_back(std::move(normalized));
  }
  g.node_count_ = seen_keys.size();
  return g;
}

/// Units whose outputs contain `key`, by ascending unit_index.
inline std::vector<std::reference_wrapper<const FunctionalUnit>> producers(
    const FoonGraph& graph, const NodeKey& key) {
  std::vector<std::reference_wrapper<const FunctionalUnit>> out;
  for (std::size_t i : graph.producer_indices(key)) out.emplace_back(graph.unit(i));
  return out;
}

/// Set of available items, compared by NodeKey.
class Kitchen {
 public:
  Kitchen() = default;

  explicit Kitchen(const std::vector<ObjectNode>& nodes) {
    for (const auto& n : nodes) add(n);
  }

  /// Returns false when an equal item was already present.
  bool add(const ObjectNode& node) {
    auto normalized = normalize(node);
    auto key = node_key(normalized);
    if (!keys_.insert(key).second) return false;
    nodes_.push_back(std::move(normalized));
    return true;
  }

  bool contains(const NodeKey& key) const { return keys_.contains(key); }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  const std::unordered_set<NodeKey>& keys() const noexcept { return keys_; }
  std::span<const ObjectNode> nodes() const noexcept { return nodes_; }

 private:
  std::unordered_set<NodeKey> keys_;
  std::vector<ObjectNode> nodes_;
};

/// Execution-ordered steps: leaves first, goal-producing unit last.
struct TaskTree {
  std::vector<FunctionalUnit> steps;
  NodeKey goal;
};

/// Forward-chaining saturation restricted to `units`: starting from the
/// kitchen, fire every unit whose inputs are all available until nothing
/// changes. Returns whether `goal` becomes available.
inline bool reachable_with(std::span<const FunctionalUnit> units,
                           const Kitchen& kitchen, const NodeKey& goal) {
  std::unordered_set<NodeKey> available = kitchen.keys();
  if (available.contains(goal)) return true;

  std::vector<std::vector<NodeKey>> in(units.size()), out(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (const auto& n : units[i].inputs) in[i].push_back(node_key(n));
    for (const auto& n : units[i].outputs) out[i].push_back(node_key(n));
  }
  std::vector<bool> fired(units.size(), false);
  for (std::size_t round = 0; round <= units.size(); ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (fired[i]) continue;
      const bool ready = std::all_of(in[i].begin(), in[i].end(), [&](const NodeKey& k) {
        return available.contains(k);
      });
      if (!ready) continue;
      fired[i] = true;
      changed = true;
      available.insert(out[i].begin(), out[i].end());
    }
    if (available.contains(goal)) return true;
    if (!changed) break;
  }
  return false;
}

/// Brute-force ground truth for retrieval: is `goal` derivable at all?
inline bool reachable_oracle(const FoonGraph& graph, const Kitchen& kitchen,
                             const NodeKey& goal) {
  return reachable_with(graph.units(), kitchen, goal);
}

struct Violation {
  enum class Kind {
    unavailable_input,
    goal_not_produced,
    goal_not_in_kitchen,
    duplicate_unit,
    unknown_unit,
  };
  Kind kind;
  std::optional<std::size_t> step;
  std::optional<NodeKey> key;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline ValidationReport validate_tree(const FoonGraph& graph, const Kitchen& kitchen,
                                      const TaskTree& tree) {
  ValidationReport report;
  auto add = [&report](Violation::Kind kind, std::optional<std::size_t> step,
                       std::optional<NodeKey> key, std::string message) {
    report.violations.push_back({kind, step, std::move(key), std::move(message)});
  };

  if (tree.steps.empty()) {
    if (!kitchen.contains(tree.goal)) {
      add(Violation::Kind::goal_not_in_kitchen, std::nullopt, tree.goal,
          "empty task tree but the goal is not in the kitchen");
    }
    return report;
  }

  std::unordered_set<NodeKey> produced;
  std::unordered_set<std::string> signatures;
  for (std::size_t i = 0; i < tree.steps.size(); ++i) {
    const auto& step = tree.steps[i];
    auto sig = unit_signature(step);
    if (!graph.find_unit(sig)) {
      add(Violation::Kind::unknown_unit, i, std::nullopt,
          "step " + std::to_string(i) + " is not a unit of the graph");
    }
    if (!signatures.insert(std::move(sig)).second) {
      add(Violation::Kind::duplicate_unit, i, std::nullopt,
          "step " + std::to_string(i) + " duplicates an earlier step");
    }
    for (const auto& input : step.inputs) {
      auto key = node_key(input);
      if (!kitchen.contains(key) && !produced.contains(key)) {
        add(Violation::Kind::unavailable_input, i, key,
            "step " + std::to_string(i) + " input '" + key.str() +
                "' is neither in the kitchen nor produced earlier");
      }
    }
    for (const auto& output : step.outputs) produced.insert(node_key(output));
  }

  const auto& last = tree.steps.back();
  const bool outputs_goal =
      std::any_of(last.outputs.begin(), last.outputs.end(),
                  [&](const ObjectNode& n) { return node_key(n) == tree.goal; });
  if (!outputs_goal) {
    add(Violation::Kind::goal_not_produced, tree.steps.size() - 1, tree.goal,
        "final step does not output the goal");
  }
  return report;
}

}  // namespace foon
