#pragma once

// Graphviz export. Object nodes are boxes whose DOT identifier is their
// NodeKey, so equal objects used by several units collapse into one node.
// Each unit contributes one ellipse for its motion.

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "foon/core.hpp"

namespace foon {

namespace detail {

inline std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string object_caption(const ObjectNode& node) {
  std::string caption = node.label;
  if (!node.states.empty()) {
    caption.push_back('\n');
    bool first = true;
    for (const auto& s : node.states) {
      if (!first) caption += ", ";
      first = false;
      caption += state_text(s);
    }
  }
  if (!node.ingredients.empty()) {
    caption += "\n{";
    bool first = true;
    for (const auto& i : node.ingredients) {
      if (!first) caption += ", ";
      first = false;
      caption += i;
    }
    caption.push_back('}');
  }
  return caption;
}

}  // namespace detail

inline std::string export_dot(std::span<const FunctionalUnit> units,
                              std::string_view name = "foon") {
  std::map<NodeKey, ObjectNode> objects;
  for (const auto& unit : units) {
    for (const auto* list : {&unit.inputs, &unit.outputs}) {
      for (const auto& n : *list) {
        auto normalized = normalize(n);
        objects.try_emplace(node_key(normalized), std::move(normalized));
      }
    }
  }

  std::string out = "digraph " + detail::dot_quote(name) + " {\n";
  for (const auto& [key, node] : objects) {
    out += "  " + detail::dot_quote(key.str()) + " [shape=box, label=" +
           detail::dot_quote(detail::object_caption(node)) + "];\n";
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    out += "  m" + std::to_string(i) + " [shape=ellipse, label=" +
           detail::dot_quote(normalize(units[i].motion.label)) + "];\n";
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto motion = "m" + std::to_string(i);
    for (const auto& n : units[i].inputs) {
      out += "  " + detail::dot_quote(node_key(n).str()) + " -> " + motion + ";\n";
    }
    for (const auto& n : units[i].outputs) {
      out += "  " + motion + " -> " + detail::dot_quote(node_key(n).str()) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

inline std::string export_dot(const FoonGraph& graph) {
  return export_dot(graph.units(), "foon");
}

inline std::string export_dot(const TaskTree& tree) {
  return export_dot(tree.steps, "task_tree");
}

}  // namespace foon
