#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "foon/core.hpp"

namespace foon::testing {

// The functional unit shown in the ICE task-tree figure, tags as letters.
inline constexpr const char* kIceUnitText =
    "//\n"
    "O drinking glas\n"
    "S empty\n"
    "O bucket\n"
    "S contains {ice}\n"
    "O ice\n"
    "S crushed\n"
    "S frozen\n"
    "S in [bowl]\n"
    "O measuring cup\n"
    "S empty\n"
    "M scoop and pour\n"
    "O drinking glas\n"
    "S contains {ice}\n"
    "O ice\n"
    "S crushed\n"
    "S frozen\n"
    "S in [drinking glass]\n"
    "//\n";

inline ObjectNode object(std::string label, std::initializer_list<StateDescriptor> states = {},
                         std::initializer_list<std::string> ingredients = {}) {
  return ObjectNode{std::move(label), states, ingredients};
}

inline StateDescriptor state(std::string label,
                             std::optional<std::string> container = std::nullopt) {
  return StateDescriptor{std::move(label), std::move(container)};
}

inline FunctionalUnit unit(std::vector<ObjectNode> inputs, std::string motion,
                           std::vector<ObjectNode> outputs, double rate = 1.0,
                           std::size_t index = 0) {
  return FunctionalUnit{std::move(inputs), MotionNode{std::move(motion), rate},
                        std::move(outputs), index};
}

// A --U1--> B --U2--> G
struct Chain {
  ObjectNode a = object("a");
  ObjectNode b = object("b");
  ObjectNode g = object("g");
  FunctionalUnit u1 = unit({a}, "make b", {b}, 1.0, 0);
  FunctionalUnit u2 = unit({b}, "make g", {g}, 1.0, 1);
  FoonGraph graph = build_graph({u1, u2});
  Kitchen kitchen = Kitchen({a});
};

}  // namespace foon::testing
