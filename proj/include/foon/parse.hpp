#pragma once

// Reader and writer for the line-oriented FOON text format, plus the JSON
// readers for kitchens, goal lists and motion success rates.
//
// Text format, one tag per line:
//
//   //                  unit delimiter
//   O <label>           object node; inputs before the M line, outputs after
//   S <payload>         state of the most recent O line
//   M <label>           motion node
//
// An S payload is a state label with optional "[container]" and
// "{a, b}" groups, e.g. "in [bowl]" or "contains {ice}". A payload made of a
// "{...}" group alone only contributes ingredients.

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "foon/core.hpp"

namespace foon {

struct ParseDiagnostic {
  enum class Severity { warning, error };

  std::size_t line_number = 0;  // 1-based
  std::string message;
  Severity severity = Severity::error;

  bool is_error() const noexcept { return severity == Severity::error; }
};

struct FoonParseResult {
  std::vector<FunctionalUnit> units;  // empty whenever ok() is false
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const noexcept {
    for (const auto& d : diagnostics) {
      if (d.is_error()) return false;
    }
    return true;
  }
};

/// Result of splitting one S payload.
struct StatePayload {
  std::optional<StateDescriptor> state;  // absent for an ingredient-only line
  std::set<std::string> ingredients;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Splits an S payload into its state and ingredients. On malformed input
/// returns the error message instead.
inline std::pair<std::optional<StatePayload>, std::string> parse_state_payload(
    std::string_view payload) {
  std::string label;
  std::optional<std::string> container;
  StatePayload out;
  bool had_group = false;

  std::size_t i = 0;
  while (i < payload.size()) {
    const char c = payload[i];
    if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      const auto end = payload.find(close, i + 1);
      if (end == std::string_view::npos) {
        return {std::nullopt, std::string("unterminated '") + c + "' group"};
      }
      const auto body = payload.substr(i + 1, end - i - 1);
      if (body.find_first_of("{}[]") != std::string_view::npos) {
        return {std::nullopt, "nested or mismatched brackets"};
      }
      had_group = true;
      if (c == '{') {
        std::size_t start = 0;
        while (start <= body.size()) {
          auto comma = body.find(',', start);
          if (comma == std::string_view::npos) comma = body.size();
          auto item = normalize(body.substr(start, comma - start));
          if (!item.empty()) out.ingredients.insert(std::move(item));
          start = comma + 1;
        }
      } else {
        auto normalized = normalize(body);
        if (normalized.empty()) return {std::nullopt, "empty container '[]'"};
        if (container && *container != normalized) {
          return {std::nullopt, "more than one container"};
        }
        container = std::move(normalized);
      }
      label.push_back(' ');
      i = end + 1;
      continue;
    }
    if (c == '}' || c == ']') {
      return {std::nullopt, std::string("unmatched '") + c + "'"};
    }
    label.push_back(c);
    ++i;
  }

  auto normalized = normalize(label);
  if (normalized.empty()) {
    if (container) return {std::nullopt, "container given without a state label"};
    if (!had_group) return {std::nullopt, "empty state"};
    return {std::move(out), {}};
  }
  out.state = StateDescriptor{std::move(normalized), std::move(container)};
  return {std::move(out), {}};
}

inline FoonParseResult parse_foon_text(std::string_view text) {
  FoonParseResult result;
  auto diag = [&result](std::size_t line, std::string msg,
                        ParseDiagnostic::Severity sev = ParseDiagnostic::Severity::error) {
    result.diagnostics.push_back({line, std::move(msg), sev});
  };

  struct Block {
    std::vector<ObjectNode> inputs;
    std::vector<ObjectNode> outputs;
    std::optional<std::string> motion;
    std::size_t motion_line = 0;
    std::size_t first_line = 0;
    ObjectNode* current = nullptr;
    bool content = false;
    bool broken = false;
    bool opened_by_delimiter = false;
  };

  Block block;
  bool any_error = false;

  auto finish = [&](bool closed_by_delimiter, std::size_t line) {
    if (!block.content) {
      if (block.opened_by_delimiter && closed_by_delimiter) {
        diag(line, "empty functional unit skipped", ParseDiagnostic::Severity::warning);
      }
      return;
    }
    if (block.broken) return;
    if (!block.motion) {
      diag(block.first_line, "functional unit has no M line");
      any_error = true;
      return;
    }
    if (block.outputs.empty()) {
      diag(block.motion_line, "functional unit has no output objects");
      any_error = true;
      return;
    }
    FunctionalUnit unit;
    unit.inputs = std::move(block.inputs);
    unit.outputs = std::move(block.outputs);
    unit.motion = MotionNode{*block.motion, 1.0};
    unit.unit_index = result.units.size();
    result.units.push_back(std::move(unit));
  };

  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_number;

    if (line.empty()) continue;
    if (line.starts_with("//")) {
      finish(true, line_number);
      block = Block{};
      block.opened_by_delimiter = true;
      continue;
    }

    const auto split = line.find_first_of(" \t");
    const auto tag = line.substr(0, split);
    const auto payload =
        split == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(split));
    const std::string tag_lower = normalize(tag);

    if (tag_lower != "o" && tag_lower != "s" && tag_lower != "m") {
      diag(line_number, "unknown line tag '" + std::string(tag) + "' ignored",
           ParseDiagnostic::Severity::warning);
      continue;
    }
    if (!block.content) {
      block.content = true;
      block.first_line = line_number;
    }
    auto fail = [&](std::string msg) {
      diag(line_number, std::move(msg));
      block.broken = true;
      any_error = true;
    };

    if (tag_lower == "o") {
      auto label = normalize(payload);
      if (label.empty()) {
        fail("object line without a label");
        continue;
      }
      auto& list = block.motion ? block.outputs : block.inputs;
      list.push_back(ObjectNode{std::move(label), {}, {}});
      block.current = &list.back();
    } else if (tag_lower == "s") {
      if (block.current == nullptr) {
        fail("state line with no preceding object line");
        continue;
      }
      auto [parsed, error] = parse_state_payload(payload);
      if (!parsed) {
        fail("malformed state: " + error);
        continue;
      }
      if (parsed->state) block.current->states.insert(std::move(*parsed->state));
      block.current->ingredients.merge(parsed->ingredients);
    } else {
      if (block.motion) {
        fail("second M line in one functional unit");
        continue;
      }
      if (block.inputs.empty()) {
        fail("motion line with no preceding object line");
        continue;
      }
      auto label = normalize(payload);
      if (label.empty()) {
        fail("motion line without a label");
        continue;
      }
      block.motion = std::move(label);
      block.motion_line = line_number;
      block.current = nullptr;
    }
  }
  finish(false, line_number);

  if (any_error) result.units.clear();
  return result;
}

namespace detail {

inline void write_object(std::string& out, const ObjectNode& raw) {
  const auto node = normalize(raw);
  out += "O ";
  out += node.label;
  out.push_back('\n');

  std::string ingredients;
  if (!node.ingredients.empty()) {
    ingredients = " {";
    bool first = true;
    for (const auto& i : node.ingredients) {
      if (!first) ingredients += ", ";
      first = false;
      ingredients += i;
    }
    ingredients.push_back('}');
  }

  bool ingredients_written = node.ingredients.empty();
  for (const auto& state : node.states) {
    out += "S ";
    out += state_text(state);
    if (!ingredients_written && state.label == "contains") {
      out += ingredients;
      ingredients_written = true;
    }
    out.push_back('\n');
  }
  if (!ingredients_written) {
    out += "S";
    out += ingredients;
    out.push_back('\n');
  }
}

}  // namespace detail

/// Canonical FOON text for `units` in the given order: a leading "//" and one
/// closing "//" per unit. Empty input gives an empty string.
inline std::string serialize_units(std::span<const FunctionalUnit> units) {
  if (units.empty()) return {};
  std::string out = "//\n";
  for (const auto& unit : units) {
    for (const auto& n : unit.inputs) detail::write_object(out, n);
    out += "M ";
    out += normalize(unit.motion.label);
    out.push_back('\n');
    for (const auto& n : unit.outputs) detail::write_object(out, n);
    out += "//\n";
  }
  return out;
}

inline std::string serialize_task_tree(const TaskTree& tree) {
  return serialize_units(tree.steps);
}

// ---------------------------------------------------------------------------
// JSON documents

namespace detail {

inline nlohmann::json parse_json(std::string_view text, std::string_view what,
                                 nlohmann::json::parser_callback_t cb = nullptr) {
  try {
    return nlohmann::json::parse(text.begin(), text.end(), cb);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::schema, "malformed " + std::string(what) + ": " + e.what());
  }
}

inline ObjectNode node_from_record(const nlohmann::json& entry, std::size_t index,
                                   std::string_view what) {
  const auto where = std::string(what) + " entry " + std::to_string(index);
  auto schema_error = [&](const std::string& msg) {
    return Error(ErrorKind::schema, where + ": " + msg, index);
  };
  if (!entry.is_object()) throw schema_error("expected an object");
  auto label = entry.find("label");
  if (label == entry.end()) throw schema_error("missing \"label\"");
  if (!label->is_string()) throw schema_error("\"label\" must be a string");

  ObjectNode node;
  node.label = normalize(label->get<std::string>());
  if (node.label.empty()) throw schema_error("\"label\" is empty");

  auto string_list = [&](const char* field) {
    std::vector<std::string> out;
    auto it = entry.find(field);
    if (it == entry.end() || it->is_null()) return out;
    if (!it->is_array()) throw schema_error(std::string("\"") + field + "\" must be a list");
    for (const auto& v : *it) {
      if (!v.is_string()) {
        throw schema_error(std::string("\"") + field + "\" must contain only strings");
      }
      out.push_back(v.get<std::string>());
    }
    return out;
  };

  for (const auto& s : string_list("states")) {
    auto [parsed, error] = parse_state_payload(s);
    if (!parsed) throw schema_error("state \"" + s + "\": " + error);
    if (parsed->state) node.states.insert(std::move(*parsed->state));
    node.ingredients.merge(parsed->ingredients);
  }
  for (const auto& i : string_list("ingredients")) {
    auto normalized = normalize(i);
    if (!normalized.empty()) node.ingredients.insert(std::move(normalized));
  }
  return node;
}

inline std::vector<ObjectNode> parse_records(std::string_view text, std::string_view what) {
  const auto doc = parse_json(text, what);
  if (!doc.is_array()) {
    throw Error(ErrorKind::schema, std::string(what) + " must be a JSON list of records");
  }
  std::vector<ObjectNode> nodes;
  nodes.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    nodes.push_back(node_from_record(doc[i], i, what));
  }
  return nodes;
}

}  // namespace detail

/// Kitchen from a JSON list of {label, states, ingredients} records.
inline Kitchen parse_kitchen(std::string_view text) {
  return Kitchen(detail::parse_records(text, "kitchen"));
}

struct GoalList {
  std::vector<ObjectNode> goals;  // file order, duplicates kept
  std::vector<std::string> warnings;
};

inline GoalList parse_goals(std::string_view text) {
  GoalList out;
  out.goals = detail::parse_records(text, "goals");
  std::map<NodeKey, std::size_t> first_seen;
  for (std::size_t i = 0; i < out.goals.size(); ++i) {
    auto [it, inserted] = first_seen.emplace(node_key(out.goals[i]), i);
    if (!inserted) {
      out.warnings.push_back("goal entry " + std::to_string(i) + " duplicates entry " +
                             std::to_string(it->second));
    }
  }
  return out;
}

/// Normalized motion label -> success rate in [0, 1].
using MotionRates = std::map<std::string, double>;

inline MotionRates parse_motion_rates(std::string_view text) {
  // nlohmann keeps the last of repeated keys, so repeats are caught while
  // parsing.
  std::vector<std::string> raw_keys;
  auto doc = detail::parse_json(
      text, "motion rates",
      [&raw_keys](int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
        if (depth == 1 && event == nlohmann::json::parse_event_t::key) {
          raw_keys.push_back(parsed.get<std::string>());
        }
        return true;
      });
  if (!doc.is_object()) {
    throw Error(ErrorKind::schema, "motion rates must be a JSON object");
  }
  MotionRates rates;
  std::set<std::string> seen;
  for (const auto& raw : raw_keys) {
    auto label = normalize(raw);
    if (label.empty()) throw Error(ErrorKind::schema, "motion rates: empty motion label");
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::duplicate, "motion rates: duplicate motion '" + label + "'");
    }
  }
  for (const auto& [raw, value] : doc.items()) {
    auto label = normalize(raw);
    if (!value.is_number()) {
      throw Error(ErrorKind::schema, "motion rates: value for '" + label + "' is not a number");
    }
    const double rate = value.get<double>();
    if (!(rate >= 0.0 && rate <= 1.0)) {
      std::ostringstream msg;
      msg << "motion rates: rate " << rate << " for '" << label << "' is outside [0, 1]";
      throw Error(ErrorKind::range, msg.str());
    }
    rates.emplace(std::move(label), rate);
  }
  return rates;
}

/// Sets each motion's success rate from `rates`. Motions missing from the map
/// get 1.0; one warning is returned per distinct missing label.
inline std::vector<std::string> apply_motion_rates(std::vector<FunctionalUnit>& units,
                                                   const MotionRates& rates) {
  std::vector<std::string> warnings;
  std::set<std::string> missing;
  for (auto& unit : units) {
    auto label = normalize(unit.motion.label);
    if (auto it = rates.find(label); it != rates.end()) {
      unit.motion.success_rate = it->second;
      continue;
    }
    unit.motion.success_rate = 1.0;
    if (missing.insert(label).second) {
      warnings.push_back("no success rate for motion '" + label + "', using 1.0");
    }
  }
  return warnings;
}

}  // namespace foon
