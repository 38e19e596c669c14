#pragma once

// Batch driver behind the `foon` command: loads the network, kitchen, goals
// and optional motion rates, runs the selected algorithms for every goal,
// writes the retrieved trees and builds the report.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "foon/core.hpp"
#include "foon/dot.hpp"
#include "foon/parse.hpp"
#include "foon/search.hpp"

namespace foon::cli {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUnsolved = 2;

struct RunOptions {
  std::filesystem::path foon;
  std::filesystem::path kitchen;
  std::filesystem::path goals;
  std::optional<std::filesystem::path> motion_rates;
  std::vector<Algorithm> algorithms{Algorithm::ids, Algorithm::gbfs_a, Algorithm::gbfs_b};
  int max_depth = 100;
  std::filesystem::path out_dir = "output";
  bool emit_dot = false;
  std::optional<std::filesystem::path> report;
  unsigned jobs = 1;
};

struct ReportRow {
  std::size_t goal_index = 0;
  std::string goal_label;
  Algorithm algorithm = Algorithm::ids;
  std::optional<std::size_t> functional_unit_count;
  std::size_t nodes_expanded = 0;
  std::chrono::nanoseconds elapsed{0};
  SearchStatus status = SearchStatus::unsolvable;
  std::optional<std::filesystem::path> tree_file;
};

struct RunReport {
  std::vector<ReportRow> rows;

  bool all_solved() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const ReportRow& r) { return r.status == SearchStatus::solved; });
  }
};

struct Inputs {
  FoonGraph graph;
  Kitchen kitchen;
  std::vector<ObjectNode> goals;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << content;
}

/// Loads every input. Diagnostics go to `err`; returns nullopt on any error.
inline std::optional<Inputs> load_inputs(const RunOptions& options, std::ostream& err) {
  try {
    const auto foon_text = read_file(options.foon);
    auto parsed = parse_foon_text(foon_text);
    for (const auto& d : parsed.diagnostics) {
      err << options.foon.string() << ':' << d.line_number << ": "
          << (d.is_error() ? "error" : "warning") << ": " << d.message << '\n';
    }
    if (!parsed.ok()) return std::nullopt;

    if (options.motion_rates) {
      const auto rates = parse_motion_rates(read_file(*options.motion_rates));
      for (const auto& w : apply_motion_rates(parsed.units, rates)) {
        err << options.motion_rates->string() << ": warning: " << w << '\n';
      }
    }

    Inputs inputs;
    inputs.graph = build_graph(std::move(parsed.units));
    inputs.kitchen = parse_kitchen(read_file(options.kitchen));
    auto goals = parse_goals(read_file(options.goals));
    for (const auto& w : goals.warnings) {
      err << options.goals.string() << ": warning: " << w << '\n';
    }
    inputs.goals = std::move(goals.goals);
    return inputs;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

/// File-name stems: normalized label, spaces and path-unsafe characters
/// replaced by '_', repeats suffixed "_2", "_3", ...
inline std::vector<std::string> goal_slugs(const std::vector<ObjectNode>& goals) {
  std::vector<std::string> slugs;
  std::map<std::string, int> uses;
  for (const auto& goal : goals) {
    std::string slug = normalize(goal.label);
    for (char& c : slug) {
      const auto u = static_cast<unsigned char>(c);
      if (!(std::isalnum(u) || c == '-' || c == '.' || u >= 0x80)) c = '_';
    }
    if (slug.empty() || slug.front() == '.') slug.insert(slug.begin(), '_');
    const int n = ++uses[slug];
    slugs.push_back(n == 1 ? slug : slug + "_" + std::to_string(n));
  }
  return slugs;
}

/// Searches every goal with every requested algorithm and writes
/// `<out_dir>/<slug>_<algorithm>.txt` (and `.dot`) for each solved pair.
inline RunReport run_goals(const Inputs& inputs, const RunOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  const auto slugs = goal_slugs(inputs.goals);
  const std::size_t per_goal = options.algorithms.size();
  std::vector<ReportRow> rows(inputs.goals.size() * per_goal);

  auto work = [&](std::size_t g) {
    const auto& goal = inputs.goals[g];
    for (std::size_t a = 0; a < per_goal; ++a) {
      const Algorithm algorithm = options.algorithms[a];
      SearchConfig config;
      config.max_depth = options.max_depth;
      auto outcome = run_search(inputs.graph, inputs.kitchen, goal, algorithm, config);

      ReportRow& row = rows[g * per_goal + a];
      row.goal_index = g;
      row.goal_label = normalize(goal.label);
      row.algorithm = algorithm;
      row.nodes_expanded = outcome.stats.nodes_expanded;
      row.elapsed = outcome.stats.elapsed;
      row.status = outcome.status;
      if (!outcome.solved()) continue;

      const auto validation = validate_tree(inputs.graph, inputs.kitchen, *outcome.tree);
      if (!validation.ok()) {
        throw std::logic_error("retrieved tree failed validation: " +
                               validation.violations.front().message);
      }
      row.functional_unit_count = outcome.stats.functional_unit_count;
      const auto stem = slugs[g] + "_" + std::string(algorithm_name(algorithm));
      row.tree_file = options.out_dir / (stem + ".txt");
      write_file(*row.tree_file, serialize_task_tree(*outcome.tree));
      if (options.emit_dot) {
        write_file(options.out_dir / (stem + ".dot"), export_dot(*outcome.tree));
      }
    }
  };

  const unsigned jobs =
      std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(inputs.goals.size())));
  if (jobs <= 1) {
    for (std::size_t g = 0; g < inputs.goals.size(); ++g) work(g);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> workers;
      for (unsigned j = 0; j < jobs; ++j) {
        workers.emplace_back([&] {
          for (std::size_t g = next++; g < inputs.goals.size(); g = next++) {
            try {
              work(g);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return RunReport{std::move(rows)};
}

inline std::string format_ms(std::chrono::nanoseconds d) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3)
      << std::chrono::duration<double, std::milli>(d).count();
  return out.str();
}

namespace detail {

inline std::string render_table(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += row[c];
      if (c + 1 < row.size()) line.append(width[c] - row[c].size(), ' ');
    }
    out += line + '\n';
  }
  return out;
}

}  // namespace detail

inline std::string format_report(const RunReport& report) {
  std::vector<std::vector<std::string>> cells{
      {"goal", "algorithm", "units", "expanded", "time_ms", "status"}};
  for (const auto& r : report.rows) {
    cells.push_back({r.goal_label, std::string(algorithm_name(r.algorithm)),
                     r.functional_unit_count ? std::to_string(*r.functional_unit_count) : "-",
                     std::to_string(r.nodes_expanded), format_ms(r.elapsed),
                     std::string(status_name(r.status))});
  }
  return detail::render_table(cells);
}

/// Goals down, algorithms across, functional-unit counts in the cells.
inline std::string format_pivot(const RunReport& report) {
  std::vector<std::vector<std::string>> cells{{"goal", "IDS", "GBFS-h1", "GBFS-h2"}};
  std::optional<std::size_t> current;
  for (const auto& r : report.rows) {
    if (r.goal_index != current) {
      cells.push_back({r.goal_label, "-", "-", "-"});
      current = r.goal_index;
    }
    if (r.functional_unit_count) {
      cells.back()[static_cast<std::size_t>(r.algorithm) + 1] =
          std::to_string(*r.functional_unit_count);
    }
  }
  return detail::render_table(cells);
}

inline nlohmann::json report_json(const RunReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row{
        {"goal_label", r.goal_label},
        {"algorithm", algorithm_name(r.algorithm)},
        {"functional_unit_count", nullptr},
        {"nodes_expanded", r.nodes_expanded},
        {"elapsed_ms", std::chrono::duration<double, std::milli>(r.elapsed).count()},
        {"status", status_name(r.status)},
    };
    if (r.functional_unit_count) row["functional_unit_count"] = *r.functional_unit_count;
    if (r.tree_file) row["tree_file"] = r.tree_file->string();
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"rows", std::move(rows)}};
}

/// Runs the pipeline and returns the process exit code.
inline int run(const RunOptions& options, std::ostream& out, std::ostream& err,
               bool pivot = false) {
  auto inputs = load_inputs(options, err);
  if (!inputs) return kExitInputError;

  RunReport report;
  try {
    report = run_goals(*inputs, options);
    if (options.report) write_file(*options.report, report_json(report).dump(2) + "\n");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  out << format_report(report);
  if (pivot) out << '\n' << format_pivot(report);
  return report.all_solved() ? kExitOk : kExitUnsolved;
}

/// Same as run() with all three algorithms forced and the pivoted summary.
inline int bench(RunOptions options, std::ostream& out, std::ostream& err) {
  options.algorithms = {Algorithm::ids, Algorithm::gbfs_a, Algorithm::gbfs_b};
  return run(options, out, err, true);
}

}  // namespace foon::cli
