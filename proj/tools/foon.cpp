// foon: task-tree retrieval from a functional object-oriented network.
//
//   foon run   --foon FOON.txt --kitchen kitchen.json --goals goal_nodes.json
//   foon bench --foon FOON.txt --kitchen kitchen.json --goals goal_nodes.json
//   foon dot   --foon FOON.txt [--output graph.dot]

#include <iostream>
#include <map>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "foon/cli.hpp"

namespace {

void add_run_options(CLI::App& cmd, foon::cli::RunOptions& options, std::string& algorithm,
                     bool with_algorithm) {
  cmd.add_option("--foon", options.foon, "FOON text file")->required()->check(CLI::ExistingFile);
  cmd.add_option("--kitchen", options.kitchen, "kitchen JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--goals", options.goals, "goal-node JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--motion-rates", options.motion_rates, "motion success-rate JSON file")
      ->check(CLI::ExistingFile);
  if (with_algorithm) {
    cmd.add_option("--algorithm", algorithm, "ids, gbfs-a, gbfs-b or all")
        ->check(CLI::IsMember({"ids", "gbfs-a", "gbfs-b", "all"}))
        ->capture_default_str();
  }
  cmd.add_option("--max-depth", options.max_depth, "IDS depth bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--out-dir", options.out_dir, "directory for task-tree files")
      ->capture_default_str();
  cmd.add_flag("--emit-dot", options.emit_dot, "also write a .dot file per task tree");
  cmd.add_option("--report", options.report, "write the report as JSON to this path");
  cmd.add_option("--jobs", options.jobs, "goals searched concurrently (1 = serial)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-tree retrieval over a functional object-oriented network"};
  app.require_subcommand(1);

  foon::cli::RunOptions run_options;
  std::string algorithm = "all";
  auto* run = app.add_subcommand("run", "retrieve task trees for every goal");
  add_run_options(*run, run_options, algorithm, true);

  foon::cli::RunOptions bench_options;
  std::string unused;
  auto* bench = app.add_subcommand("bench", "run all three algorithms and print the summary table");
  add_run_options(*bench, bench_options, unused, false);

  std::filesystem::path dot_foon;
  std::optional<std::filesystem::path> dot_rates;
  std::optional<std::filesystem::path> dot_output;
  auto* dot = app.add_subcommand("dot", "export the whole network as a DOT graph");
  dot->add_option("--foon", dot_foon, "FOON text file")->required()->check(CLI::ExistingFile);
  dot->add_option("--motion-rates", dot_rates, "motion success-rate JSON file")
      ->check(CLI::ExistingFile);
  dot->add_option("--output", dot_output, "output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : foon::cli::kExitInputError;
  }

  if (*run) {
    static const std::map<std::string, std::vector<foon::Algorithm>> kSelections{
        {"ids", {foon::Algorithm::ids}},
        {"gbfs-a", {foon::Algorithm::gbfs_a}},
        {"gbfs-b", {foon::Algorithm::gbfs_b}},
        {"all", {foon::Algorithm::ids, foon::Algorithm::gbfs_a, foon::Algorithm::gbfs_b}},
    };
    run_options.algorithms = kSelections.at(algorithm);
    return foon::cli::run(run_options, std::cout, std::cerr);
  }
  if (*bench) return foon::cli::bench(bench_options, std::cout, std::cerr);

  try {
    auto parsed = foon::parse_foon_text(foon::cli::read_file(dot_foon));
    for (const auto& d : parsed.diagnostics) {
      std::cerr << dot_foon.string() << ':' << d.line_number << ": "
                << (d.is_error() ? "error" : "warning") << ": " << d.message << '\n';
    }
    if (!parsed.ok()) return foon::cli::kExitInputError;
    if (dot_rates) {
      const auto rates = foon::parse_motion_rates(foon::cli::read_file(*dot_rates));
      for (const auto& w : foon::apply_motion_rates(parsed.units, rates)) {
        std::cerr << dot_rates->string() << ": warning: " << w << '\n';
      }
    }
    const auto text = foon::export_dot(foon::build_graph(std::move(parsed.units)));
    if (dot_output) {
      foon::cli::write_file(*dot_output, text);
    } else {
      std::cout << text;
    }
  } catch (const foon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return foon::cli::kExitInputError;
  }
  return foon::cli::kExitOk;
}
