// Batch front end: `uape generate|simulate|evaluate`. Exit codes: 0 success,
// 1 usage error, 2 data error, 3 internal assertion.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uape/commands.hpp"
#include "uape/version.hpp"

namespace {

struct ModelFlag {
  std::string value;

  std::optional<uape::Model> parse() const {
    if (value.empty()) return std::nullopt;
    if (value == "uape") return uape::Model::Uape;
    if (value == "ic") return uape::Model::Ic;
    throw CLI::ValidationError("--model must be uape or ic");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-topic attitude cascade simulator"};
  app.set_version_flag("--version", std::string("uape ") + uape::kVersion);
  app.require_subcommand(1);

  // generate
  uape::GenerateOptions gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--nodes", gen.nodes, "Node count")->required();
  generate->add_option("--edges", gen.edges, "Edge count")->required();
  generate->add_option("--topics", gen.topics, "Topic count")
      ->default_val(1);
  generate->add_option("--seeds", gen.seeds, "Seed nodes per topic")
      ->default_val(0);
  generate->add_option("--rng-seed", gen.rng_seed, "Generator seed")
      ->default_val(0);
  generate->add_option("--out-dir", gen.out_dir, "Output directory")->required();

  // simulate
  uape::SimulateOptions sim;
  ModelFlag sim_model;
  double sim_p = -1.0;
  std::uint64_t sim_seed = 0;
  std::uint32_t sim_mc = 0;
  std::string sim_seeds_path;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a cascade and write trace, curve, and scores");
  simulate->add_option("--graph", sim.graph_path, "Edge-list file")->required();
  simulate->add_option("--attitudes", sim.attitudes_path, "Attitude table")
      ->required();
  simulate->add_option("--config", sim.config_path, "Config file")->required();
  simulate->add_option("--seeds", sim_seeds_path, "Seed file");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  simulate->add_option("--model", sim_model.value,
                       "Override the configured model (uape|ic)");
  CLI::Option* p_opt =
      simulate->add_option("--p", sim_p, "Override the IC activation probability");
  CLI::Option* seed_opt =
      simulate->add_option("--rng-seed", sim_seed, "Override the RNG seed");
  CLI::Option* mc_opt = simulate->add_option(
      "--monte-carlo", sim_mc, "Override the number of Monte Carlo runs");
  simulate->add_option("--jobs", sim.jobs, "Concurrent Monte Carlo workers")
      ->default_val(1);

  // evaluate
  uape::EvaluateOptions eval;
  ModelFlag eval_model;
  double eval_p = -1.0;
  std::uint64_t eval_seed = 0;
  std::uint32_t eval_mc = 0;
  std::string eval_scores, eval_trace, eval_attitudes, eval_config, eval_seeds;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score predicted activation against a ground truth");
  evaluate->add_option("--graph", eval.graph_path, "Edge-list file")->required();
  evaluate->add_option("--truth", eval.truth_path, "Ground-truth labels")
      ->required();
  evaluate->add_option("--out-dir", eval.out_dir, "Output directory")->required();
  evaluate->add_option("--scores", eval_scores, "Score file to evaluate");
  evaluate->add_option("--trace", eval_trace, "Trace file to evaluate");
  evaluate->add_option("--attitudes", eval_attitudes, "Initial attitude table");
  evaluate->add_option("--config", eval_config,
                       "Config file: run the model, then score it");
  evaluate->add_option("--seeds", eval_seeds, "Seed file for the model run");
  evaluate->add_option("--model", eval_model.value,
                       "Override the configured model (uape|ic)");
  CLI::Option* ep_opt =
      evaluate->add_option("--p", eval_p, "Override the IC activation probability");
  CLI::Option* eseed_opt =
      evaluate->add_option("--rng-seed", eval_seed, "Override the RNG seed");
  CLI::Option* emc_opt = evaluate->add_option(
      "--monte-carlo", eval_mc, "Override the number of Monte Carlo runs");
  evaluate->add_option("--jobs", eval.jobs, "Concurrent Monte Carlo workers")
      ->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) {
      uape::cmd_generate(gen);
    } else if (simulate->parsed()) {
      if (!sim_seeds_path.empty()) sim.seeds_path = sim_seeds_path;
      sim.model = sim_model.parse();
      if (p_opt->count()) sim.p = sim_p;
      if (seed_opt->count()) sim.rng_seed = sim_seed;
      if (mc_opt->count()) sim.monte_carlo = sim_mc;
      uape::cmd_simulate(sim);
    } else if (evaluate->parsed()) {
      if (!eval_scores.empty()) eval.scores_path = eval_scores;
      if (!eval_trace.empty()) eval.trace_path = eval_trace;
      if (!eval_attitudes.empty()) eval.attitudes_path = eval_attitudes;
      if (!eval_config.empty()) eval.config_path = eval_config;
      if (!eval_seeds.empty()) eval.seeds_path = eval_seeds;
      eval.model = eval_model.parse();
      if (ep_opt->count()) eval.p = eval_p;
      if (eseed_opt->count()) eval.rng_seed = eval_seed;
      if (emc_opt->count()) eval.monte_carlo = eval_mc;
      uape::cmd_evaluate(eval);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const uape::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
