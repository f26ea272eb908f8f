#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uape/config.hpp"
#include "uape/engine.hpp"
#include "uape/evaluate.hpp"
#include "uape/io.hpp"
#include "uape/manifest.hpp"
#include "uape/synthetic.hpp"
#include "uape/trace.hpp"

namespace uape {

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open \"" + path + "\" for reading");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open \"" + path.string() + "\" for writing");
  return out;
}

inline std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path path(dir);
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw DataError("cannot create output directory \"" + dir + "\"");
  return path;
}

// Largest topic id referenced in column `column` of a record file, plus one.
inline TopicId scan_topic_count(const std::string& path, std::size_t column,
                                bool skip_header = false) {
  std::ifstream in = open_input(path);
  TopicId topics = 0;
  bool first = true;
  for_each_record(
      in, path, [](std::string_view, std::size_t) {},
      [&](const std::vector<std::string_view>& fields, std::size_t) {
        if (skip_header && first) {
          first = false;
          return;
        }
        first = false;
        if (fields.size() <= column) return;
        auto t = parse_uint(fields[column]);
        if (t && *t + 1 > topics) topics = static_cast<TopicId>(*t + 1);
      });
  return topics;
}

}  // namespace detail

// --- generate -----------------------------------------------------------------

struct GenerateOptions {
  NodeId nodes = 0;
  std::uint64_t edges = 0;
  TopicId topics = 1;
  NodeId seeds = 0;
  std::uint64_t rng_seed = 0;
  std::string out_dir;
};

// Writes edges.csv (without weights: they resolve against the configured
// global edge probability at load time), attitudes.csv, seeds.csv, and a
// manifest recording the exact generation command.
inline void cmd_generate(const GenerateOptions& opts) {
  if (opts.topics < 1) throw DataError("--topics must be at least 1");
  const SyntheticResult data = generate_synthetic(
      {opts.nodes, opts.edges, opts.topics, opts.seeds, opts.rng_seed});

  const std::filesystem::path dir = detail::ensure_out_dir(opts.out_dir);
  {
    auto out = detail::open_output(dir / "edges.csv");
    write_edge_list(out, data.graph, /*include_weights=*/false);
  }
  {
    auto out = detail::open_output(dir / "attitudes.csv");
    write_attitude_table(out, data.attitudes, data.graph);
  }
  {
    auto out = detail::open_output(dir / "seeds.csv");
    for (const auto& topic_seeds : data.seeds)
      write_seed_file(out, topic_seeds, data.graph);
  }
  {
    auto out = detail::open_output(dir / "manifest.txt");
    out << "# uape " << kVersion << " run manifest\n";
    out << "# command = generate --nodes " << opts.nodes << " --edges "
        << opts.edges << " --topics " << opts.topics << " --seeds " << opts.seeds
        << " --rng-seed " << opts.rng_seed << "\n";
    for (const char* name : {"edges.csv", "attitudes.csv", "seeds.csv"})
      out << "# output = " << name
          << " fnv1a64=" << file_digest((dir / name).string()) << "\n";
  }
}

// --- simulate -------------------------------------------------------------------

struct SimulateOptions {
  std::string graph_path;
  std::string attitudes_path;
  std::string config_path;
  std::optional<std::string> seeds_path;
  std::string out_dir;
  // Flag overrides applied on top of the config file.
  std::optional<Model> model;
  std::optional<double> p;  // IC activation probability
  std::optional<std::uint32_t> monte_carlo;
  std::optional<std::uint64_t> rng_seed;
  unsigned jobs = 1;
};

struct LoadedInputs {
  DirectedGraph graph;
  AttitudeState attitudes;
  std::vector<PersistenceOverride> overrides;
  SimulationConfig config;
  TopicId topics = 1;
};

namespace detail {

inline SimulationConfig resolve_config(const SimulateOptions& opts) {
  std::ifstream in = open_input(opts.config_path);
  SimulationConfig config = parse_config(in, opts.config_path);
  if (opts.model) config.model = *opts.model;
  if (opts.p) {
    if (!(*opts.p >= 0.0 && *opts.p <= 1.0))
      throw DataError("--p must be in [0, 1]");
    config.ic_p = *opts.p;
  }
  if (opts.monte_carlo) config.monte_carlo_runs = *opts.monte_carlo;
  if (opts.rng_seed) config.rng_seed = *opts.rng_seed;
  return config;
}

inline LoadedInputs load_inputs(const SimulateOptions& opts) {
  LoadedInputs inputs;
  inputs.config = resolve_config(opts);

  {
    std::ifstream in = open_input(opts.graph_path);
    inputs.graph = load_edge_list(in, inputs.config.global_edge_probability,
                                  opts.graph_path);
  }

  // The topic count is the largest topic referenced anywhere, so every input
  // agrees on the table shapes.
  TopicId topics = std::max<TopicId>(1, scan_topic_count(opts.attitudes_path, 1));
  if (opts.seeds_path)
    topics = std::max(topics, scan_topic_count(*opts.seeds_path, 1));
  if (inputs.config.topic) topics = std::max(topics, *inputs.config.topic + 1);
  inputs.topics = topics;

  {
    std::ifstream in = open_input(opts.attitudes_path);
    inputs.attitudes =
        load_attitude_table(in, inputs.graph, topics, opts.attitudes_path);
  }

  if (opts.seeds_path) {
    std::ifstream in = open_input(*opts.seeds_path);
    const auto seeds = load_seed_file(in, inputs.graph, topics, *opts.seeds_path);
    for (const SeedEntry& s : seeds) {
      std::vector<TopicId> targets;
      if (s.topic)
        targets.push_back(*s.topic);
      else
        for (TopicId t = 0; t < topics; ++t) targets.push_back(t);
      for (TopicId t : targets) {
        if (s.attitude)
          inputs.attitudes.set(s.node, t, *s.attitude);
        else if (!inputs.attitudes.known(s.node, t))
          inputs.attitudes.set(s.node, t, Attitude::Positive);
        if (s.persistence)
          inputs.overrides.push_back({s.node, t, *s.persistence});
      }
    }
  }
  return inputs;
}

inline void write_scores_csv(std::ostream& out, const DirectedGraph& graph,
                             const ModelScores& scored) {
  for (NodeId v = 0; v < graph.node_count(); ++v)
    for (std::size_t k = 0; k < scored.topics.size(); ++k)
      out << graph.label(v) << "," << scored.topics[k] << ","
          << format_double(scored.scores[k][v]) << "\n";
}

inline std::string simulate_command_line(const SimulateOptions& opts) {
  std::ostringstream cmd;
  cmd << "simulate --graph " << opts.graph_path << " --attitudes "
      << opts.attitudes_path << " --config " << opts.config_path;
  if (opts.seeds_path) cmd << " --seeds " << *opts.seeds_path;
  return cmd.str();
}

}  // namespace detail

inline void cmd_simulate(const SimulateOptions& opts) {
  const LoadedInputs inputs = detail::load_inputs(opts);
  const ModelScores scored =
      score_model(inputs.graph, inputs.attitudes, inputs.config, opts.jobs,
                  inputs.overrides);

  const std::filesystem::path dir = detail::ensure_out_dir(opts.out_dir);
  {
    auto out = detail::open_output(dir / "trace.csv");
    write_trace_csv(out, scored.base_trace, inputs.graph);
  }
  {
    auto out = detail::open_output(dir / "curve.csv");
    const auto curve =
        activation_curve(scored.base_trace, inputs.topics, inputs.config.rounds);
    write_curve_csv(out, curve);
  }
  {
    auto out = detail::open_output(dir / "scores.csv");
    detail::write_scores_csv(out, inputs.graph, scored);
  }
  {
    auto out = detail::open_output(dir / "manifest.txt");
    std::vector<ManifestInput> manifest_inputs = {
        {"graph", opts.graph_path}, {"attitudes", opts.attitudes_path}};
    if (opts.seeds_path) manifest_inputs.push_back({"seeds", *opts.seeds_path});
    write_manifest(out, detail::simulate_command_line(opts), inputs.config,
                   manifest_inputs, {"trace.csv", "curve.csv", "scores.csv"});
  }
}

// --- evaluate -------------------------------------------------------------------

// Scores read back from a scores.csv: AUC over the topics the file mentions.
inline EvaluationReport evaluate_scores_file(const std::string& path,
                                             const DirectedGraph& graph,
                                             const GroundTruth& truth,
                                             TopicId topics) {
  std::vector<std::vector<double>> values(
      topics, std::vector<double>(graph.node_count(), 0.0));
  std::vector<std::vector<bool>> present(
      topics, std::vector<bool>(graph.node_count(), false));
  std::vector<bool> topic_seen(topics, false);
  {
    std::ifstream in = detail::open_input(path);
    detail::for_each_record(
        in, path, [](std::string_view, std::size_t) {},
        [&](const std::vector<std::string_view>& fields, std::size_t lineno) {
          if (fields.size() != 3)
            fail_at_line(path, lineno, "expected \"node<sep>topic<sep>score\"");
          auto node = graph.find(std::string(fields[0]));
          if (!node)
            fail_at_line(path, lineno,
                         "unknown node label \"" + std::string(fields[0]) + "\"");
          auto topic = detail::parse_uint(fields[1]);
          if (!topic || *topic >= topics)
            fail_at_line(path, lineno, "topic out of range");
          auto score = detail::parse_double(fields[2]);
          if (!score) fail_at_line(path, lineno, "malformed score");
          values[*topic][*node] = *score;
          present[*topic][*node] = true;
          topic_seen[*topic] = true;
        });
  }

  ModelScores scored;
  for (TopicId t = 0; t < topics; ++t) {
    if (!topic_seen[t]) continue;
    for (NodeId v = 0; v < graph.node_count(); ++v)
      if (!present[t][v])
        throw DataError("scores file is missing node \"" + graph.label(v) +
                        "\" topic " + std::to_string(t));
    scored.topics.push_back(t);
    scored.scores.push_back(std::move(values[t]));
  }
  if (scored.topics.empty()) throw DataError("scores file has no rows");

  EvaluationReport report = score_report(scored, graph, truth);
  report.metadata.emplace_back("model", "scores-file");
  return report;
}

// Binary activation derived from a trace file plus the initial attitude
// table: a node counts as activated if it was seeded or changed attitude.
inline EvaluationReport evaluate_trace_file(const std::string& trace_path,
                                            const std::string& attitudes_path,
                                            const DirectedGraph& graph,
                                            const GroundTruth& truth,
                                            TopicId topics) {
  AttitudeState attitudes;
  {
    std::ifstream in = detail::open_input(attitudes_path);
    attitudes = load_attitude_table(in, graph, topics, attitudes_path);
  }
  CascadeTrace trace;
  {
    std::ifstream in = detail::open_input(trace_path);
    trace = read_trace_csv(in, graph, trace_path);
  }

  ModelScores scored;
  for (TopicId t = 0; t < topics; ++t) {
    std::vector<double> activation(graph.node_count(), 0.0);
    for (NodeId v = 0; v < graph.node_count(); ++v)
      if (attitudes.known(v, t)) activation[v] = 1.0;
    for (const TraceEvent& e : trace.events)
      if (e.topic == t) activation[e.node] = 1.0;
    scored.topics.push_back(t);
    scored.scores.push_back(std::move(activation));
  }

  EvaluationReport report = score_report(scored, graph, truth);
  report.metadata.emplace_back("model", "trace-file");
  return report;
}

struct EvaluateOptions {
  std::string graph_path;
  std::string truth_path;
  std::string out_dir;
  std::optional<std::string> scores_path;
  std::optional<std::string> trace_path;
  std::optional<std::string> attitudes_path;
  std::optional<std::string> config_path;
  std::optional<std::string> seeds_path;
  std::optional<Model> model;
  std::optional<double> p;
  std::optional<std::uint32_t> monte_carlo;
  std::optional<std::uint64_t> rng_seed;
  unsigned jobs = 1;
};

inline void cmd_evaluate(const EvaluateOptions& opts) {
  const int modes = (opts.scores_path ? 1 : 0) + (opts.trace_path ? 1 : 0) +
                    (opts.config_path ? 1 : 0);
  if (modes != 1)
    throw DataError(
        "evaluate needs exactly one of --scores, --trace, or --config");

  SimulationConfig config;  // defaults unless a config file is given
  double default_weight = config.global_edge_probability;

  TopicId topics = std::max<TopicId>(1, detail::scan_topic_count(opts.truth_path, 1));
  if (opts.scores_path)
    topics = std::max(topics, detail::scan_topic_count(*opts.scores_path, 1));
  if (opts.attitudes_path)
    topics = std::max(topics, detail::scan_topic_count(*opts.attitudes_path, 1));
  if (opts.trace_path)
    topics = std::max(topics,
                      detail::scan_topic_count(*opts.trace_path, 2, true));

  if (opts.config_path) {
    SimulateOptions like;
    like.config_path = *opts.config_path;
    like.model = opts.model;
    like.p = opts.p;
    like.monte_carlo = opts.monte_carlo;
    like.rng_seed = opts.rng_seed;
    config = detail::resolve_config(like);
    default_weight = config.global_edge_probability;
    if (config.topic) topics = std::max(topics, *config.topic + 1);
  }

  DirectedGraph graph;
  {
    std::ifstream in = detail::open_input(opts.graph_path);
    graph = load_edge_list(in, default_weight, opts.graph_path);
  }
  GroundTruth truth;
  {
    std::ifstream in = detail::open_input(opts.truth_path);
    truth = load_truth(in, graph, topics, opts.truth_path);
  }

  EvaluationReport report;
  bool has_curve = false;

  if (opts.config_path) {
    if (!opts.attitudes_path)
      throw DataError("evaluate --config also needs --attitudes");
    SimulateOptions like;
    like.graph_path = opts.graph_path;
    like.attitudes_path = *opts.attitudes_path;
    like.config_path = *opts.config_path;
    like.seeds_path = opts.seeds_path;
    like.model = opts.model;
    like.p = opts.p;
    like.monte_carlo = opts.monte_carlo;
    like.rng_seed = opts.rng_seed;
    LoadedInputs inputs = detail::load_inputs(like);
    topics = std::max(topics, inputs.topics);
    if (inputs.topics < topics) {
      // Re-load the attitude table against the widest topic count seen.
      std::ifstream in = detail::open_input(*opts.attitudes_path);
      inputs.attitudes = load_attitude_table(in, graph, topics, *opts.attitudes_path);
    }
    if (truth.topic_count < topics) {
      std::ifstream in = detail::open_input(opts.truth_path);
      truth = load_truth(in, graph, topics, opts.truth_path);
    }
    report = evaluate_run(inputs.graph, inputs.attitudes, inputs.config, truth,
                          inputs.overrides, opts.jobs);
    has_curve = true;
  } else if (opts.scores_path) {
    report = evaluate_scores_file(*opts.scores_path, graph, truth, topics);
  } else {
    if (!opts.attitudes_path)
      throw DataError("evaluate --trace also needs --attitudes (for the seeds)");
    report = evaluate_trace_file(*opts.trace_path, *opts.attitudes_path, graph,
                                 truth, topics);
  }

  const std::filesystem::path dir = detail::ensure_out_dir(opts.out_dir);
  {
    auto out = detail::open_output(dir / "report.txt");
    write_report(out, report);
  }
  if (has_curve) {
    auto out = detail::open_output(dir / "curve.csv");
    write_curve_csv(out, report.curve);
  }
  {
    auto out = detail::open_output(dir / "manifest.txt");
    std::vector<ManifestInput> manifest_inputs = {{"graph", opts.graph_path},
                                                  {"truth", opts.truth_path}};
    if (opts.scores_path) manifest_inputs.push_back({"scores", *opts.scores_path});
    if (opts.trace_path) manifest_inputs.push_back({"trace", *opts.trace_path});
    if (opts.attitudes_path)
      manifest_inputs.push_back({"attitudes", *opts.attitudes_path});
    std::vector<std::string> outputs = {"report.txt"};
    if (has_curve) outputs.push_back("curve.csv");
    write_manifest(out, "evaluate", config, manifest_inputs, outputs);
  }
}

}  // namespace uape
