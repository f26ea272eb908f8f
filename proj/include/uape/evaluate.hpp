#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/engine.hpp"
#include "uape/graph.hpp"
#include "uape/ic.hpp"
#include "uape/io.hpp"
#include "uape/trace.hpp"

namespace uape {

// Final activation indicator per (node, topic); -1 marks a missing row.
struct GroundTruth {
  NodeId node_count = 0;
  TopicId topic_count = 0;
  std::vector<std::int8_t> labels;

  GroundTruth() = default;
  GroundTruth(NodeId n, TopicId z)
      : node_count(n),
        topic_count(z),
        labels(static_cast<std::size_t>(n) * z, -1) {}

  std::int8_t label(NodeId v, TopicId t) const {
    return labels[static_cast<std::size_t>(v) * topic_count + t];
  }
  void set(NodeId v, TopicId t, std::int8_t value) {
    labels[static_cast<std::size_t>(v) * topic_count + t] = value;
  }
};

// Same line format as the attitude table: "node<sep>topic<sep>label" with
// label in {0, 1}.
inline GroundTruth load_truth(std::istream& in, const DirectedGraph& g,
                              TopicId topics, std::string_view source = "<truth>") {
  GroundTruth truth(g.node_count(), topics);
  detail::for_each_record(
      in, source, [](std::string_view, std::size_t) {},
      [&](const std::vector<std::string_view>& fields, std::size_t lineno) {
        if (fields.size() != 3)
          fail_at_line(source, lineno, "expected \"node<sep>topic<sep>label\"");
        auto node = g.find(std::string(fields[0]));
        if (!node)
          fail_at_line(source, lineno,
                       "unknown node label \"" + std::string(fields[0]) + "\"");
        auto topic = detail::parse_uint(fields[1]);
        if (!topic || *topic >= topics)
          fail_at_line(source, lineno,
                       "topic out of range (topic count is " +
                           std::to_string(topics) + ")");
        if (fields[2] != "0" && fields[2] != "1")
          fail_at_line(source, lineno, "label must be 0 or 1");
        truth.set(*node, static_cast<TopicId>(*topic), fields[2] == "1" ? 1 : 0);
      });
  return truth;
}

struct CurveRow {
  std::uint32_t round;
  TopicId topic;
  NodeId positive;
  NodeId neutral;
  NodeId negative;
  NodeId unknown;

  friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

// Cumulative attitude-class counts per (round, topic) for rounds 0..rounds,
// ordered round-major. Covers the topics the trace actually ran (an entirely
// empty trace covers all of them). Uses the trace's summaries when present
// (they carry the seed baseline); otherwise replays the events over an
// all-unknown start. Rounds past the last recorded one repeat the final
// counts.
inline std::vector<CurveRow> activation_curve(const CascadeTrace& trace,
                                              TopicId topics, std::uint32_t rounds) {
  for (const TraceEvent& e : trace.events)
    if (e.round > rounds)
      throw std::invalid_argument("trace has events past round " +
                                  std::to_string(rounds));
  for (const RoundSummary& s : trace.summaries)
    if (s.round > rounds)
      throw std::invalid_argument("trace has summaries past round " +
                                  std::to_string(rounds));

  const NodeId n = trace.node_count;
  std::vector<bool> has_summaries(topics, false);
  std::vector<bool> covered(topics, false);
  for (const RoundSummary& s : trace.summaries)
    if (s.topic < topics) has_summaries[s.topic] = covered[s.topic] = true;
  for (const TraceEvent& e : trace.events)
    if (e.topic < topics) covered[e.topic] = true;
  if (trace.summaries.empty() && trace.events.empty())
    covered.assign(topics, true);

  std::vector<CurveRow> rows;
  for (TopicId t = 0; t < topics; ++t) {
    if (!covered[t]) continue;
    const std::size_t first = rows.size();
    if (has_summaries[t]) {
      for (const RoundSummary& s : trace.summaries)
        if (s.topic == t)
          rows.push_back({s.round, t, s.positive, s.neutral, s.negative, s.unknown});
      std::sort(rows.begin() + first, rows.end(),
                [](const CurveRow& a, const CurveRow& b) { return a.round < b.round; });
    } else {
      // Replay events; everything starts unknown.
      std::vector<Attitude> current(n, Attitude::Unknown);
      std::vector<const TraceEvent*> events;
      for (const TraceEvent& e : trace.events)
        if (e.topic == t) events.push_back(&e);
      std::stable_sort(events.begin(), events.end(),
                       [](const TraceEvent* a, const TraceEvent* b) {
                         return a->round < b->round;
                       });
      std::size_t next = 0;
      rows.push_back({0, t, 0, 0, 0, n});
      for (std::uint32_t r = 1; r <= rounds; ++r) {
        while (next < events.size() && events[next]->round == r) {
          current[events[next]->node] = events[next]->new_attitude;
          ++next;
        }
        CurveRow row{r, t, 0, 0, 0, 0};
        for (NodeId v = 0; v < n; ++v) {
          switch (current[v]) {
            case Attitude::Positive: ++row.positive; break;
            case Attitude::Neutral: ++row.neutral; break;
            case Attitude::Negative: ++row.negative; break;
            case Attitude::Unknown: ++row.unknown; break;
          }
        }
        rows.push_back(row);
      }
    }
    // Extend to the requested horizon; counts are cumulative states.
    while (rows.back().round < rounds) {
      CurveRow last = rows.back();
      ++last.round;
      rows.push_back(last);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const CurveRow& a, const CurveRow& b) {
    if (a.round != b.round) return a.round < b.round;
    return a.topic < b.topic;
  });
  return rows;
}

inline void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "round,topic,positive,neutral,negative,unknown\n";
  for (const CurveRow& r : rows)
    out << r.round << "," << r.topic << "," << r.positive << "," << r.neutral
        << "," << r.negative << "," << r.unknown << "\n";
}

// Rank-based (Mann-Whitney) AUC with ties counted 0.5: the probability that a
// uniformly random positive outranks a uniformly random negative. Invariant
// under any strictly increasing transform of the scores.
inline double roc_auc(std::span<const double> scores,
                      std::span<const std::uint8_t> labels) {
  UAPE_ASSERT(scores.size() == labels.size(), "scores/labels size mismatch");
  std::size_t positives = 0;
  for (std::uint8_t l : labels) positives += l ? 1 : 0;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    throw DataError("AUC undefined: labels are all " +
                    std::string(positives ? "positive" : "negative"));

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) positive_rank_sum += mean_rank;
    i = j;
  }
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

struct EvaluationReport {
  std::vector<std::pair<TopicId, double>> auc;  // per evaluated topic
  std::vector<CurveRow> curve;
  std::vector<std::pair<std::string, std::string>> metadata;
};

inline void write_report(std::ostream& out, const EvaluationReport& report) {
  for (const auto& [topic, value] : report.auc)
    out << "auc." << topic << " = " << format_double(value) << "\n";
  for (const auto& [key, value] : report.metadata)
    out << "meta." << key << " = " << value << "\n";
}

namespace detail {

inline std::vector<SeedAssignment> seeds_for_topic(const AttitudeState& attitudes,
                                                   TopicId topic) {
  std::vector<SeedAssignment> seeds;
  for (NodeId v = 0; v < attitudes.node_count(); ++v)
    if (attitudes.known(v, topic)) seeds.push_back({v, attitudes.at(v, topic)});
  return seeds;
}

}  // namespace detail

// A model run reduced to activation scores: one score per node for each
// evaluated topic, plus the base run's trace (rng_seed + 0).
struct ModelScores {
  std::vector<TopicId> topics;
  std::vector<std::vector<double>> scores;  // parallel to `topics`
  CascadeTrace base_trace;
};

// Runs the configured model. Scores are Monte Carlo activation frequencies
// when monte_carlo_runs > 1 (run r uses rng_seed + r), otherwise the single
// run's binary final activation.
inline ModelScores score_model(const DirectedGraph& graph,
                               const AttitudeState& initial,
                               const SimulationConfig& config, unsigned jobs = 1,
                               std::span<const PersistenceOverride> overrides = {}) {
  const TopicId z = initial.topic_count();
  ModelScores out;
  if (config.topic) {
    out.topics.push_back(*config.topic);
  } else {
    for (TopicId t = 0; t < z; ++t) out.topics.push_back(t);
  }
  out.scores.resize(out.topics.size());

  if (config.model == Model::Uape) {
    const RunResult base = run_uape(graph, initial, config, overrides);
    out.base_trace = base.trace;
    if (config.monte_carlo_runs > 1) {
      const ActivationFrequencies freq = run_monte_carlo(
          graph, initial, config, config.monte_carlo_runs, jobs, overrides);
      for (std::size_t k = 0; k < out.topics.size(); ++k) {
        out.scores[k].resize(graph.node_count());
        for (NodeId v = 0; v < graph.node_count(); ++v)
          out.scores[k][v] = freq.at(v, out.topics[k]);
      }
    } else {
      for (std::size_t k = 0; k < out.topics.size(); ++k) {
        out.scores[k].resize(graph.node_count());
        for (NodeId v = 0; v < graph.node_count(); ++v)
          out.scores[k][v] = base.state.attitudes.known(v, out.topics[k]) ? 1.0 : 0.0;
      }
    }
    return out;
  }

  const ICConfig ic{config.rounds, config.rng_seed, config.ic_p};
  out.base_trace.node_count = graph.node_count();
  out.base_trace.topic_count = z;
  out.base_trace.rounds = config.rounds;
  for (std::size_t k = 0; k < out.topics.size(); ++k) {
    const TopicId t = out.topics[k];
    const auto seeds = detail::seeds_for_topic(initial, t);
    out.scores[k].assign(graph.node_count(), 0.0);
    const std::uint32_t runs = std::max<std::uint32_t>(1, config.monte_carlo_runs);
    for (std::uint32_t r = 0; r < runs; ++r) {
      ICConfig run = ic;
      run.rng_seed = ic.rng_seed + r;
      const ICResult result = run_ic(graph, seeds, t, run, z);
      if (r == 0) {
        out.base_trace.events.insert(out.base_trace.events.end(),
                                     result.trace.events.begin(),
                                     result.trace.events.end());
        out.base_trace.summaries.insert(out.base_trace.summaries.end(),
                                        result.trace.summaries.begin(),
                                        result.trace.summaries.end());
      }
      for (NodeId v = 0; v < graph.node_count(); ++v)
        if (result.final_attitude[v] != Attitude::Unknown) out.scores[k][v] += 1.0;
    }
    for (NodeId v = 0; v < graph.node_count(); ++v)
      out.scores[k][v] /= static_cast<double>(runs);
  }
  return out;
}

inline void check_truth_covers(const GroundTruth& truth, const DirectedGraph& graph,
                               std::span<const TopicId> topics) {
  for (TopicId t : topics)
    for (NodeId v = 0; v < graph.node_count(); ++v)
      if (truth.label(v, t) < 0)
        throw DataError("truth is missing a label for node \"" + graph.label(v) +
                        "\" topic " + std::to_string(t));
}

inline EvaluationReport score_report(const ModelScores& scored,
                                     const DirectedGraph& graph,
                                     const GroundTruth& truth) {
  check_truth_covers(truth, graph, scored.topics);
  EvaluationReport report;
  for (std::size_t k = 0; k < scored.topics.size(); ++k) {
    const TopicId t = scored.topics[k];
    std::vector<std::uint8_t> labels(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v)
      labels[v] = static_cast<std::uint8_t>(truth.label(v, t));
    report.auc.emplace_back(t, roc_auc(scored.scores[k], labels));
  }
  return report;
}

// Runs the configured model and scores its predicted activation against the
// ground truth. The report's curve comes from the base run.
inline EvaluationReport evaluate_run(const DirectedGraph& graph,
                                     const AttitudeState& initial,
                                     const SimulationConfig& config,
                                     const GroundTruth& truth,
                                     std::span<const PersistenceOverride> overrides = {},
                                     unsigned jobs = 1) {
  const TopicId z = initial.topic_count();
  UAPE_ASSERT(truth.node_count == graph.node_count() && truth.topic_count == z,
              "truth table does not match the graph");
  const ModelScores scored = score_model(graph, initial, config, jobs, overrides);
  EvaluationReport report = score_report(scored, graph, truth);
  report.curve = activation_curve(scored.base_trace, z, config.rounds);
  report.metadata.emplace_back("model",
                               config.model == Model::Uape ? "uape" : "ic");
  report.metadata.emplace_back("rng_seed", std::to_string(config.rng_seed));
  report.metadata.emplace_back("rounds", std::to_string(config.rounds));
  report.metadata.emplace_back("monte_carlo_runs",
                               std::to_string(config.monte_carlo_runs));
  return report;
}

}  // namespace uape
