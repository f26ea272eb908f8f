#pragma once

// Naive reference transcription of the round procedure, used only to check
// the engine. Works directly on numeric attitude values (-1, 0, 0.5, 1) with
// no derived structures: adjacency, in-degrees, references, and persistence
// sums are recomputed from scratch the way the pseudocode reads. Shares the
// engine's decision pins (snapshot rounds, immediate intra-round effects,
// full-history persistence, per-round opinion refresh, gate draw) but none of
// its code paths.

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "uape/attitude.hpp"
#include "uape/engine.hpp"
#include "uape/graph.hpp"

namespace uape::testing {

struct OracleEvent {
  std::uint32_t round;
  NodeId node;
  TopicId topic;
  double old_value;
  double new_value;
  NodeId sender;
  double p_raw;
  double a_after;
};

struct OracleSummary {
  std::uint32_t round;
  NodeId positive, neutral, negative, unknown, adjacent;
};

struct OracleRun {
  std::vector<OracleEvent> events;
  std::vector<std::vector<double>> attitude;     // [node][topic], -1 unknown
  std::vector<std::vector<double>> opinion;      // NaN undefined
  std::vector<std::vector<double>> persistence;  // [node][topic]
  std::vector<OracleSummary> summaries;          // rounds 0..K, run topic only
};

inline OracleRun oracle_run(const DirectedGraph& g, const AttitudeState& initial,
                            const SimulationConfig& config, TopicId topic) {
  const NodeId n = g.node_count();
  const TopicId z = initial.topic_count();

  OracleRun run;
  run.attitude.assign(n, std::vector<double>(z, -1.0));
  run.opinion.assign(
      n, std::vector<double>(z, std::numeric_limits<double>::quiet_NaN()));
  run.persistence.assign(n, std::vector<double>(z, config.initial_persistence));
  for (NodeId v = 0; v < n; ++v)
    for (TopicId t = 0; t < z; ++t)
      if (initial.known(v, t)) {
        run.attitude[v][t] = attitude_value(initial.at(v, t));
        run.opinion[v][t] = run.attitude[v][t];
      }

  // Own adjacency (sorted by target) and in-degrees, straight from the edges.
  std::vector<std::vector<std::pair<NodeId, double>>> out(n);
  std::vector<std::uint32_t> in_degree(n, 0);
  for (const Edge& e : g.edges()) {
    out[e.source].push_back({e.target, e.weight});
    ++in_degree[e.target];
  }
  for (auto& lst : out)
    std::sort(lst.begin(), lst.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::vector<std::pair<double, double>>> log(n);  // (t_u, P)
  std::vector<char> adjacent(n, 0);

  auto summarize = [&](std::uint32_t round) {
    OracleSummary s{round, 0, 0, 0, 0, 0};
    for (NodeId v = 0; v < n; ++v) {
      const double a = run.attitude[v][topic];
      if (a == 0.0) ++s.positive;
      if (a == 0.5) ++s.neutral;
      if (a == 1.0) ++s.negative;
      if (a == -1.0) ++s.unknown;
      if (adjacent[v]) ++s.adjacent;
    }
    run.summaries.push_back(s);
  };
  summarize(0);

  for (std::uint32_t round = 1; round <= config.rounds; ++round) {
    // Public opinion per topic over the nodes aware of it.
    std::vector<double> reference(z, std::numeric_limits<double>::quiet_NaN());
    std::vector<TopicId> active_topics;
    for (TopicId t = 0; t < z; ++t) {
      double sum = 0.0;
      NodeId aware = 0;
      for (NodeId v = 0; v < n; ++v) {
        if (run.attitude[v][t] == -1.0) continue;
        sum += std::isnan(run.opinion[v][t]) ? 0.5 : run.opinion[v][t];
        ++aware;
      }
      if (aware > 0) {
        active_topics.push_back(t);
        reference[t] = sum / static_cast<double>(aware);
      }
    }

    std::vector<NodeId> snapshot;
    for (NodeId v = 0; v < n; ++v)
      if (run.attitude[v][topic] != -1.0) snapshot.push_back(v);

    std::vector<std::vector<double>> received(n);

    for (NodeId v : snapshot) {
      for (const auto& [q, weight] : out[v]) {
        if (config.edge_gate == EdgeGate::Bernoulli &&
            !(gate_uniform(config.rng_seed, round, v, q, topic) < weight))
          continue;

        // Eq. (2): inverse-distance interest of q in the run topic.
        double total = 0.0;
        double weight_topic = 0.0;
        for (TopicId t : active_topics) {
          const double own =
              std::isnan(run.opinion[q][t]) ? 0.5 : run.opinion[q][t];
          const double w = 1.0 / (std::abs(own - reference[t]) + 0.01);
          total += w;
          if (t == topic) weight_topic = w;
        }
        const double interest = weight_topic / total;

        // Eq. (3): similarity over the topics both nodes know.
        double sim_sum = 0.0;
        for (TopicId t = 0; t < z; ++t) {
          const double tu = run.attitude[v][t];
          const double tv = run.attitude[q][t];
          if (tu == -1.0 || tv == -1.0) continue;
          if (config.indicator_mode == IndicatorMode::XorIndicator) {
            sim_sum += (tu - tv) == 0.5 ? 0.0 : 1.0;
          } else {
            const double d = 1.0 - std::abs(tu - tv);
            sim_sum += d * d;
          }
        }
        const double similarity = std::sqrt(sim_sum);
        const double p_raw =
            (interest * similarity) / static_cast<double>(in_degree[q]);
        const double p = std::min(p_raw, 1.0);

        // Eq. (4): persistence over the whole message history.
        const double current = run.attitude[q][topic];
        log[q].push_back({run.attitude[v][topic], p});
        double sum = 0.0;
        for (const auto& [tu, pu] : log[q])
          sum += std::abs(tu - current) * pu - (tu == current ? 1.0 : 0.0) * pu;
        const double a = std::clamp(
            run.persistence[q][topic] - sum / static_cast<double>(log[q].size()),
            0.0, 1.0);
        run.persistence[q][topic] = a;

        // Algorithm 2.
        const double sender_value = run.attitude[v][topic];
        double next;
        if (current == 0.5 || current == -1.0) {
          next = p > a ? sender_value : 0.5;
        } else if (current == sender_value) {
          next = current;
        } else {
          const double eps = p > a ? 1.0 : 0.0;
          next = eps == 1.0
                     ? current + (sender_value > current ? 0.5 : -0.5)
                     : current;
        }

        adjacent[q] = 1;
        received[q].push_back(sender_value);

        if (next != current) {
          run.attitude[q][topic] = next;
          run.events.push_back({round, q, topic, current, next, v, p_raw, a});
        }
      }
    }

    // Eq. (1): opinions refresh from this round's messages.
    for (NodeId q = 0; q < n; ++q) {
      if (received[q].empty()) continue;
      double sum = std::isnan(run.opinion[q][topic]) ? 0.5 : run.opinion[q][topic];
      for (double value : received[q]) sum += value;
      run.opinion[q][topic] =
          sum / static_cast<double>(received[q].size() + 1);
    }

    summarize(round);
  }
  return run;
}

// One random engine-vs-oracle comparison instance within the acceptance
// bounds: n <= 50, m <= 200, z <= 3, K <= 10, both indicator modes, gate on
// or off over random edge weights.
struct OracleInstance {
  DirectedGraph graph;
  AttitudeState attitudes;
  SimulationConfig config;
};

inline OracleInstance random_uape_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const NodeId n = 2 + static_cast<NodeId>(uniform_below(rng, 49));
  const std::size_t max_m = std::min<std::size_t>(200, std::size_t{n} * (n - 1));
  const std::size_t m = uniform_below(rng, max_m + 1);
  OracleInstance inst{random_graph(rng, n, m), AttitudeState{}, {}};

  const TopicId z = 1 + static_cast<TopicId>(uniform_below(rng, 3));
  inst.attitudes = AttitudeState(n, z);
  constexpr Attitude kKnown[3] = {Attitude::Positive, Attitude::Neutral,
                                  Attitude::Negative};
  for (TopicId t = 0; t < z; ++t) {
    const NodeId seeds = static_cast<NodeId>(uniform_below(rng, n / 2 + 2));
    for (NodeId i = 0; i < seeds; ++i)
      inst.attitudes.set(static_cast<NodeId>(uniform_below(rng, n)), t,
                         kKnown[uniform_below(rng, 3)]);
  }

  inst.config.rounds = 1 + static_cast<std::uint32_t>(uniform_below(rng, 10));
  inst.config.indicator_mode = uniform_below(rng, 2) == 0
                                   ? IndicatorMode::XorIndicator
                                   : IndicatorMode::AbsDiff;
  inst.config.edge_gate =
      uniform_below(rng, 2) == 0 ? EdgeGate::Off : EdgeGate::Bernoulli;
  inst.config.initial_persistence = unit_double(rng());
  inst.config.rng_seed = rng();
  return inst;
}

// Event-for-event, state-for-state equality, doubles compared bitwise.
inline ::testing::AssertionResult engine_matches_oracle(
    const DirectedGraph& graph, const AttitudeState& initial,
    SimulationConfig config, TopicId topic) {
  config.topic = topic;
  const RunResult engine = run_uape(graph, initial, config);
  const OracleRun oracle = oracle_run(graph, initial, config, topic);

  if (engine.trace.events.size() != oracle.events.size())
    return ::testing::AssertionFailure()
           << "event count: engine " << engine.trace.events.size() << " oracle "
           << oracle.events.size();
  for (std::size_t i = 0; i < oracle.events.size(); ++i) {
    const TraceEvent& e = engine.trace.events[i];
    const OracleEvent& o = oracle.events[i];
    if (e.round != o.round || e.node != o.node || e.topic != o.topic ||
        e.sender != o.sender ||
        attitude_value(e.old_attitude) != o.old_value ||
        attitude_value(e.new_attitude) != o.new_value || e.p != o.p_raw ||
        e.a != o.a_after)
      return ::testing::AssertionFailure()
             << "event " << i << " differs (round " << e.round << " vs "
             << o.round << ", node " << e.node << " vs " << o.node << ", p "
             << e.p << " vs " << o.p_raw << ", a " << e.a << " vs "
             << o.a_after << ")";
  }

  const NodeId n = graph.node_count();
  const TopicId z = initial.topic_count();
  for (NodeId v = 0; v < n; ++v)
    for (TopicId t = 0; t < z; ++t) {
      if (attitude_value(engine.state.attitudes.at(v, t)) != oracle.attitude[v][t])
        return ::testing::AssertionFailure()
               << "attitude mismatch at node " << v << " topic " << t;
      if (engine.state.persistence.value(v, t) != oracle.persistence[v][t])
        return ::testing::AssertionFailure()
               << "persistence mismatch at node " << v << " topic " << t;
      const double eng_op = engine.state.opinions.defined(v, t)
                                ? engine.state.opinions.value(v, t)
                                : std::numeric_limits<double>::quiet_NaN();
      const bool both_nan = std::isnan(eng_op) && std::isnan(oracle.opinion[v][t]);
      if (!both_nan && eng_op != oracle.opinion[v][t])
        return ::testing::AssertionFailure()
               << "opinion mismatch at node " << v << " topic " << t;
    }

  std::vector<RoundSummary> engine_summaries;
  for (const RoundSummary& s : engine.trace.summaries)
    if (s.topic == topic) engine_summaries.push_back(s);
  if (engine_summaries.size() != oracle.summaries.size())
    return ::testing::AssertionFailure() << "summary count differs";
  for (std::size_t i = 0; i < oracle.summaries.size(); ++i) {
    const RoundSummary& e = engine_summaries[i];
    const OracleSummary& o = oracle.summaries[i];
    if (e.round != o.round || e.positive != o.positive || e.neutral != o.neutral ||
        e.negative != o.negative || e.unknown != o.unknown ||
        e.adjacent != o.adjacent)
      return ::testing::AssertionFailure() << "summary " << i << " differs";
  }
  return ::testing::AssertionSuccess();
}

}  // namespace uape::testing
