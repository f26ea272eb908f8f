#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/graph.hpp"
#include "uape/opinion.hpp"
#include "uape/rng.hpp"
#include "uape/trace.hpp"

namespace uape {

// Optional Bernoulli pre-filter on message delivery. Off keeps the round
// procedure fully deterministic; Bernoulli delivers each message with
// probability equal to the edge weight.
enum class EdgeGate { Off, Bernoulli };

enum class Model { Uape, Ic };

struct SimulationConfig {
  std::uint32_t rounds = 10;
  std::optional<TopicId> topic;  // nullopt: run every topic independently
  std::uint64_t rng_seed = 0;
  IndicatorMode indicator_mode = IndicatorMode::XorIndicator;
  double initial_persistence = 0.5;
  EdgeGate edge_gate = EdgeGate::Off;
  double global_edge_probability = 1.0;
  std::uint32_t monte_carlo_runs = 1;
  Model model = Model::Uape;
  std::optional<double> ic_p;  // nullopt: per-edge weights
};

struct PersistenceOverride {
  NodeId node;
  TopicId topic;
  double value;
};

// Per-message delivery draw for the Bernoulli gate. A pure function of its
// arguments, so runs reproduce regardless of scheduling.
inline double gate_uniform(std::uint64_t seed, std::uint32_t round, NodeId sender,
                           NodeId recipient, TopicId topic) {
  return unit_double(hash_combine(seed, round, sender, recipient, topic));
}

// Attitude-class bookkeeping for one topic. `member` mirrors the attitude
// table but is maintained through transitions only, so tests can check the
// two stay coherent.
struct TopicState {
  std::vector<Attitude> member;  // partition tag per node; Unknown = not aware
  NodeId positive = 0;
  NodeId neutral = 0;
  NodeId negative = 0;
  std::vector<char> adjacent;  // reached by at least one message
  NodeId adjacent_count = 0;

  NodeId aware() const { return positive + neutral + negative; }
};

struct EngineState {
  AttitudeState attitudes;
  OpinionState opinions;
  PersistenceState persistence;
  std::vector<TopicState> topics;
};

struct RunResult {
  EngineState state;
  CascadeTrace trace;
};

// One message's attitude transition. For an unaware or neutral recipient the
// message either convinces (influence strictly above persistence: adopt the
// sender's attitude) or merely informs (become neutral). A committed recipient
// keeps its attitude unless the sender disagrees and the influence exceeds
// persistence, in which case it shifts half a step toward the sender.
inline Attitude get_att(Attitude recipient, Attitude sender, double influence,
                        double persistence) {
  if (recipient == Attitude::Unknown || recipient == Attitude::Neutral)
    return influence > persistence ? sender : Attitude::Neutral;
  if (recipient == sender) return recipient;
  if (!(influence > persistence)) return recipient;
  const double current = attitude_value(recipient);
  const double toward = attitude_value(sender);
  const double shifted = current + (toward > current ? 0.5 : -0.5);
  const std::optional<Attitude> result = attitude_from_value(shifted);
  UAPE_ASSERT(result.has_value(), "attitude left the lattice");
  return *result;
}

namespace detail {

inline TopicState make_topic_state(const AttitudeState& attitudes, TopicId topic) {
  TopicState ts;
  ts.member.assign(attitudes.node_count(), Attitude::Unknown);
  ts.adjacent.assign(attitudes.node_count(), 0);
  for (NodeId v = 0; v < attitudes.node_count(); ++v) {
    const Attitude a = attitudes.at(v, topic);
    ts.member[v] = a;
    if (a == Attitude::Positive) ++ts.positive;
    if (a == Attitude::Neutral) ++ts.neutral;
    if (a == Attitude::Negative) ++ts.negative;
  }
  return ts;
}

inline void move_partition(TopicState& ts, NodeId v, Attitude from, Attitude to) {
  if (from == to) return;
  if (from == Attitude::Positive) --ts.positive;
  if (from == Attitude::Neutral) --ts.neutral;
  if (from == Attitude::Negative) --ts.negative;
  if (to == Attitude::Positive) ++ts.positive;
  if (to == Attitude::Neutral) ++ts.neutral;
  if (to == Attitude::Negative) ++ts.negative;
  ts.member[v] = to;
}

inline RoundSummary summarize(const TopicState& ts, std::uint32_t round,
                              TopicId topic, NodeId n) {
  return {round,       topic,       ts.positive,          ts.neutral,
          ts.negative, n - ts.aware(), ts.adjacent_count};
}

// Runs the round loop for a single topic, mutating `state` in place (only
// the columns of `topic` change) and appending this topic's events and
// summaries to `trace`.
inline void run_single_topic(const DirectedGraph& graph, EngineState& state,
                             TopicId topic, const SimulationConfig& config,
                             CascadeTrace& trace) {
  const NodeId n = graph.node_count();
  TopicState& ts = state.topics[topic];
  trace.summaries.push_back(summarize(ts, 0, topic, n));

  std::vector<NodeId> active;
  std::vector<std::vector<double>> received(n);  // this round, per recipient
  std::vector<NodeId> touched;

  for (std::uint32_t round = 1; round <= config.rounds; ++round) {
    const TopicEnvironment env =
        compute_topic_environment(state.attitudes, state.opinions);

    // Snapshot of the aware set: nodes promoted mid-round start sending in
    // the next round.
    active.clear();
    for (NodeId v = 0; v < n; ++v)
      if (ts.member[v] != Attitude::Unknown) active.push_back(v);

    for (NodeId v : active) {
      for (const OutEdge& edge : graph.out_neighbors(v)) {
        const NodeId q = edge.target;
        if (config.edge_gate == EdgeGate::Bernoulli &&
            !(gate_uniform(config.rng_seed, round, v, q, topic) < edge.weight))
          continue;

        const Influence infl = influence_probability(
            graph, state.attitudes, state.opinions, env, v, q, topic,
            config.indicator_mode);
        const Attitude sender_attitude = state.attitudes.at(v, topic);
        const Attitude current = state.attitudes.at(q, topic);
        const double a_after = state.persistence.update(
            q, topic, attitude_value(current),
            {attitude_value(sender_attitude), infl.value});
        const Attitude next = get_att(current, sender_attitude, infl.value, a_after);

        if (received[q].empty()) touched.push_back(q);
        received[q].push_back(attitude_value(sender_attitude));
        if (!ts.adjacent[q]) {
          ts.adjacent[q] = 1;
          ++ts.adjacent_count;
        }

        if (next != current) {
          state.attitudes.set(q, topic, next);
          move_partition(ts, q, current, next);
          trace.events.push_back(
              {round, q, topic, current, next, v, infl.raw, a_after});
        }
      }
    }

    // Opinions refresh once per round from the messages delivered in it.
    std::sort(touched.begin(), touched.end());
    for (NodeId q : touched) {
      const double own = state.opinions.defined(q, topic)
                             ? state.opinions.value(q, topic)
                             : 0.5;
      state.opinions.set(q, topic, degroot_update(own, received[q]));
      received[q].clear();
    }
    touched.clear();

    trace.summaries.push_back(summarize(ts, round, topic, n));
  }
}

}  // namespace detail

inline EngineState make_engine_state(const DirectedGraph& graph,
                                     const AttitudeState& initial,
                                     const SimulationConfig& config,
                                     std::span<const PersistenceOverride> overrides) {
  EngineState state{initial, OpinionState::from_attitudes(initial),
                    PersistenceState(initial.node_count(), initial.topic_count(),
                                     config.initial_persistence),
                    {}};
  UAPE_ASSERT(initial.node_count() == graph.node_count(),
              "attitude table does not match the graph");
  for (const PersistenceOverride& o : overrides)
    state.persistence.set_initial(o.node, o.topic, o.value);
  state.topics.reserve(initial.topic_count());
  for (TopicId t = 0; t < initial.topic_count(); ++t)
    state.topics.push_back(detail::make_topic_state(initial, t));
  return state;
}

// Executes the round procedure for the configured topic, or for every topic
// when none is configured. Topics cascade independently: each one starts from
// the initial state and only writes its own columns, so a multi-topic run
// equals the per-topic runs merged.
inline RunResult run_uape(const DirectedGraph& graph, const AttitudeState& initial,
                          const SimulationConfig& config,
                          std::span<const PersistenceOverride> overrides = {}) {
  if (config.topic && *config.topic >= initial.topic_count())
    throw DataError("topic " + std::to_string(*config.topic) +
                    " out of range (topic count is " +
                    std::to_string(initial.topic_count()) + ")");

  RunResult result{make_engine_state(graph, initial, config, overrides), {}};
  result.trace.node_count = graph.node_count();
  result.trace.topic_count = initial.topic_count();
  result.trace.rounds = config.rounds;

  std::vector<TopicId> topics;
  if (config.topic) {
    topics.push_back(*config.topic);
  } else {
    for (TopicId t = 0; t < initial.topic_count(); ++t) topics.push_back(t);
  }

  if (topics.size() <= 1) {
    for (TopicId t : topics)
      detail::run_single_topic(graph, result.state, t, config, result.trace);
    return result;
  }

  // Merge independent per-topic runs into one state and one ordered trace.
  std::vector<CascadeTrace> parts;
  for (TopicId t : topics) {
    EngineState isolated = make_engine_state(graph, initial, config, overrides);
    CascadeTrace part;
    detail::run_single_topic(graph, isolated, t, config, part);
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      result.state.attitudes.set(v, t, isolated.attitudes.at(v, t));
      if (isolated.opinions.defined(v, t))
        result.state.opinions.set(v, t, isolated.opinions.value(v, t));
    }
    result.state.persistence.copy_topic_from(isolated.persistence, t);
    result.state.topics[t] = std::move(isolated.topics[t]);
    parts.push_back(std::move(part));
  }
  for (CascadeTrace& part : parts) {
    result.trace.events.insert(result.trace.events.end(), part.events.begin(),
                               part.events.end());
    result.trace.summaries.insert(result.trace.summaries.end(),
                                  part.summaries.begin(), part.summaries.end());
  }
  std::sort(result.trace.events.begin(), result.trace.events.end(),
            [](const TraceEvent& a, const TraceEvent& b) {
              if (a.round != b.round) return a.round < b.round;
              if (a.sender != b.sender) return a.sender < b.sender;
              if (a.node != b.node) return a.node < b.node;
              return a.topic < b.topic;
            });
  std::sort(result.trace.summaries.begin(), result.trace.summaries.end(),
            [](const RoundSummary& a, const RoundSummary& b) {
              if (a.round != b.round) return a.round < b.round;
              return a.topic < b.topic;
            });
  return result;
}

// Fraction of runs, out of `runs`, in which each node ended with a known
// attitude. Run r uses rng_seed + r; results are merged by run index, so the
// outcome is independent of `jobs`.
struct ActivationFrequencies {
  NodeId node_count = 0;
  TopicId topic_count = 0;
  std::vector<double> values;  // node-major

  double at(NodeId v, TopicId t) const {
    return values[static_cast<std::size_t>(v) * topic_count + t];
  }
};

inline ActivationFrequencies run_monte_carlo(
    const DirectedGraph& graph, const AttitudeState& initial,
    const SimulationConfig& config, std::uint32_t runs, unsigned jobs = 1,
    std::span<const PersistenceOverride> overrides = {}) {
  UAPE_ASSERT(runs >= 1, "monte carlo needs at least one run");
  const NodeId n = initial.node_count();
  const TopicId z = initial.topic_count();
  const std::size_t cells = static_cast<std::size_t>(n) * z;

  std::vector<std::vector<char>> activated(runs);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(jobs, runs));

  auto worker = [&](unsigned worker_index) {
    for (std::uint32_t r = worker_index; r < runs; r += workers) {
      SimulationConfig run_config = config;
      run_config.rng_seed = config.rng_seed + r;
      const RunResult result = run_uape(graph, initial, run_config, overrides);
      std::vector<char>& flags = activated[r];
      flags.assign(cells, 0);
      for (NodeId v = 0; v < n; ++v)
        for (TopicId t = 0; t < z; ++t)
          if (result.state.attitudes.known(v, t))
            flags[static_cast<std::size_t>(v) * z + t] = 1;
    }
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (std::thread& th : pool) th.join();
  }

  ActivationFrequencies freq{n, z, std::vector<double>(cells, 0.0)};
  for (std::uint32_t r = 0; r < runs; ++r)
    for (std::size_t c = 0; c < cells; ++c)
      freq.values[c] += activated[r][c];
  for (std::size_t c = 0; c < cells; ++c)
    freq.values[c] /= static_cast<double>(runs);
  return freq;
}

}  // namespace uape
