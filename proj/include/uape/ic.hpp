#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/graph.hpp"
#include "uape/rng.hpp"
#include "uape/trace.hpp"

namespace uape {

struct ICConfig {
  std::uint32_t rounds = 10;
  std::uint64_t rng_seed = 0;
  std::optional<double> p;  // nullopt: per-edge weight
};

struct SeedAssignment {
  NodeId node;
  Attitude attitude;  // never Unknown
};

struct ICResult {
  std::vector<std::vector<NodeId>> newly_activated;  // per round; round 0 = seeds
  std::vector<Attitude> final_attitude;              // Unknown = never activated
  CascadeTrace trace;
};

// The activation draw for an edge depends only on (seed, topic, source,
// target), never on the probability compared against, so activated sets are
// coupled across p values: raising p can only grow the set.
inline double ic_uniform(std::uint64_t seed, TopicId topic, NodeId source,
                         NodeId target) {
  return unit_double(hash_combine(seed, topic, source, target));
}

// Classic independent cascade: every newly activated node gets one chance to
// activate each inactive out-neighbor. Activated nodes adopt the sender's
// attitude verbatim; the trace reuses the shared schema with persistence 0.
inline ICResult run_ic(const DirectedGraph& graph,
                       std::span<const SeedAssignment> seeds, TopicId topic,
                       const ICConfig& config, TopicId topic_count = 1) {
  const NodeId n = graph.node_count();
  ICResult result;
  result.final_attitude.assign(n, Attitude::Unknown);
  result.trace.node_count = n;
  result.trace.topic_count = topic_count;
  result.trace.rounds = config.rounds;

  std::vector<NodeId> frontier;
  for (const SeedAssignment& s : seeds) {
    if (s.node >= n)
      throw DataError("seed node id " + std::to_string(s.node) + " out of range");
    UAPE_ASSERT(s.attitude != Attitude::Unknown, "seed without an attitude");
    if (result.final_attitude[s.node] == Attitude::Unknown) frontier.push_back(s.node);
    result.final_attitude[s.node] = s.attitude;
  }
  std::sort(frontier.begin(), frontier.end());
  result.newly_activated.push_back(frontier);

  auto summarize = [&](std::uint32_t round) {
    NodeId pos = 0, neu = 0, neg = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (result.final_attitude[v] == Attitude::Positive) ++pos;
      if (result.final_attitude[v] == Attitude::Neutral) ++neu;
      if (result.final_attitude[v] == Attitude::Negative) ++neg;
    }
    result.trace.summaries.push_back(
        {round, topic, pos, neu, neg, n - pos - neu - neg, 0});
  };
  summarize(0);

  for (std::uint32_t round = 1; round <= config.rounds && !frontier.empty();
       ++round) {
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      for (const OutEdge& edge : graph.out_neighbors(v)) {
        const NodeId q = edge.target;
        if (result.final_attitude[q] != Attitude::Unknown) continue;
        const double p = config.p ? *config.p : edge.weight;
        if (!(ic_uniform(config.rng_seed, topic, v, q) < p)) continue;
        result.final_attitude[q] = result.final_attitude[v];
        next.push_back(q);
        result.trace.events.push_back({round, q, topic, Attitude::Unknown,
                                       result.final_attitude[q], v, p, 0.0});
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
    result.newly_activated.push_back(frontier);
    summarize(round);
  }
  return result;
}

}  // namespace uape
