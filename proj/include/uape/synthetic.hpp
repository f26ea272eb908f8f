#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/graph.hpp"
#include "uape/io.hpp"
#include "uape/rng.hpp"

namespace uape {

struct SyntheticSpec {
  NodeId nodes = 0;
  std::uint64_t edges = 0;
  TopicId topics = 1;
  NodeId seeds_per_topic = 0;
  std::uint64_t rng_seed = 0;
};

struct SyntheticResult {
  DirectedGraph graph;
  AttitudeState attitudes;
  std::vector<std::vector<SeedEntry>> seeds;  // per topic, ascending node id
};

// Uniform random simple directed graph with exactly `edges` distinct
// non-self-loop edges, plus `seeds_per_topic` uniformly drawn seed nodes per
// topic, each with a uniform attitude from {positive, neutral, negative}.
// A pure function of the spec: the same arguments always produce bit-identical
// output.
inline SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
  const std::uint64_t n = spec.nodes;
  const std::uint64_t max_edges = n * (n - (n > 0 ? 1 : 0));
  if (spec.edges > max_edges)
    throw DataError("infeasible edge count " + std::to_string(spec.edges) +
                    " for " + std::to_string(n) + " nodes (max " +
                    std::to_string(max_edges) + ")");
  if (spec.seeds_per_topic > spec.nodes)
    throw DataError("seed count " + std::to_string(spec.seeds_per_topic) +
                    " exceeds node count " + std::to_string(spec.nodes));

  std::mt19937_64 rng(spec.rng_seed);
  std::vector<Edge> edges;
  edges.reserve(spec.edges);

  if (spec.edges * 2 <= max_edges) {
    // Sparse: rejection sampling over packed (source, target) pairs.
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(spec.edges * 2);
    while (edges.size() < spec.edges) {
      const NodeId src = static_cast<NodeId>(uniform_below(rng, n));
      std::uint64_t t = uniform_below(rng, n - 1);
      const NodeId dst = static_cast<NodeId>(t >= src ? t + 1 : t);
      if (taken.insert(src * n + dst).second) edges.push_back({src, dst, 1.0});
    }
  } else if (max_edges > 0) {
    // Dense: enumerate every ordered pair and take a partial shuffle.
    std::vector<std::uint64_t> pairs;
    pairs.reserve(max_edges);
    for (NodeId src = 0; src < n; ++src)
      for (NodeId dst = 0; dst < n; ++dst)
        if (src != dst) pairs.push_back(static_cast<std::uint64_t>(src) * n + dst);
    for (std::uint64_t i = 0; i < spec.edges; ++i) {
      const std::uint64_t j = i + uniform_below(rng, pairs.size() - i);
      std::swap(pairs[i], pairs[j]);
      edges.push_back({static_cast<NodeId>(pairs[i] / n),
                       static_cast<NodeId>(pairs[i] % n), 1.0});
    }
  }

  std::vector<std::string> labels;
  labels.reserve(spec.nodes);
  for (NodeId v = 0; v < spec.nodes; ++v) labels.push_back(std::to_string(v));

  SyntheticResult result{DirectedGraph(std::move(labels), std::move(edges)),
                         AttitudeState(spec.nodes, spec.topics),
                         {}};
  result.seeds.resize(spec.topics);

  std::vector<NodeId> pool(spec.nodes);
  constexpr Attitude kSeedAttitudes[3] = {Attitude::Positive, Attitude::Neutral,
                                          Attitude::Negative};
  for (TopicId t = 0; t < spec.topics; ++t) {
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::vector<SeedEntry>& picks = result.seeds[t];
    for (NodeId i = 0; i < spec.seeds_per_topic; ++i) {
      const std::uint64_t j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      const Attitude a = kSeedAttitudes[uniform_below(rng, 3)];
      picks.push_back({pool[i], t, a, std::nullopt});
    }
    std::sort(picks.begin(), picks.end(),
              [](const SeedEntry& a, const SeedEntry& b) { return a.node < b.node; });
    for (const SeedEntry& s : picks) result.attitudes.set(s.node, t, *s.attitude);
  }
  return result;
}

}  // namespace uape
