#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/error.hpp"

namespace uape {

struct Edge {
  NodeId source;
  NodeId target;
  double weight;  // dissemination probability, in [0, 1]

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct OutEdge {
  NodeId target;
  double weight;
};

// Immutable directed graph: edge list sorted by (source, target), CSR
// out-adjacency with targets in ascending order, per-node in-degrees, and a
// label table mapping external node names to dense ids.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // labels.size() fixes the node count; edge endpoints are dense ids.
  // Rejects self-loops, duplicate (source, target) pairs, endpoints out of
  // range, weights outside [0, 1], and duplicate labels.
  DirectedGraph(std::vector<std::string> labels, std::vector<Edge> edges)
      : labels_(std::move(labels)), edges_(std::move(edges)) {
    const NodeId n = node_count();
    for (const Edge& e : edges_) {
      if (e.source >= n || e.target >= n)
        throw DataError("edge endpoint out of range: " +
                        std::to_string(e.source) + " -> " +
                        std::to_string(e.target));
      if (e.source == e.target)
        throw DataError("self-loop on node " + node_name(e.source));
      if (!(e.weight >= 0.0 && e.weight <= 1.0))
        throw DataError("edge weight outside [0, 1] on " +
                        node_name(e.source) + " -> " + node_name(e.target));
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].source == edges_[i - 1].source &&
          edges_[i].target == edges_[i - 1].target)
        throw DataError("duplicate edge " + node_name(edges_[i].source) +
                        " -> " + node_name(edges_[i].target));
    }

    out_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    out_edges_.reserve(edges_.size());
    in_degree_.assign(n, 0);
    for (const Edge& e : edges_) {
      ++out_offsets_[e.source + 1];
      ++in_degree_[e.target];
    }
    for (NodeId v = 0; v < n; ++v) out_offsets_[v + 1] += out_offsets_[v];
    for (const Edge& e : edges_) out_edges_.push_back({e.target, e.weight});

    index_.reserve(labels_.size());
    for (NodeId v = 0; v < n; ++v) {
      if (!index_.emplace(labels_[v], v).second)
        throw DataError("duplicate node label \"" + labels_[v] + "\"");
    }
  }

  NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }
  std::size_t edge_count() const { return edges_.size(); }

  // Sorted by (source, target).
  std::span<const Edge> edges() const { return edges_; }

  // Targets of edges leaving v, ascending target id.
  std::span<const OutEdge> out_neighbors(NodeId v) const {
    check_node(v);
    return {out_edges_.data() + out_offsets_[v],
            out_offsets_[v + 1] - out_offsets_[v]};
  }

  std::uint32_t out_degree(NodeId v) const {
    check_node(v);
    return static_cast<std::uint32_t>(out_offsets_[v + 1] - out_offsets_[v]);
  }

  std::uint32_t in_degree(NodeId v) const {
    check_node(v);
    return in_degree_[v];
  }

  const std::string& label(NodeId v) const {
    check_node(v);
    return labels_[v];
  }

  std::optional<NodeId> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void check_node(NodeId v) const {
    if (v >= node_count())
      throw std::out_of_range("node id " + std::to_string(v) +
                              " out of range (n=" +
                              std::to_string(node_count()) + ")");
  }

  std::string node_name(NodeId v) const {
    return v < labels_.size() ? labels_[v] : std::to_string(v);
  }

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<OutEdge> out_edges_;
  std::vector<std::uint32_t> in_degree_;
  std::unordered_map<std::string, NodeId> index_;
};

}  // namespace uape
