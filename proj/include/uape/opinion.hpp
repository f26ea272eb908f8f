#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/graph.hpp"

namespace uape {

// Operator used for the pairwise attitude indicator in the similarity and
// persistence formulas. XorIndicator treats two attitudes as contributing iff
// their difference is not exactly 0.5; AbsDiff grades the contribution by
// 1 - |t_u - t_v|.
enum class IndicatorMode { XorIndicator, AbsDiff };

// 0 if x equals y exactly, else 1. Lattice values are exactly representable,
// so exact comparison is the intended semantics.
inline double xor_indicator(double x, double y) { return x == y ? 0.0 : 1.0; }

// Mean of a node's own opinion and the opinions it received this round.
// The result always lies within [min, max] of the inputs.
inline double degroot_update(double own, std::span<const double> received) {
  double sum = own;
  for (double value : received) sum += value;
  return sum / static_cast<double>(received.size() + 1);
}

// Dense (node, topic) -> opinion table. A cell is undefined (NaN) until the
// node holds a known attitude on the topic; defined values stay in [0, 1].
class OpinionState {
 public:
  OpinionState() = default;
  OpinionState(NodeId nodes, TopicId topics)
      : n_(nodes),
        z_(topics),
        values_(static_cast<std::size_t>(nodes) * topics,
                std::numeric_limits<double>::quiet_NaN()) {}

  static OpinionState from_attitudes(const AttitudeState& attitudes) {
    OpinionState state(attitudes.node_count(), attitudes.topic_count());
    for (NodeId v = 0; v < attitudes.node_count(); ++v)
      for (TopicId t = 0; t < attitudes.topic_count(); ++t)
        if (attitudes.known(v, t))
          state.set(v, t, attitude_value(attitudes.at(v, t)));
    return state;
  }

  NodeId node_count() const { return n_; }
  TopicId topic_count() const { return z_; }

  bool defined(NodeId v, TopicId t) const { return !std::isnan(raw(v, t)); }
  double value(NodeId v, TopicId t) const { return raw(v, t); }

  // Neutral 0.5 stands in wherever an opinion is syntactically required but
  // undefined.
  double value_or_neutral(NodeId v, TopicId t) const {
    const double o = raw(v, t);
    return std::isnan(o) ? 0.5 : o;
  }

  void set(NodeId v, TopicId t, double opinion) {
    UAPE_ASSERT(opinion >= 0.0 && opinion <= 1.0, "opinion outside [0, 1]");
    values_[index(v, t)] = opinion;
  }

 private:
  double raw(NodeId v, TopicId t) const { return values_[index(v, t)]; }
  std::size_t index(NodeId v, TopicId t) const {
    UAPE_ASSERT(v < n_ && t < z_, "opinion index out of range");
    return static_cast<std::size_t>(v) * z_ + t;
  }

  NodeId n_ = 0;
  TopicId z_ = 0;
  std::vector<double> values_;
};

// Per-round public-opinion snapshot: the topics with at least one aware node
// and, for each, the mean opinion over its aware nodes.
struct TopicEnvironment {
  std::vector<TopicId> active;   // ascending
  std::vector<double> reference; // indexed by topic; NaN while inactive

  bool is_active(TopicId t) const {
    return t < reference.size() && !std::isnan(reference[t]);
  }
};

inline TopicEnvironment compute_topic_environment(const AttitudeState& attitudes,
                                                  const OpinionState& opinions) {
  TopicEnvironment env;
  env.reference.assign(attitudes.topic_count(),
                       std::numeric_limits<double>::quiet_NaN());
  for (TopicId t = 0; t < attitudes.topic_count(); ++t) {
    double sum = 0.0;
    NodeId aware = 0;
    for (NodeId v = 0; v < attitudes.node_count(); ++v) {
      if (!attitudes.known(v, t)) continue;
      sum += opinions.value_or_neutral(v, t);
      ++aware;
    }
    if (aware > 0) {
      env.active.push_back(t);
      env.reference[t] = sum / static_cast<double>(aware);
    }
  }
  return env;
}

// Interest of node v in topic i: inverse-distance weight of topic i among all
// active topics, normalized so the values over active topics sum to 1. Each
// topic's weight compares v's opinion on that topic against the topic's
// public reference; the 0.01 keeps a zero distance finite.
inline double interest_probability(const OpinionState& opinions, NodeId v,
                                   TopicId i, const TopicEnvironment& env) {
  if (env.active.empty())
    throw std::invalid_argument("interest_probability: no active topics");
  if (!env.is_active(i))
    throw std::invalid_argument("interest_probability: topic " +
                                std::to_string(i) + " is not active");
  double total = 0.0;
  double weight_i = 0.0;
  for (TopicId t : env.active) {
    const double own = opinions.value_or_neutral(v, t);
    const double w = 1.0 / (std::abs(own - env.reference[t]) + 0.01);
    total += w;
    if (t == i) weight_i = w;
  }
  return weight_i / total;
}

// sqrt of the summed pairwise indicator over the topics both nodes know.
// Returns 0 when the nodes share no known topics.
inline double attitude_similarity(const AttitudeState& attitudes, NodeId u,
                                  NodeId v, IndicatorMode mode) {
  double sum = 0.0;
  for (TopicId t = 0; t < attitudes.topic_count(); ++t) {
    if (!attitudes.known(u, t) || !attitudes.known(v, t)) continue;
    const double tu = attitude_value(attitudes.at(u, t));
    const double tv = attitude_value(attitudes.at(v, t));
    if (mode == IndicatorMode::XorIndicator) {
      sum += xor_indicator(tu - tv, 0.5);
    } else {
      const double d = 1.0 - std::abs(tu - tv);
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

struct Influence {
  double raw;    // before clamping; recorded in traces
  double value;  // clamped to [0, 1]; consumed by the model
};

// Influence of `sender` on `recipient` for `topic`: interest x similarity,
// damped by the recipient's in-degree. The recipient must have at least the
// edge the message arrived on; anything else is a caller bug.
inline Influence influence_probability(const DirectedGraph& graph,
                                       const AttitudeState& attitudes,
                                       const OpinionState& opinions,
                                       const TopicEnvironment& env,
                                       NodeId sender, NodeId recipient,
                                       TopicId topic, IndicatorMode mode) {
  const std::uint32_t in_deg = graph.in_degree(recipient);
  UAPE_ASSERT(in_deg >= 1, "influence_probability on a node with in-degree 0");
  const double interest = interest_probability(opinions, recipient, topic, env);
  const double similarity = attitude_similarity(attitudes, sender, recipient, mode);
  const double raw = (interest * similarity) / static_cast<double>(in_deg);
  return {raw, std::min(raw, 1.0)};
}

// --- Attitude persistence -----------------------------------------------------

struct OpinionMessage {
  double sender_value;  // sender's attitude value when the message was sent
  double influence;     // clamped influence probability of the message
};

// Per (node, topic): persistence scalar plus the full history of received
// messages. Every persistence update re-evaluates the whole history against
// the node's current attitude.
class PersistenceState {
 public:
  PersistenceState() = default;
  PersistenceState(NodeId nodes, TopicId topics, double initial)
      : n_(nodes),
        z_(topics),
        cells_(static_cast<std::size_t>(nodes) * topics, Cell{initial, {}}) {
    UAPE_ASSERT(initial >= 0.0 && initial <= 1.0,
                "initial persistence outside [0, 1]");
  }

  NodeId node_count() const { return n_; }
  TopicId topic_count() const { return z_; }

  double value(NodeId v, TopicId t) const { return cells_[index(v, t)].a; }
  std::size_t received_count(NodeId v, TopicId t) const {
    return cells_[index(v, t)].log.size();
  }
  std::span<const OpinionMessage> message_log(NodeId v, TopicId t) const {
    return cells_[index(v, t)].log;
  }

  // Pre-run override (seed files); only valid before any message arrived.
  void set_initial(NodeId v, TopicId t, double a) {
    UAPE_ASSERT(a >= 0.0 && a <= 1.0, "persistence outside [0, 1]");
    Cell& cell = cells_[index(v, t)];
    UAPE_ASSERT(cell.log.empty(), "persistence override after messages");
    cell.a = a;
  }

  // Appends the message, then re-evaluates: a <- clamp(a - sum/q) where each
  // logged message contributes |t_u - t_v| * P for disagreement and -P for
  // agreement with the recipient's current attitude value.
  double update(NodeId v, TopicId t, double recipient_value, OpinionMessage msg) {
    cells_[index(v, t)].log.push_back(msg);
    return recompute(v, t, recipient_value);
  }

  // Adopts one topic's column (values and logs) from another table of the
  // same shape; used to merge independent per-topic runs.
  void copy_topic_from(const PersistenceState& other, TopicId t) {
    UAPE_ASSERT(other.n_ == n_ && other.z_ == z_, "persistence shape mismatch");
    for (NodeId v = 0; v < n_; ++v) cells_[index(v, t)] = other.cells_[index(v, t)];
  }

  // Re-evaluation alone; an empty history leaves the value unchanged.
  double recompute(NodeId v, TopicId t, double recipient_value) {
    Cell& cell = cells_[index(v, t)];
    if (cell.log.empty()) return cell.a;
    double sum = 0.0;
    for (const OpinionMessage& m : cell.log) {
      sum += std::abs(m.sender_value - recipient_value) * m.influence -
             (1.0 - xor_indicator(m.sender_value, recipient_value)) * m.influence;
    }
    cell.a = std::clamp(cell.a - sum / static_cast<double>(cell.log.size()), 0.0, 1.0);
    return cell.a;
  }

 private:
  struct Cell {
    double a;
    std::vector<OpinionMessage> log;
  };

  std::size_t index(NodeId v, TopicId t) const {
    UAPE_ASSERT(v < n_ && t < z_, "persistence index out of range");
    return static_cast<std::size_t>(v) * z_ + t;
  }

  NodeId n_ = 0;
  TopicId z_ = 0;
  std::vector<Cell> cells_;
};

}  // namespace uape
