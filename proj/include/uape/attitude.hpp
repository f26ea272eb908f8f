#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "uape/error.hpp"

namespace uape {

using NodeId = std::uint32_t;
using TopicId = std::uint32_t;

// Four-valued attitude lattice. Numeric convention: unknown -1, positive 0,
// neutral 0.5, negative 1. All lattice values are exactly representable, so
// equality on the numeric values is exact.
enum class Attitude : std::uint8_t { Unknown = 0, Positive, Neutral, Negative };

constexpr double attitude_value(Attitude a) {
  switch (a) {
    case Attitude::Unknown:
      return -1.0;
    case Attitude::Positive:
      return 0.0;
    case Attitude::Neutral:
      return 0.5;
    case Attitude::Negative:
      return 1.0;
  }
  return -1.0;
}

constexpr std::optional<Attitude> attitude_from_value(double v) {
  if (v == -1.0) return Attitude::Unknown;
  if (v == 0.0) return Attitude::Positive;
  if (v == 0.5) return Attitude::Neutral;
  if (v == 1.0) return Attitude::Negative;
  return std::nullopt;
}

// Canonical file token.
constexpr const char* attitude_token(Attitude a) {
  switch (a) {
    case Attitude::Unknown:
      return "-1";
    case Attitude::Positive:
      return "0";
    case Attitude::Neutral:
      return "0.5";
    case Attitude::Negative:
      return "1";
  }
  return "-1";
}

// Dense (node, topic) -> Attitude table, default Unknown everywhere.
class AttitudeState {
 public:
  AttitudeState() = default;
  AttitudeState(NodeId nodes, TopicId topics)
      : n_(nodes),
        z_(topics),
        cells_(static_cast<std::size_t>(nodes) * topics, Attitude::Unknown) {}

  NodeId node_count() const { return n_; }
  TopicId topic_count() const { return z_; }

  Attitude at(NodeId v, TopicId t) const { return cells_[index(v, t)]; }
  void set(NodeId v, TopicId t, Attitude a) { cells_[index(v, t)] = a; }
  bool known(NodeId v, TopicId t) const { return at(v, t) != Attitude::Unknown; }

  friend bool operator==(const AttitudeState&, const AttitudeState&) = default;

 private:
  std::size_t index(NodeId v, TopicId t) const {
    UAPE_ASSERT(v < n_ && t < z_, "attitude index out of range");
    return static_cast<std::size_t>(v) * z_ + t;
  }

  NodeId n_ = 0;
  TopicId z_ = 0;
  std::vector<Attitude> cells_;
};

}  // namespace uape
