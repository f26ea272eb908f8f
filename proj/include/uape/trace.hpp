#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/graph.hpp"
#include "uape/io.hpp"

namespace uape {

// One attitude change: `node` moved from `old_attitude` to `new_attitude` in
// `round` after a message from `sender`. `p` is the raw (unclamped) influence
// of that message; `a` is the node's persistence right after the update that
// preceded the change.
struct TraceEvent {
  std::uint32_t round;
  NodeId node;
  TopicId topic;
  Attitude old_attitude;
  Attitude new_attitude;
  NodeId sender;
  double p;
  double a;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Cumulative attitude-class counts at the end of a round, plus the size of
// the adjacent set accumulated so far. Round 0 is the initial state.
struct RoundSummary {
  std::uint32_t round;
  TopicId topic;
  NodeId positive;
  NodeId neutral;
  NodeId negative;
  NodeId unknown;
  NodeId adjacent;

  friend bool operator==(const RoundSummary&, const RoundSummary&) = default;
};

struct CascadeTrace {
  NodeId node_count = 0;
  TopicId topic_count = 0;
  std::uint32_t rounds = 0;
  std::vector<TraceEvent> events;      // ordered by (round, sender, node, topic)
  std::vector<RoundSummary> summaries; // ordered by (round, topic)
};

inline void write_trace_csv(std::ostream& out, const CascadeTrace& trace,
                            const DirectedGraph& g) {
  out << "round,node,topic,old,new,sender,p,a\n";
  for (const TraceEvent& e : trace.events) {
    out << e.round << "," << g.label(e.node) << "," << e.topic << ","
        << attitude_token(e.old_attitude) << "," << attitude_token(e.new_attitude)
        << "," << g.label(e.sender) << "," << format_double(e.p) << ","
        << format_double(e.a) << "\n";
  }
}

// Events only; summaries are not part of the file format.
inline CascadeTrace read_trace_csv(std::istream& in, const DirectedGraph& g,
                                   std::string_view source = "<trace>") {
  CascadeTrace trace;
  trace.node_count = g.node_count();
  bool header_seen = false;
  detail::for_each_record(
      in, source, [](std::string_view, std::size_t) {},
      [&](const std::vector<std::string_view>& fields, std::size_t lineno) {
        if (!header_seen) {
          header_seen = true;
          if (fields.size() != 8 || fields[0] != "round")
            fail_at_line(source, lineno,
                         "expected header \"round,node,topic,old,new,sender,p,a\"");
          return;
        }
        if (fields.size() != 8)
          fail_at_line(source, lineno, "expected 8 fields");
        TraceEvent e{};
        auto round = detail::parse_uint(fields[0]);
        auto node = g.find(std::string(fields[1]));
        auto topic = detail::parse_uint(fields[2]);
        auto old_value = detail::parse_double(fields[3]);
        auto new_value = detail::parse_double(fields[4]);
        auto sender = g.find(std::string(fields[5]));
        auto p = detail::parse_double(fields[6]);
        auto a = detail::parse_double(fields[7]);
        if (!round || !node || !topic || !old_value || !new_value || !sender ||
            !p || !a)
          fail_at_line(source, lineno, "malformed trace event");
        auto old_att = attitude_from_value(*old_value);
        auto new_att = attitude_from_value(*new_value);
        if (!old_att || !new_att)
          fail_at_line(source, lineno, "attitude off the lattice");
        e.round = static_cast<std::uint32_t>(*round);
        e.node = *node;
        e.topic = static_cast<TopicId>(*topic);
        e.old_attitude = *old_att;
        e.new_attitude = *new_att;
        e.sender = *sender;
        e.p = *p;
        e.a = *a;
        trace.events.push_back(e);
        if (e.round > trace.rounds) trace.rounds = e.round;
        if (e.topic + 1 > trace.topic_count) trace.topic_count = e.topic + 1;
      });
  return trace;
}

}  // namespace uape
