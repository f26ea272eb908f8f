#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "uape/attitude.hpp"
#include "uape/error.hpp"
#include "uape/graph.hpp"

namespace uape {

// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// One data line split by the file's separator. '\0' means "any whitespace".
inline std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  if (sep == '\0') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) fields.push_back(line.substr(start, i - start));
    }
  } else {
    std::size_t start = 0;
    while (true) {
      std::size_t pos = line.find(sep, start);
      if (pos == std::string_view::npos) {
        fields.push_back(trim(line.substr(start)));
        break;
      }
      fields.push_back(trim(line.substr(start, pos - start)));
      start = pos + 1;
    }
  }
  return fields;
}

inline char detect_separator(std::string_view first_data_line) {
  if (first_data_line.find('\t') != std::string_view::npos) return '\t';
  if (first_data_line.find(',') != std::string_view::npos) return ',';
  return '\0';
}

// Iterates non-empty lines of a line-oriented text file: strips CR, skips
// blanks and '#' comments (exposing them to a directive hook), detects the
// separator from the first data line.
template <typename OnComment, typename OnFields>
void for_each_record(std::istream& in, std::string_view source,
                     OnComment&& on_comment, OnFields&& on_fields) {
  std::string line;
  std::size_t lineno = 0;
  char sep = '\0';
  bool sep_known = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      on_comment(view, lineno);
      continue;
    }
    if (!sep_known) {
      sep = detect_separator(view);
      sep_known = true;
    }
    on_fields(split_fields(view, sep), lineno);
  }
  if (in.bad()) throw DataError(std::string(source) + ": read error");
}

}  // namespace detail

// --- Edge lists -------------------------------------------------------------
//
// One edge per line: "source<sep>target[<sep>weight]", separator (tab, comma,
// or whitespace) detected from the first data line; '#' starts a comment.
// A "# nodes: N" directive before the first edge switches to numeric-id mode:
// labels must be integers in [0, N) and isolated nodes are representable.
// Without the directive, labels are arbitrary strings mapped to dense ids in
// order of first appearance.
inline DirectedGraph load_edge_list(std::istream& in, double default_weight = 1.0,
                                    std::string_view source = "<edge list>") {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Edge> edges;
  std::optional<std::uint64_t> declared_nodes;
  bool saw_data = false;

  auto intern = [&](std::string_view token, std::size_t lineno) -> NodeId {
    if (declared_nodes) {
      auto id = detail::parse_uint(token);
      if (!id || *id >= *declared_nodes)
        fail_at_line(source, lineno,
                     "node id \"" + std::string(token) +
                         "\" not in [0, " + std::to_string(*declared_nodes) +
                         ") declared by \"# nodes:\"");
      return static_cast<NodeId>(*id);
    }
    auto [it, inserted] = ids.emplace(std::string(token),
                                      static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  detail::for_each_record(
      in, source,
      [&](std::string_view comment, std::size_t lineno) {
        std::string_view body = detail::trim(comment.substr(1));
        if (!body.starts_with("nodes:")) return;
        auto n = detail::parse_uint(body.substr(6));
        if (!n) fail_at_line(source, lineno, "malformed \"# nodes:\" directive");
        if (saw_data)
          fail_at_line(source, lineno, "\"# nodes:\" must precede edge lines");
        declared_nodes = *n;
      },
      [&](const std::vector<std::string_view>& fields, std::size_t lineno) {
        saw_data = true;
        if (fields.size() != 2 && fields.size() != 3)
          fail_at_line(source, lineno,
                       "expected \"source<sep>target[<sep>weight]\"");
        const NodeId src = intern(fields[0], lineno);
        const NodeId dst = intern(fields[1], lineno);
        if (src == dst)
          fail_at_line(source, lineno,
                       "self-loop on node \"" + std::string(fields[0]) + "\"");
        double weight = default_weight;
        if (fields.size() == 3) {
          auto w = detail::parse_double(fields[2]);
          if (!w) fail_at_line(source, lineno, "malformed edge weight");
          if (!(*w >= 0.0 && *w <= 1.0))
            fail_at_line(source, lineno, "edge weight outside [0, 1]");
          weight = *w;
        }
        edges.push_back({src, dst, weight});
      });

  if (declared_nodes) {
    labels.reserve(*declared_nodes);
    for (std::uint64_t v = 0; v < *declared_nodes; ++v)
      labels.push_back(std::to_string(v));
  }
  return DirectedGraph(std::move(labels), std::move(edges));
}

// Emits the "# nodes:" directive plus numeric-id rows, sorted by
// (source, target): loading the output reproduces (n, edge set, weights).
inline void write_edge_list(std::ostream& out, const DirectedGraph& g,
                            bool include_weights = true) {
  out << "# nodes: " << g.node_count() << "\n";
  for (const Edge& e : g.edges()) {
    out << e.source << "," << e.target;
    if (include_weights) out << "," << format_double(e.weight);
    out << "\n";
  }
}

// --- Attitude tables ----------------------------------------------------------
//
// One assignment per line: "node<sep>topic<sep>attitude" with attitude in
// {-1, 0, 0.5, 1}. Unlisted pairs stay Unknown.
inline AttitudeState load_attitude_table(std::istream& in, const DirectedGraph& g,
                                         TopicId topics,
                                         std::string_view source = "<attitudes>") {
  AttitudeState state(g.node_count(), topics);
  std::vector<bool> assigned(static_cast<std::size_t>(g.node_count()) * topics,
                             false);
  detail::for_each_record(
      in, source, [](std::string_view, std::size_t) {},
      [&](const std::vector<std::string_view>& fields, std::size_t lineno) {
        if (fields.size() != 3)
          fail_at_line(source, lineno, "expected \"node<sep>topic<sep>attitude\"");
        auto node = g.find(std::string(fields[0]));
        if (!node)
          fail_at_line(source, lineno,
                       "unknown node label \"" + std::string(fields[0]) + "\"");
        auto topic = detail::parse_uint(fields[1]);
        if (!topic || *topic >= topics)
          fail_at_line(source, lineno,
                       "topic out of range (topic count is " +
                           std::to_string(topics) + ")");
        auto value = detail::parse_double(fields[2]);
        std::optional<Attitude> att =
            value ? attitude_from_value(*value) : std::nullopt;
        if (!att)
          fail_at_line(source, lineno,
                       "attitude must be one of -1, 0, 0.5, 1");
        std::size_t cell = static_cast<std::size_t>(*node) * topics + *topic;
        if (assigned[cell])
          fail_at_line(source, lineno,
                       "duplicate assignment for node \"" +
                           std::string(fields[0]) + "\" topic " +
                           std::to_string(*topic));
        assigned[cell] = true;
        state.set(*node, static_cast<TopicId>(*topic), *att);
      });
  return state;
}

// Non-Unknown entries, node-major ascending, labels as written in the graph.
inline void write_attitude_table(std::ostream& out, const AttitudeState& state,
                                 const DirectedGraph& g) {
  for (NodeId v = 0; v < state.node_count(); ++v)
    for (TopicId t = 0; t < state.topic_count(); ++t)
      if (state.known(v, t))
        out << g.label(v) << "," << t << "," << attitude_token(state.at(v, t))
            << "\n";
}

// --- Seed files ---------------------------------------------------------------
//
// One seed per line: "node[<sep>topic[<sep>attitude[<sep>persistence]]]".
// A missing topic means every topic; attitude (if present) must be a known
// lattice value; persistence (if present) is the initial attitude persistence
// for that (node, topic).
struct SeedEntry {
  NodeId node;
  std::optional<TopicId> topic;
  std::optional<Attitude> attitude;
  std::optional<double> persistence;
};

inline std::vector<SeedEntry> load_seed_file(std::istream& in,
                                             const DirectedGraph& g,
                                             TopicId topics,
                                             std::string_view source = "<seeds>") {
  std::vector<SeedEntry> seeds;
  detail::for_each_record(
      in, source, [](std::string_view, std::size_t) {},
      [&](const std::vector<std::string_view>& fields, std::size_t lineno) {
        if (fields.empty() || fields.size() > 4)
          fail_at_line(source, lineno,
                       "expected \"node[,topic[,attitude[,persistence]]]\"");
        SeedEntry entry;
        auto node = g.find(std::string(fields[0]));
        if (!node)
          fail_at_line(source, lineno,
                       "unknown node label \"" + std::string(fields[0]) + "\"");
        entry.node = *node;
        if (fields.size() >= 2) {
          auto topic = detail::parse_uint(fields[1]);
          if (!topic || *topic >= topics)
            fail_at_line(source, lineno,
                         "topic out of range (topic count is " +
                             std::to_string(topics) + ")");
          entry.topic = static_cast<TopicId>(*topic);
        }
        if (fields.size() >= 3) {
          auto value = detail::parse_double(fields[2]);
          std::optional<Attitude> att =
              value ? attitude_from_value(*value) : std::nullopt;
          if (!att || *att == Attitude::Unknown)
            fail_at_line(source, lineno,
                         "seed attitude must be one of 0, 0.5, 1");
          entry.attitude = *att;
        }
        if (fields.size() == 4) {
          auto a = detail::parse_double(fields[3]);
          if (!a || !(*a >= 0.0 && *a <= 1.0))
            fail_at_line(source, lineno, "persistence must be in [0, 1]");
          entry.persistence = *a;
        }
        seeds.push_back(entry);
      });
  return seeds;
}

inline void write_seed_file(std::ostream& out, std::span<const SeedEntry> seeds,
                            const DirectedGraph& g) {
  for (const SeedEntry& s : seeds) {
    out << g.label(s.node);
    if (s.topic) out << "," << *s.topic;
    if (s.attitude) out << "," << attitude_token(*s.attitude);
    if (s.persistence) out << "," << format_double(*s.persistence);
    out << "\n";
  }
}

}  // namespace uape
