#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "uape/engine.hpp"
#include "uape/error.hpp"
#include "uape/io.hpp"

namespace uape {

// Flat "key = value" text, '#' comments, one key per line. Parsing is strict:
// unknown or repeated keys are errors, so a typo cannot silently fall back to
// a default.
inline SimulationConfig parse_config(std::istream& in,
                                     std::string_view source = "<config>") {
  SimulationConfig config;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;

  auto bad = [&](const std::string& what) { fail_at_line(source, lineno, what); };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) bad("expected \"key = value\"");
    const std::string key(detail::trim(view.substr(0, eq)));
    const std::string value(detail::trim(view.substr(eq + 1)));
    if (key.empty()) bad("empty config key");
    if (!seen.insert(key).second) bad("repeated config key \"" + key + "\"");

    if (key == "rounds") {
      auto v = detail::parse_uint(value);
      if (!v || *v < 1) bad("rounds must be a positive integer");
      config.rounds = static_cast<std::uint32_t>(*v);
    } else if (key == "topic") {
      if (value == "all") {
        config.topic.reset();
      } else {
        auto v = detail::parse_uint(value);
        if (!v) bad("topic must be \"all\" or a non-negative integer");
        config.topic = static_cast<TopicId>(*v);
      }
    } else if (key == "rng_seed") {
      auto v = detail::parse_uint(value);
      if (!v) bad("rng_seed must be a non-negative integer");
      config.rng_seed = *v;
    } else if (key == "indicator_mode") {
      if (value == "xor_indicator")
        config.indicator_mode = IndicatorMode::XorIndicator;
      else if (value == "abs_diff")
        config.indicator_mode = IndicatorMode::AbsDiff;
      else
        bad("indicator_mode must be xor_indicator or abs_diff");
    } else if (key == "initial_persistence") {
      auto v = detail::parse_double(value);
      if (!v || !(*v >= 0.0 && *v <= 1.0)) bad("initial_persistence must be in [0, 1]");
      config.initial_persistence = *v;
    } else if (key == "edge_gate") {
      if (value == "off")
        config.edge_gate = EdgeGate::Off;
      else if (value == "bernoulli")
        config.edge_gate = EdgeGate::Bernoulli;
      else
        bad("edge_gate must be off or bernoulli");
    } else if (key == "global_edge_probability") {
      auto v = detail::parse_double(value);
      if (!v || !(*v >= 0.0 && *v <= 1.0))
        bad("global_edge_probability must be in [0, 1]");
      config.global_edge_probability = *v;
    } else if (key == "monte_carlo_runs") {
      auto v = detail::parse_uint(value);
      if (!v || *v < 1) bad("monte_carlo_runs must be a positive integer");
      config.monte_carlo_runs = static_cast<std::uint32_t>(*v);
    } else if (key == "model") {
      if (value == "uape")
        config.model = Model::Uape;
      else if (value == "ic")
        config.model = Model::Ic;
      else
        bad("model must be uape or ic");
    } else if (key == "ic_p") {
      if (value == "edge_weight") {
        config.ic_p.reset();
      } else {
        auto v = detail::parse_double(value);
        if (!v || !(*v >= 0.0 && *v <= 1.0))
          bad("ic_p must be \"edge_weight\" or a probability in [0, 1]");
        config.ic_p = *v;
      }
    } else {
      bad("unknown config key \"" + key + "\"");
    }
  }
  if (in.bad()) throw DataError(std::string(source) + ": read error");
  return config;
}

// Canonical serialization: every key, fixed order, defaults materialized.
// parse_config(write_config(c)) == c.
inline void write_config(std::ostream& out, const SimulationConfig& config) {
  out << "model = " << (config.model == Model::Uape ? "uape" : "ic") << "\n";
  out << "rounds = " << config.rounds << "\n";
  out << "topic = ";
  if (config.topic)
    out << *config.topic << "\n";
  else
    out << "all\n";
  out << "rng_seed = " << config.rng_seed << "\n";
  out << "indicator_mode = "
      << (config.indicator_mode == IndicatorMode::XorIndicator ? "xor_indicator"
                                                               : "abs_diff")
      << "\n";
  out << "initial_persistence = " << format_double(config.initial_persistence)
      << "\n";
  out << "edge_gate = "
      << (config.edge_gate == EdgeGate::Off ? "off" : "bernoulli") << "\n";
  out << "global_edge_probability = "
      << format_double(config.global_edge_probability) << "\n";
  out << "monte_carlo_runs = " << config.monte_carlo_runs << "\n";
  out << "ic_p = ";
  if (config.ic_p)
    out << format_double(*config.ic_p) << "\n";
  else
    out << "edge_weight\n";
}

inline std::string config_text(const SimulationConfig& config) {
  std::ostringstream out;
  write_config(out, config);
  return out.str();
}

}  // namespace uape
