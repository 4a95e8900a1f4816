#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "wsncipher/hex.hpp"
#include "wsncipher/sim.hpp"

// JSON form of sim_config and sim_report. Node ids used as object keys are
// decimal strings; keys are lowercase hex without prefix.
//
// {
//   "seed": 7, "duration_ticks": 100, "sense_period_ticks": 10, "hop_latency_ticks": 1,
//   "nodes": [{"id": 1, "role": "sensor", "kind": "scalar", "sense_period_ticks": 5}, ...],
//   "edges": [[1, 3], ...],
//   "routes": {"hubs": {"3": [3, 4]}, "sinks": {"4": [4, 5, 6]}},
//   "keys": {"4": "5a5a5a5a5a5a5a5a"},
//   "sink_keys": {"4": "..."},                                   optional
//   "faults": {"flip_bits": [{"frame": 0, "bit": 100}], "drop_frames": [2]}   optional
// }
namespace wsnc::sim {

namespace json_detail {

using nlohmann::json;

inline node_role parse_role(const std::string& s) {
  if (s == "sensor") return node_role::sensor;
  if (s == "hub") return node_role::hub;
  if (s == "sink") return node_role::sink;
  if (s == "relay") return node_role::relay;
  if (s == "fusion_center") return node_role::fusion_center;
  throw error(errc::invalid_config, "unknown role '" + s + "'");
}

inline wire::sensor_kind parse_kind(const std::string& s) {
  if (s == "scalar") return wire::sensor_kind::scalar;
  if (s == "audio") return wire::sensor_kind::audio;
  if (s == "video") return wire::sensor_kind::video;
  throw error(errc::invalid_config, "unknown sensor kind '" + s + "'");
}

inline node_id parse_id(const std::string& s) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || v > 0xffff) throw error(errc::invalid_config, "bad node id '" + s + "'");
  return static_cast<node_id>(v);
}

inline key_registry parse_keys(const json& j) {
  key_registry out;
  for (const auto& [id, hex_key] : j.items()) {
    try {
      out.emplace(parse_id(id), secret_key(hex::decode(hex_key.get<std::string>())));
    } catch (const error& e) {
      if (e.code() == errc::invalid_config) throw;
      throw error(errc::invalid_config, "key for sink " + id + ": " + e.what());
    }
  }
  return out;
}

inline std::map<node_id, path> parse_routes(const json& j) {
  std::map<node_id, path> out;
  for (const auto& [id, hops] : j.items()) out[parse_id(id)] = hops.get<path>();
  return out;
}

inline json keys_to_json(const key_registry& keys) {
  json j = json::object();
  for (const auto& [id, k] : keys) j[std::to_string(id)] = hex::encode(k.data());
  return j;
}

inline json routes_to_json(const std::map<node_id, path>& routes) {
  json j = json::object();
  for (const auto& [id, p] : routes) j[std::to_string(id)] = p;
  return j;
}

}  // namespace json_detail

inline sim_config config_from_json(const nlohmann::json& j) {
  using namespace json_detail;
  try {
    sim_config c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.duration_ticks = j.at("duration_ticks").get<tick_t>();
    c.sense_period_ticks = j.at("sense_period_ticks").get<tick_t>();
    c.hop_latency_ticks = j.at("hop_latency_ticks").get<tick_t>();

    for (const auto& jn : j.at("nodes")) {
      node n;
      n.id = jn.at("id").get<node_id>();
      n.role = parse_role(jn.at("role").get<std::string>());
      if (n.role == node_role::sensor) n.kind = parse_kind(jn.at("kind").get<std::string>());
      if (jn.contains("sense_period_ticks")) n.sense_period = jn.at("sense_period_ticks").get<tick_t>();
      c.topo.nodes.push_back(n);
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw error(errc::invalid_config, "edge must be a pair");
      c.topo.edges.emplace_back(e[0].get<node_id>(), e[1].get<node_id>());
    }
    const auto& routes = j.at("routes");
    c.topo.hub_routes = parse_routes(routes.at("hubs"));
    c.topo.sink_routes = parse_routes(routes.at("sinks"));
    c.registry = parse_keys(j.at("keys"));
    if (j.contains("sink_keys")) c.sink_keys = parse_keys(j.at("sink_keys"));

    if (j.contains("faults")) {
      const auto& f = j.at("faults");
      if (f.contains("flip_bits")) {
        for (const auto& flip : f.at("flip_bits")) {
          c.faults.flips.push_back({flip.at("frame").get<std::uint32_t>(), flip.at("bit").get<std::size_t>()});
        }
      }
      if (f.contains("drop_frames")) c.faults.drops = f.at("drop_frames").get<std::vector<std::uint32_t>>();
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_config, e.what());
  }
}

inline nlohmann::json config_to_json(const sim_config& c) {
  using namespace json_detail;
  json j;
  j["seed"] = c.seed;
  j["duration_ticks"] = c.duration_ticks;
  j["sense_period_ticks"] = c.sense_period_ticks;
  j["hop_latency_ticks"] = c.hop_latency_ticks;
  j["nodes"] = json::array();
  for (const auto& n : c.topo.nodes) {
    json jn{{"id", n.id}, {"role", std::string(to_string(n.role))}};
    if (n.role == node_role::sensor) jn["kind"] = std::string(wire::to_string(n.kind));
    if (n.sense_period) jn["sense_period_ticks"] = *n.sense_period;
    j["nodes"].push_back(jn);
  }
  j["edges"] = json::array();
  for (const auto& [a, b] : c.topo.edges) j["edges"].push_back({a, b});
  j["routes"] = {{"hubs", routes_to_json(c.topo.hub_routes)}, {"sinks", routes_to_json(c.topo.sink_routes)}};
  j["keys"] = keys_to_json(c.registry);
  if (!c.sink_keys.empty()) j["sink_keys"] = keys_to_json(c.sink_keys);
  if (!c.faults.flips.empty() || !c.faults.drops.empty()) {
    json flips = json::array();
    for (const auto& f : c.faults.flips) flips.push_back({{"frame", f.frame}, {"bit", f.bit}});
    j["faults"] = {{"flip_bits", flips}, {"drop_frames", c.faults.drops}};
  }
  return j;
}

inline sim_config load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_config, e.what());
  }
  return config_from_json(j);
}

inline nlohmann::json report_to_json(const sim_report& r) {
  nlohmann::json per_sink = nlohmann::json::object();
  for (const auto& [id, s] : r.per_sink) {
    per_sink[std::to_string(id)] = {{"frames_sent", s.frames_sent},
                                    {"frames_delivered", s.frames_delivered},
                                    {"frames_rejected", s.frames_rejected},
                                    {"readings_recovered", s.readings_recovered},
                                    {"last_sequence", s.last_sequence ? nlohmann::json(*s.last_sequence) : nlohmann::json(nullptr)}};
  }
  nlohmann::json rejected = nlohmann::json::object();
  for (const auto& [kind, n] : r.frames_rejected) rejected[kind] = n;
  return {{"readings_sensed", r.readings_sensed},
          {"frames_sent", r.frames_sent},
          {"frames_delivered", r.frames_delivered},
          {"frames_lost", r.frames_lost},
          {"frames_rejected", rejected},
          {"readings_recovered", r.readings_recovered},
          {"relay_forwards", r.relay_forwards},
          {"fidelity_ok", r.fidelity_ok},
          {"per_sink", per_sink}};
}

}  // namespace wsnc::sim
