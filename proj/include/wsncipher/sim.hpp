#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wsncipher/cipher.hpp"
#include "wsncipher/error.hpp"
#include "wsncipher/wire.hpp"

// Deterministic discrete-event model of a sensor network: sensors sense, a hub
// aggregates, the batch travels to a sink that encrypts it, the frame is
// relayed hop by hop, and the fusion center decrypts with its key registry.
namespace wsnc::sim {

using node_id = std::uint16_t;
using tick_t = std::uint32_t;

enum class node_role { sensor, hub, sink, relay, fusion_center };

inline constexpr std::string_view to_string(node_role r) noexcept {
  switch (r) {
    case node_role::sensor: return "sensor";
    case node_role::hub: return "hub";
    case node_role::sink: return "sink";
    case node_role::relay: return "relay";
    case node_role::fusion_center: return "fusion_center";
  }
  return "?";
}

struct node {
  node_id id = 0;
  node_role role = node_role::relay;
  wire::sensor_kind kind = wire::sensor_kind::scalar;  // sensors only
  std::optional<tick_t> sense_period{};                // overrides the config default
};

using path = std::vector<node_id>;

struct topology {
  std::vector<node> nodes;
  std::vector<std::pair<node_id, node_id>> edges;  // undirected
  std::map<node_id, path> hub_routes;              // hub ... sink
  std::map<node_id, path> sink_routes;             // sink ... fusion center

  const node* find(node_id id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [id](const node& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
  }

  bool adjacent(node_id a, node_id b) const {
    return std::any_of(edges.begin(), edges.end(), [a, b](const auto& e) {
      return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
  }

  std::vector<node_id> neighbours_with_role(node_id id, node_role role) const {
    std::vector<node_id> out;
    for (const auto& n : nodes) {
      if (n.role == role && n.id != id && adjacent(id, n.id)) out.push_back(n.id);
    }
    return out;
  }

  std::vector<node_id> ids_with_role(node_role role) const {
    std::vector<node_id> out;
    for (const auto& n : nodes) {
      if (n.role == role) out.push_back(n.id);
    }
    return out;
  }
};

namespace detail {

inline std::string describe_route(std::string_view owner, node_id id) {
  return std::string(owner) + " " + std::to_string(id) + " route";
}

inline void check_route(const topology& t, std::string_view owner, node_id start, const path& p,
                        node_role end_role, std::vector<std::string>& out) {
  const std::string what = describe_route(owner, start);
  if (p.size() < 2) {
    out.push_back(what + " has fewer than two nodes");
    return;
  }
  if (p.front() != start) out.push_back(what + " does not start at " + std::to_string(start));
  for (node_id hop : p) {
    if (t.find(hop) == nullptr) out.push_back(what + " names unknown node " + std::to_string(hop));
  }
  const node* last = t.find(p.back());
  if (last != nullptr && last->role != end_role) {
    out.push_back(what + " ends at node " + std::to_string(p.back()) + " which is not a " +
                  std::string(to_string(end_role)));
  }
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!t.adjacent(p[i], p[i + 1])) {
      out.push_back(what + " uses missing edge " + std::to_string(p[i]) + "-" + std::to_string(p[i + 1]));
    }
  }
}

}  // namespace detail

// Returns every violated invariant; an empty list means the topology is valid.
inline std::vector<std::string> validate_topology(const topology& t) {
  std::vector<std::string> out;

  std::set<node_id> seen;
  for (const auto& n : t.nodes) {
    if (!seen.insert(n.id).second) out.push_back("duplicate node id " + std::to_string(n.id));
  }

  const auto fusion = t.ids_with_role(node_role::fusion_center);
  if (fusion.empty()) out.push_back("missing fusion center");
  if (fusion.size() > 1) out.push_back("more than one fusion center");

  for (const auto& [a, b] : t.edges) {
    if (a == b) out.push_back("self-loop on node " + std::to_string(a));
    if (t.find(a) == nullptr || t.find(b) == nullptr) {
      out.push_back("edge " + std::to_string(a) + "-" + std::to_string(b) + " names an unknown node");
    }
  }

  for (const auto& n : t.nodes) {
    switch (n.role) {
      case node_role::sensor: {
        const auto hubs = t.neighbours_with_role(n.id, node_role::hub);
        if (hubs.size() != 1) {
          out.push_back("sensor " + std::to_string(n.id) + " is adjacent to " +
                        std::to_string(hubs.size()) + " hubs, expected exactly one");
        }
        if (n.sense_period && *n.sense_period == 0) {
          out.push_back("sensor " + std::to_string(n.id) + " has a zero sense period");
        }
        break;
      }
      case node_role::hub: {
        auto it = t.hub_routes.find(n.id);
        if (it == t.hub_routes.end()) {
          out.push_back("hub " + std::to_string(n.id) + " has no route to a sink");
        } else {
          detail::check_route(t, "hub", n.id, it->second, node_role::sink, out);
        }
        break;
      }
      case node_role::sink: {
        auto it = t.sink_routes.find(n.id);
        if (it == t.sink_routes.end()) {
          out.push_back("sink " + std::to_string(n.id) + " has no route to the fusion center");
        } else {
          detail::check_route(t, "sink", n.id, it->second, node_role::fusion_center, out);
        }
        break;
      }
      default:
        break;
    }
  }

  for (const auto& [id, p] : t.hub_routes) {
    const node* n = t.find(id);
    if (n == nullptr || n->role != node_role::hub) out.push_back("route given for non-hub " + std::to_string(id));
  }
  for (const auto& [id, p] : t.sink_routes) {
    const node* n = t.find(id);
    if (n == nullptr || n->role != node_role::sink) out.push_back("route given for non-sink " + std::to_string(id));
  }
  return out;
}

using key_registry = std::map<node_id, secret_key>;

// Injected faults, indexed by global frame send order. Off by default.
struct fault_plan {
  struct bit_flip {
    std::uint32_t frame = 0;
    std::size_t bit = 0;
    friend bool operator==(const bit_flip&, const bit_flip&) = default;
  };
  std::vector<bit_flip> flips;
  std::vector<std::uint32_t> drops;

  friend bool operator==(const fault_plan&, const fault_plan&) = default;
};

struct sim_config {
  topology topo;
  key_registry registry;   // fusion center's keys
  key_registry sink_keys;  // keys provisioned at sinks; missing entries fall back to registry
  std::uint64_t seed = 0;
  tick_t duration_ticks = 0;
  tick_t sense_period_ticks = 1;
  tick_t hop_latency_ticks = 1;
  fault_plan faults;
};

struct sink_stats {
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_delivered = 0;
  std::uint64_t frames_rejected = 0;
  std::uint64_t readings_recovered = 0;
  std::optional<std::uint32_t> last_sequence;  // highest accepted at the fusion center
  friend bool operator==(const sink_stats&, const sink_stats&) = default;
};

struct sim_report {
  std::uint64_t readings_sensed = 0;
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_delivered = 0;
  std::uint64_t frames_lost = 0;
  std::map<std::string, std::uint64_t> frames_rejected;  // by error kind
  std::uint64_t readings_recovered = 0;
  std::uint64_t relay_forwards = 0;
  bool fidelity_ok = true;
  std::map<node_id, sink_stats> per_sink;

  std::uint64_t total_rejected() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : frames_rejected) n += v;
    return n;
  }

  friend bool operator==(const sim_report&, const sim_report&) = default;
};

inline constexpr std::size_t value_size(wire::sensor_kind kind) noexcept {
  switch (kind) {
    case wire::sensor_kind::scalar: return 2;
    case wire::sensor_kind::audio: return 16;
    case wire::sensor_kind::video: return 32;
  }
  return 0;
}

// splitmix64 finaliser: z ^= z>>30; z *= 0xbf58476d1ce4e5b9; z ^= z>>27;
// z *= 0x94d049bb133111eb; z ^= z>>31.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Value bytes come from mix64(base + (i+1)*golden) for 8-byte word i, with
// base = mix64(seed ^ node_id*0x9e3779b97f4a7c15 ^ tick*0xc2b2ae3d27d4eb4f),
// emitted big-endian and truncated to the kind's length.
inline wire::sensor_reading sense(const topology& t, node_id id, tick_t tick, std::uint64_t seed) {
  const node* n = t.find(id);
  if (n == nullptr || n->role != node_role::sensor) throw error(errc::not_a_sensor, std::to_string(id));

  constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ull;
  const std::uint64_t base = mix64(seed ^ (std::uint64_t{id} * golden) ^ (std::uint64_t{tick} * 0xc2b2ae3d27d4eb4full));

  wire::sensor_reading r;
  r.node_id = id;
  r.timestamp = tick;
  r.kind = n->kind;
  const std::size_t len = value_size(n->kind);
  r.value.reserve(len);
  for (std::uint64_t word = 0; r.value.size() < len; ++word) {
    const std::uint64_t z = mix64(base + (word + 1) * golden);
    for (int shift = 56; shift >= 0 && r.value.size() < len; shift -= 8) {
      r.value.push_back(static_cast<std::uint8_t>(z >> shift));
    }
  }
  return r;
}

// Serialises a hub's batch ordered by (node_id, timestamp).
inline bytes aggregate(const topology& t, node_id hub, std::vector<wire::sensor_reading> readings) {
  for (const auto& r : readings) {
    const node* n = t.find(r.node_id);
    if (n == nullptr || n->role != node_role::sensor || !t.adjacent(hub, r.node_id)) {
      throw error(errc::foreign_reading, "node " + std::to_string(r.node_id) + " at hub " + std::to_string(hub));
    }
  }
  std::stable_sort(readings.begin(), readings.end(), [](const auto& a, const auto& b) {
    return std::tie(a.node_id, a.timestamp) < std::tie(b.node_id, b.timestamp);
  });
  return wire::encode_readings(readings);
}

inline wire::frame sink_transmit(node_id sink, byte_view payload, std::uint32_t sequence,
                                 const secret_key& key) {
  wire::frame f;
  f.sink_id = sink;
  f.sequence = sequence;
  f.payload = encrypt(payload, key);
  return f;
}

struct hop {
  node_id node = 0;
  tick_t arrival = 0;
  friend bool operator==(const hop&, const hop&) = default;
};

struct delivery {
  bytes data;             // forwarded unchanged
  std::vector<hop> hops;  // one entry per node after the first
  tick_t arrival() const { return hops.empty() ? 0 : hops.back().arrival; }
};

// Forwards bytes along `route`; no intermediate node looks inside.
inline delivery relay(const topology& t, bytes data, const path& route, tick_t departure,
                      tick_t hop_latency) {
  if (route.size() < 2) throw error(errc::broken_route, "route has fewer than two nodes");
  for (node_id id : route) {
    if (t.find(id) == nullptr) throw error(errc::broken_route, "node " + std::to_string(id) + " is gone");
  }
  delivery d;
  d.data = std::move(data);
  tick_t at = departure;
  for (std::size_t i = 1; i < route.size(); ++i) {
    if (!t.adjacent(route[i - 1], route[i])) {
      throw error(errc::broken_route,
                  "no edge " + std::to_string(route[i - 1]) + "-" + std::to_string(route[i]));
    }
    at += hop_latency;
    d.hops.push_back({route[i], at});
  }
  return d;
}

struct fusion_result {
  std::optional<node_id> sink;
  std::uint32_t sequence = 0;
  std::vector<wire::sensor_reading> readings;
  std::optional<errc> rejection;

  bool accepted() const { return !rejection.has_value(); }
};

inline fusion_result fusion_receive(byte_view frame_bytes, const key_registry& registry) {
  fusion_result out;
  wire::frame f;
  try {
    f = wire::decode_frame(frame_bytes);
  } catch (const error& e) {
    out.rejection = e.code();
    return out;
  }
  out.sink = f.sink_id;
  out.sequence = f.sequence;
  auto key = registry.find(f.sink_id);
  if (key == registry.end()) {
    out.rejection = errc::unknown_sink;
    return out;
  }
  const bytes plain = decrypt(f.payload, key->second);
  try {
    out.readings = wire::decode_readings(plain);
  } catch (const error&) {
    out.rejection = errc::decode_after_decrypt;
  }
  return out;
}

namespace detail {

enum class event_kind : std::uint8_t { sense, hub_receive, hub_flush, sink_receive, fusion_receive };

struct event {
  tick_t tick = 0;
  node_id node = 0;
  event_kind kind = event_kind::sense;
  std::uint64_t order = 0;  // insertion counter, last tie-breaker
  wire::sensor_reading reading{};
  bytes data{};
  node_id origin = 0;       // sending sink, for fusion events
  std::uint32_t frame_index = 0;

  auto key() const { return std::tie(tick, node, kind, order); }
};

struct later {
  bool operator()(const event& a, const event& b) const { return a.key() > b.key(); }
};

inline std::vector<std::string> validate_config(const sim_config& c) {
  auto problems = validate_topology(c.topo);
  if (c.duration_ticks == 0) problems.push_back("duration_ticks must be positive");
  if (c.sense_period_ticks == 0) problems.push_back("sense_period_ticks must be positive");
  if (c.hop_latency_ticks == 0) problems.push_back("hop_latency_ticks must be positive");
  if (c.duration_ticks < c.sense_period_ticks) problems.push_back("duration_ticks is shorter than sense_period_ticks");
  for (node_id sink : c.topo.ids_with_role(node_role::sink)) {
    if (!c.sink_keys.contains(sink) && !c.registry.contains(sink)) {
      problems.push_back("sink " + std::to_string(sink) + " has no key");
    }
  }
  return problems;
}

}  // namespace detail

// Sensors fire at ticks period, 2*period, ... up to duration_ticks. All
// in-flight traffic is drained before the report is produced.
inline sim_report run_simulation(const sim_config& config) {
  if (auto problems = detail::validate_config(config); !problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw error(errc::invalid_config, msg);
  }

  using detail::event;
  using detail::event_kind;
  const topology& topo = config.topo;
  const tick_t latency = config.hop_latency_ticks;

  std::priority_queue<event, std::vector<event>, detail::later> queue;
  std::uint64_t order = 0;
  auto push = [&](event e) {
    e.order = order++;
    queue.push(std::move(e));
  };

  auto period_of = [&](const node& n) { return n.sense_period.value_or(config.sense_period_ticks); };

  for (const auto& n : topo.nodes) {
    if (n.role != node_role::sensor) continue;
    const tick_t p = period_of(n);
    if (p <= config.duration_ticks) push({.tick = p, .node = n.id, .kind = event_kind::sense});
  }

  std::map<node_id, std::vector<wire::sensor_reading>> hub_pending;
  std::map<node_id, std::uint32_t> next_sequence;
  std::vector<std::vector<wire::sensor_reading>> frame_contents;
  std::vector<wire::sensor_reading> expected;
  std::vector<wire::sensor_reading> recovered;
  sim_report report;
  for (node_id sink : topo.ids_with_role(node_role::sink)) report.per_sink[sink] = {};

  auto sink_key = [&](node_id sink) -> const secret_key& {
    auto it = config.sink_keys.find(sink);
    return it != config.sink_keys.end() ? it->second : config.registry.at(sink);
  };

  while (!queue.empty()) {
    event ev = queue.top();
    queue.pop();

    switch (ev.kind) {
      case event_kind::sense: {
        auto reading = sense(topo, ev.node, ev.tick, config.seed);
        ++report.readings_sensed;
        const node_id hub = topo.neighbours_with_role(ev.node, node_role::hub).front();
        push({.tick = ev.tick + latency, .node = hub, .kind = event_kind::hub_receive, .reading = std::move(reading)});
        const tick_t next = ev.tick + period_of(*topo.find(ev.node));
        if (next <= config.duration_ticks) push({.tick = next, .node = ev.node, .kind = event_kind::sense});
        break;
      }
      case event_kind::hub_receive: {
        auto& pending = hub_pending[ev.node];
        if (pending.empty()) push({.tick = ev.tick, .node = ev.node, .kind = event_kind::hub_flush});
        pending.push_back(std::move(ev.reading));
        break;
      }
      case event_kind::hub_flush: {
        auto batch = std::move(hub_pending[ev.node]);
        hub_pending[ev.node].clear();
        const path& route = topo.hub_routes.at(ev.node);
        auto sent = relay(topo, aggregate(topo, ev.node, std::move(batch)), route, ev.tick, latency);
        report.relay_forwards += sent.hops.size() - 1;
        push({.tick = sent.arrival(), .node = route.back(), .kind = event_kind::sink_receive, .data = std::move(sent.data)});
        break;
      }
      case event_kind::sink_receive: {
        const node_id sink = ev.node;
        const auto index = static_cast<std::uint32_t>(frame_contents.size());
        frame_contents.push_back(wire::decode_readings(ev.data));
        auto frame = sink_transmit(sink, ev.data, next_sequence[sink]++, sink_key(sink));
        bytes encoded = wire::encode_frame(frame);
        ++report.frames_sent;
        ++report.per_sink[sink].frames_sent;

        if (std::find(config.faults.drops.begin(), config.faults.drops.end(), index) != config.faults.drops.end()) {
          ++report.frames_lost;
          break;
        }
        for (const auto& flip : config.faults.flips) {
          if (flip.frame == index && flip.bit < encoded.size() * 8) {
            encoded[flip.bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (flip.bit % 8));
          }
        }
        const path& route = topo.sink_routes.at(sink);
        auto sent = relay(topo, std::move(encoded), route, ev.tick, latency);
        report.relay_forwards += sent.hops.size() - 1;
        push({.tick = sent.arrival(), .node = route.back(), .kind = event_kind::fusion_receive,
              .data = std::move(sent.data), .origin = sink, .frame_index = index});
        break;
      }
      case event_kind::fusion_receive: {
        ++report.frames_delivered;
        auto& stats = report.per_sink[ev.origin];
        ++stats.frames_delivered;
        const auto& contents = frame_contents[ev.frame_index];
        expected.insert(expected.end(), contents.begin(), contents.end());

        auto result = fusion_receive(ev.data, config.registry);
        if (!result.accepted()) {
          ++report.frames_rejected[std::string(to_string(*result.rejection))];
          ++stats.frames_rejected;
          break;
        }
        report.readings_recovered += result.readings.size();
        stats.readings_recovered += result.readings.size();
        stats.last_sequence = std::max(stats.last_sequence.value_or(result.sequence), result.sequence);
        recovered.insert(recovered.end(), result.readings.begin(), result.readings.end());
        break;
      }
    }
  }

  std::sort(expected.begin(), expected.end());
  std::sort(recovered.begin(), recovered.end());
  report.fidelity_ok = expected == recovered;
  return report;
}

}  // namespace wsnc::sim
