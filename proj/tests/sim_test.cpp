#include <fstream>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "wsncipher/hex.hpp"
#include "wsncipher/sim.hpp"
#include "wsncipher/sim_json.hpp"

namespace wsnc::sim {
namespace {

using wire::sensor_kind;

node sensor(node_id id, sensor_kind kind = sensor_kind::scalar) {
  return {.id = id, .role = node_role::sensor, .kind = kind};
}
node role(node_id id, node_role r) { return {.id = id, .role = r}; }

// 1,2 sensors -> 3 hub -> 4 sink -> 5 relay -> 6 fusion center
topology chain() {
  topology t;
  t.nodes = {sensor(1), sensor(2, sensor_kind::audio), role(3, node_role::hub), role(4, node_role::sink),
             role(5, node_role::relay), role(6, node_role::fusion_center)};
  t.edges = {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
  t.hub_routes[3] = {3, 4};
  t.sink_routes[4] = {4, 5, 6};
  return t;
}

sim_config chain_config() {
  sim_config c;
  c.topo = chain();
  c.registry.emplace(4, secret_key(bytes(8, 'Z')));
  c.seed = 7;
  c.duration_ticks = 100;
  c.sense_period_ticks = 10;
  c.hop_latency_ticks = 1;
  return c;
}

bool mentions(const std::vector<std::string>& problems, const std::string& text) {
  for (const auto& p : problems) {
    if (p.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(ValidateTopology, ChainIsValid) {
  EXPECT_TRUE(validate_topology(chain()).empty());
  topology minimal;
  minimal.nodes = {sensor(1), role(2, node_role::hub), role(3, node_role::sink), role(4, node_role::fusion_center)};
  minimal.edges = {{1, 2}, {2, 3}, {3, 4}};
  minimal.hub_routes[2] = {2, 3};
  minimal.sink_routes[3] = {3, 4};
  EXPECT_TRUE(validate_topology(minimal).empty());
}

TEST(ValidateTopology, MissingFusionCenter) {
  auto t = chain();
  t.nodes.back().role = node_role::relay;
  EXPECT_TRUE(mentions(validate_topology(t), "missing fusion center"));
}

TEST(ValidateTopology, NonAdjacentHopNamed) {
  topology t;
  t.nodes = {sensor(1), role(2, node_role::hub), role(3, node_role::sink), role(4, node_role::fusion_center)};
  t.edges = {{1, 2}, {2, 3}};
  t.hub_routes[2] = {2, 3};
  t.sink_routes[3] = {3, 4};
  const auto problems = validate_topology(t);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_TRUE(mentions(problems, "3-4"));
}

TEST(ValidateTopology, ReportsEveryViolation) {
  topology t;
  t.nodes = {sensor(1), sensor(1), role(2, node_role::hub), role(3, node_role::sink),
             role(8, node_role::fusion_center), role(9, node_role::fusion_center)};
  t.edges = {{2, 3}, {3, 7}};
  t.hub_routes[2] = {2, 8};
  const auto problems = validate_topology(t);
  EXPECT_TRUE(mentions(problems, "duplicate node id 1"));
  EXPECT_TRUE(mentions(problems, "more than one fusion center"));
  EXPECT_TRUE(mentions(problems, "unknown node"));
  EXPECT_TRUE(mentions(problems, "sensor 1 is adjacent to 0 hubs"));
  EXPECT_TRUE(mentions(problems, "not a sink"));
  EXPECT_TRUE(mentions(problems, "sink 3 has no route"));
}

TEST(Sense, DeterministicAndSized) {
  const auto t = chain();
  EXPECT_EQ(sense(t, 1, 10, 99), sense(t, 1, 10, 99));
  EXPECT_EQ(sense(t, 1, 10, 99).value.size(), 2u);
  EXPECT_EQ(sense(t, 2, 10, 99).value.size(), 16u);
  EXPECT_EQ(sense(t, 2, 10, 99).kind, sensor_kind::audio);
  auto video = t;
  video.nodes[0].kind = sensor_kind::video;
  EXPECT_EQ(sense(video, 1, 0, 0).value.size(), 32u);
  EXPECT_NE(sense(t, 2, 10, 99), sense(t, 2, 10, 100));
}

TEST(Sense, ValuesVaryOverTime) {
  const auto t = chain();
  std::set<bytes> distinct;
  const tick_t period = 10;
  for (tick_t i = 0; i < 1000; ++i) distinct.insert(sense(t, 1, i * period, 1234).value);
  // 2-byte values: a few birthday collisions are expected, but not many.
  EXPECT_GE(distinct.size(), 990u);
}

TEST(Sense, NotASensor) {
  try {
    sense(chain(), 3, 0, 0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_a_sensor);
  }
}

TEST(Aggregate, EmptyBatch) { EXPECT_EQ(aggregate(chain(), 3, {}), (bytes{0, 0})); }

TEST(Aggregate, OrdersByNodeThenTime) {
  const auto t = chain();
  const auto a = sense(t, 1, 20, 0);
  const auto b = sense(t, 1, 10, 0);
  const auto c = sense(t, 2, 10, 0);
  const auto sorted = wire::encode_readings({b, a, c});
  EXPECT_EQ(aggregate(t, 3, {c, a, b}), sorted);
  EXPECT_EQ(aggregate(t, 3, {a, c, b}), sorted);
}

TEST(Aggregate, ForeignReading) {
  auto t = chain();
  t.nodes.push_back(sensor(10));
  t.nodes.push_back(role(11, node_role::hub));
  t.edges.push_back({10, 11});
  try {
    aggregate(t, 3, {sense(t, 10, 0, 0)});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::foreign_reading);
  }
}

TEST(SinkTransmit, EncryptsPayload) {
  const secret_key key(bytes(8, 'Z'));
  const auto t = chain();
  const auto payload = aggregate(t, 3, {sense(t, 1, 10, 0), sense(t, 2, 10, 0)});
  const auto f = sink_transmit(4, payload, 17, key);
  EXPECT_EQ(f.sink_id, 4);
  EXPECT_EQ(f.sequence, 17u);
  EXPECT_EQ(f.payload, encrypt(payload, key));
  EXPECT_TRUE(sink_transmit(4, bytes{}, 0, key).payload.empty());
}

TEST(Relay, ArrivalAndPassThrough) {
  topology t;
  t.nodes = {role(1, node_role::sink), role(2, node_role::relay), role(3, node_role::relay),
             role(4, node_role::fusion_center)};
  t.edges = {{1, 2}, {2, 3}, {3, 4}};
  const bytes data{1, 2, 3, 250};
  const auto d = relay(t, data, {1, 2, 3, 4}, 100, 2);
  EXPECT_EQ(d.arrival(), 106u);
  EXPECT_EQ(d.data, data);
  ASSERT_EQ(d.hops.size(), 3u);
  EXPECT_EQ(d.hops[0], (hop{2, 102}));
  EXPECT_EQ(d.hops[1], (hop{3, 104}));
}

TEST(Relay, BrokenRoute) {
  topology t;
  t.nodes = {role(1, node_role::sink), role(2, node_role::relay), role(3, node_role::fusion_center)};
  t.edges = {{1, 2}, {2, 3}};
  auto removed = t;
  removed.nodes.erase(removed.nodes.begin() + 1);
  try {
    relay(removed, {}, {1, 2, 3}, 0, 1);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::broken_route);
  }
  EXPECT_THROW(relay(t, {}, {1, 3}, 0, 1), error);
  EXPECT_THROW(relay(t, {}, {1}, 0, 1), error);
}

TEST(FusionReceive, EndToEnd) {
  const auto c = chain_config();
  const std::vector<wire::sensor_reading> readings{sense(c.topo, 1, 10, 5), sense(c.topo, 2, 10, 5)};
  const auto f = sink_transmit(4, aggregate(c.topo, 3, readings), 0, c.registry.at(4));
  const auto result = fusion_receive(wire::encode_frame(f), c.registry);
  ASSERT_TRUE(result.accepted());
  EXPECT_EQ(result.readings, readings);
  EXPECT_EQ(result.sink, 4);
}

TEST(FusionReceive, UnknownSink) {
  const auto c = chain_config();
  const auto f = sink_transmit(9, aggregate(c.topo, 3, {}), 0, c.registry.at(4));
  const auto result = fusion_receive(wire::encode_frame(f), c.registry);
  EXPECT_EQ(result.rejection, errc::unknown_sink);
}

TEST(FusionReceive, WrongKeyFailsToParse) {
  const auto c = chain_config();
  const auto payload = aggregate(c.topo, 3, {sense(c.topo, 1, 10, 5), sense(c.topo, 2, 10, 5)});
  const auto f = sink_transmit(4, payload, 0, secret_key(hex::decode("0123456789abcdef")));
  const auto result = fusion_receive(wire::encode_frame(f), c.registry);
  EXPECT_EQ(result.rejection, errc::decode_after_decrypt);
}

TEST(FusionReceive, CorruptFrameRejected) {
  const auto c = chain_config();
  auto encoded = wire::encode_frame(sink_transmit(4, bytes{0, 0}, 0, c.registry.at(4)));
  encoded[0] = 0;
  EXPECT_EQ(fusion_receive(encoded, c.registry).rejection, errc::bad_magic);
}

TEST(RunSimulation, ChainDeliversEverything) {
  const auto r = run_simulation(chain_config());
  EXPECT_EQ(r.readings_sensed, 20u);
  EXPECT_EQ(r.readings_recovered, 20u);
  EXPECT_TRUE(r.fidelity_ok);
  EXPECT_EQ(r.frames_sent, 10u);
  EXPECT_EQ(r.frames_delivered, 10u);
  EXPECT_EQ(r.frames_lost, 0u);
  EXPECT_EQ(r.total_rejected(), 0u);
  EXPECT_EQ(r.relay_forwards, 10u);
  ASSERT_TRUE(r.per_sink.at(4).last_sequence.has_value());
  EXPECT_EQ(*r.per_sink.at(4).last_sequence, 9u);
}

TEST(RunSimulation, Deterministic) {
  const auto c = chain_config();
  const auto first = run_simulation(c);
  sim_report other;
  std::thread t([&] { other = run_simulation(c); });
  t.join();
  EXPECT_EQ(first, run_simulation(c));
  EXPECT_EQ(first, other);
  EXPECT_EQ(report_to_json(first).dump(), report_to_json(other).dump());
}

TEST(RunSimulation, NoPeriodElapsed) {
  auto c = chain_config();
  for (auto& n : c.topo.nodes) {
    if (n.role == node_role::sensor) n.sense_period = 1000;
  }
  const auto r = run_simulation(c);
  EXPECT_EQ(r.readings_sensed, 0u);
  EXPECT_EQ(r.frames_sent, 0u);
  EXPECT_EQ(r.readings_recovered, 0u);
  EXPECT_TRUE(r.fidelity_ok);
}

TEST(RunSimulation, PerSensorPeriod) {
  auto c = chain_config();
  c.topo.nodes[0].sense_period = 25;  // fires at 25, 50, 75, 100
  const auto r = run_simulation(c);
  EXPECT_EQ(r.readings_sensed, 14u);
  EXPECT_TRUE(r.fidelity_ok);
}

TEST(RunSimulation, InvalidConfig) {
  auto c = chain_config();
  c.topo.edges.pop_back();
  try {
    run_simulation(c);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_config);
  }
  auto keyless = chain_config();
  keyless.registry.clear();
  EXPECT_THROW(run_simulation(keyless), error);
  auto short_run = chain_config();
  short_run.duration_ticks = 5;
  EXPECT_THROW(run_simulation(short_run), error);
}

TEST(RunSimulation, UnregisteredSinkRejected) {
  auto c = chain_config();
  c.sink_keys.emplace(4, c.registry.at(4));
  c.registry.clear();
  const auto r = run_simulation(c);
  EXPECT_FALSE(r.fidelity_ok);
  EXPECT_EQ(r.frames_rejected.at("unknown_sink"), 10u);
  EXPECT_EQ(r.readings_recovered, 0u);
}

TEST(RunSimulation, DroppedFramesAreConserved) {
  auto c = chain_config();
  c.faults.drops = {2, 5};
  const auto r = run_simulation(c);
  EXPECT_EQ(r.frames_sent, r.frames_delivered + r.frames_lost);
  EXPECT_EQ(r.frames_lost, 2u);
  EXPECT_EQ(r.readings_recovered, 16u);
  EXPECT_TRUE(r.fidelity_ok);
}

TEST(RunSimulation, BitFlipRejected) {
  auto c = chain_config();
  c.faults.flips = {{.frame = 3, .bit = 100}, {.frame = 6, .bit = 0}};
  const auto r = run_simulation(c);
  EXPECT_FALSE(r.fidelity_ok);
  EXPECT_EQ(r.frames_rejected.at("checksum_mismatch"), 1u);
  EXPECT_EQ(r.frames_rejected.at("bad_magic"), 1u);
  EXPECT_EQ(r.readings_recovered, 16u);
}

// Two hubs feeding two sinks that share one relay.
TEST(RunSimulation, KeyIsolationAcrossSinks) {
  sim_config c;
  c.topo.nodes = {sensor(1), sensor(2, sensor_kind::video), role(10, node_role::hub), role(11, node_role::hub),
                  role(20, node_role::sink), role(21, node_role::sink), role(30, node_role::relay),
                  role(40, node_role::fusion_center)};
  c.topo.edges = {{1, 10}, {2, 11}, {10, 20}, {11, 21}, {20, 30}, {21, 30}, {30, 40}};
  c.topo.hub_routes = {{10, {10, 20}}, {11, {11, 21}}};
  c.topo.sink_routes = {{20, {20, 30, 40}}, {21, {21, 30, 40}}};
  c.registry.emplace(20, secret_key(hex::decode("00112233445566aa")));
  c.registry.emplace(21, secret_key(hex::decode("f0e1d2c3b4a59687")));
  c.seed = 3;
  c.duration_ticks = 60;
  c.sense_period_ticks = 6;
  c.hop_latency_ticks = 2;

  const auto good = run_simulation(c);
  EXPECT_TRUE(good.fidelity_ok);
  EXPECT_EQ(good.readings_recovered, 20u);
  EXPECT_EQ(good.per_sink.at(20).readings_recovered, 10u);

  auto swapped = c;
  swapped.registry.clear();
  swapped.registry.emplace(20, c.registry.at(21));
  swapped.registry.emplace(21, c.registry.at(20));
  swapped.sink_keys = c.registry;
  const auto bad = run_simulation(swapped);
  EXPECT_FALSE(bad.fidelity_ok);
  EXPECT_EQ(bad.readings_recovered, 0u);
  EXPECT_EQ(bad.frames_rejected.at("decode_after_decrypt"), bad.frames_delivered);
}

TEST(SimJson, ConfigRoundTrip) {
  auto c = chain_config();
  c.sink_keys.emplace(4, secret_key(bytes{1, 2, 3}));
  c.faults.flips = {{.frame = 1, .bit = 9}};
  c.faults.drops = {4};
  c.topo.nodes[1].sense_period = 20;
  const auto j = config_to_json(c);
  const auto back = config_from_json(j);
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(run_simulation(back), run_simulation(c));
  EXPECT_EQ(j["keys"]["4"], "5a5a5a5a5a5a5a5a");
}

TEST(SimJson, RejectsMalformed) {
  auto j = config_to_json(chain_config());
  auto bad_role = j;
  bad_role["nodes"][0]["role"] = "satellite";
  EXPECT_THROW(config_from_json(bad_role), error);
  auto bad_key = j;
  bad_key["keys"]["4"] = "xyz";
  EXPECT_THROW(config_from_json(bad_key), error);
  auto missing = j;
  missing.erase("edges");
  EXPECT_THROW(config_from_json(missing), error);
}

TEST(SimJson, BundledConfig) {
  const auto c = load_config(WSNC_DATA_DIR "/example_sim.json");
  const auto r = run_simulation(c);
  EXPECT_EQ(r.readings_sensed, 20u);
  EXPECT_EQ(r.readings_recovered, 20u);
  EXPECT_TRUE(r.fidelity_ok);
  const auto j = report_to_json(r);
  EXPECT_EQ(j["fidelity_ok"], true);
  EXPECT_EQ(j["per_sink"]["4"]["frames_sent"], 10);
}

}  // namespace
}  // namespace wsnc::sim
