// Walks one reading batch from a hub through a sink to the fusion center.

#include <iostream>

#include "wsncipher/wsncipher.hpp"

int main() {
  using namespace wsnc;

  sim::topology topo;
  topo.nodes = {{.id = 1, .role = sim::node_role::sensor, .kind = wire::sensor_kind::scalar},
                {.id = 2, .role = sim::node_role::sensor, .kind = wire::sensor_kind::video},
                {.id = 3, .role = sim::node_role::hub},
                {.id = 4, .role = sim::node_role::sink},
                {.id = 5, .role = sim::node_role::fusion_center}};
  topo.edges = {{1, 3}, {2, 3}, {3, 4}, {4, 5}};
  topo.hub_routes[3] = {3, 4};
  topo.sink_routes[4] = {4, 5};

  sim::key_registry registry;
  registry.emplace(4, secret_key(hex::decode("3b8e51d2a7c0f419")));

  const auto batch = sim::aggregate(topo, 3, {sim::sense(topo, 2, 10, 42), sim::sense(topo, 1, 10, 42)});
  const auto frame = sim::sink_transmit(4, batch, 0, registry.at(4));
  const auto wire_bytes = wire::encode_frame(frame);
  const auto delivered = sim::relay(topo, wire_bytes, topo.sink_routes[4], 10, 1);

  std::cout << "batch     " << hex::encode(batch) << '\n'
            << "frame     " << hex::encode(delivered.data) << '\n';

  const auto result = sim::fusion_receive(delivered.data, registry);
  if (!result.accepted()) {
    std::cerr << "rejected: " << to_string(*result.rejection) << '\n';
    return 1;
  }
  for (const auto& r : result.readings) {
    std::cout << "node " << r.node_id << " t=" << r.timestamp << ' ' << wire::to_string(r.kind) << ' '
              << hex::encode(r.value) << '\n';
  }
  return 0;
}
