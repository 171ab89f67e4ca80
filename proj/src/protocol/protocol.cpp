#include "infocast/protocol/protocol.hpp"

#include "infocast/errors.hpp"
#include "infocast/fountain/prng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace infocast::protocol {

namespace {

constexpr std::uint64_t rsu_seed_tag = 0x5253550000000000ULL;
constexpr std::uint64_t carrier_seed_tag = 0x4341520000000000ULL;

bool approaching(const mobility::Vehicle &v, double target) {
  const double ahead = target - v.position;
  return ahead != 0.0 && (ahead > 0.0) == (v.direction == mobility::Direction::forward);
}

} // namespace

EncodedPacket Rsu::next_packet() {
  const std::uint64_t seed = fountain::mix_seed(rsu_seed_tag ^ static_cast<std::uint64_t>(id), next_seed++);
  return fountain::encode(*message, *dist, seed);
}

void ChannelConfig::validate() const {
  if (!(slot_duration > 0.0))
    throw InvalidParameter("slot_duration must be > 0");
  if (!(tx_prob > 0.0 && tx_prob <= 1.0))
    throw InvalidParameter("tx_prob must be in (0, 1]");
  if (!(rsu_rate > 0.0))
    throw InvalidParameter("rsu_rate must be > 0");
  if (!(comm_range > 0.0))
    throw InvalidParameter("comm_range must be > 0");
}

std::uint64_t ChannelConfig::rsu_period() const {
  const double slots_per_packet = 1.0 / (rsu_rate * slot_duration);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(slots_per_packet)));
}

Role classify_role(const mobility::Vehicle &vehicle, const Rsu &rsu, double domain_radius, bool decoded) {
  if (std::abs(vehicle.position - rsu.position) >= domain_radius)
    return Role::inactive;
  if (approaching(vehicle, rsu.position))
    return Role::collector;
  return decoded ? Role::carrier : Role::inactive;
}

double relevance(int domain, int segment, double segment_length) {
  if (segment < 0)
    throw InvalidParameter("segment index must be >= 0");
  return static_cast<double>(domain - segment) * segment_length;
}

int segment_index(double position, double rsu_position, double segment_length) {
  return static_cast<int>(std::floor(std::abs(position - rsu_position) / segment_length));
}

ChannelStats &ChannelStats::operator+=(const ChannelStats &o) {
  slots += o.slots;
  rsu_transmissions += o.rsu_transmissions;
  contention_transmissions += o.contention_transmissions;
  collisions += o.collisions;
  deliveries += o.deliveries;
  return *this;
}

std::vector<Delivery> channel_slot(World &world, std::uint64_t slot_index, Rng &rng, ChannelStats *stats,
                                   const TraceSink *trace) {
  ChannelStats local;
  local.slots = 1;
  std::vector<Delivery> out;
  const double range = world.channel.comm_range;
  auto &vehicles = world.vehicles;

  std::vector<std::size_t> order(vehicles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = vehicles[a].motion.position;
    const double pb = vehicles[b].motion.position;
    return pa < pb || (pa == pb && a < b);
  });
  std::vector<double> sorted_pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    sorted_pos[i] = vehicles[order[i]].motion.position;

  // Dedicated RSU sub-slot.
  if (slot_index % world.channel.rsu_period() == 0) {
    for (auto &rsu : world.rsus) {
      auto lo = std::lower_bound(sorted_pos.begin(), sorted_pos.end(), rsu.position - range);
      auto hi = std::upper_bound(sorted_pos.begin(), sorted_pos.end(), rsu.position + range);
      if (lo == hi)
        continue;
      auto packet = std::make_shared<const EncodedPacket>(rsu.next_packet());
      ++local.rsu_transmissions;
      for (auto it = lo; it != hi; ++it) {
        const std::size_t rx = order[static_cast<std::size_t>(it - sorted_pos.begin())];
        out.push_back(Delivery{rx, rsu_node(rsu.id), packet, true});
        if (trace)
          (*trace)(TraceRow{slot_index, rsu_node(rsu.id), vehicles[rx].motion.id, packet->source_id, packet->seed,
                            false});
      }
    }
  }

  // Contention sub-slot.
  struct Tx {
    double position;
    std::size_t vehicle;
    const EncodedPacket *packet;
  };
  std::vector<Tx> txs;
  std::vector<bool> transmitting(vehicles.size(), false);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    if (vehicles[i].buffer.empty())
      continue;
    if (u01(rng) >= world.channel.tx_prob)
      continue;
    const EncodedPacket *p = vehicles[i].buffer.pick_uniform(rng);
    txs.push_back(Tx{vehicles[i].motion.position, i, p});
    transmitting[i] = true;
  }
  local.contention_transmissions = txs.size();
  std::sort(txs.begin(), txs.end(), [](const Tx &a, const Tx &b) {
    return a.position < b.position || (a.position == b.position && a.vehicle < b.vehicle);
  });
  std::vector<double> tx_pos(txs.size());
  for (std::size_t i = 0; i < txs.size(); ++i)
    tx_pos[i] = txs[i].position;

  std::vector<std::shared_ptr<const EncodedPacket>> shared(txs.size());
  for (std::size_t rx : order) {
    if (txs.empty())
      break;
    if (transmitting[rx])
      continue;
    const double x = vehicles[rx].motion.position;
    const auto lo = static_cast<std::size_t>(std::lower_bound(tx_pos.begin(), tx_pos.end(), x - range) - tx_pos.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(tx_pos.begin(), tx_pos.end(), x + range) - tx_pos.begin());
    const std::size_t heard = hi - lo;
    if (heard == 0)
      continue;
    if (heard > 1) {
      ++local.collisions;
      if (trace)
        for (std::size_t t = lo; t < hi; ++t)
          (*trace)(TraceRow{slot_index, vehicles[txs[t].vehicle].motion.id, vehicles[rx].motion.id,
                            txs[t].packet->source_id, txs[t].packet->seed, true});
      continue;
    }
    if (!shared[lo])
      shared[lo] = std::make_shared<const EncodedPacket>(*txs[lo].packet);
    const NodeId tx_id = vehicles[txs[lo].vehicle].motion.id;
    out.push_back(Delivery{rx, tx_id, shared[lo], false});
    if (trace)
      (*trace)(TraceRow{slot_index, tx_id, vehicles[rx].motion.id, shared[lo]->source_id, shared[lo]->seed, false});
  }

  local.deliveries = out.size();
  if (stats)
    *stats += local;
  return out;
}

ReceiveOutcome on_receive(World &world, std::size_t receiver, const EncodedPacket &packet) {
  if (packet.source_id < 0 || static_cast<std::size_t>(packet.source_id) >= world.rsus.size())
    throw MalformedPacket("unknown source id " + std::to_string(packet.source_id));
  const Rsu &rsu = world.rsus[static_cast<std::size_t>(packet.source_id)];
  VehicleNode &node = world.vehicles.at(receiver);
  SourceLink &link = node.links.at(static_cast<std::size_t>(packet.source_id));

  ReceiveOutcome outcome;
  if (link.passed || classify_role(node.motion, rsu, world.domain_radius(), link.decoded()) != Role::collector)
    return outcome;

  if (!link.decoder)
    link.decoder.emplace(rsu.id, rsu.dist, world.payload_len);
  const bool was_complete = link.decoder->complete();
  outcome.status = link.decoder->push(packet);
  outcome.accepted = true;
  if (!was_complete && link.decoder->complete()) {
    auto message = link.decoder->message();
    link.recovered = (*message == *rsu.message) ? rsu.message
                                                : std::make_shared<const SourceMessage>(std::move(*message));
    link.decoded_at_distance = std::abs(node.motion.position - rsu.position);
    outcome.newly_decoded = true;
  }
  return outcome;
}

std::size_t on_become_carrier(VehicleNode &node, const Rsu &rsu, Rng &rng) {
  SourceLink &link = node.links.at(static_cast<std::size_t>(rsu.id));
  link.passed = true;
  if (!link.decoded())
    return 0;
  const std::uint64_t stream =
      fountain::mix_seed(carrier_seed_tag ^ static_cast<std::uint64_t>(node.motion.id), static_cast<std::uint64_t>(rsu.id));
  PacketFactory make = [&]() {
    return fountain::encode(*link.recovered, *rsu.dist, fountain::mix_seed(stream, link.reencode_counter++));
  };
  return node.buffer.admit(rsu.id, make, rng);
}

void on_leave_domain(VehicleNode &node, SourceId source) {
  node.buffer.purge(source);
  SourceLink &link = node.links.at(static_cast<std::size_t>(source));
  link = SourceLink{};
  link.passed = true;
}

} // namespace infocast::protocol
