#pragma once

#include "infocast/fountain/codec.hpp"
#include "infocast/mobility/mobility.hpp"
#include "infocast/protocol/buffer.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace infocast::protocol {

using fountain::DegreeDistribution;
using fountain::SourceMessage;

/// Roadside source. Its id doubles as the index into World::rsus.
struct Rsu {
  SourceId id = 0;
  double position = 0.0;
  std::shared_ptr<const SourceMessage> message;
  std::shared_ptr<const DegreeDistribution> dist;
  std::uint64_t next_seed = 0;

  /// Fresh-seed encoding; seeds are unique per (rsu, counter).
  EncodedPacket next_packet();
};

struct ChannelConfig {
  double slot_duration = 0.01; // s
  double tx_prob = 0.1;        // per carrier per slot
  double rsu_rate = 100.0;     // packets/s on the dedicated sub-slot
  double comm_range = 200.0;   // m

  void validate() const;
  /// RSUs transmit every rsu_period()-th slot.
  std::uint64_t rsu_period() const;
};

enum class Role { collector, carrier, inactive };

/// Carrier iff the vehicle has passed the RSU and decoded it; collector
/// while approaching within the domain; inactive outside the domain of
/// radius domain_radius = Delta * d.
Role classify_role(const mobility::Vehicle &vehicle, const Rsu &rsu, double domain_radius, bool decoded);

/// Remaining useful distance (Delta - j) d of a source seen from segment j.
double relevance(int domain, int segment, double segment_length);

/// Segment index floor(|position - rsu_position| / d).
int segment_index(double position, double rsu_position, double segment_length);

/// A vehicle's relation to one source.
struct SourceLink {
  bool passed = false; // crossed the RSU
  std::optional<fountain::Decoder> decoder;
  std::shared_ptr<const SourceMessage> recovered;
  std::optional<double> decoded_at_distance;
  std::uint64_t reencode_counter = 0;
  std::vector<std::size_t> snapshots; // distinct-count snapshots, filled by the caller

  bool decoded() const { return recovered != nullptr; }
  std::size_t distinct_received() const { return decoder ? decoder->distinct_received() : 0; }
};

struct VehicleNode {
  mobility::Vehicle motion;
  CooperationBuffer buffer;
  std::vector<SourceLink> links; // indexed by source id
  bool eligible = false;         // contributes to metrics

  VehicleNode(mobility::Vehicle v, std::size_t capacity, BufferScheme scheme, std::size_t sources)
      : motion(v), buffer(capacity, scheme), links(sources) {}
};

struct World {
  std::vector<Rsu> rsus;
  std::vector<VehicleNode> vehicles;
  ChannelConfig channel;
  double segment_length = 400.0;
  int domain = 10;
  std::size_t payload_len = 32;

  double domain_radius() const { return segment_length * domain; }
};

/// Transmitter reference: vehicle id (>= 0) or -(rsu index + 1).
using NodeId = std::int64_t;
inline NodeId rsu_node(SourceId id) { return -static_cast<NodeId>(id) - 1; }

struct Delivery {
  std::size_t receiver = 0; // index into World::vehicles
  NodeId transmitter = 0;
  std::shared_ptr<const EncodedPacket> packet;
  bool from_rsu = false;
};

struct ChannelStats {
  std::uint64_t slots = 0;
  std::uint64_t rsu_transmissions = 0;
  std::uint64_t contention_transmissions = 0;
  std::uint64_t collisions = 0; // receiver-slots with >= 2 contenders in range
  std::uint64_t deliveries = 0;

  ChannelStats &operator+=(const ChannelStats &o);
  friend bool operator==(const ChannelStats &, const ChannelStats &) = default;
};

struct TraceRow {
  std::uint64_t slot;
  NodeId tx;
  NodeId rx;
  SourceId source;
  std::uint64_t seed;
  bool collided;
};
using TraceSink = std::function<void(const TraceRow &)>;

/// One channel slot. Dedicated sub-slot: every RSU with a vehicle within
/// range broadcasts a fresh packet, received by all vehicles in range.
/// Contention sub-slot: each non-empty buffer transmits with tx_prob a
/// packet chosen uniformly from the whole buffer; a receiver gets it iff it
/// is the only contention transmitter within range and the receiver itself
/// is silent.
std::vector<Delivery> channel_slot(World &world, std::uint64_t slot_index, Rng &rng, ChannelStats *stats = nullptr,
                                   const TraceSink *trace = nullptr);

struct ReceiveOutcome {
  bool accepted = false;      // pushed into a collector's decoder
  bool newly_decoded = false; // this packet completed the decoder
  fountain::DecodeStatus status = fountain::DecodeStatus::in_progress;
};

/// Feeds a delivered packet to the receiving vehicle. Collectors inside the
/// source's domain push it into their decoder (created on first use); all
/// other roles discard it. On completion the recovered message is kept and
/// the decoding distance recorded. Unknown source ids are MalformedPacket.
ReceiveOutcome on_receive(World &world, std::size_t receiver, const EncodedPacket &packet);

/// Vehicle crossed `rsu` having decoded it: re-encode fresh packets from
/// the recovered message into the buffer per the configured scheme.
/// Returns the number of packets admitted.
std::size_t on_become_carrier(VehicleNode &node, const Rsu &rsu, Rng &rng);

/// Source left the vehicle's relevance domain: purge its packets and forget
/// the recovered message.
void on_leave_domain(VehicleNode &node, SourceId source);

} // namespace infocast::protocol
