#pragma once

#include "infocast/mobility/mobility.hpp"
#include "infocast/protocol/protocol.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace infocast::engine {

enum class RsuPlacement { uniform, random, explicit_positions };

/// Full parameterisation of one simulation run.
struct SimConfig {
  mobility::MobilityConfig mobility;
  protocol::ChannelConfig channel;

  int num_rsus = 50;
  RsuPlacement placement = RsuPlacement::uniform;
  std::vector<double> rsu_positions; // explicit placement only
  std::optional<double> segment_length_override;

  std::size_t message_packets = 1000; // I
  std::size_t payload_len = 32;
  double degree_c = 0.03;
  double degree_delta = 0.5;

  std::size_t buffer_size = 100; // B
  protocol::BufferScheme scheme = protocol::SchemeB{4};
  int domain_segments = 10; // Delta

  double sim_time = 1000.0;
  std::optional<double> warmup_time; // defaults to road_length / V0
  bool prepopulate = false;
  std::uint64_t rng_seed = 1;

  std::vector<double> eta_multiples{1, 3, 6, 9, 12}; // P_eta grid, in units of R
  double occupancy_interval = 1.0;                   // s between buffer samples

  /// d: explicit override, otherwise road_length / num_rsus.
  double segment_length() const;
  double warmup() const;
  std::vector<double> eta_grid() const;
  std::uint64_t slot_count() const;

  /// Throws InvalidParameter naming the offending field.
  void validate() const;
};

/// Full-scale reference setup: 1000 s, R = 200 m, 20-40 m/s,
/// lambda = 0.1 veh/s, 20 km road, 100 packets/s broadcast, 50 RSUs.
SimConfig reference_config();

std::string describe(const protocol::BufferScheme &scheme);

} // namespace infocast::engine
