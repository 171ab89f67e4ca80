#pragma once

#include "infocast/mobility/mobility.hpp"
#include "infocast/protocol/protocol.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace infocast::engine {

using fountain::SourceId;
using mobility::VehicleId;

struct DecodeSample {
  VehicleId vehicle = 0;
  SourceId source = 0;
  double distance = 0.0; // metres from the RSU at the decoding moment
  friend bool operator==(const DecodeSample &, const DecodeSample &) = default;
};

/// Distinct packets of `source` a collector held when it reached distance
/// eta_grid[i] of the RSU, for every grid point. Recorded when the vehicle
/// crosses the RSU, so every row covers the whole grid.
struct CollectedSample {
  VehicleId vehicle = 0;
  SourceId source = 0;
  std::vector<std::size_t> counts;
  friend bool operator==(const CollectedSample &, const CollectedSample &) = default;
};

struct Occupancy {
  double packet_sum = 0.0;
  std::uint64_t samples = 0;
  double mean() const { return samples ? packet_sum / static_cast<double>(samples) : 0.0; }
  friend bool operator==(const Occupancy &, const Occupancy &) = default;
};

struct EncounterStats {
  std::uint64_t clusters_met = 0;
  double meet_time_sum = 0.0;
};

struct MetricsRecord {
  std::vector<double> eta_grid;
  std::size_t buffer_capacity = 0;
  std::vector<DecodeSample> dd_samples;
  std::vector<CollectedSample> collected;
  // (source, segment) -> packets a carrier holds for that source.
  std::map<std::pair<SourceId, int>, Occupancy> occupancy;
  protocol::ChannelStats channel;
  std::uint64_t vehicles_spawned = 0;
  std::uint64_t eligible_vehicles = 0;

  friend bool operator==(const MetricsRecord &, const MetricsRecord &) = default;
};

/// Mean decoding distance over every decode event. UndefinedMetric if none.
double mdd(std::span<const MetricsRecord> records);

/// Index of eta in the records' grid; InvalidParameter if absent.
std::size_t eta_index(const MetricsRecord &record, double eta);

/// Fraction of (vehicle, source) rows with P_eta >= I. UndefinedMetric if
/// there are no rows.
double p_success(std::span<const MetricsRecord> records, double eta, double message_packets);

/// Mean P_eta over all rows.
double mean_collected(std::span<const MetricsRecord> records, double eta);

/// Mean packets held per (carrier, held source) divided by B, weighted by
/// sample count. `min_segment` skips cells closer to the source.
double mean_occupancy_ratio(std::span<const MetricsRecord> records, int min_segment = 0);

/// `metric,source_id,vehicle_id,eta,value` rows covering every sample.
void write_metrics_csv(std::ostream &os, const MetricsRecord &record);

struct DeploymentCapacity {
  int capacity = 0;        // 0 when no M qualifies
  std::string diagnostic;  // set when no M qualifies
  std::map<int, double> evaluated; // M -> P_success
};

/// Largest M in [m_lo, m_hi] with success(M) >= 1 - epsilon. Coarse sweep
/// with step `coarse_step` from the top of the range, then unit-increment
/// refinement inside the bracket above the highest qualifying coarse point.
DeploymentCapacity deployment_capacity(const std::function<double(int)> &success, double epsilon, int m_lo, int m_hi,
                                       int coarse_step = 5);

} // namespace infocast::engine
