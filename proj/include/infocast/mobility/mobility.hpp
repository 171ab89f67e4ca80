#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace infocast::mobility {

using Rng = std::mt19937_64;
using VehicleId = std::int64_t;

struct MobilityConfig {
  double arrival_rate = 0.1;  // vehicles per second, per direction
  double speed_min = 20.0;    // m/s
  double speed_max = 40.0;    // m/s
  double road_length = 20000.0;
  double comm_range = 200.0;
  std::optional<double> spacing_rate_override; // 1/m

  double mean_speed() const { return 0.5 * (speed_min + speed_max); }
  double spacing_rate() const { return spacing_rate_override.value_or(arrival_rate / mean_speed()); }

  /// Throws InvalidParameter naming the offending field.
  void validate() const;
};

enum class Direction : std::int8_t { forward = 1, backward = -1 };

inline double sign(Direction d) { return static_cast<double>(static_cast<std::int8_t>(d)); }

struct Vehicle {
  VehicleId id = 0;
  double position = 0.0;
  double speed = 0.0;
  Direction direction = Direction::forward;
  double entry_time = 0.0;
  bool prepopulated = false;
};

/// Poisson arrivals of rate arrival_rate per direction over [0, horizon).
/// Forward vehicles enter at 0, backward vehicles at road_length. Ids are
/// assigned from first_id in order of entry time (forward before backward
/// on ties). The result is sorted by entry_time.
std::vector<Vehicle> spawn_arrivals(const MobilityConfig &cfg, double horizon, Rng &rng, VehicleId first_id = 0);

/// Steady-state snapshot of the road at time zero: per direction, positions
/// form a Poisson process whose density matches the arrival stream, with
/// speeds drawn from the density proportional to 1/v on [speed_min, speed_max]
/// (slow vehicles linger, so they are over-represented on the road).
std::vector<Vehicle> populate_steady_state(const MobilityConfig &cfg, Rng &rng, VehicleId first_id = 0);

/// Advances every vehicle by dt and removes those past either road end.
/// Returns the removed vehicles.
std::vector<Vehicle> step(std::vector<Vehicle> &vehicles, double dt, double road_length);

struct ClusterRange {
  std::size_t first = 0; // index into the sorted position list
  std::size_t last = 0;  // inclusive
  std::size_t size() const { return last - first + 1; }
};

/// Maximal runs of sorted positions whose consecutive gaps are <= range.
std::vector<ClusterRange> identify_clusters(std::span<const double> sorted_positions, double range);

} // namespace infocast::mobility
