#pragma once

#include "infocast/mobility/mobility.hpp"

#include <cstdint>

namespace infocast::engine {

/// Mean contacts until all N distinct packets are held when every contact
/// hands over one uniformly random packet of N.
double simulate_uncoded_collection(std::size_t n, std::size_t trials, std::uint64_t seed);

/// Mean contacts until any N distinct packets of a pool of round(N(1+r))
/// coded packets are held.
double simulate_erasure_collection(std::size_t n, double redundancy, std::size_t trials, std::uint64_t seed);

/// Fully connected cluster: `transmitters` carriers and one silent listener
/// at the same point, run through the protocol channel. Returns contention
/// deliveries to the listener per slot.
double measure_slotted_throughput(std::size_t transmitters, double tx_prob, std::uint64_t slots, std::uint64_t seed);

struct EncounterMeasurement {
  std::uint64_t clusters_met = 0;
  double meet_time_sum = 0.0; // seconds between first and last vehicle of each cluster
  double mean_meet_time() const {
    return clusters_met ? meet_time_sum / static_cast<double>(clusters_met) : 0.0;
  }
};

/// A collector drives the full road at mean speed through a steady-state
/// opposite-direction stream generated by the mobility model. Each crossed
/// vehicle is assigned to its cluster (identify_clusters at the crossing
/// instant); returns clusters met and the time between the first and last
/// crossing inside each cluster.
EncounterMeasurement measure_cluster_encounters(const mobility::MobilityConfig &cfg, double dt, std::uint64_t seed);

} // namespace infocast::engine
