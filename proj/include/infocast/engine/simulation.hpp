#pragma once

#include "infocast/engine/config.hpp"
#include "infocast/engine/metrics.hpp"

#include <cstdint>
#include <vector>

namespace infocast::engine {

struct RunOptions {
  const protocol::TraceSink *trace = nullptr; // per-slot delivery log
};

/// RSU positions for the configured placement mode, ascending.
std::vector<double> place_rsus(const SimConfig &config);

/// One time-stepped simulation with dt = slot duration. Each slot: move
/// vehicles and retire those leaving the road, admit arrivals, fire
/// position events (domain entry, P_eta thresholds, RSU crossings, domain
/// exits), run the channel slot and hand deliveries to the receivers.
/// Bit-reproducible for a fixed config (including rng_seed).
MetricsRecord run(const SimConfig &config, const RunOptions &options = {});

/// Seed of replication i derived from a master seed.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t replication);

/// Runs `count` replications of `base` (seed of run i = replication_seed(master, i)),
/// on up to `jobs` threads. The result is ordered by replication index.
std::vector<MetricsRecord> run_replications(const SimConfig &base, std::size_t count, std::uint64_t master_seed,
                                            unsigned jobs = 1);

} // namespace infocast::engine
