#pragma once

#include "infocast/fountain/degree_distribution.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace infocast::fountain {

struct OverheadCurve {
  std::size_t k = 0;
  std::size_t trials = 0;
  std::vector<std::size_t> needed;       // distinct packets needed, one per trial
  std::vector<double> success_by_count;  // [n] = P(decoded after n distinct packets)
  double mean_overhead = 0.0;            // mean(needed) / k
};

/// Monte-Carlo estimate of the coding overhead. Each trial feeds fresh
/// random-seed packets into a new decoder until it completes.
OverheadCurve measure_overhead(std::size_t k, const DegreeDistribution &dist, std::size_t trials,
                               std::uint64_t rng_seed);

/// CSV with columns k,received,success_prob.
void write_overhead_csv(std::ostream &os, const OverheadCurve &curve);

} // namespace infocast::fountain
