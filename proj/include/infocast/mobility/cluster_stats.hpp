#pragma once

#include "infocast/mobility/mobility.hpp"

#include <cstdint>
#include <iosfwd>

namespace infocast::mobility {

/// Statistics of clusters formed under exponential inter-vehicle spacing.
struct ClusterStats {
  double p_last = 0.0;           // P(gap > R)
  double e_cluster_size = 0.0;   // vehicles
  double e_inter_cluster = 0.0;  // metres
  double e_cluster_length = 0.0; // metres
  double e_meet_count = 0.0;     // clusters met over road_length
  double e_meet_time = 0.0;      // seconds
};

/// Closed forms for spacing rate lambda_s:
///   p_last           = exp(-lambda_s R)
///   e_inter_cluster  = R + 1/lambda_s
///   e_cluster_size   = exp(lambda_s R)
///   e_cluster_length = (exp(lambda_s R) - 1)(1/lambda_s - R exp(-lambda_s R)/(1 - exp(-lambda_s R)))
///   e_meet_count     = 2 L / (e_cluster_length + e_inter_cluster)
///   e_meet_time      = e_cluster_length / (2 V0)
/// The cluster-length product simplifies to expm1(lambda_s R)/lambda_s - R, which
/// is what gets evaluated. Throws Unrepresentable when exp(lambda_s R)
/// overflows a double.
ClusterStats analytic_cluster_stats(double spacing_rate, double range, double mean_speed, double road_length);

/// Meet count over an arbitrary stretch (e.g. one inter-RSU segment).
double expected_meet_count(double spacing_rate, double range, double length);

/// Monte-Carlo estimate from `samples` i.i.d. exponential spacings. Meet
/// count and meet time are derived from the empirical cluster length and
/// inter-cluster spacing with the same V0 and L as the analytic path.
ClusterStats empirical_cluster_stats(std::size_t samples, double spacing_rate, double range, double mean_speed,
                                     double road_length, Rng &rng);

/// CSV rows `lambda_s,R,field,analytic,empirical,rel_err` (with header).
void write_cluster_comparison_csv(std::ostream &os, double spacing_rate, double range, const ClusterStats &analytic,
                                  const ClusterStats &empirical);

} // namespace infocast::mobility
