#include "infocast/mobility/cluster_stats.hpp"

#include "infocast/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace infocast::mobility {

namespace {

void require_positive(double v, const char *name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidParameter(std::string(name) + " must be positive and finite");
}

double cluster_length(double spacing_rate, double range) {
  const double x = spacing_rate * range;
  const double grown = std::expm1(x);
  if (!std::isfinite(grown))
    throw Unrepresentable("exp(lambda_s R) overflows for lambda_s R = " + std::to_string(x));
  return grown / spacing_rate - range;
}

} // namespace

double expected_meet_count(double spacing_rate, double range, double length) {
  require_positive(spacing_rate, "spacing_rate");
  require_positive(range, "range");
  if (!(length >= 0.0))
    throw InvalidParameter("length must be >= 0");
  return 2.0 * length / (cluster_length(spacing_rate, range) + range + 1.0 / spacing_rate);
}

ClusterStats analytic_cluster_stats(double spacing_rate, double range, double mean_speed, double road_length) {
  require_positive(spacing_rate, "spacing_rate");
  require_positive(range, "range");
  require_positive(mean_speed, "mean_speed");
  require_positive(road_length, "road_length");

  const double x = spacing_rate * range;
  ClusterStats s;
  s.e_cluster_length = cluster_length(spacing_rate, range);
  s.e_cluster_size = std::exp(x);
  if (!std::isfinite(s.e_cluster_size))
    throw Unrepresentable("expected cluster size overflows");
  s.p_last = std::exp(-x);
  if (s.p_last <= 0.0)
    throw Unrepresentable("P_last underflows");
  s.e_inter_cluster = range + 1.0 / spacing_rate;
  s.e_meet_count = 2.0 * road_length / (s.e_cluster_length + s.e_inter_cluster);
  s.e_meet_time = s.e_cluster_length / (2.0 * mean_speed);
  return s;
}

ClusterStats empirical_cluster_stats(std::size_t samples, double spacing_rate, double range, double mean_speed,
                                     double road_length, Rng &rng) {
  if (samples == 0)
    throw InvalidParameter("empirical_cluster_stats needs samples >= 1");
  require_positive(spacing_rate, "spacing_rate");
  require_positive(range, "range");

  std::exponential_distribution<double> spacing(spacing_rate);

  // Walk a vehicle chain; a gap > R closes the current cluster.
  std::size_t boundaries = 0;
  double boundary_gap_sum = 0.0;
  std::size_t clusters = 0;
  std::size_t vehicles_in_clusters = 0;
  double length_sum = 0.0;

  std::size_t current_size = 1;
  double current_length = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = spacing(rng);
    if (s > range) {
      ++boundaries;
      boundary_gap_sum += s;
      ++clusters;
      vehicles_in_clusters += current_size;
      length_sum += current_length;
      current_size = 1;
      current_length = 0.0;
    } else {
      ++current_size;
      current_length += s;
    }
  }

  ClusterStats e;
  e.p_last = static_cast<double>(boundaries) / static_cast<double>(samples);
  if (clusters > 0) {
    e.e_cluster_size = static_cast<double>(vehicles_in_clusters) / static_cast<double>(clusters);
    e.e_cluster_length = length_sum / static_cast<double>(clusters);
    e.e_inter_cluster = boundary_gap_sum / static_cast<double>(boundaries);
  } else {
    // Not one boundary seen: the whole chain is a single open cluster.
    e.e_cluster_size = static_cast<double>(current_size);
    e.e_cluster_length = current_length;
    e.e_inter_cluster = std::numeric_limits<double>::quiet_NaN();
  }
  if (mean_speed > 0.0)
    e.e_meet_time = e.e_cluster_length / (2.0 * mean_speed);
  if (road_length > 0.0 && std::isfinite(e.e_inter_cluster))
    e.e_meet_count = 2.0 * road_length / (e.e_cluster_length + e.e_inter_cluster);
  return e;
}

void write_cluster_comparison_csv(std::ostream &os, double spacing_rate, double range, const ClusterStats &analytic,
                                  const ClusterStats &empirical) {
  os << "lambda_s,R,field,analytic,empirical,rel_err\n";
  auto row = [&](const char *field, double a, double e) {
    os << spacing_rate << ',' << range << ',' << field << ',' << a << ',' << e << ',' << std::abs(e - a) / std::abs(a)
       << '\n';
  };
  row("p_last", analytic.p_last, empirical.p_last);
  row("e_cluster_size", analytic.e_cluster_size, empirical.e_cluster_size);
  row("e_inter_cluster", analytic.e_inter_cluster, empirical.e_inter_cluster);
  row("e_cluster_length", analytic.e_cluster_length, empirical.e_cluster_length);
  row("e_meet_count", analytic.e_meet_count, empirical.e_meet_count);
  row("e_meet_time", analytic.e_meet_time, empirical.e_meet_time);
}

} // namespace infocast::mobility
