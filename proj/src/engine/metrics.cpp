#include "infocast/engine/metrics.hpp"

#include "infocast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace infocast::engine {

double mdd(std::span<const MetricsRecord> records) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto &r : records)
    for (const auto &s : r.dd_samples) {
      sum += s.distance;
      ++n;
    }
  if (n == 0)
    throw UndefinedMetric("MDD needs at least one decode event");
  return sum / static_cast<double>(n);
}

std::size_t eta_index(const MetricsRecord &record, double eta) {
  for (std::size_t i = 0; i < record.eta_grid.size(); ++i)
    if (std::abs(record.eta_grid[i] - eta) <= 1e-9 * std::max(1.0, eta))
      return i;
  throw InvalidParameter("eta " + std::to_string(eta) + " is not on the recorded grid");
}

double p_success(std::span<const MetricsRecord> records, double eta, double message_packets) {
  if (!(eta > 0.0))
    throw InvalidParameter("eta must be > 0");
  std::size_t hits = 0;
  std::size_t n = 0;
  for (const auto &r : records) {
    if (r.collected.empty())
      continue;
    const std::size_t idx = eta_index(r, eta);
    for (const auto &c : r.collected) {
      ++n;
      if (static_cast<double>(c.counts[idx]) >= message_packets)
        ++hits;
    }
  }
  if (n == 0)
    throw UndefinedMetric("P_success needs at least one collected row");
  return static_cast<double>(hits) / static_cast<double>(n);
}

double mean_collected(std::span<const MetricsRecord> records, double eta) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto &r : records) {
    if (r.collected.empty())
      continue;
    const std::size_t idx = eta_index(r, eta);
    for (const auto &c : r.collected) {
      sum += static_cast<double>(c.counts[idx]);
      ++n;
    }
  }
  if (n == 0)
    throw UndefinedMetric("no collected rows");
  return sum / static_cast<double>(n);
}

double mean_occupancy_ratio(std::span<const MetricsRecord> records, int min_segment) {
  double packets = 0.0;
  double capacity = 0.0;
  for (const auto &r : records)
    for (const auto &[key, occ] : r.occupancy) {
      if (key.second < min_segment)
        continue;
      packets += occ.packet_sum;
      capacity += static_cast<double>(occ.samples) * static_cast<double>(r.buffer_capacity);
    }
  if (capacity == 0.0)
    throw UndefinedMetric("no buffer occupancy samples");
  return packets / capacity;
}

void write_metrics_csv(std::ostream &os, const MetricsRecord &record) {
  os << "metric,source_id,vehicle_id,eta,value\n";
  for (const auto &s : record.dd_samples)
    os << "decoding_distance," << s.source << ',' << s.vehicle << ",," << s.distance << '\n';
  for (const auto &c : record.collected)
    for (std::size_t i = 0; i < c.counts.size(); ++i)
      os << "collected," << c.source << ',' << c.vehicle << ',' << record.eta_grid[i] << ',' << c.counts[i] << '\n';
  for (const auto &[key, occ] : record.occupancy)
    os << "buffer_occupancy," << key.first << ",," << key.second << ',' << occ.mean() << '\n';
  const auto &ch = record.channel;
  os << "channel_slots,,,," << ch.slots << '\n';
  os << "channel_rsu_transmissions,,,," << ch.rsu_transmissions << '\n';
  os << "channel_contention_transmissions,,,," << ch.contention_transmissions << '\n';
  os << "channel_collisions,,,," << ch.collisions << '\n';
  os << "channel_deliveries,,,," << ch.deliveries << '\n';
  os << "vehicles_spawned,,,," << record.vehicles_spawned << '\n';
  os << "eligible_vehicles,,,," << record.eligible_vehicles << '\n';
}

DeploymentCapacity deployment_capacity(const std::function<double(int)> &success, double epsilon, int m_lo, int m_hi,
                                       int coarse_step) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw InvalidParameter("epsilon must be in (0, 1]");
  if (m_lo < 1 || m_hi < m_lo)
    throw InvalidParameter("M range must be non-empty and >= 1");
  if (coarse_step < 1)
    throw InvalidParameter("coarse_step must be >= 1");

  DeploymentCapacity out;
  const double target = 1.0 - epsilon;
  auto ok = [&](int m) {
    auto it = out.evaluated.find(m);
    if (it == out.evaluated.end())
      it = out.evaluated.emplace(m, success(m)).first;
    return it->second >= target;
  };

  std::vector<int> coarse;
  for (int m = m_hi; m > m_lo; m -= coarse_step)
    coarse.push_back(m);
  coarse.push_back(m_lo);

  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (!ok(coarse[i]))
      continue;
    int best = coarse[i];
    const int upper = i == 0 ? coarse[i] : coarse[i - 1];
    for (int m = coarse[i] + 1; m < upper; ++m)
      if (ok(m))
        best = m;
    out.capacity = best;
    return out;
  }
  out.diagnostic = "no M in [" + std::to_string(m_lo) + ", " + std::to_string(m_hi) +
                   "] reaches P_success >= " + std::to_string(target);
  return out;
}

} // namespace infocast::engine
