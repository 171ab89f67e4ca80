#include "infocast/analytics/dissemination.hpp"

#include "infocast/errors.hpp"
#include "infocast/mobility/cluster_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace infocast::analytics {

void DisseminationParams::validate() const {
  if (!(spacing_rate > 0.0) || !(range > 0.0) || !(mean_speed > 0.0))
    throw InvalidParameter("lambda_s, R and V0 must be > 0");
  if (!(segment_length >= 0.0))
    throw InvalidParameter("segment length must be >= 0");
  if (domain < 0)
    throw InvalidParameter("domain must be >= 0");
  if (buffer < 0)
    throw InvalidParameter("buffer must be >= 0");
  if (!(message >= 0.0))
    throw InvalidParameter("message size must be >= 0");
  if (!(packet_time > 0.0))
    throw InvalidParameter("packet_time must be > 0");
}

std::int64_t AllocationVector::total() const { return std::accumulate(m.begin(), m.end(), std::int64_t{0}); }

bool AllocationVector::non_increasing() const {
  return std::is_sorted(m.begin(), m.end(), std::greater<>{});
}

double expected_packets_per_cluster(const DisseminationParams &p, double m_j) {
  p.validate();
  if (p.buffer == 0 || m_j == 0.0)
    return 0.0;
  if (m_j < 0.0 || m_j > static_cast<double>(p.buffer))
    throw InvalidParameter("m_j must lie in [0, B]");
  const auto stats = mobility::analytic_cluster_stats(p.spacing_rate, p.range, p.mean_speed, 1.0);
  // Meet time E[C_length]/(2 V0) at the ALOHA peak 1/(2e), times m_j/B.
  const double share = m_j / static_cast<double>(p.buffer);
  return stats.e_cluster_length * share / (4.0 * std::numbers::e * p.mean_speed * p.packet_time);
}

double expected_packets_per_segment(const DisseminationParams &p, double m_j) {
  if (p.segment_length == 0.0)
    return 0.0;
  return mobility::expected_meet_count(p.spacing_rate, p.range, p.segment_length) *
         expected_packets_per_cluster(p, m_j);
}

DecodingDistance decoding_distance(const DisseminationParams &p, const AllocationVector &alloc) {
  p.validate();
  if (alloc.m.size() != static_cast<std::size_t>(p.domain) + 1)
    throw InvalidParameter("allocation length must be Delta + 1");
  if (!alloc.non_increasing())
    throw InvalidParameter("allocation must be non-increasing");
  if (alloc.total() > p.buffer)
    throw InvalidParameter("allocation exceeds buffer");

  if (p.message == 0.0)
    return {DecodingDistance::Status::degenerate, p.domain};

  // E[N] is linear in m, so the cumulative expectation over segments
  // Delta, Delta-1, ... equals the per-segment expectation of the summed
  // allocation. Evaluating it that way keeps equal tail sums bit-equal.
  std::int64_t tail = 0;
  for (int i = 0; i <= p.domain; ++i) {
    tail += alloc.m[static_cast<std::size_t>(p.domain - i)];
    if (expected_packets_per_segment(p, static_cast<double>(tail)) >= p.message)
      return {DecodingDistance::Status::reached, p.domain - i};
  }
  return {};
}

AllocationVector optimal_allocation(std::int64_t buffer, int domain) {
  if (buffer < 0 || domain < 0)
    throw InvalidParameter("optimal_allocation needs B >= 0 and Delta >= 0");
  return {std::vector<std::int64_t>(static_cast<std::size_t>(domain) + 1, buffer / (domain + 1))};
}

AllocationVector balanced_allocation(std::int64_t buffer, int domain) {
  auto a = optimal_allocation(buffer, domain);
  const std::int64_t rest = buffer % (domain + 1);
  for (std::int64_t i = 0; i < rest; ++i)
    ++a.m[static_cast<std::size_t>(i)];
  return a;
}

namespace {

struct Enumerator {
  const DisseminationParams &p;
  BruteForceResult best;
  bool have_best = false;
  std::vector<std::int64_t> current;

  void consider() {
    AllocationVector a{current};
    const auto dd = decoding_distance(p, a);
    ++best.enumerated;
    if (!have_best) {
      best.best = std::move(a);
      best.distance = dd;
      have_best = true;
      return;
    }
    const int r_new = dd.rank();
    const int r_old = best.distance.rank();
    if (r_new < r_old)
      return;
    if (r_new == r_old) {
      const auto spread_new = a.m.front() - a.m.back();
      const auto spread_old = best.best.m.front() - best.best.m.back();
      if (spread_new > spread_old)
        return;
      if (spread_new == spread_old && a.total() <= best.best.total())
        return;
    }
    best.best = std::move(a);
    best.distance = dd;
  }

  // Fill position `pos` with values <= cap, remaining budget `budget`.
  void recurse(std::size_t pos, std::int64_t cap, std::int64_t budget) {
    if (pos == current.size()) {
      consider();
      return;
    }
    const std::int64_t hi = std::min(cap, budget);
    for (std::int64_t v = hi; v >= 0; --v) {
      current[pos] = v;
      recurse(pos + 1, v, budget - v);
    }
  }
};

} // namespace

BruteForceResult brute_force_best_allocation(const DisseminationParams &p) {
  p.validate();
  if (p.buffer > brute_force_max_buffer || p.domain > brute_force_max_domain)
    throw InvalidParameter("brute force limited to B <= 40 and Delta <= 6");
  Enumerator e{p, {}, false, std::vector<std::int64_t>(static_cast<std::size_t>(p.domain) + 1, 0)};
  e.recurse(0, p.buffer, p.buffer);
  return e.best;
}

double aloha_throughput(double offered_load) {
  if (!(offered_load >= 0.0))
    throw InvalidParameter("offered load must be >= 0");
  return offered_load * std::exp(-2.0 * offered_load);
}

double slotted_aloha_throughput(double offered_load) {
  if (!(offered_load >= 0.0))
    throw InvalidParameter("offered load must be >= 0");
  return offered_load * std::exp(-offered_load);
}

} // namespace infocast::analytics
