#include "infocast/engine/harness.hpp"

#include "infocast/errors.hpp"
#include "infocast/fountain/prng.hpp"
#include "infocast/protocol/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace infocast::engine {

namespace {

double collect_until(std::size_t pool, std::size_t needed, std::size_t trials, std::uint64_t seed) {
  fountain::SplitMix64 g(seed);
  std::vector<bool> held(pool);
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::fill(held.begin(), held.end(), false);
    std::size_t have = 0;
    std::size_t contacts = 0;
    while (have < needed) {
      ++contacts;
      const auto pick = fountain::bounded(g, static_cast<std::uint32_t>(pool));
      if (!held[pick]) {
        held[pick] = true;
        ++have;
      }
    }
    total += static_cast<double>(contacts);
  }
  return total / static_cast<double>(trials);
}

} // namespace

double simulate_uncoded_collection(std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n == 0 || trials == 0)
    throw InvalidParameter("uncoded collection needs N >= 1 and trials >= 1");
  return collect_until(n, n, trials, seed);
}

double simulate_erasure_collection(std::size_t n, double redundancy, std::size_t trials, std::uint64_t seed) {
  if (n == 0 || trials == 0 || !(redundancy > 0.0))
    throw InvalidParameter("erasure collection needs N >= 1, r > 0 and trials >= 1");
  const auto pool = static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 + redundancy)));
  return collect_until(pool, n, trials, seed);
}

double measure_slotted_throughput(std::size_t transmitters, double tx_prob, std::uint64_t slots, std::uint64_t seed) {
  if (slots == 0)
    throw InvalidParameter("slots must be >= 1");
  protocol::World world;
  world.channel.tx_prob = tx_prob;
  world.channel.validate();
  world.payload_len = 0;

  fountain::EncodedPacket token;
  token.source_id = 0;
  token.degree = 1;
  for (std::size_t i = 0; i <= transmitters; ++i) {
    mobility::Vehicle v;
    v.id = static_cast<mobility::VehicleId>(i);
    v.position = 0.0;
    protocol::VehicleNode node(v, 1, protocol::SchemeB{1}, 0);
    if (i < transmitters) {
      token.seed = i;
      node.buffer.scheme_b_update(0, 1, [&] { return token; });
    }
    world.vehicles.push_back(std::move(node));
  }
  const std::size_t listener = transmitters;

  protocol::Rng rng(seed);
  std::uint64_t received = 0;
  for (std::uint64_t s = 0; s < slots; ++s)
    for (const auto &d : protocol::channel_slot(world, s, rng))
      if (d.receiver == listener)
        ++received;
  return static_cast<double>(received) / static_cast<double>(slots);
}

EncounterMeasurement measure_cluster_encounters(const mobility::MobilityConfig &cfg, double dt, std::uint64_t seed) {
  cfg.validate();
  if (!(dt > 0.0))
    throw InvalidParameter("dt must be > 0");
  const double road = cfg.road_length;
  const double v0 = cfg.mean_speed();
  const double trip = road / v0;

  mobility::Rng rng(seed);
  auto keep_backward = [](std::vector<mobility::Vehicle> vs) {
    std::erase_if(vs, [](const mobility::Vehicle &v) { return v.direction != mobility::Direction::backward; });
    return vs;
  };
  std::vector<mobility::Vehicle> oncoming = keep_backward(mobility::populate_steady_state(cfg, rng, 0));
  const auto arrivals = keep_backward(mobility::spawn_arrivals(cfg, trip + dt, rng, 1'000'000));
  std::size_t next_arrival = 0;

  EncounterMeasurement out;
  double collector = 0.0;
  bool have_last = false;
  mobility::VehicleId last_id = 0;
  double cluster_start = 0.0;
  double cluster_last = 0.0;

  std::vector<double> sorted;
  std::vector<mobility::VehicleId> sorted_ids;
  for (double t = 0.0; collector < road; t += dt) {
    const double collector_before = collector;

    mobility::step(oncoming, dt, road);
    collector += v0 * dt;
    while (next_arrival < arrivals.size() && arrivals[next_arrival].entry_time <= t + dt) {
      auto v = arrivals[next_arrival++];
      v.position = road - v.speed * (t + dt - v.entry_time);
      oncoming.push_back(v);
    }

    // Crossings this step, ordered by crossing instant.
    std::vector<std::pair<double, mobility::VehicleId>> crossed;
    for (const auto &v : oncoming) {
      const double prev = v.position + v.speed * dt;
      if (prev > collector_before && v.position <= collector) {
        const double closing = v.speed + v0;
        const double frac = (prev - collector_before) / (closing * dt);
        crossed.emplace_back(t + std::clamp(frac, 0.0, 1.0) * dt, v.id);
      }
    }
    if (crossed.empty())
      continue;
    std::sort(crossed.begin(), crossed.end());

    sorted.clear();
    sorted_ids.clear();
    std::vector<std::size_t> order(oncoming.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return oncoming[a].position < oncoming[b].position; });
    for (auto i : order) {
      sorted.push_back(oncoming[i].position);
      sorted_ids.push_back(oncoming[i].id);
    }
    const auto clusters = mobility::identify_clusters(sorted, cfg.comm_range);
    std::map<mobility::VehicleId, std::size_t> cluster_of;
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (std::size_t k = clusters[c].first; k <= clusters[c].last; ++k)
        cluster_of[sorted_ids[k]] = c;

    for (const auto &[when, id] : crossed) {
      const bool same = have_last && cluster_of.contains(last_id) && cluster_of.at(last_id) == cluster_of.at(id);
      if (!same) {
        if (have_last)
          out.meet_time_sum += cluster_last - cluster_start;
        ++out.clusters_met;
        cluster_start = when;
      }
      cluster_last = when;
      last_id = id;
      have_last = true;
    }
  }
  if (have_last)
    out.meet_time_sum += cluster_last - cluster_start;
  return out;
}

} // namespace infocast::engine
