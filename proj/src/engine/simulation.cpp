#include "infocast/engine/simulation.hpp"

#include "infocast/errors.hpp"
#include "infocast/fountain/prng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace infocast::engine {

namespace {

using protocol::VehicleNode;

constexpr std::uint64_t stream_rsu = 1;
constexpr std::uint64_t stream_mobility = 2;
constexpr std::uint64_t stream_channel = 3;
constexpr std::uint64_t stream_buffer = 4;
constexpr std::uint64_t stream_messages = 5;

// Ordering of events that share a position: a source leaves the domain
// before a new one is admitted at the same point.
enum class EventKind : int { exit = 0, enter = 1, threshold = 2, cross = 3 };

struct Event {
  double progress; // distance travelled from the vehicle's entry end
  EventKind kind;
  SourceId source;
  std::size_t eta = 0;
};

std::vector<Event> build_events(const SimConfig &cfg, const std::vector<double> &rsu_pos, bool forward) {
  const double road = cfg.mobility.road_length;
  const double radius = cfg.segment_length() * cfg.domain_segments;
  const auto grid = cfg.eta_grid();
  std::vector<Event> ev;
  for (std::size_t i = 0; i < rsu_pos.size(); ++i) {
    const double at = forward ? rsu_pos[i] : road - rsu_pos[i];
    const auto src = static_cast<SourceId>(i);
    ev.push_back({at - radius, EventKind::enter, src});
    for (std::size_t k = 0; k < grid.size(); ++k)
      ev.push_back({at - grid[k], EventKind::threshold, src, k});
    ev.push_back({at, EventKind::cross, src});
    ev.push_back({at + radius, EventKind::exit, src});
  }
  std::sort(ev.begin(), ev.end(), [](const Event &a, const Event &b) {
    if (a.progress != b.progress)
      return a.progress < b.progress;
    if (a.kind != b.kind)
      return a.kind < b.kind;
    if (a.source != b.source)
      return a.source < b.source;
    return a.eta > b.eta;
  });
  return ev;
}

class Simulation {
public:
  Simulation(const SimConfig &cfg, const RunOptions &opts)
      : cfg_(cfg), opts_(opts), channel_rng_(fountain::mix_seed(cfg.rng_seed, stream_channel)),
        buffer_rng_(fountain::mix_seed(cfg.rng_seed, stream_buffer)) {
    cfg_.validate();
    const auto positions = place_rsus(cfg_);
    auto dist = std::make_shared<const fountain::DegreeDistribution>(
        fountain::robust_soliton(cfg_.message_packets, cfg_.degree_c, cfg_.degree_delta));

    world_.channel = cfg_.channel;
    world_.segment_length = cfg_.segment_length();
    world_.domain = cfg_.domain_segments;
    world_.payload_len = cfg_.payload_len;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      protocol::Rsu rsu;
      rsu.id = static_cast<SourceId>(i);
      rsu.position = positions[i];
      rsu.message = std::make_shared<const fountain::SourceMessage>(fountain::SourceMessage::random(
          rsu.id, cfg_.message_packets, cfg_.payload_len, fountain::mix_seed(cfg_.rng_seed, stream_messages + 16 * i)));
      rsu.dist = dist;
      world_.rsus.push_back(std::move(rsu));
    }
    events_fwd_ = build_events(cfg_, positions, true);
    events_bwd_ = build_events(cfg_, positions, false);

    record_.eta_grid = cfg_.eta_grid();
    record_.buffer_capacity = cfg_.buffer_size;

    mobility::Rng mob_rng(fountain::mix_seed(cfg_.rng_seed, stream_mobility));
    std::vector<mobility::Vehicle> initial;
    if (cfg_.prepopulate)
      initial = mobility::populate_steady_state(cfg_.mobility, mob_rng, 0);
    arrivals_ = mobility::spawn_arrivals(cfg_.mobility, cfg_.sim_time, mob_rng,
                                         static_cast<mobility::VehicleId>(initial.size()));
    for (const auto &v : initial)
      add_vehicle(v);
  }

  MetricsRecord run() {
    const double dt = cfg_.channel.slot_duration;
    const std::uint64_t slots = cfg_.slot_count();
    const auto sample_every =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(cfg_.occupancy_interval / dt)));
    const double warmup = cfg_.warmup();

    for (std::uint64_t s = 0; s < slots; ++s) {
      const double t = static_cast<double>(s) * dt;
      if (s > 0)
        advance(dt);
      admit_arrivals(t);
      for (std::size_t i = 0; i < world_.vehicles.size(); ++i)
        fire_events(i);

      const auto deliveries = protocol::channel_slot(world_, s, channel_rng_, &record_.channel, opts_.trace);
      for (const auto &d : deliveries) {
        const auto outcome = protocol::on_receive(world_, d.receiver, *d.packet);
        if (!outcome.newly_decoded)
          continue;
        const auto &node = world_.vehicles[d.receiver];
        if (node.eligible) {
          const auto &link = node.links[static_cast<std::size_t>(d.packet->source_id)];
          record_.dd_samples.push_back({node.motion.id, d.packet->source_id, *link.decoded_at_distance});
        }
      }

      if (t >= warmup && s % sample_every == 0)
        sample_occupancy();
    }
    return std::move(record_);
  }

private:
  double progress(const mobility::Vehicle &v) const {
    return v.direction == mobility::Direction::forward ? v.position : cfg_.mobility.road_length - v.position;
  }

  const std::vector<Event> &events_for(const mobility::Vehicle &v) const {
    return v.direction == mobility::Direction::forward ? events_fwd_ : events_bwd_;
  }

  void add_vehicle(const mobility::Vehicle &v) {
    VehicleNode node(v, cfg_.buffer_size, cfg_.scheme, world_.rsus.size());
    node.eligible = !v.prepopulated && v.entry_time >= cfg_.warmup();
    ++record_.vehicles_spawned;
    if (node.eligible)
      ++record_.eligible_vehicles;
    world_.vehicles.push_back(std::move(node));
    cursor_.push_back(0);
  }

  void admit_arrivals(double t) {
    while (next_arrival_ < arrivals_.size() && arrivals_[next_arrival_].entry_time <= t) {
      auto v = arrivals_[next_arrival_++];
      const double moved = v.speed * (t - v.entry_time);
      v.position += mobility::sign(v.direction) * moved;
      v.position = std::clamp(v.position, 0.0, cfg_.mobility.road_length);
      add_vehicle(v);
    }
  }

  void advance(double dt) {
    const double road = cfg_.mobility.road_length;
    for (auto &node : world_.vehicles)
      node.motion.position += mobility::sign(node.motion.direction) * node.motion.speed * dt;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < world_.vehicles.size(); ++i) {
      const double x = world_.vehicles[i].motion.position;
      if (x < 0.0 || x > road)
        continue;
      if (keep != i) {
        world_.vehicles[keep] = std::move(world_.vehicles[i]);
        cursor_[keep] = cursor_[i];
      }
      ++keep;
    }
    world_.vehicles.erase(world_.vehicles.begin() + static_cast<std::ptrdiff_t>(keep), world_.vehicles.end());
    cursor_.resize(keep);
  }

  void fire_events(std::size_t idx) {
    auto &node = world_.vehicles[idx];
    const auto &events = events_for(node.motion);
    const double here = progress(node.motion);
    const std::size_t grid = record_.eta_grid.size();
    auto &cursor = cursor_[idx];
    while (cursor < events.size() && events[cursor].progress <= here) {
      const Event &e = events[cursor++];
      auto &link = node.links[static_cast<std::size_t>(e.source)];
      switch (e.kind) {
      case EventKind::enter:
        break;
      case EventKind::threshold:
        link.snapshots.resize(grid, 0);
        link.snapshots[e.eta] = link.distinct_received();
        break;
      case EventKind::cross: {
        if (node.eligible) {
          link.snapshots.resize(grid, 0);
          record_.collected.push_back({node.motion.id, e.source, link.snapshots});
        }
        protocol::on_become_carrier(node, world_.rsus[static_cast<std::size_t>(e.source)], buffer_rng_);
        link.decoder.reset();
        link.snapshots.clear();
        break;
      }
      case EventKind::exit:
        protocol::on_leave_domain(node, e.source);
        break;
      }
    }
  }

  void sample_occupancy() {
    const double d = world_.segment_length;
    for (const auto &node : world_.vehicles)
      for (const auto &entry : node.buffer.entries()) {
        const double rsu = world_.rsus[static_cast<std::size_t>(entry.source)].position;
        auto &cell = record_.occupancy[{entry.source, protocol::segment_index(node.motion.position, rsu, d)}];
        cell.packet_sum += static_cast<double>(entry.packets.size());
        ++cell.samples;
      }
  }

  SimConfig cfg_;
  RunOptions opts_;
  protocol::World world_;
  std::vector<std::size_t> cursor_;
  std::vector<Event> events_fwd_;
  std::vector<Event> events_bwd_;
  std::vector<mobility::Vehicle> arrivals_;
  std::size_t next_arrival_ = 0;
  protocol::Rng channel_rng_;
  protocol::Rng buffer_rng_;
  MetricsRecord record_;
};

} // namespace

std::vector<double> place_rsus(const SimConfig &config) {
  const double road = config.mobility.road_length;
  const auto m = static_cast<std::size_t>(config.num_rsus);
  std::vector<double> pos;
  switch (config.placement) {
  case RsuPlacement::uniform: {
    const double d = road / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
      pos.push_back((static_cast<double>(i) + 0.5) * d);
    break;
  }
  case RsuPlacement::random: {
    mobility::Rng rng(fountain::mix_seed(config.rng_seed, stream_rsu));
    std::uniform_real_distribution<double> u(0.0, road);
    while (pos.size() < m) {
      const double x = u(rng);
      if (x > 0.0 && std::find(pos.begin(), pos.end(), x) == pos.end())
        pos.push_back(x);
    }
    std::sort(pos.begin(), pos.end());
    break;
  }
  case RsuPlacement::explicit_positions:
    pos = config.rsu_positions;
    break;
  }
  return pos;
}

MetricsRecord run(const SimConfig &config, const RunOptions &options) {
  Simulation sim(config, options);
  return sim.run();
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t replication) {
  return fountain::mix_seed(master_seed, replication);
}

std::vector<MetricsRecord> run_replications(const SimConfig &base, std::size_t count, std::uint64_t master_seed,
                                            unsigned jobs) {
  std::vector<MetricsRecord> out(count);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      SimConfig c = base;
      c.rng_seed = replication_seed(master_seed, i);
      try {
        out[i] = run(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < n; ++j)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
  return out;
}

} // namespace infocast::engine
