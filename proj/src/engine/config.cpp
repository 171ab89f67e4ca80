#include "infocast/engine/config.hpp"

#include "infocast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infocast::engine {

double SimConfig::segment_length() const {
  if (segment_length_override)
    return *segment_length_override;
  return mobility.road_length / static_cast<double>(num_rsus);
}

double SimConfig::warmup() const { return warmup_time.value_or(mobility.road_length / mobility.mean_speed()); }

std::vector<double> SimConfig::eta_grid() const {
  std::vector<double> out;
  out.reserve(eta_multiples.size());
  for (double m : eta_multiples)
    out.push_back(m * mobility.comm_range);
  return out;
}

std::uint64_t SimConfig::slot_count() const {
  return static_cast<std::uint64_t>(std::llround(sim_time / channel.slot_duration));
}

void SimConfig::validate() const {
  mobility.validate();
  channel.validate();
  if (channel.comm_range != mobility.comm_range)
    throw InvalidParameter("channel comm_range must equal mobility comm_range");
  if (num_rsus < 1)
    throw InvalidParameter("num_rsus must be >= 1");
  if (placement == RsuPlacement::explicit_positions) {
    if (rsu_positions.size() != static_cast<std::size_t>(num_rsus))
      throw InvalidParameter("rsu_positions must list num_rsus positions");
    for (std::size_t i = 0; i < rsu_positions.size(); ++i) {
      if (!(rsu_positions[i] > 0.0 && rsu_positions[i] < mobility.road_length))
        throw InvalidParameter("rsu_positions must lie inside the road");
      if (i > 0 && !(rsu_positions[i] > rsu_positions[i - 1]))
        throw InvalidParameter("rsu_positions must be strictly increasing");
    }
  }
  if (segment_length_override && !(*segment_length_override > 0.0))
    throw InvalidParameter("segment_length must be > 0");
  if (message_packets < 1)
    throw InvalidParameter("message_packets must be >= 1");
  if (!(degree_c > 0.0))
    throw InvalidParameter("degree_c must be > 0");
  if (!(degree_delta > 0.0 && degree_delta < 1.0))
    throw InvalidParameter("degree_delta must be in (0, 1)");
  if (buffer_size < 1)
    throw InvalidParameter("buffer_size must be >= 1");
  if (const auto *a = std::get_if<protocol::SchemeA>(&scheme); a && !(a->drop_fraction > 0.0 && a->drop_fraction <= 1.0))
    throw InvalidParameter("drop_fraction must be in (0, 1]");
  if (const auto *b = std::get_if<protocol::SchemeB>(&scheme); b && b->window < 1)
    throw InvalidParameter("window must be >= 1");
  if (domain_segments < 1)
    throw InvalidParameter("domain_segments must be >= 1");
  if (!(sim_time > 0.0))
    throw InvalidParameter("sim_time must be > 0");
  if (warmup_time && !(*warmup_time >= 0.0))
    throw InvalidParameter("warmup_time must be >= 0");
  if (eta_multiples.empty() || !std::is_sorted(eta_multiples.begin(), eta_multiples.end()) ||
      !(eta_multiples.front() > 0.0))
    throw InvalidParameter("eta_multiples must be positive and ascending");
  if (!(occupancy_interval > 0.0))
    throw InvalidParameter("occupancy_interval must be > 0");
}

SimConfig reference_config() {
  SimConfig c;
  c.mobility.arrival_rate = 0.1;
  c.mobility.speed_min = 20.0;
  c.mobility.speed_max = 40.0;
  c.mobility.road_length = 20000.0;
  c.mobility.comm_range = 200.0;
  c.channel.comm_range = 200.0;
  c.channel.rsu_rate = 100.0;
  c.channel.slot_duration = 0.01;
  c.num_rsus = 50;
  c.placement = RsuPlacement::random;
  c.sim_time = 1000.0;
  c.message_packets = 1000;
  c.buffer_size = 1500;
  c.scheme = protocol::SchemeB{50};
  c.domain_segments = 50;
  return c;
}

std::string describe(const protocol::BufferScheme &scheme) {
  std::ostringstream os;
  if (const auto *a = std::get_if<protocol::SchemeA>(&scheme))
    os << "A(D=" << a->drop_fraction << ")";
  else
    os << "B(N=" << std::get<protocol::SchemeB>(scheme).window << ")";
  return os.str();
}

} // namespace infocast::engine
