#include "infocast/mobility/mobility.hpp"

#include "infocast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace infocast::mobility {

void MobilityConfig::validate() const {
  if (!(arrival_rate > 0.0))
    throw InvalidParameter("arrival_rate must be > 0");
  if (!(speed_min > 0.0))
    throw InvalidParameter("speed_min must be > 0");
  if (!(speed_max >= speed_min))
    throw InvalidParameter("speed_max must be >= speed_min");
  if (!(road_length > 0.0))
    throw InvalidParameter("road_length must be > 0");
  if (!(comm_range > 0.0))
    throw InvalidParameter("comm_range must be > 0");
  if (spacing_rate_override && !(*spacing_rate_override > 0.0))
    throw InvalidParameter("spacing_rate must be > 0");
}

namespace {

double draw_speed(const MobilityConfig &cfg, Rng &rng) {
  if (cfg.speed_max == cfg.speed_min)
    return cfg.speed_min;
  std::uniform_real_distribution<double> u(cfg.speed_min, cfg.speed_max);
  return u(rng);
}

} // namespace

std::vector<Vehicle> spawn_arrivals(const MobilityConfig &cfg, double horizon, Rng &rng, VehicleId first_id) {
  cfg.validate();
  std::vector<Vehicle> out;
  if (!(horizon > 0.0))
    return out;

  std::exponential_distribution<double> gap(cfg.arrival_rate);
  for (Direction dir : {Direction::forward, Direction::backward}) {
    double t = gap(rng);
    while (t < horizon) {
      Vehicle v;
      v.position = dir == Direction::forward ? 0.0 : cfg.road_length;
      v.speed = draw_speed(cfg, rng);
      v.direction = dir;
      v.entry_time = t;
      out.push_back(v);
      t += gap(rng);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Vehicle &a, const Vehicle &b) { return a.entry_time < b.entry_time; });
  VehicleId id = first_id;
  for (auto &v : out)
    v.id = id++;
  return out;
}

std::vector<Vehicle> populate_steady_state(const MobilityConfig &cfg, Rng &rng, VehicleId first_id) {
  cfg.validate();
  const double a = cfg.speed_min;
  const double b = cfg.speed_max;
  // Density of vehicles per metre: arrival_rate * E_arrival[1/v].
  const double inv_speed = a == b ? 1.0 / a : std::log(b / a) / (b - a);
  std::exponential_distribution<double> gap(cfg.arrival_rate * inv_speed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<Vehicle> out;
  VehicleId id = first_id;
  for (Direction dir : {Direction::forward, Direction::backward}) {
    double x = gap(rng);
    while (x < cfg.road_length) {
      Vehicle v;
      v.id = id++;
      v.position = dir == Direction::forward ? cfg.road_length - x : x;
      v.speed = a == b ? a : a * std::pow(b / a, u01(rng));
      v.direction = dir;
      v.entry_time = 0.0;
      v.prepopulated = true;
      out.push_back(v);
      x += gap(rng);
    }
  }
  return out;
}

std::vector<Vehicle> step(std::vector<Vehicle> &vehicles, double dt, double road_length) {
  if (!(dt > 0.0))
    throw InvalidParameter("step needs dt > 0");
  std::vector<Vehicle> retired;
  for (auto &v : vehicles)
    v.position += sign(v.direction) * v.speed * dt;
  auto gone = [&](const Vehicle &v) { return v.position < 0.0 || v.position > road_length; };
  for (const auto &v : vehicles)
    if (gone(v))
      retired.push_back(v);
  std::erase_if(vehicles, gone);
  return retired;
}

std::vector<ClusterRange> identify_clusters(std::span<const double> sorted_positions, double range) {
  std::vector<ClusterRange> out;
  if (sorted_positions.empty())
    return out;
  ClusterRange current{0, 0};
  for (std::size_t i = 1; i < sorted_positions.size(); ++i) {
    if (sorted_positions[i] - sorted_positions[i - 1] > range) {
      out.push_back(current);
      current = ClusterRange{i, i};
    } else {
      current.last = i;
    }
  }
  out.push_back(current);
  return out;
}

} // namespace infocast::mobility
