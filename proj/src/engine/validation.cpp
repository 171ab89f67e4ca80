#include "infocast/engine/validation.hpp"

#include "infocast/analytics/dissemination.hpp"
#include "infocast/engine/harness.hpp"
#include "infocast/fountain/prng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace infocast::engine {

namespace {

double rel(double analytic, double empirical) {
  if (analytic == 0.0)
    return std::abs(empirical);
  return std::abs(empirical - analytic) / std::abs(analytic);
}

constexpr double meetings_speed = 30.0;
constexpr double meetings_spacing = 0.01;
constexpr double meetings_road = 20000.0;
constexpr double meetings_range = 200.0;
constexpr int meetings_runs = 20;

} // namespace

Check make_check(std::string name, double analytic, double empirical, double tol) {
  Check c{std::move(name), analytic, empirical, rel(analytic, empirical), tol, false};
  c.pass = std::isfinite(c.rel_err) && c.rel_err <= tol;
  return c;
}

std::vector<Check> check_coupon_uncoded(const ValidationOptions &opt) {
  const std::size_t n = 100;
  const auto est = opt.formulas.uncoded(n);
  const double mc = simulate_uncoded_collection(n, 2000, fountain::mix_seed(opt.seed, 1));
  return {make_check("coupon_uncoded_mc", est.exact, mc, 0.03 * opt.tol_scale),
          make_check("coupon_uncoded_approx", est.exact, est.approx, 0.01 * opt.tol_scale)};
}

std::vector<Check> check_coupon_erasure(const ValidationOptions &opt) {
  const auto est = opt.formulas.erasure(10, 1.0);
  const double mc = simulate_erasure_collection(10, 1.0, 20000, fountain::mix_seed(opt.seed, 2));
  return {make_check("coupon_erasure_mc", est.exact, mc, 0.03 * opt.tol_scale),
          make_check("coupon_erasure_approx", est.exact, est.approx, 0.05 * opt.tol_scale)};
}

std::vector<Check> check_cluster_stats(const ValidationOptions &opt) {
  const double ls = 0.01;
  const double r = 200.0;
  const auto a = opt.formulas.cluster(ls, r, 30.0, 20000.0);
  mobility::Rng rng(fountain::mix_seed(opt.seed, 3));
  const auto e = mobility::empirical_cluster_stats(100000, ls, r, 30.0, 20000.0, rng);
  const double tol = 0.02 * opt.tol_scale;
  return {make_check("cluster_p_last", a.p_last, e.p_last, tol),
          make_check("cluster_size", a.e_cluster_size, e.e_cluster_size, tol),
          make_check("cluster_inter_spacing", a.e_inter_cluster, e.e_inter_cluster, tol),
          make_check("cluster_length", a.e_cluster_length, e.e_cluster_length, tol)};
}

std::vector<Check> check_cluster_meetings(const ValidationOptions &opt) {
  mobility::MobilityConfig cfg;
  cfg.speed_min = cfg.speed_max = meetings_speed;
  cfg.arrival_rate = meetings_spacing * meetings_speed;
  cfg.road_length = meetings_road;
  cfg.comm_range = meetings_range;
  const auto a = opt.formulas.cluster(cfg.spacing_rate(), cfg.comm_range, meetings_speed, cfg.road_length);

  EncounterMeasurement total;
  for (int i = 0; i < meetings_runs; ++i) {
    const auto m = measure_cluster_encounters(cfg, 0.01, fountain::mix_seed(opt.seed, 100 + i));
    total.clusters_met += m.clusters_met;
    total.meet_time_sum += m.meet_time_sum;
  }
  const double count = static_cast<double>(total.clusters_met) / meetings_runs;
  const double tol = 0.10 * opt.tol_scale;
  return {make_check("meetings_count", a.e_meet_count, count, tol),
          make_check("meetings_time", a.e_meet_time, total.mean_meet_time(), tol)};
}

std::vector<Check> check_aloha(const ValidationOptions &opt) {
  double best_g = 0.0;
  double best_s = -1.0;
  for (int i = 1; i <= 400; ++i) {
    const double g = 0.005 * i;
    const double s = opt.formulas.aloha(g);
    if (s > best_s) {
      best_s = s;
      best_g = g;
    }
  }
  const double pure_peak = 1.0 / (2.0 * std::numbers::e);
  const double slotted_peak = 1.0 / std::numbers::e;

  const std::size_t n = 25;
  double sim_best = -1.0;
  double sim_load = 0.0;
  for (int i = 1; i <= 16; ++i) {
    const double p = 0.005 * i;
    const double s = measure_slotted_throughput(n, p, 20000, fountain::mix_seed(opt.seed, 200 + i));
    if (s > sim_best) {
      sim_best = s;
      sim_load = p * static_cast<double>(n);
    }
  }
  const double tol = opt.tol_scale;
  return {make_check("aloha_pure_peak_value", pure_peak, best_s, 1e-9 * tol),
          make_check("aloha_pure_peak_load", 0.5, best_g, 1e-9 * tol),
          make_check("aloha_slotted_sim_peak", slotted_peak, sim_best, 0.05 * tol),
          make_check("aloha_slotted_sim_peak_load", 1.0, sim_load, 0.25 * tol),
          make_check("aloha_slotted_over_pure", 2.0, sim_best / best_s, 0.05 * tol)};
}

std::vector<AllocationInstance> allocation_grid() {
  const std::int64_t buffers[] = {12, 20, 27, 33, 40};
  const int domains[] = {2, 3, 4, 6};
  std::vector<AllocationInstance> out;
  int k = 0;
  for (auto b : buffers)
    for (auto delta : domains) {
      analytics::DisseminationParams p;
      p.buffer = b;
      p.domain = delta;
      const auto balanced = analytics::balanced_allocation(b, delta);
      // I sits halfway between two cumulative segment hauls of the even
      // split, so the target distance walks over 0..Delta across the grid.
      const int target = (k++ * 3) % (delta + 1);
      const double haul = analytics::expected_packets_per_segment(p, static_cast<double>(balanced.total()));
      p.message = haul * (delta + 0.5 - target) / (delta + 1);
      AllocationInstance inst;
      inst.buffer = b;
      inst.domain = delta;
      inst.message = p.message;
      const auto brute = analytics::brute_force_best_allocation(p);
      inst.brute_force_distance = brute.distance.rank();
      inst.enumerated = brute.enumerated;
      inst.balanced_distance = analytics::decoding_distance(p, balanced).rank();
      inst.floor_uniform_distance = analytics::decoding_distance(p, analytics::optimal_allocation(b, delta)).rank();
      out.push_back(inst);
    }
  return out;
}

std::vector<Check> check_allocation(const ValidationOptions &opt) {
  (void)opt;
  const auto grid = allocation_grid();
  std::size_t reachable = 0;
  std::size_t optimal = 0;
  for (const auto &g : grid) {
    reachable += g.balanced_distance >= 0 ? 1 : 0;
    optimal += (g.balanced_distance >= 0 && g.balanced_distance == g.brute_force_distance) ? 1 : 0;
  }
  return {make_check("allocation_reachable_instances", static_cast<double>(grid.size()),
                     static_cast<double>(reachable), 0.0),
          make_check("allocation_uniform_optimal", static_cast<double>(grid.size()), static_cast<double>(optimal),
                     0.0)};
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

ValidationReport run_validation(const ValidationOptions &opt) {
  ValidationReport r;
  for (auto part : {check_coupon_uncoded, check_coupon_erasure, check_cluster_stats, check_cluster_meetings, check_aloha,
                    check_allocation}) {
    auto c = part(opt);
    r.checks.insert(r.checks.end(), c.begin(), c.end());
  }
  return r;
}

void write_report(std::ostream &os, const ValidationReport &report) {
  os << "check,analytic,empirical,rel_err,tol,result\n";
  for (const auto &c : report.checks)
    os << c.name << ',' << c.analytic << ',' << c.empirical << ',' << c.rel_err << ',' << c.tol << ','
       << (c.pass ? "pass" : "FAIL") << '\n';
}

} // namespace infocast::engine
