#include "infocast/engine/config.hpp"
#include "infocast/engine/harness.hpp"
#include "infocast/engine/metrics.hpp"
#include "infocast/engine/simulation.hpp"
#include "infocast/engine/validation.hpp"
#include "infocast/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace infocast;
using namespace infocast::engine;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.mobility.road_length = 8000;
  c.num_rsus = 8;
  c.placement = RsuPlacement::uniform;
  c.sim_time = 150;
  c.message_packets = 30;
  c.buffer_size = 100;
  c.scheme = protocol::SchemeB{4};
  c.domain_segments = 4;
  c.prepopulate = true;
  c.warmup_time = 30;
  c.rng_seed = 17;
  return c;
}

MetricsRecord with_dd(std::vector<double> distances) {
  MetricsRecord r;
  for (double d : distances)
    r.dd_samples.push_back({0, 0, d});
  return r;
}

} // namespace

TEST_CASE("config validation and defaults") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.segment_length() == doctest::Approx(400));
  CHECK(c.warmup() == doctest::Approx(20000.0 / 30.0));
  CHECK(c.eta_grid() == std::vector<double>{200, 600, 1200, 1800, 2400});
  CHECK(c.slot_count() == 100000);
  c.buffer_size = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("buffer_size"), InvalidParameter);
  c = SimConfig{};
  c.channel.comm_range = 150;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);

  const auto t1 = reference_config();
  CHECK(t1.num_rsus == 50);
  CHECK(t1.buffer_size == 1500);
  CHECK(t1.mobility.arrival_rate == 0.1);
  CHECK(describe(t1.scheme) == "B(N=50)");
}

TEST_CASE("rsu placement") {
  SimConfig c = small_config();
  CHECK(place_rsus(c) == std::vector<double>{500, 1500, 2500, 3500, 4500, 5500, 6500, 7500});
  c.placement = RsuPlacement::random;
  const auto r = place_rsus(c);
  CHECK(r.size() == 8);
  CHECK(std::is_sorted(r.begin(), r.end()));
  CHECK(r == place_rsus(c));
  c.placement = RsuPlacement::explicit_positions;
  c.rsu_positions = {100, 200};
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("runs are deterministic and replications are thread-count independent") {
  const auto c = small_config();
  const auto a = run(c);
  const auto b = run(c);
  CHECK(a == b);
  CHECK_FALSE(a.dd_samples.empty());
  CHECK_FALSE(a.collected.empty());
  const auto serial = run_replications(c, 3, 5, 1);
  const auto parallel = run_replications(c, 3, 5, 3);
  CHECK(serial == parallel);
  CHECK_FALSE(serial[0] == serial[1]);
}

TEST_CASE("run-level properties") {
  const auto c = small_config();
  const auto r = run(c);
  for (const auto &row : r.collected) {
    REQUIRE(row.counts.size() == r.eta_grid.size());
    for (std::size_t i = 1; i < row.counts.size(); ++i)
      CHECK(row.counts[i] <= row.counts[i - 1]);
  }
  for (const auto &s : r.dd_samples)
    CHECK(s.distance <= c.segment_length() * c.domain_segments);
  for (const auto &[key, occ] : r.occupancy) {
    CHECK(key.second < c.domain_segments);
    CHECK(occ.mean() <= static_cast<double>(c.buffer_size));
  }
  CHECK(r.channel.slots == c.slot_count());
  std::ostringstream os;
  write_metrics_csv(os, r);
  CHECK(os.str().rfind("metric,source_id,vehicle_id,eta,value\n", 0) == 0);
}

TEST_CASE("every delivery comes from an in-range, uncollided transmission") {
  auto c = small_config();
  c.sim_time = 40;
  c.warmup_time = 0;
  const auto rsus = place_rsus(c);
  std::map<std::uint64_t, std::vector<protocol::TraceRow>> by_slot;
  protocol::TraceSink sink = [&](const protocol::TraceRow &row) { by_slot[row.slot].push_back(row); };
  RunOptions opt;
  opt.trace = &sink;
  const auto r = run(c, opt);
  std::uint64_t delivered = 0;
  for (const auto &[slot, rows] : by_slot) {
    std::map<protocol::NodeId, int> contention_rx;
    for (const auto &row : rows) {
      if (row.collided || row.tx < 0)
        continue;
      CHECK(++contention_rx[row.rx] == 1);
      for (const auto &other : rows)
        CHECK_FALSE((other.tx == row.rx && other.tx >= 0));
    }
    for (const auto &row : rows)
      delivered += row.collided ? 0 : 1;
  }
  CHECK(delivered == r.channel.deliveries);
}

TEST_CASE("no reachable source means no samples") {
  auto c = small_config();
  c.num_rsus = 1;
  c.placement = RsuPlacement::explicit_positions;
  c.rsu_positions = {4000};
  c.sim_time = 5;
  c.prepopulate = false;
  c.warmup_time = 0;
  const auto r = run(c);
  CHECK(r.dd_samples.empty());
  CHECK(r.collected.empty());
  CHECK_THROWS_AS(mdd(std::span(&r, 1)), UndefinedMetric);
}

TEST_CASE("scheme B occupancy settles at B / N_w") {
  auto c = small_config();
  c.mobility.road_length = 20000;
  c.num_rsus = 20;
  c.domain_segments = 10;
  c.sim_time = 300;
  c.warmup_time = 150;
  for (int window : {2, 4}) {
    c.scheme = protocol::SchemeB{window};
    const auto recs = run_replications(c, 2, 5, 2);
    // Segment 0 also holds carriers that have not yet met N_w sources.
    CHECK(mean_occupancy_ratio(recs, 1) == doctest::Approx(1.0 / window).epsilon(0.05));
  }
}

TEST_CASE("metric reducers") {
  const std::vector<MetricsRecord> rs{with_dd({400}), with_dd({800})};
  CHECK(mdd(rs) == 600);
  CHECK(mdd(std::vector<MetricsRecord>{with_dd({200, 200})}) == 200);
  CHECK_THROWS_AS(mdd(std::vector<MetricsRecord>{}), UndefinedMetric);

  MetricsRecord r;
  r.eta_grid = {200, 600};
  r.collected.push_back({1, 0, {5, 2}});
  r.collected.push_back({2, 0, {10, 9}});
  const std::vector<MetricsRecord> one{r};
  CHECK(p_success(one, 200, 0) == 1.0);
  CHECK(p_success(one, 600, 0) == 1.0);
  CHECK(p_success(one, 200, 6) == 0.5);
  CHECK(p_success(one, 600, 6) == 0.5);
  CHECK(p_success(one, 600, 10) == 0.0);
  CHECK(p_success(one, 200, 10) == 0.5);
  CHECK(mean_collected(one, 600) == 5.5);
  CHECK_THROWS_AS(p_success(one, 300, 1), InvalidParameter);
  CHECK_THROWS_AS(p_success(one, 0, 1), InvalidParameter);
}

TEST_CASE("deployment capacity search") {
  auto decreasing = [](int m) { return 1.0 - 0.01 * m; };
  CHECK(deployment_capacity(decreasing, 1.0, 1, 50).capacity == 50);
  CHECK(deployment_capacity(decreasing, 0.05, 1, 50).capacity == 5);
  CHECK(deployment_capacity(decreasing, 0.2, 1, 50).capacity == 20);
  const auto none = deployment_capacity([](int) { return 0.0; }, 0.1, 1, 10);
  CHECK(none.capacity == 0);
  CHECK_FALSE(none.diagnostic.empty());

  // Sweep equals exhaustive evaluation on monotone curves.
  for (int knee = 1; knee <= 40; ++knee) {
    auto f = [knee](int m) { return m <= knee ? 1.0 : 0.5; };
    int exhaustive = 0;
    for (int m = 1; m <= 40; ++m)
      if (f(m) >= 0.9)
        exhaustive = m;
    CHECK(deployment_capacity(f, 0.1, 1, 40, 7).capacity == exhaustive);
  }
  // Non-increasing in I, non-decreasing in epsilon.
  auto family = [](double i) { return [i](int m) { return std::exp(-0.002 * i * m); }; };
  int prev = 1000;
  for (double i : {10.0, 20.0, 40.0}) {
    const int dc = deployment_capacity(family(i), 0.2, 1, 50).capacity;
    CHECK(dc <= prev);
    prev = dc;
  }
  prev = 0;
  for (double eps : {0.05, 0.1, 0.3}) {
    const int dc = deployment_capacity(family(20), eps, 1, 50).capacity;
    CHECK(dc >= prev);
    prev = dc;
  }
  CHECK_THROWS_AS(deployment_capacity(decreasing, 0.0, 1, 5), InvalidParameter);
  CHECK_THROWS_AS(deployment_capacity(decreasing, 0.1, 5, 1), InvalidParameter);
}

TEST_CASE("deployment capacity on simulated runs equals per-M evaluation") {
  auto base = small_config();
  base.mobility.road_length = 6000;
  base.sim_time = 120;
  base.message_packets = 20;
  auto success = [&](int m) {
    auto c = base;
    c.num_rsus = m;
    const auto r = run(c);
    return r.collected.empty() ? 0.0 : p_success(std::span(&r, 1), 200, 20);
  };
  std::map<int, double> cache;
  auto cached = [&](int m) {
    if (!cache.contains(m))
      cache[m] = success(m);
    return cache[m];
  };
  const double eps = 0.5;
  int exhaustive = 0;
  for (int m = 2; m <= 8; ++m)
    if (cached(m) >= 1 - eps)
      exhaustive = m;
  CHECK(deployment_capacity(cached, eps, 2, 8, 3).capacity == exhaustive);
}

TEST_CASE("collection harnesses") {
  CHECK(simulate_uncoded_collection(1, 10, 1) == 1.0);
  CHECK(simulate_uncoded_collection(10, 20000, 1) == doctest::Approx(29.2897).epsilon(0.02));
  CHECK_THROWS_AS(simulate_uncoded_collection(0, 10, 1), InvalidParameter);
  const double s = measure_slotted_throughput(1, 1.0, 100, 1);
  CHECK(s == 1.0);
  CHECK(measure_slotted_throughput(2, 1.0, 100, 1) == 0.0);
}

TEST_CASE("validation report and negative control") {
  ValidationOptions opt;
  const auto good = check_coupon_uncoded(opt);
  for (const auto &c : good)
    CHECK(c.pass);
  opt.formulas.uncoded = [](std::size_t n) {
    auto e = analytics::expected_contacts_uncoded(n);
    e.exact *= 1.5;
    return e;
  };
  const auto bad = check_coupon_uncoded(opt);
  CHECK_FALSE(bad[0].pass);
  std::ostringstream os;
  write_report(os, ValidationReport{bad});
  CHECK(os.str().rfind("check,analytic,empirical,rel_err,tol,result\n", 0) == 0);
  CHECK(os.str().find("FAIL") != std::string::npos);
}
