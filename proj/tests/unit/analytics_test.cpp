#include "infocast/analytics/coupon.hpp"
#include "infocast/analytics/dissemination.hpp"
#include "infocast/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace infocast;
using namespace infocast::analytics;

TEST_CASE("uncoded coupon collector") {
  CHECK(expected_contacts_uncoded(1).exact == doctest::Approx(1.0));
  CHECK(expected_contacts_uncoded(10).exact == doctest::Approx(29.2897).epsilon(1e-5));
  const auto e = expected_contacts_uncoded(100);
  CHECK(e.exact == doctest::Approx(518.74).epsilon(1e-4));
  CHECK(e.approx == doctest::Approx(100 * std::log(100.0) + 100 * euler_gamma));
  CHECK(e.rel_err() < 1e-3);
}

TEST_CASE("erasure-coded coupon collector") {
  const auto e = expected_contacts_erasure(10, 1.0);
  double sum = 0;
  for (int i = 0; i < 10; ++i)
    sum += 20.0 / (20.0 - i);
  CHECK(e.exact == doctest::Approx(sum));
  CHECK(e.approx == doctest::Approx(20 * std::log(2.0)));
  CHECK(e.rel_err() < 0.05);
  CHECK(expected_contacts_erasure(10, 100).exact == doctest::Approx(10.0).epsilon(0.01));
  CHECK_THROWS_AS(expected_contacts_erasure(10, 0.0), InvalidParameter);
}

TEST_CASE("formula csv") {
  std::ostringstream os;
  write_formula_csv(os, {{"uncoded", {{"N", 10}}, 29.29, 28.8}});
  CHECK(os.str().rfind("formula,inputs,exact,approx,rel_err\n", 0) == 0);
  CHECK(os.str().find("N=10") != std::string::npos);
}

TEST_CASE("per-cluster and per-segment collection") {
  DisseminationParams p;
  p.buffer = 100;
  CHECK(expected_packets_per_cluster(p, 0) == 0.0);
  CHECK(expected_packets_per_cluster(p, 20) == doctest::Approx(0.269).epsilon(2e-3));
  CHECK(expected_packets_per_cluster(p, 20) ==
        doctest::Approx(438.906 * 0.2 / (4 * std::numbers::e * 30)).epsilon(1e-4));
  CHECK(expected_packets_per_segment(p, 20) == doctest::Approx(0.291).epsilon(3e-3));
  p.segment_length = 0;
  CHECK(expected_packets_per_segment(p, 20) == 0.0);
}

TEST_CASE("decoding distance") {
  DisseminationParams p;
  p.buffer = 100;
  p.domain = 4;
  p.message = 0;
  auto dd = decoding_distance(p, optimal_allocation(100, 4));
  CHECK(dd.status == DecodingDistance::Status::degenerate);
  CHECK(dd.segments == 4);

  p.message = 0.1;
  CHECK_FALSE(decoding_distance(p, AllocationVector{{0, 0, 0, 0, 0}}).reachable());
  CHECK(decoding_distance(p, AllocationVector{{0, 0, 0, 0, 0}}).rank() == -1);

  // Uniform beats front-loaded with the same sum.
  p.message = 0.5;
  const auto uni = decoding_distance(p, AllocationVector{{20, 20, 20, 20, 20}});
  const auto front = decoding_distance(p, AllocationVector{{100, 0, 0, 0, 0}});
  CHECK(uni.rank() >= front.rank());

  CHECK_THROWS_AS(decoding_distance(p, AllocationVector{{1, 2, 3, 4, 5}}), InvalidParameter);
  CHECK_THROWS_AS(decoding_distance(p, AllocationVector{{20, 20}}), InvalidParameter);
  CHECK_THROWS_AS(decoding_distance(p, AllocationVector{{50, 50, 50, 0, 0}}), InvalidParameter);
}

TEST_CASE("allocations") {
  CHECK(optimal_allocation(100, 4).m == std::vector<std::int64_t>{20, 20, 20, 20, 20});
  CHECK(optimal_allocation(100, 0).m == std::vector<std::int64_t>{100});
  CHECK(optimal_allocation(7, 2).m == std::vector<std::int64_t>{2, 2, 2});
  CHECK(balanced_allocation(11, 2).m == std::vector<std::int64_t>{4, 4, 3});
  CHECK(balanced_allocation(12, 2).m == std::vector<std::int64_t>{4, 4, 4});
}

TEST_CASE("brute force allocation") {
  DisseminationParams p;
  p.buffer = 12;
  p.domain = 2;
  p.message = 0.3;
  const auto r = brute_force_best_allocation(p);
  CHECK(r.distance.reachable());
  CHECK(r.distance.rank() == decoding_distance(p, AllocationVector{{4, 4, 4}}).rank());
  CHECK(r.best == AllocationVector{{4, 4, 4}});

  p.domain = 0;
  CHECK(brute_force_best_allocation(p).best == AllocationVector{{12}});

  p.buffer = 41;
  CHECK_THROWS_AS(brute_force_best_allocation(p), InvalidParameter);
  p.buffer = 12;
  p.domain = 7;
  CHECK_THROWS_AS(brute_force_best_allocation(p), InvalidParameter);
}

TEST_CASE("aloha") {
  CHECK(aloha_throughput(0) == 0.0);
  CHECK(aloha_throughput(0.5) == doctest::Approx(1 / (2 * std::numbers::e)).epsilon(1e-12));
  CHECK(aloha_throughput(0.49) < aloha_throughput(0.5));
  CHECK(aloha_throughput(0.51) < aloha_throughput(0.5));
  CHECK(slotted_aloha_throughput(1.0) == doctest::Approx(1 / std::numbers::e));
  CHECK(slotted_aloha_throughput(1.0) == doctest::Approx(2 * aloha_throughput(0.5)));
}
