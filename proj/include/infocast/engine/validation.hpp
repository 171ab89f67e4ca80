#pragma once

#include "infocast/analytics/coupon.hpp"
#include "infocast/analytics/dissemination.hpp"
#include "infocast/mobility/cluster_stats.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace infocast::engine {

struct Check {
  std::string name;
  double analytic = 0.0;
  double empirical = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Closed forms under test. Replaceable so a corrupted formula can be fed
/// through the same comparisons.
struct Formulas {
  std::function<analytics::ContactEstimate(std::size_t)> uncoded = analytics::expected_contacts_uncoded;
  std::function<analytics::ContactEstimate(std::size_t, double)> erasure = analytics::expected_contacts_erasure;
  std::function<mobility::ClusterStats(double, double, double, double)> cluster = mobility::analytic_cluster_stats;
  std::function<double(double)> aloha = analytics::aloha_throughput;
};

struct ValidationOptions {
  double tol_scale = 1.0;
  std::uint64_t seed = 20240601;
  Formulas formulas;
};

Check make_check(std::string name, double analytic, double empirical, double tol);

std::vector<Check> check_coupon_uncoded(const ValidationOptions &opt);
std::vector<Check> check_coupon_erasure(const ValidationOptions &opt);
std::vector<Check> check_cluster_stats(const ValidationOptions &opt);
std::vector<Check> check_cluster_meetings(const ValidationOptions &opt);
std::vector<Check> check_aloha(const ValidationOptions &opt);

struct AllocationInstance {
  std::int64_t buffer = 0;
  int domain = 0;
  double message = 0.0;
  int brute_force_distance = -1;
  int balanced_distance = -1;
  int floor_uniform_distance = -1;
  std::size_t enumerated = 0;
};

/// The 20-instance (B, Delta, I) grid with B <= 40 and Delta <= 6, every
/// instance reachable under the balanced split.
std::vector<AllocationInstance> allocation_grid();
std::vector<Check> check_allocation(const ValidationOptions &opt);

struct ValidationReport {
  std::vector<Check> checks;
  bool passed() const;
};

ValidationReport run_validation(const ValidationOptions &opt = {});

/// `check,analytic,empirical,rel_err,tol,result` rows.
void write_report(std::ostream &os, const ValidationReport &report);

} // namespace infocast::engine
