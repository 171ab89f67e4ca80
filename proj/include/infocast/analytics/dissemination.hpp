#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace infocast::analytics {

/// Parameters of the segment model around one source.
struct DisseminationParams {
  double spacing_rate = 0.01;  // lambda_s, 1/m
  double range = 200.0;        // R, m
  double mean_speed = 30.0;    // V0, m/s
  double segment_length = 400; // d, m (inter-RSU spacing)
  int domain = 4;              // Delta, segments
  std::int64_t buffer = 100;   // B, packets
  double message = 100;        // I, packets
  // Packet-transfer time used to turn the cluster-meet time into packet
  // slots. 1.0 reproduces the literal closed form; the simulator's slot
  // duration gives packets per cluster encounter.
  double packet_time = 1.0;

  void validate() const;
};

/// m[j] = packets a carrier holds for a source while in segment j, j = 0..Delta.
struct AllocationVector {
  std::vector<std::int64_t> m;

  std::int64_t total() const;
  bool non_increasing() const;
  friend bool operator==(const AllocationVector &, const AllocationVector &) = default;
};

/// Expected packets collected from one cluster of carriers holding m_j
/// packets of the source: E[C_length] m_j / (4 e V0 B), divided by packet_time.
double expected_packets_per_cluster(const DisseminationParams &p, double m_j);

/// Expected packets over one segment: E[M_n(d)] * expected_packets_per_cluster.
double expected_packets_per_segment(const DisseminationParams &p, double m_j);

struct DecodingDistance {
  enum class Status { reached, unreachable, degenerate };
  Status status = Status::unreachable;
  int segments = -1; // valid unless unreachable

  bool reachable() const { return status != Status::unreachable; }
  /// Orders unreachable below every reachable distance.
  int rank() const { return reachable() ? segments : -1; }
};

/// A collector enters the domain at segment Delta and moves toward the
/// source. Returns DD = Delta - d', where d' is the first cumulative index
/// with sum_{i=0}^{d'} E[N_{Delta-i}] >= I. I = 0 gives DD = Delta (flagged
/// degenerate).
DecodingDistance decoding_distance(const DisseminationParams &p, const AllocationVector &alloc);

/// Equal split B/(Delta+1) floored to whole packets; the remainder is unused.
AllocationVector optimal_allocation(std::int64_t buffer, int domain);

/// Integer split that is as equal as possible: floor(B/(Delta+1)) everywhere
/// plus one extra packet in each of the first B mod (Delta+1) entries.
AllocationVector balanced_allocation(std::int64_t buffer, int domain);

struct BruteForceResult {
  AllocationVector best;
  DecodingDistance distance;
  std::size_t enumerated = 0;
};

inline constexpr std::int64_t brute_force_max_buffer = 40;
inline constexpr int brute_force_max_domain = 6;

/// Enumerates every non-increasing integer vector of length Delta+1 with sum
/// <= B and returns one with maximal decoding distance. Ties go to the
/// vector with the smallest spread m[0] - m[Delta], then the largest sum.
/// Refuses (InvalidParameter) beyond B = 40 or Delta = 6.
BruteForceResult brute_force_best_allocation(const DisseminationParams &p);

/// Pure-ALOHA throughput S = G exp(-2G); peaks at 1/(2e) for G = 1/2.
double aloha_throughput(double offered_load);

/// Slotted-ALOHA throughput S = G exp(-G); peaks at 1/e for G = 1.
double slotted_aloha_throughput(double offered_load);

} // namespace infocast::analytics
