#pragma once

#include "infocast/fountain/degree_distribution.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

namespace infocast::fountain {

using Bytes = std::vector<std::uint8_t>;
using SourceId = std::int32_t;

/// k equal-length source packets owned by one RSU.
struct SourceMessage {
  SourceId source_id = 0;
  std::vector<Bytes> packets;

  std::size_t k() const { return packets.size(); }
  std::size_t payload_len() const { return packets.empty() ? 0 : packets.front().size(); }

  /// Throws InvalidParameter if empty or ragged.
  void validate() const;

  static SourceMessage random(SourceId id, std::size_t k, std::size_t payload_len, std::uint64_t seed);

  friend bool operator==(const SourceMessage &, const SourceMessage &) = default;
};

/// One LT-coded packet. The index set is not carried: it is regenerated
/// from (seed, k, distribution), so the header is constant size.
struct EncodedPacket {
  SourceId source_id = 0;
  std::uint64_t seed = 0;
  std::uint32_t degree = 0;
  Bytes payload;

  friend bool operator==(const EncodedPacket &, const EncodedPacket &) = default;
};

/// Explicit-index representation used by tests and the GF(2) oracle.
struct ExplicitPacket {
  SourceId source_id = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> indices; // sorted, distinct
  Bytes payload;
};

/// Degree drawn from dist and a uniform index set of that size, both fully
/// determined by seed. Indices are returned sorted.
std::vector<std::uint32_t> regenerate_indices(const DegreeDistribution &dist, std::uint64_t seed);

EncodedPacket encode(const SourceMessage &message, const DegreeDistribution &dist, std::uint64_t seed);

ExplicitPacket to_explicit(const EncodedPacket &packet, const DegreeDistribution &dist);

/// XOR of the listed source packets. Indices must be distinct and < k.
Bytes xor_packets(const SourceMessage &message, std::span<const std::uint32_t> indices);

enum class DecodeStatus { in_progress, complete, duplicate_ignored };

/// Peeling (iterative message-passing) decoder for one source.
///
/// Every received packet is XOR-reduced against already resolved source
/// packets. A residual of degree one resolves its index, and the newly
/// resolved index is then substituted into every pending packet that
/// references it, until no degree-one residual remains. Packets are
/// identified by seed; a repeated seed is reported as duplicate_ignored
/// and leaves all state untouched.
class Decoder {
public:
  Decoder(SourceId source_id, std::shared_ptr<const DegreeDistribution> dist, std::size_t payload_len);

  DecodeStatus push(const EncodedPacket &packet);
  DecodeStatus push_explicit(const ExplicitPacket &packet);

  SourceId source_id() const { return source_id_; }
  std::size_t k() const { return resolved_.size(); }
  std::size_t payload_len() const { return payload_len_; }
  std::size_t resolved_count() const { return resolved_count_; }
  std::size_t distinct_received() const { return seen_.size(); }
  std::size_t pending_count() const;
  bool complete() const { return resolved_count_ == resolved_.size(); }
  bool is_resolved(std::uint32_t index) const { return resolved_[index].has_value(); }

  /// The recovered message once complete.
  std::optional<SourceMessage> message() const;

  /// Residual index sets of pending packets; used to check invariants.
  std::vector<std::vector<std::uint32_t>> pending_index_sets() const;

private:
  struct Pending {
    std::vector<std::uint32_t> indices;
    Bytes payload;
    bool live = true;
  };

  DecodeStatus absorb(std::uint64_t seed, std::vector<std::uint32_t> indices, Bytes payload);
  void resolve(std::uint32_t index, Bytes payload);
  void check_payload(std::size_t len) const;

  SourceId source_id_;
  std::shared_ptr<const DegreeDistribution> dist_;
  std::size_t payload_len_;
  std::vector<std::optional<Bytes>> resolved_;
  std::size_t resolved_count_ = 0;
  std::vector<Pending> pending_;
  std::vector<std::vector<std::uint32_t>> waiting_; // source index -> pending slots
  std::unordered_set<std::uint64_t> seen_;
};

} // namespace infocast::fountain
