#pragma once

#include "infocast/fountain/codec.hpp"

#include <cstddef>
#include <functional>
#include <random>
#include <variant>
#include <vector>

namespace infocast::protocol {

using fountain::EncodedPacket;
using fountain::SourceId;
using Rng = std::mt19937_64;

/// Drop a fraction of every source's packets at each new admission.
struct SchemeA {
  double drop_fraction = 0.2;
};

/// Keep only the `window` most recently admitted sources, sharing B equally.
struct SchemeB {
  int window = 4;
};

using BufferScheme = std::variant<SchemeA, SchemeB>;

/// Produces one fresh encoding of the source being admitted.
using PacketFactory = std::function<EncodedPacket()>;

struct BufferEntry {
  SourceId source = 0;
  std::vector<EncodedPacket> packets;
};

/// Capacity-B relay store of re-encoded packets, grouped by source in
/// admission order (oldest first). Total stored packets never exceed B.
class CooperationBuffer {
public:
  CooperationBuffer(std::size_t capacity, BufferScheme scheme);

  std::size_t capacity() const { return capacity_; }
  const BufferScheme &scheme() const { return scheme_; }
  std::size_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::size_t count(SourceId source) const;
  bool contains(SourceId source) const;
  const std::vector<BufferEntry> &entries() const { return entries_; }
  std::vector<SourceId> sources() const;

  /// Removes every packet of `source`. Returns the number removed.
  std::size_t purge(SourceId source);

  /// Uniform over all stored packets (not over sources). Null when empty.
  const EncodedPacket *pick_uniform(Rng &rng) const;

  /// Drop ceil(D * count) uniformly chosen packets from each source, remove
  /// emptied sources, then admit `source` into exactly the free capacity.
  /// Returns the number of packets admitted.
  std::size_t scheme_a_update(SourceId source, double drop_fraction, const PacketFactory &make, Rng &rng);

  /// Evict oldest sources until fewer than `window` remain, truncate every
  /// remaining source to floor(B / n) where n counts the newcomer, and admit
  /// `source` with the rest (the newest share absorbs the remainder).
  /// Existing sources are never topped up. Returns the number admitted.
  std::size_t scheme_b_update(SourceId source, int window, const PacketFactory &make);

  /// Dispatches on the configured scheme.
  std::size_t admit(SourceId source, const PacketFactory &make, Rng &rng);

private:
  std::size_t fill(SourceId source, std::size_t count, const PacketFactory &make);
  void check() const;

  std::size_t capacity_;
  BufferScheme scheme_;
  std::vector<BufferEntry> entries_;
  std::size_t total_ = 0;
};

} // namespace infocast::protocol
