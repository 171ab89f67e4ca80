#include "infocast/fountain/codec.hpp"

#include "infocast/errors.hpp"
#include "infocast/fountain/prng.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace infocast::fountain {

namespace {

// Sparse view of the permutation array used by a partial Fisher-Yates pass.
// Only touched positions are stored, so a pass costs O(degree^2) worst case
// with a tiny constant and no O(k) initialisation.
class SparsePermutation {
public:
  explicit SparsePermutation(std::size_t reserve) { swaps_.reserve(2 * reserve); }

  std::uint32_t get(std::uint32_t pos) const {
    for (const auto &[p, v] : swaps_)
      if (p == pos)
        return v;
    return pos;
  }

  void set(std::uint32_t pos, std::uint32_t value) {
    for (auto &[p, v] : swaps_)
      if (p == pos) {
        v = value;
        return;
      }
    swaps_.emplace_back(pos, value);
  }

private:
  std::vector<std::pair<std::uint32_t, std::uint32_t>> swaps_;
};

void xor_into(Bytes &dst, const Bytes &src) {
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] ^= src[i];
}

} // namespace

void SourceMessage::validate() const {
  if (packets.empty())
    throw InvalidParameter("source message needs k >= 1");
  const std::size_t len = packets.front().size();
  for (const auto &p : packets)
    if (p.size() != len)
      throw InvalidParameter("source message payloads differ in length");
}

SourceMessage SourceMessage::random(SourceId id, std::size_t k, std::size_t payload_len, std::uint64_t seed) {
  if (k == 0)
    throw InvalidParameter("source message needs k >= 1");
  SplitMix64 g(seed);
  SourceMessage m;
  m.source_id = id;
  m.packets.assign(k, Bytes(payload_len));
  for (auto &p : m.packets)
    for (auto &b : p)
      b = static_cast<std::uint8_t>(g() >> 56);
  return m;
}

std::vector<std::uint32_t> regenerate_indices(const DegreeDistribution &dist, std::uint64_t seed) {
  SplitMix64 g(seed);
  const auto k = static_cast<std::uint32_t>(dist.k());
  const std::uint32_t degree = dist.sample(uniform01(g));

  std::vector<std::uint32_t> out;
  out.reserve(degree);
  if (degree == k) {
    for (std::uint32_t i = 0; i < k; ++i)
      out.push_back(i);
    return out;
  }
  SparsePermutation perm(degree);
  for (std::uint32_t i = 0; i < degree; ++i) {
    const std::uint32_t j = i + bounded(g, k - i);
    const std::uint32_t vi = perm.get(i);
    const std::uint32_t vj = perm.get(j);
    perm.set(j, vi);
    out.push_back(vj);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Bytes xor_packets(const SourceMessage &message, std::span<const std::uint32_t> indices) {
  Bytes payload(message.payload_len(), 0);
  for (auto idx : indices) {
    if (idx >= message.k())
      throw InvalidParameter("index " + std::to_string(idx) + " outside message");
    xor_into(payload, message.packets[idx]);
  }
  return payload;
}

EncodedPacket encode(const SourceMessage &message, const DegreeDistribution &dist, std::uint64_t seed) {
  if (dist.k() != message.k())
    throw InvalidParameter("distribution k " + std::to_string(dist.k()) + " != message k " +
                           std::to_string(message.k()));
  const auto indices = regenerate_indices(dist, seed);
  EncodedPacket p;
  p.source_id = message.source_id;
  p.seed = seed;
  p.degree = static_cast<std::uint32_t>(indices.size());
  p.payload = xor_packets(message, indices);
  return p;
}

ExplicitPacket to_explicit(const EncodedPacket &packet, const DegreeDistribution &dist) {
  ExplicitPacket e;
  e.source_id = packet.source_id;
  e.seed = packet.seed;
  e.indices = regenerate_indices(dist, packet.seed);
  if (e.indices.size() != packet.degree)
    throw MalformedPacket("degree field does not match regenerated index set");
  e.payload = packet.payload;
  return e;
}

Decoder::Decoder(SourceId source_id, std::shared_ptr<const DegreeDistribution> dist, std::size_t payload_len)
    : source_id_(source_id), dist_(std::move(dist)), payload_len_(payload_len) {
  if (!dist_)
    throw InvalidParameter("decoder needs a degree distribution");
  resolved_.resize(dist_->k());
  waiting_.resize(dist_->k());
}

void Decoder::check_payload(std::size_t len) const {
  if (len != payload_len_)
    throw MalformedPacket("payload length " + std::to_string(len) + " != " + std::to_string(payload_len_));
}

DecodeStatus Decoder::push(const EncodedPacket &packet) {
  if (packet.source_id != source_id_)
    throw MalformedPacket("packet for source " + std::to_string(packet.source_id) + " pushed to decoder of " +
                          std::to_string(source_id_));
  check_payload(packet.payload.size());
  if (seen_.contains(packet.seed))
    return DecodeStatus::duplicate_ignored;
  if (complete()) {
    seen_.insert(packet.seed);
    return DecodeStatus::complete;
  }
  auto indices = regenerate_indices(*dist_, packet.seed);
  if (indices.size() != packet.degree)
    throw MalformedPacket("degree field does not match regenerated index set");
  return absorb(packet.seed, std::move(indices), packet.payload);
}

DecodeStatus Decoder::push_explicit(const ExplicitPacket &packet) {
  if (packet.source_id != source_id_)
    throw MalformedPacket("packet for another source");
  check_payload(packet.payload.size());
  if (packet.indices.empty())
    throw MalformedPacket("empty index set");
  for (auto idx : packet.indices)
    if (idx >= k())
      throw MalformedPacket("index outside message");
  if (seen_.contains(packet.seed))
    return DecodeStatus::duplicate_ignored;
  if (complete()) {
    seen_.insert(packet.seed);
    return DecodeStatus::complete;
  }
  auto indices = packet.indices;
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return absorb(packet.seed, std::move(indices), packet.payload);
}

DecodeStatus Decoder::absorb(std::uint64_t seed, std::vector<std::uint32_t> indices, Bytes payload) {
  seen_.insert(seed);

  std::vector<std::uint32_t> residual;
  residual.reserve(indices.size());
  for (auto idx : indices) {
    if (resolved_[idx])
      xor_into(payload, *resolved_[idx]);
    else
      residual.push_back(idx);
  }

  if (residual.size() == 1) {
    resolve(residual.front(), std::move(payload));
  } else if (residual.size() > 1) {
    const auto slot = static_cast<std::uint32_t>(pending_.size());
    for (auto idx : residual)
      waiting_[idx].push_back(slot);
    pending_.push_back(Pending{std::move(residual), std::move(payload), true});
  }
  return complete() ? DecodeStatus::complete : DecodeStatus::in_progress;
}

void Decoder::resolve(std::uint32_t index, Bytes payload) {
  std::vector<std::pair<std::uint32_t, Bytes>> ripple;
  ripple.emplace_back(index, std::move(payload));

  while (!ripple.empty()) {
    auto [idx, value] = std::move(ripple.back());
    ripple.pop_back();
    if (resolved_[idx])
      continue;
    resolved_[idx] = std::move(value);
    ++resolved_count_;

    auto waiters = std::move(waiting_[idx]);
    waiting_[idx].clear();
    for (auto slot : waiters) {
      Pending &p = pending_[slot];
      if (!p.live)
        continue;
      auto it = std::find(p.indices.begin(), p.indices.end(), idx);
      if (it == p.indices.end())
        continue;
      p.indices.erase(it);
      xor_into(p.payload, *resolved_[idx]);
      if (p.indices.size() == 1) {
        const auto last = p.indices.front();
        p.live = false;
        p.indices.clear();
        if (!resolved_[last])
          ripple.emplace_back(last, std::move(p.payload));
        p.payload = Bytes();
      } else if (p.indices.empty()) {
        p.live = false;
        p.payload = Bytes();
      }
    }
  }

  if (complete()) {
    pending_.clear();
    for (auto &w : waiting_)
      w.clear();
  }
}

std::size_t Decoder::pending_count() const {
  return static_cast<std::size_t>(std::count_if(pending_.begin(), pending_.end(), [](const Pending &p) { return p.live; }));
}

std::optional<SourceMessage> Decoder::message() const {
  if (!complete())
    return std::nullopt;
  SourceMessage m;
  m.source_id = source_id_;
  m.packets.reserve(resolved_.size());
  for (const auto &r : resolved_)
    m.packets.push_back(*r);
  return m;
}

std::vector<std::vector<std::uint32_t>> Decoder::pending_index_sets() const {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto &p : pending_)
    if (p.live)
      out.push_back(p.indices);
  return out;
}

} // namespace infocast::fountain
