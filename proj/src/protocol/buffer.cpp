#include "infocast/protocol/buffer.hpp"

#include "infocast/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace infocast::protocol {

CooperationBuffer::CooperationBuffer(std::size_t capacity, BufferScheme scheme)
    : capacity_(capacity), scheme_(scheme) {
  if (capacity_ == 0)
    throw InvalidParameter("buffer capacity must be >= 1");
  if (const auto *a = std::get_if<SchemeA>(&scheme_); a && !(a->drop_fraction > 0.0 && a->drop_fraction <= 1.0))
    throw InvalidParameter("drop_fraction must be in (0, 1]");
  if (const auto *b = std::get_if<SchemeB>(&scheme_); b && b->window < 1)
    throw InvalidParameter("window must be >= 1");
}

std::size_t CooperationBuffer::count(SourceId source) const {
  for (const auto &e : entries_)
    if (e.source == source)
      return e.packets.size();
  return 0;
}

bool CooperationBuffer::contains(SourceId source) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const BufferEntry &e) { return e.source == source; });
}

std::vector<SourceId> CooperationBuffer::sources() const {
  std::vector<SourceId> out;
  out.reserve(entries_.size());
  for (const auto &e : entries_)
    out.push_back(e.source);
  return out;
}

std::size_t CooperationBuffer::purge(SourceId source) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const BufferEntry &e) { return e.source == source; });
  if (it == entries_.end())
    return 0;
  const std::size_t n = it->packets.size();
  total_ -= n;
  entries_.erase(it);
  return n;
}

const EncodedPacket *CooperationBuffer::pick_uniform(Rng &rng) const {
  if (total_ == 0)
    return nullptr;
  std::uniform_int_distribution<std::size_t> pick(0, total_ - 1);
  std::size_t r = pick(rng);
  for (const auto &e : entries_) {
    if (r < e.packets.size())
      return &e.packets[r];
    r -= e.packets.size();
  }
  return nullptr;
}

std::size_t CooperationBuffer::fill(SourceId source, std::size_t count, const PacketFactory &make) {
  if (count == 0)
    return 0;
  BufferEntry entry{source, {}};
  entry.packets.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    entry.packets.push_back(make());
  entries_.push_back(std::move(entry));
  total_ += count;
  return count;
}

void CooperationBuffer::check() const {
  assert(total_ <= capacity_);
#ifndef NDEBUG
  std::size_t sum = 0;
  for (const auto &e : entries_)
    sum += e.packets.size();
  assert(sum == total_);
#endif
}

std::size_t CooperationBuffer::scheme_a_update(SourceId source, double drop_fraction, const PacketFactory &make,
                                               Rng &rng) {
  if (!(drop_fraction > 0.0 && drop_fraction <= 1.0))
    throw InvalidParameter("drop_fraction must be in (0, 1]");
  purge(source);
  for (auto &e : entries_) {
    const auto n = e.packets.size();
    // The epsilon keeps products such as 0.2 * 50 from rounding up to 11.
    auto drop = static_cast<std::size_t>(std::ceil(drop_fraction * static_cast<double>(n) - 1e-9));
    drop = std::min(drop, n);
    // Partial Fisher-Yates moves `drop` random packets to the back.
    for (std::size_t i = 0; i < drop; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1 - i);
      std::swap(e.packets[pick(rng)], e.packets[n - 1 - i]);
    }
    e.packets.resize(n - drop);
    total_ -= drop;
  }
  std::erase_if(entries_, [](const BufferEntry &e) { return e.packets.empty(); });
  const std::size_t admitted = fill(source, capacity_ - total_, make);
  check();
  return admitted;
}

std::size_t CooperationBuffer::scheme_b_update(SourceId source, int window, const PacketFactory &make) {
  if (window < 1)
    throw InvalidParameter("window must be >= 1");
  purge(source);
  const auto w = static_cast<std::size_t>(window);
  while (entries_.size() >= w) {
    total_ -= entries_.front().packets.size();
    entries_.erase(entries_.begin());
  }
  const std::size_t present = entries_.size() + 1;
  const std::size_t quota = capacity_ / present;
  for (auto &e : entries_) {
    if (e.packets.size() > quota) {
      total_ -= e.packets.size() - quota;
      e.packets.resize(quota);
    }
  }
  const std::size_t newest_share = capacity_ - (present - 1) * quota;
  const std::size_t admitted = fill(source, std::min(newest_share, capacity_ - total_), make);
  check();
  return admitted;
}

std::size_t CooperationBuffer::admit(SourceId source, const PacketFactory &make, Rng &rng) {
  if (const auto *a = std::get_if<SchemeA>(&scheme_))
    return scheme_a_update(source, a->drop_fraction, make, rng);
  return scheme_b_update(source, std::get<SchemeB>(scheme_).window, make);
}

} // namespace infocast::protocol
