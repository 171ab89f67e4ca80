#pragma once

#include "infocast/fountain/codec.hpp"

#include <optional>
#include <vector>

namespace oracle {

/// Gaussian elimination over GF(2) on explicit packets. Independent of the
/// peeling decoder: rows are dense bit vectors with their payloads.
struct GeResult {
  std::size_t rank = 0;
  std::optional<std::vector<infocast::fountain::Bytes>> packets; // set iff rank == k
};

GeResult ge_decode(std::size_t k, std::size_t payload_len, const std::vector<infocast::fountain::ExplicitPacket> &rows);

} // namespace oracle
