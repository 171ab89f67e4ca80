#include "infocast/fountain/overhead.hpp"

#include "infocast/errors.hpp"
#include "infocast/fountain/codec.hpp"
#include "infocast/fountain/prng.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <ostream>

namespace infocast::fountain {

OverheadCurve measure_overhead(std::size_t k, const DegreeDistribution &dist, std::size_t trials,
                               std::uint64_t rng_seed) {
  if (trials == 0)
    throw InvalidParameter("measure_overhead needs trials >= 1");
  if (dist.k() != k)
    throw InvalidParameter("distribution k does not match");

  auto shared = std::make_shared<const DegreeDistribution>(dist);
  // Payload content does not influence which packets peel, so the trials
  // run on empty payloads.
  const SourceMessage message = SourceMessage::random(0, k, 0, rng_seed);

  OverheadCurve curve;
  curve.k = k;
  curve.trials = trials;
  curve.needed.reserve(trials);

  SplitMix64 seeds(mix_seed(rng_seed, 0x6f7665726865ULL));
  for (std::size_t t = 0; t < trials; ++t) {
    Decoder decoder(0, shared, 0);
    while (!decoder.complete())
      decoder.push(encode(message, dist, seeds()));
    curve.needed.push_back(decoder.distinct_received());
  }

  const std::size_t max_needed = *std::max_element(curve.needed.begin(), curve.needed.end());
  std::vector<std::size_t> hist(max_needed + 1, 0);
  for (auto n : curve.needed)
    ++hist[n];
  curve.success_by_count.assign(max_needed + 1, 0.0);
  std::size_t cumulative = 0;
  for (std::size_t n = 0; n <= max_needed; ++n) {
    cumulative += hist[n];
    curve.success_by_count[n] = static_cast<double>(cumulative) / static_cast<double>(trials);
  }
  const double total = std::accumulate(curve.needed.begin(), curve.needed.end(), 0.0);
  curve.mean_overhead = total / static_cast<double>(trials) / static_cast<double>(k);
  return curve;
}

void write_overhead_csv(std::ostream &os, const OverheadCurve &curve) {
  os << "k,received,success_prob\n";
  for (std::size_t n = 0; n < curve.success_by_count.size(); ++n)
    os << curve.k << ',' << n << ',' << curve.success_by_count[n] << '\n';
}

} // namespace infocast::fountain
