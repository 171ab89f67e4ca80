#include "infocast/fountain/degree_distribution.hpp"

#include "infocast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace infocast::fountain {

namespace {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::vector<double> ideal_soliton_weights(std::size_t k) {
  std::vector<double> w(k, 0.0);
  w[0] = 1.0 / static_cast<double>(k);
  for (std::size_t i = 2; i <= k; ++i) {
    const auto d = static_cast<double>(i);
    w[i - 1] = 1.0 / (d * (d - 1.0));
  }
  return w;
}

} // namespace

DegreeDistribution::DegreeDistribution(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)), cdf_(probabilities_.size()) {
  double running = 0.0;
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    running += probabilities_[i];
    cdf_[i] = running;
  }
  cdf_.back() = 1.0;
}

DegreeDistribution DegreeDistribution::from_probabilities(std::vector<double> probabilities) {
  if (probabilities.empty())
    throw InvalidParameter("degree distribution needs k >= 1");
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0))
      throw InvalidParameter("degree probability out of [0,1] at degree " + std::to_string(i + 1));
  }
  const double total = compensated_sum(probabilities);
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidParameter("degree probabilities sum to " + std::to_string(total));
  return DegreeDistribution(std::move(probabilities));
}

double DegreeDistribution::probability(std::size_t degree) const {
  if (degree == 0 || degree > k())
    return 0.0;
  return probabilities_[degree - 1];
}

double DegreeDistribution::mean_degree() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probabilities_.size(); ++i)
    m += static_cast<double>(i + 1) * probabilities_[i];
  return m;
}

std::uint32_t DegreeDistribution::sample(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end())
    --it;
  // Skip zero-probability degrees that share a CDF value with their predecessor.
  auto idx = static_cast<std::size_t>(it - cdf_.begin());
  while (idx + 1 < probabilities_.size() && probabilities_[idx] == 0.0)
    ++idx;
  return static_cast<std::uint32_t>(idx + 1);
}

DegreeDistribution ideal_soliton(std::size_t k) {
  if (k == 0)
    throw InvalidParameter("ideal soliton needs k >= 1");
  auto w = ideal_soliton_weights(k);
  const double total = compensated_sum(w);
  for (double &p : w)
    p /= total;
  return DegreeDistribution::from_probabilities(std::move(w));
}

std::size_t robust_soliton_spike(std::size_t k, double c, double delta) {
  const auto kd = static_cast<double>(k);
  const double s = c * std::log(kd / delta) * std::sqrt(kd);
  if (!(s > 0.0))
    return k;
  const auto spike = static_cast<std::size_t>(std::llround(kd / s));
  return std::clamp<std::size_t>(spike, 1, k);
}

DegreeDistribution robust_soliton(std::size_t k, double c, double delta) {
  if (k == 0)
    throw InvalidParameter("robust soliton needs k >= 1");
  if (!(c > 0.0))
    throw InvalidParameter("robust soliton needs c > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidParameter("robust soliton needs delta in (0,1)");
  if (k == 1)
    return DegreeDistribution::from_probabilities({1.0});

  const auto kd = static_cast<double>(k);
  const double s = c * std::log(kd / delta) * std::sqrt(kd);
  auto w = ideal_soliton_weights(k);
  if (s > 0.0) {
    // k/S beyond k means no spike: every degree gets the S/(ik) term.
    const auto raw = static_cast<std::size_t>(std::max<long long>(1, std::llround(kd / s)));
    for (std::size_t i = 1; i < std::min(raw, k + 1); ++i)
      w[i - 1] += s / (static_cast<double>(i) * kd);
    if (raw <= k)
      w[raw - 1] += std::max(0.0, s * std::log(s / delta) / kd);
  }
  const double beta = compensated_sum(w);
  for (double &p : w)
    p /= beta;
  return DegreeDistribution::from_probabilities(std::move(w));
}

} // namespace infocast::fountain
