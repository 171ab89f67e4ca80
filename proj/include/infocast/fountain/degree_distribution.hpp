#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace infocast::fountain {

/// Probability law over encoded-packet degrees 1..k.
///
/// probabilities()[i] is the probability of degree i+1. Construction
/// validates that the entries lie in [0,1] and sum to 1 within 1e-12, and
/// precomputes a CDF so that sampling is a binary search.
class DegreeDistribution {
public:
  static DegreeDistribution from_probabilities(std::vector<double> probabilities);

  std::size_t k() const { return probabilities_.size(); }
  std::span<const double> probabilities() const { return probabilities_; }
  double probability(std::size_t degree) const;
  double mean_degree() const;

  /// Maps u in [0,1) to a degree in [1,k].
  std::uint32_t sample(double u) const;

private:
  explicit DegreeDistribution(std::vector<double> probabilities);

  std::vector<double> probabilities_;
  std::vector<double> cdf_;
};

DegreeDistribution ideal_soliton(std::size_t k);

/// Luby's robust soliton: ideal soliton plus the tau term with
/// S = c ln(k/delta) sqrt(k), renormalised.
DegreeDistribution robust_soliton(std::size_t k, double c, double delta);

/// Degree at which the robust soliton spike sits, round(k/S) clamped to [1,k].
std::size_t robust_soliton_spike(std::size_t k, double c, double delta);

inline constexpr double default_robust_c = 0.03;
inline constexpr double default_robust_delta = 0.5;

} // namespace infocast::fountain
