#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace infocast::analytics {

inline constexpr double euler_gamma = 0.5772156649015329;

struct ContactEstimate {
  double exact = 0.0;
  double approx = 0.0;
  double rel_err() const;
};

/// Expected contacts to collect all N uncoded packets when each contact
/// hands over a uniformly random one: N * H_N, approximated by N ln N + gamma N.
ContactEstimate expected_contacts_uncoded(std::size_t n);

/// Expected contacts to collect any N of N(1+r) coded packets:
///   sum_{i=0}^{N-1} N(1+r) / (N(1+r) - i),  approximated by N(1+r) ln(1 + 1/r).
/// The sum runs over the N collection steps (one term per step).
ContactEstimate expected_contacts_erasure(std::size_t n, double redundancy);

struct FormulaRow {
  std::string formula;
  std::vector<std::pair<std::string, double>> inputs;
  double exact = 0.0;
  double approx = 0.0;
};

/// `formula,inputs...,exact,approx,rel_err`; inputs are written as name=value.
void write_formula_csv(std::ostream &os, const std::vector<FormulaRow> &rows);

} // namespace infocast::analytics
