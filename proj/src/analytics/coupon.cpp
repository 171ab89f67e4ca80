#include "infocast/analytics/coupon.hpp"

#include "infocast/errors.hpp"

#include <cmath>
#include <ostream>

namespace infocast::analytics {

double ContactEstimate::rel_err() const { return std::abs(approx - exact) / std::abs(exact); }

ContactEstimate expected_contacts_uncoded(std::size_t n) {
  if (n == 0)
    throw InvalidParameter("uncoded collection needs N >= 1");
  const auto nd = static_cast<double>(n);
  double harmonic = 0.0;
  for (std::size_t i = n; i >= 1; --i) // small terms first
    harmonic += 1.0 / static_cast<double>(i);
  return {nd * harmonic, nd * std::log(nd) + euler_gamma * nd};
}

ContactEstimate expected_contacts_erasure(std::size_t n, double redundancy) {
  if (n == 0)
    throw InvalidParameter("erasure collection needs N >= 1");
  if (!(redundancy > 0.0))
    throw InvalidParameter("redundancy r must be > 0");
  const auto nd = static_cast<double>(n);
  const double pool = nd * (1.0 + redundancy);
  double exact = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    exact += pool / (pool - static_cast<double>(i));
  return {exact, pool * std::log1p(1.0 / redundancy)};
}

void write_formula_csv(std::ostream &os, const std::vector<FormulaRow> &rows) {
  os << "formula,inputs,exact,approx,rel_err\n";
  for (const auto &r : rows) {
    os << r.formula << ',';
    for (std::size_t i = 0; i < r.inputs.size(); ++i)
      os << (i ? ";" : "") << r.inputs[i].first << '=' << r.inputs[i].second;
    os << ',' << r.exact << ',' << r.approx << ',' << std::abs(r.approx - r.exact) / std::abs(r.exact) << '\n';
  }
}

} // namespace infocast::analytics
