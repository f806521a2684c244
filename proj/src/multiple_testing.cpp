#include "sstc/multiple_testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sstc/error.hpp"

namespace sstc {

BhOutcome bh_select(std::span<const double> p_values, double q, bool strict) {
  if (p_values.empty()) throw Error(ErrorCode::EmptyInput, "no p-values");
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::InvalidQ, "q must lie in (0,1)");
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const double p = p_values[i];
    if (!(p > 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidP, "p-value at index " + std::to_string(i) + " outside (0,1]");
    }
  }

  const std::size_t m = p_values.size();
  BhOutcome out;
  out.order.resize(m);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  out.sorted_p.reserve(m);
  for (const auto i : out.order) out.sorted_p.push_back(p_values[i]);

  for (std::size_t j = m; j >= 1; --j) {
    const double threshold = q * static_cast<double>(j) / static_cast<double>(m);
    const double p = out.sorted_p[j - 1];
    if (strict ? p < threshold : p <= threshold) {
      out.L = j;
      break;
    }
  }

  if (out.L > 0) {
    const double cut = out.sorted_p[out.L - 1];
    for (std::size_t i = 0; i < m; ++i) {
      if (p_values[i] <= cut) out.rejected.push_back(i);
    }
  }
  return out;
}

}  // namespace sstc
