#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sstc {

/// Result of Benjamini-Hochberg selection.
struct BhOutcome {
  std::vector<double> sorted_p;       ///< ascending; ties keep input order
  std::vector<std::size_t> order;     ///< order[j] = input index of sorted_p[j]
  std::size_t L = 0;                  ///< largest passing rank (1-based), 0 if none
  std::vector<std::size_t> rejected;  ///< input indices with p <= p_(L), ascending

  friend bool operator==(const BhOutcome&, const BhOutcome&) = default;
};

/// Largest rank j with p_(j) <= q j / m (strict: p_(j) < q j / m); reject every
/// hypothesis with p <= p_(L).
/// Throws EmptyInput, InvalidP (p outside (0,1]) or InvalidQ (q outside (0,1)).
BhOutcome bh_select(std::span<const double> p_values, double q, bool strict = false);

}  // namespace sstc
