#pragma once

#include <vector>

#include "hompol/error.hpp"

namespace hompol {

/// n points spanning [first, last] inclusively.
inline std::vector<double> linspace(double first, double last, int n) {
  if (n < 1) throw InputError("grid needs at least one point");
  if (n == 1) return {first};
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = (last - first) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = first + step * static_cast<double>(i);
  out.back() = last;
  return out;
}

} // namespace hompol
