#pragma once

#include <cmath>
#include <concepts>

namespace hompol {

struct ScalarMinimum {
  double argmin;
  double value;
};

/// Golden-section search for the minimum of a unimodal f on [a, b].
template <std::invocable<double> F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol = 1e-14, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

} // namespace hompol
