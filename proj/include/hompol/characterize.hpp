#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <span>

#include "hompol/error.hpp"
#include "hompol/optimize.hpp"

namespace hompol {

/// Crossed-polarizer measurement at polarizer rotation phi: ratio = I_T / I_total.
struct PolarizerSample {
  double phi;
  double ratio;
};

/// Accumulated birefringent phase on the canonical branch [0, pi/2] and the RMS fit residual.
struct PhaseEstimate {
  double phase;
  double residual;
};

namespace detail {

// cos(pi * r), exact at every multiple of 1/2.
inline double cos_pi(double r) {
  r = std::fmod(std::abs(r), 2.0);
  if (r > 1.0) r = 2.0 - r;
  const bool flip = r > 0.5;
  if (flip) r = 1.0 - r;
  const double c = r == 0.5 ? 0.0 : std::cos(std::numbers::pi * r);
  return flip ? -c : c;
}

} // namespace detail

/// sin^2(2 phi) sin^2(phase). Angles are read as multiples of the double pi, so
/// multiples of pi/4 give exact rational intensities.
inline double crossed_polarizer_intensity(double phi, double phase) {
  constexpr double pi = std::numbers::pi;
  const double a = 0.5 * (1.0 - detail::cos_pi(4.0 * phi / pi));
  const double b = 0.5 * (1.0 - detail::cos_pi(2.0 * phase / pi));
  return a * b;
}

/// Representative in [0, pi/2] of the class {+-phase + k pi}, all of which give identical data.
inline double canonical_phase(double phase) {
  double p = std::fmod(phase, std::numbers::pi);
  if (p < 0.0) p += std::numbers::pi;
  if (p > std::numbers::pi / 2.0) p = std::numbers::pi - p;
  return p;
}

/// Least-squares fit of the crossed-polarizer model over phase in [0, pi/2]:
/// 181-point grid seed, then golden-section refinement around the best node.
inline PhaseEstimate estimate_phase(std::span<const PolarizerSample> samples) {
  if (samples.size() < 3) throw InputError("phase estimation needs at least 3 samples");
  std::set<double> distinct;
  double max_weight = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.phi) || !std::isfinite(s.ratio)) throw InputError("polarizer samples must be finite");
    if (s.ratio < 0.0 || s.ratio > 1.0) throw InputError("polarizer ratio must lie in [0, 1]");
    distinct.insert(s.phi);
    max_weight = std::max(max_weight, crossed_polarizer_intensity(s.phi, std::numbers::pi / 2.0));
  }
  if (distinct.size() < 3) throw InputError("phase estimation needs at least 3 distinct polarizer angles");
  if (max_weight < 1e-12) throw UnidentifiableError("all polarizer angles are multiples of pi/2; phase is unidentifiable");

  auto sse = [&](double phase) {
    double acc = 0.0;
    for (const auto& s : samples) {
      const double r = s.ratio - crossed_polarizer_intensity(s.phi, phase);
      acc += r * r;
    }
    return acc;
  };

  constexpr int grid_points = 181;
  const double upper = std::numbers::pi / 2.0;
  const double step = upper / (grid_points - 1);
  int best = 0;
  double best_value = sse(0.0);
  for (int i = 1; i < grid_points; ++i) {
    const double v = sse(step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  const double lo = std::max(0.0, step * (best - 1));
  const double hi = std::min(upper, step * (best + 1));
  ScalarMinimum m = golden_section_minimize(sse, lo, hi);
  if (best_value < m.value) m = {step * best, best_value};

  return {std::clamp(m.argmin, 0.0, upper), std::sqrt(m.value / static_cast<double>(samples.size()))};
}

} // namespace hompol
