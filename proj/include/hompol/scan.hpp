#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hompol/biphoton.hpp"
#include "hompol/error.hpp"
#include "hompol/homtrace.hpp"
#include "hompol/polarization.hpp"

namespace hompol {

/// Visibility over (theta, delta_beta * z). Undefined cells stay empty.
struct VisibilityGrid {
  std::vector<double> theta_axis;
  std::vector<double> phase_axis;
  std::vector<std::optional<double>> values; // row-major: theta outer, phase inner

  const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i * phase_axis.size() + j]; }
};

/// Copy of base with delta_beta chosen so that delta_beta * length_z = phase; mean beta is kept.
inline CouplerParams with_accumulated_phase(const CouplerParams& base, double phase) {
  if (!(base.length_z > 0.0)) throw InputError("length_z must be > 0 to realize a birefringent phase");
  const double mean = base.mean_beta();
  const double db = phase / base.length_z;
  CouplerParams p = base;
  p.beta_h = mean - db;
  p.beta_v = mean + db;
  return p;
}

/// visibility_scale multiplies every defined cell (1 = perfect source, the default).
inline VisibilityGrid visibility_grid(const CouplerParams& base, std::span<const double> theta_axis,
                                      std::span<const double> phase_axis, double visibility_scale = 1.0) {
  if (theta_axis.empty() || phase_axis.empty()) throw InputError("scan axes must be non-empty");
  base.validate();
  VisibilityGrid grid{{theta_axis.begin(), theta_axis.end()}, {phase_axis.begin(), phase_axis.end()}, {}};
  grid.values.reserve(theta_axis.size() * phase_axis.size());

  std::vector<CouplerParams> per_phase;
  per_phase.reserve(phase_axis.size());
  for (double phase : phase_axis) per_phase.push_back(with_accumulated_phase(base, phase));

  for (double theta : theta_axis) {
    for (const auto& p : per_phase) {
      try {
        grid.values.emplace_back(visibility_scale * predict_visibility(p, {theta}, p.length_z).visibility);
      } catch (const UndefinedVisibility&) {
        grid.values.emplace_back(std::nullopt);
      }
    }
  }
  return grid;
}

/// One HOM trace per basis angle on a shared delay grid.
inline std::vector<HomTrace> hom_family(const CouplerParams& params, std::span<const BasisAngle> thetas,
                                        const DelayModel& model, std::span<const double> tau_grid) {
  std::vector<HomTrace> family;
  family.reserve(thetas.size());
  for (const auto& t : thetas) family.push_back(hom_trace(params, t, model, tau_grid));
  return family;
}

} // namespace hompol
