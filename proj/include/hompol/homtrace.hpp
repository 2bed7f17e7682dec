#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hompol/biphoton.hpp"
#include "hompol/error.hpp"
#include "hompol/polarization.hpp"

namespace hompol {

/// Scalar indistinguishability of the pair as a function of the injection delay.
struct DelayModel {
  double source_visibility = 1.0;
  double coherence_time_sigma = 300.0; // fs

  void validate() const {
    if (!(source_visibility >= 0.0 && source_visibility <= 1.0))
      throw InputError("source_visibility must lie in [0, 1]");
    if (!(coherence_time_sigma > 0.0) || !std::isfinite(coherence_time_sigma))
      throw InputError("coherence_time_sigma must be finite and > 0");
  }
};

/// source_visibility * exp(-tau^2 / (2 sigma^2)).
inline double overlap(double tau_fs, const DelayModel& model) {
  const double x = tau_fs / model.coherence_time_sigma;
  return model.source_visibility * std::exp(-0.5 * x * x);
}

struct TracePoint {
  double tau_fs;
  double normalized_coincidence;
};

using HomTrace = std::vector<TracePoint>;

/// Coincidence rate versus delay, normalized to the distinguishable baseline.
inline HomTrace hom_trace(const CouplerParams& params, BasisAngle angle, const DelayModel& model,
                          std::span<const double> tau_grid) {
  model.validate();
  const CoincidenceResult r = predict_visibility(params, angle, params.length_z);
  HomTrace trace;
  trace.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    const double rate = r.c_dis + overlap(tau, model) * (r.c_ind - r.c_dis);
    trace.push_back({tau, rate / r.c_dis});
  }
  return trace;
}

} // namespace hompol
