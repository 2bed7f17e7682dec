#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "hompol/error.hpp"

namespace hompol {

using cdouble = std::complex<double>;

/// 2x2 complex mode transformation in the H/V basis. Column j is the image of input mode j.
using JonesMatrix = Eigen::Matrix2cd;

/// Single-photon polarization amplitudes, H first.
struct PolarizationVector {
  cdouble amp_h{};
  cdouble amp_v{};

  double norm_squared() const { return std::norm(amp_h) + std::norm(amp_v); }

  Eigen::Vector2cd to_eigen() const { return {amp_h, amp_v}; }
  static PolarizationVector from_eigen(const Eigen::Vector2cd& v) { return {v(0), v(1)}; }

  friend PolarizationVector operator*(const JonesMatrix& m, const PolarizationVector& p) {
    return from_eigen(m * p.to_eigen());
  }
};

/// Inner product <a|b>.
inline cdouble inner(const PolarizationVector& a, const PolarizationVector& b) {
  return std::conj(a.amp_h) * b.amp_h + std::conj(a.amp_v) * b.amp_v;
}

/// Birefringent, polarization-dependent-loss waveguide.
///
/// Propagation constants in rad/cm, amplitude loss rates in 1/cm (intensity
/// decays as exp(-2*gamma*z)), length in cm.
struct CouplerParams {
  double beta_h = 0.0;
  double beta_v = 0.0;
  double gamma_h = 0.0;
  double gamma_v = 0.0;
  double length_z = 0.0;

  double mean_beta() const { return (beta_v + beta_h) / 2.0; }
  double delta_beta() const { return (beta_v - beta_h) / 2.0; }
  double mean_gamma() const { return (gamma_h + gamma_v) / 2.0; }
  double delta_gamma() const { return (gamma_h - gamma_v) / 2.0; }

  /// Accumulated birefringent phase delta_beta * length_z.
  double phase() const { return delta_beta() * length_z; }

  /// Throws InputError if a loss rate or the length is negative or non-finite.
  void validate() const {
    if (!(gamma_h >= 0.0) || !std::isfinite(gamma_h)) throw InputError("gamma_h must be finite and >= 0");
    if (!(gamma_v >= 0.0) || !std::isfinite(gamma_v)) throw InputError("gamma_v must be finite and >= 0");
    if (!(length_z >= 0.0) || !std::isfinite(length_z)) throw InputError("length_z must be finite and >= 0");
    if (!std::isfinite(beta_h) || !std::isfinite(beta_v)) throw InputError("propagation constants must be finite");
  }

  /// Coupler with zero mean propagation constant and the given phase delta_beta*z at length z.
  static CouplerParams with_phase(double gamma_h, double gamma_v, double phase, double length_z) {
    if (!(length_z > 0.0)) throw InputError("length_z must be > 0 to realize a birefringent phase");
    const double db = phase / length_z;
    return {-db, db, gamma_h, gamma_v, length_z};
  }
};

struct Decomposition {
  double mean_beta;
  double delta_beta;
  double mean_gamma;
  double delta_gamma;
};

inline Decomposition decompose(const CouplerParams& p) {
  return {p.mean_beta(), p.delta_beta(), p.mean_gamma(), p.delta_gamma()};
}

/// Observation-basis angle. theta = 0 is H/V, theta = pi/4 is A/D.
struct BasisAngle {
  double theta = 0.0;

  static BasisAngle from_degrees(double deg) { return {deg * std::numbers::pi / 180.0}; }
  double degrees() const { return theta * 180.0 / std::numbers::pi; }

  /// Representative in [0, pi/2); every observable is pi/2-periodic in theta.
  BasisAngle canonical() const {
    constexpr double period = std::numbers::pi / 2.0;
    double t = std::fmod(theta, period);
    if (t < 0.0) t += period;
    if (t >= period) t = 0.0;
    return {t};
  }
};

enum class Basis { H, V, D, A };

inline PolarizationVector basis_state(Basis b) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (b) {
  case Basis::H: return {1.0, 0.0};
  case Basis::V: return {0.0, 1.0};
  case Basis::D: return {r, r};  // (V + H)/sqrt2
  case Basis::A: return {-r, r}; // (V - H)/sqrt2
  }
  throw InputError("unknown basis");
}

inline PolarizationVector basis_state(std::string_view name) {
  if (name == "H") return basis_state(Basis::H);
  if (name == "V") return basis_state(Basis::V);
  if (name == "D") return basis_state(Basis::D);
  if (name == "A") return basis_state(Basis::A);
  throw InputError("unknown basis state '" + std::string(name) + "' (expected H, V, D or A)");
}

/// diag(exp(-i beta_h z - gamma_h z), exp(-i beta_v z - gamma_v z)).
inline JonesMatrix propagator(const CouplerParams& p, double z) {
  if (!(z >= 0.0)) throw InputError("propagation length must be >= 0");
  JonesMatrix m = JonesMatrix::Zero();
  m(0, 0) = std::exp(cdouble(-p.gamma_h * z, -p.beta_h * z));
  m(1, 1) = std::exp(cdouble(-p.gamma_v * z, -p.beta_v * z));
  return m;
}

/// Half-wave plate followed by a PBS: row 0 is detection channel 1, row 1 channel 2.
inline JonesMatrix hwp_matrix(BasisAngle angle) {
  const double c = std::cos(angle.theta);
  const double s = std::sin(angle.theta);
  JonesMatrix m;
  m << c, s, s, -c;
  return m;
}

} // namespace hompol
