#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hompol/error.hpp"

namespace hompol {

enum class Polarization { H, V };

/// Target waveguide evanescently coupled to one or two semi-infinite sink chains.
///
/// Couplings in 1/cm. Defaults are the fabricated sample: 27.5 um target-to-array
/// separation and 20 um array pitch.
struct LatticeGeometry {
  int n_sinks_per_side = 40;
  double couple_target_h = 0.154;
  double couple_target_v = 0.065;
  double couple_array_h = 0.551;
  double couple_array_v = 0.335;
  bool two_sided = true;

  void validate() const {
    if (n_sinks_per_side < 1) throw InputError("n_sinks_per_side must be >= 1");
    for (double c : {couple_target_h, couple_target_v, couple_array_h, couple_array_v})
      if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("lattice couplings must be finite and >= 0");
  }

  Eigen::Index dimension() const { return two_sided ? 2 * n_sinks_per_side + 1 : n_sinks_per_side + 1; }

  /// Row of the target waveguide: centre of the chain when two-sided, first row otherwise.
  Eigen::Index target_index() const { return two_sided ? n_sinks_per_side : 0; }

  double target_coupling(Polarization p) const { return p == Polarization::H ? couple_target_h : couple_target_v; }
  double array_coupling(Polarization p) const { return p == Polarization::H ? couple_array_h : couple_array_v; }
};

/// Complex field amplitude per waveguide for one polarization.
using LatticeState = Eigen::VectorXcd;

/// Nearest-neighbour coupling matrix, zero on-site detuning. Sites are ordered
/// along the physical row so the matrix is tridiagonal.
inline Eigen::MatrixXd build_hamiltonian(const LatticeGeometry& geom, Polarization pol) {
  geom.validate();
  const Eigen::Index dim = geom.dimension();
  const Eigen::Index target = geom.target_index();
  const double c = geom.target_coupling(pol);
  const double kappa = geom.array_coupling(pol);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) {
    const bool touches_target = (i == target) || (i + 1 == target);
    h(i, i + 1) = h(i + 1, i) = touches_target ? c : kappa;
  }
  return h;
}

/// Solves i d(psi)/dz = H psi exactly through the spectral decomposition of H.
/// Decomposing once makes repeated evaluation along a z grid cheap.
class LatticePropagator {
public:
  explicit LatticePropagator(const Eigen::MatrixXd& hamiltonian) {
    if (hamiltonian.rows() != hamiltonian.cols()) throw InputError("lattice Hamiltonian must be square");
    if (hamiltonian.rows() == 0) throw InputError("lattice Hamiltonian is empty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) throw InputError("lattice Hamiltonian diagonalization failed");
    energies_ = solver.eigenvalues();
    modes_ = solver.eigenvectors();
  }

  Eigen::Index dimension() const { return energies_.size(); }

  LatticeState operator()(const LatticeState& initial, double z) const {
    if (initial.size() != dimension()) throw InputError("lattice state dimension does not match Hamiltonian");
    if (!(z >= 0.0)) throw InputError("propagation length must be >= 0");
    Eigen::VectorXcd coeffs = modes_.transpose().cast<std::complex<double>>() * initial;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::exp(std::complex<double>(0.0, -energies_(k) * z));
    return modes_.cast<std::complex<double>>() * coeffs;
  }

private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd modes_;
};

inline LatticeState propagate_lattice(const Eigen::MatrixXd& hamiltonian, const LatticeState& initial, double z) {
  return LatticePropagator(hamiltonian)(initial, z);
}

/// Unit excitation of the target waveguide.
inline LatticeState target_excitation(const LatticeGeometry& geom) {
  LatticeState s = LatticeState::Zero(geom.dimension());
  s(geom.target_index()) = 1.0;
  return s;
}

struct DecayPoint {
  double z_cm;
  double survival;
};

using DecayCurve = std::vector<DecayPoint>;

/// Target survival probability on n_samples uniformly spaced points of [0, z_max].
inline DecayCurve decay_curve(const LatticeGeometry& geom, Polarization pol, double z_max, int n_samples) {
  if (!(z_max > 0.0)) throw InputError("z_max must be > 0");
  if (n_samples < 2) throw InputError("decay curve needs at least 2 samples");
  const LatticePropagator prop(build_hamiltonian(geom, pol));
  const LatticeState initial = target_excitation(geom);
  const Eigen::Index target = geom.target_index();

  DecayCurve curve;
  curve.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double z = z_max * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    curve.push_back({z, std::norm(prop(initial, z)(target))});
  }
  return curve;
}

/// Endpoint-matched amplitude loss rate: transmission = exp(-2 * rate * z).
inline double effective_rate(double transmission, double z) {
  if (!(transmission > 0.0) || transmission > 1.0) throw InputError("transmission must lie in (0, 1]");
  if (!(z > 0.0)) throw InputError("propagation length must be > 0");
  return transmission == 1.0 ? 0.0 : -std::log(transmission) / (2.0 * z);
}

} // namespace hompol
