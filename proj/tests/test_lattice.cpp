#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "hompol/lattice.hpp"

using namespace hompol;

namespace {

// Independent propagation oracle: exp(-i H z) by scaling-and-squaring of a
// truncated Taylor series, no eigendecomposition involved.
Eigen::MatrixXcd taylor_expm(const Eigen::MatrixXd& h, double z) {
  const Eigen::MatrixXcd a = std::complex<double>(0.0, -z) * h.cast<std::complex<double>>();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Eigen::MatrixXcd scaled = a / std::pow(2.0, squarings);
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
  Eigen::MatrixXcd term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

LatticeGeometry device() { return LatticeGeometry{}; }

double survival(const LatticeGeometry& g, Polarization pol, double z) {
  const LatticePropagator prop(build_hamiltonian(g, pol));
  return std::norm(prop(target_excitation(g), z)(g.target_index()));
}

} // namespace

TEST(BuildHamiltonian, SmallestTwoSided) {
  LatticeGeometry g{1, 0.154, 0.065, 0.9, 0.9, true};
  const auto h = build_hamiltonian(g, Polarization::H);
  ASSERT_EQ(h.rows(), 3);
  EXPECT_EQ(h(0, 1), 0.154);
  EXPECT_EQ(h(1, 2), 0.154);
  EXPECT_EQ(h(0, 2), 0.0);
  EXPECT_EQ(h.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(h.isApprox(h.transpose()));
}

TEST(BuildHamiltonian, DeviceGeometryIsTridiagonal) {
  const auto g = device();
  const auto h = build_hamiltonian(g, Polarization::H);
  ASSERT_EQ(h.rows(), 81);
  EXPECT_EQ(g.target_index(), 40);
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (std::abs(i - j) > 1) EXPECT_EQ(h(i, j), 0.0);
  EXPECT_EQ(h(39, 40), 0.154);
  EXPECT_EQ(h(40, 41), 0.154);
  EXPECT_EQ(h(0, 1), 0.551);
  EXPECT_EQ(h(79, 80), 0.551);
  EXPECT_EQ(build_hamiltonian(g, Polarization::V)(40, 41), 0.065);
  EXPECT_EQ(build_hamiltonian(g, Polarization::V)(10, 11), 0.335);
}

TEST(BuildHamiltonian, OneSided) {
  LatticeGeometry g{5, 0.2, 0.1, 0.6, 0.3, false};
  const auto h = build_hamiltonian(g, Polarization::V);
  ASSERT_EQ(h.rows(), 6);
  EXPECT_EQ(g.target_index(), 0);
  EXPECT_EQ(h(0, 1), 0.1);
  EXPECT_EQ(h(1, 2), 0.3);
}

TEST(BuildHamiltonian, DecoupledTargetNeverDecays) {
  LatticeGeometry g = device();
  g.couple_target_h = 0.0;
  const auto h = build_hamiltonian(g, Polarization::H);
  EXPECT_EQ(h.row(g.target_index()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(survival(g, Polarization::H, 15.0), 1.0, 1e-12);
}

TEST(BuildHamiltonian, InvalidGeometry) {
  LatticeGeometry g = device();
  g.n_sinks_per_side = 0;
  EXPECT_THROW(build_hamiltonian(g, Polarization::H), InputError);
  g = device();
  g.couple_array_v = -0.1;
  EXPECT_THROW(build_hamiltonian(g, Polarization::V), InputError);
}

TEST(PropagateLattice, ZeroLengthReturnsInitial) {
  const auto g = device();
  const auto h = build_hamiltonian(g, Polarization::H);
  LatticeState psi = LatticeState::Zero(h.rows());
  psi(3) = {0.6, 0.0};
  psi(40) = {0.0, 0.8};
  EXPECT_LT((propagate_lattice(h, psi, 0.0) - psi).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PropagateLattice, TwoSiteRabiOscillation) {
  const double c = 0.3;
  Eigen::MatrixXd h(2, 2);
  h << 0.0, c, c, 0.0;
  LatticeState psi = LatticeState::Zero(2);
  psi(0) = 1.0;
  for (double z = 0.0; z <= 20.0; z += 0.1)
    EXPECT_NEAR(std::norm(propagate_lattice(h, psi, z)(0)), std::pow(std::cos(c * z), 2), 1e-13) << "z=" << z;
}

TEST(PropagateLattice, MatchesTaylorOracle) {
  for (const auto pol : {Polarization::H, Polarization::V}) {
    const auto g = device();
    const auto h = build_hamiltonian(g, pol);
    const auto psi0 = target_excitation(g);
    for (double z : {0.5, 3.0, 9.0, 15.0}) {
      const LatticeState fast = propagate_lattice(h, psi0, z);
      const LatticeState slow = taylor_expm(h, z) * psi0;
      const auto t = g.target_index();
      EXPECT_LE(std::abs(fast(t) - slow(t)), 1e-9 * std::abs(slow(t))) << "z=" << z;
      EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-11);
    }
  }
}

TEST(PropagateLattice, DimensionMismatch) {
  const auto h = build_hamiltonian(device(), Polarization::H);
  EXPECT_THROW(propagate_lattice(h, LatticeState::Zero(5), 1.0), InputError);
  EXPECT_THROW(propagate_lattice(Eigen::MatrixXd::Zero(2, 3), LatticeState::Zero(2), 1.0), InputError);
  EXPECT_THROW(propagate_lattice(h, target_excitation(device()), -1.0), InputError);
}

// Frozen with an independent dense expm (scipy.linalg.expm) on the same 81-site geometry.
TEST(PropagateLattice, DeviceVerticalSurvival) {
  const double p = survival(device(), Polarization::V, 15.0);
  EXPECT_NEAR(p, 0.4936019472294117, 1e-9);
  EXPECT_GE(p, 0.43);
  EXPECT_LE(p, 0.53);
  // Two-sided golden rule 2 C^2 / kappa as a coarse cross-check.
  EXPECT_NEAR(p, std::exp(-2.0 * (2.0 * 0.065 * 0.065 / 0.335) * 15.0), 0.03);
}

TEST(DecayCurve, DecoupledTargetIsFlat) {
  LatticeGeometry g = device();
  g.couple_target_v = 0.0;
  for (const auto& pt : decay_curve(g, Polarization::V, 15.0, 31)) EXPECT_NEAR(pt.survival, 1.0, 1e-12);
}

TEST(DecayCurve, DeviceHorizontalEndpoint) {
  const auto curve = decay_curve(device(), Polarization::H, 15.0, 151);
  ASSERT_EQ(curve.size(), 151u);
  EXPECT_EQ(curve.front().z_cm, 0.0);
  EXPECT_NEAR(curve.front().survival, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(curve.back().z_cm, 15.0);
  // Frozen from scipy.linalg.expm; the measured transmission is 0.045.
  EXPECT_NEAR(curve.back().survival, 0.07183141615337807, 1e-9);
  for (const auto& pt : curve) {
    EXPECT_GE(pt.survival, 0.0);
    EXPECT_LE(pt.survival, 1.0 + 1e-12);
  }
}

TEST(DecayCurve, QuadraticOnset) {
  // (1 - P)/z^2 -> 2 C^2 for a target coupled to two neighbours.
  const auto g = device();
  const double c = g.couple_target_h;
  double prev_ratio = 0.0;
  for (double z : {1e-1, 1e-2, 1e-3}) {
    const double ratio = (1.0 - survival(g, Polarization::H, z)) / (z * z);
    EXPECT_NEAR(ratio, 2.0 * c * c, 2.0 * c * c * 0.02) << "z=" << z;
    prev_ratio = ratio;
  }
  EXPECT_NEAR(prev_ratio, 2.0 * c * c, 1e-4);
}

TEST(DecayCurve, InvalidArguments) {
  EXPECT_THROW(decay_curve(device(), Polarization::H, 0.0, 10), InputError);
  EXPECT_THROW(decay_curve(device(), Polarization::H, 1.0, 1), InputError);
}

TEST(EffectiveRate, DeviceTransmissions) {
  EXPECT_NEAR(effective_rate(0.045, 15.0), 0.1035, 0.1035 * 0.005);
  EXPECT_NEAR(effective_rate(0.483, 15.0), 0.02426, 1e-5);
  EXPECT_EQ(effective_rate(1.0, 3.0), 0.0);
}

TEST(EffectiveRate, RoundTripsExponential) {
  for (double g : {0.0, 0.01, 0.1035, 0.5})
    EXPECT_NEAR(effective_rate(std::exp(-2.0 * g * 15.0), 15.0), g, 1e-14);
}

TEST(EffectiveRate, InvalidTransmission) {
  EXPECT_THROW(effective_rate(0.0, 15.0), InputError);
  EXPECT_THROW(effective_rate(-0.1, 15.0), InputError);
  EXPECT_THROW(effective_rate(1.01, 15.0), InputError);
  EXPECT_THROW(effective_rate(0.5, 0.0), InputError);
}

TEST(LatticeProperty, NormConserved) {
  for (const auto pol : {Polarization::H, Polarization::V}) {
    const auto g = device();
    const LatticePropagator prop(build_hamiltonian(g, pol));
    for (double z = 0.0; z <= 15.0; z += 0.5)
      EXPECT_LT(std::abs(prop(target_excitation(g), z).squaredNorm() - 1.0), 1e-8);
  }
}

TEST(LatticeProperty, NoBoundaryReflectionAtDefaultSize) {
  for (const auto pol : {Polarization::H, Polarization::V}) {
    LatticeGeometry big = device();
    big.n_sinks_per_side = 80;
    EXPECT_LT(std::abs(survival(device(), pol, 15.0) - survival(big, pol, 15.0)), 1e-6);
  }
}

TEST(LatticeProperty, NonExponentialOnset) {
  for (const auto pol : {Polarization::H, Polarization::V}) {
    const auto g = device();
    const double h = 1e-6;
    auto slope = [&](double z) { return (survival(g, pol, z + h) - survival(g, pol, z - h)) / (2.0 * h); };
    EXPECT_LT(std::abs(slope(1e-3)), 1e-3 * std::abs(slope(2.0)));
  }
}

TEST(LatticeProperty, MonotoneLeakage) {
  for (const auto pol : {Polarization::H, Polarization::V}) {
    const auto curve = decay_curve(device(), pol, 15.0, 301);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i].survival, curve[i - 1].survival + 1e-10);
  }
}

TEST(LatticeProperty, MirrorSymmetry) {
  const auto g = device();
  const LatticePropagator prop(build_hamiltonian(g, Polarization::H));
  const auto psi = prop(target_excitation(g), 11.0);
  const auto t = g.target_index();
  for (Eigen::Index k = 1; k <= g.n_sinks_per_side; ++k)
    EXPECT_NEAR(std::abs(psi(t - k)), std::abs(psi(t + k)), 1e-12);
}
