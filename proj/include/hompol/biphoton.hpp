#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hompol/error.hpp"
#include "hompol/polarization.hpp"

namespace hompol {

/// Indistinguishable pair in the symmetric Fock basis {|2_H>, |1_H 1_V>, |2_V>}.
struct FockPair {
  cdouble two_h{};
  cdouble one_each{};
  cdouble two_v{};

  double norm_squared() const { return std::norm(two_h) + std::norm(one_each) + std::norm(two_v); }
};

/// Distinguishable pair: amp(i, j) is the amplitude of photon 1 in mode i and photon 2 in mode j.
struct LabelledPair {
  Eigen::Matrix2cd amp = Eigen::Matrix2cd::Zero();

  double norm_squared() const { return amp.squaredNorm(); }
};

using TwoPhotonState = std::variant<FockPair, LabelledPair>;

enum class PairMode { indistinguishable, distinguishable };

inline double norm_squared(const TwoPhotonState& state) {
  return std::visit([](const auto& s) { return s.norm_squared(); }, state);
}

/// One photon in A and one in D at the input facet.
///
/// The indistinguishable pair is the symmetrized |A,D> = (|2_V> - |2_H>)/sqrt2, the
/// distinguishable one the labelled product A (photon 1) x D (photon 2).
inline TwoPhotonState input_state(PairMode mode) {
  if (mode == PairMode::indistinguishable) {
    const double r = 1.0 / std::numbers::sqrt2;
    return FockPair{-r, 0.0, r};
  }
  const auto a = basis_state(Basis::A).to_eigen();
  const auto d = basis_state(Basis::D).to_eigen();
  return LabelledPair{a * d.transpose()};
}

/// Propagates both photons through the coupler. Every term picks up the
/// product of its two single-photon propagator phasors.
inline TwoPhotonState evolve(const TwoPhotonState& state, const CouplerParams& params, double z) {
  const JonesMatrix p = propagator(params, z);
  const cdouble th = p(0, 0);
  const cdouble tv = p(1, 1);
  if (const auto* f = std::get_if<FockPair>(&state))
    return FockPair{f->two_h * th * th, f->one_each * th * tv, f->two_v * tv * tv};

  Eigen::Matrix2cd amp = std::get<LabelledPair>(state).amp;
  const std::array<cdouble, 2> t{th, tv};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) amp(i, j) *= t[i] * t[j];
  return LabelledPair{amp};
}

/// Detection probabilities behind the HWP + PBS. Bunched events never count as coincidences.
struct DetectionOutcomes {
  double coincidence = 0.0;
  double both_channel_1 = 0.0;
  double both_channel_2 = 0.0;

  double total() const { return coincidence + both_channel_1 + both_channel_2; }
};

inline DetectionOutcomes detect(const TwoPhotonState& state, BasisAngle angle) {
  const double c = std::cos(angle.theta);
  const double s = std::sin(angle.theta);

  if (const auto* f = std::get_if<FockPair>(&state)) {
    // Substitute a_H^+ -> c b1^+ + s b2^+, a_V^+ -> s b1^+ - c b2^+ and collect monomials.
    const double r2 = std::numbers::sqrt2;
    const cdouble b1b1 = f->two_h * c * c / r2 + f->one_each * c * s + f->two_v * s * s / r2;
    const cdouble b2b2 = f->two_h * s * s / r2 - f->one_each * s * c + f->two_v * c * c / r2;
    const cdouble b1b2 = r2 * c * s * f->two_h + (s * s - c * c) * f->one_each - r2 * s * c * f->two_v;
    return {std::norm(b1b2), 2.0 * std::norm(b1b1), 2.0 * std::norm(b2b2)};
  }

  const Eigen::Matrix2cd m = hwp_matrix(angle);
  const Eigen::Matrix2cd out = m * std::get<LabelledPair>(state).amp * m.transpose();
  return {std::norm(out(0, 1)) + std::norm(out(1, 0)), std::norm(out(0, 0)), std::norm(out(1, 1))};
}

/// Probability of one photon in each PBS output channel.
inline double coincidence(const TwoPhotonState& state, BasisAngle angle) {
  return detect(state, angle).coincidence;
}

/// c_ind / c_dis - 1. A vanishing baseline is an error, a vanishing c_ind gives -1.
inline double visibility(double c_ind, double c_dis) {
  if (c_dis == 0.0) throw UndefinedVisibility();
  return c_ind / c_dis - 1.0;
}

struct CoincidenceResult {
  double theta_rad = 0.0;
  double c_ind = 0.0;
  double c_dis = 0.0;
  double visibility = 0.0;
};

struct CoincidenceRates {
  double c_ind = 0.0;
  double c_dis = 0.0;
};

/// Canonical A/D input, propagated over z, observed in basis theta.
/// Probabilities are relative to the injected pair (no renormalization for loss).
inline CoincidenceRates coincidence_rates(const CouplerParams& params, BasisAngle angle, double z) {
  params.validate();
  return {coincidence(evolve(input_state(PairMode::indistinguishable), params, z), angle),
          coincidence(evolve(input_state(PairMode::distinguishable), params, z), angle)};
}

/// Throws UndefinedVisibility when the distinguishable baseline vanishes.
inline CoincidenceResult predict_visibility(const CouplerParams& params, BasisAngle angle, double z) {
  const auto r = coincidence_rates(params, angle, z);
  return {angle.theta, r.c_ind, r.c_dis, visibility(r.c_ind, r.c_dis)};
}

/// Matrix permanent by direct expansion over permutations. Sizes here never exceed 2x2
/// in practice; larger inputs are accepted.
inline cdouble permanent(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw InputError("permanent requires a square matrix");
  const auto n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  cdouble sum = 0.0;
  do {
    cdouble term = 1.0;
    for (int i = 0; i < n; ++i) term *= a(i, perm[static_cast<std::size_t>(i)]);
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

namespace detail {

using Occupation = std::array<int, 2>;

// Fock basis order shared with FockPair.
inline constexpr std::array<Occupation, 3> two_photon_occupations{{{2, 0}, {1, 1}, {0, 2}}};

inline std::vector<int> expand_modes(const Occupation& occ) {
  std::vector<int> modes;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < occ[static_cast<std::size_t>(m)]; ++k) modes.push_back(m);
  return modes;
}

inline double factorial_product(const Occupation& occ) {
  double p = 1.0;
  for (int n : occ)
    for (int k = 2; k <= n; ++k) p *= k;
  return p;
}

} // namespace detail

/// Applies an arbitrary (possibly sub-unitary) 2x2 mode transformation to each photon.
///
/// Fock amplitudes: <t|U|s> = perm(U[t, s]) / sqrt(s! t!), with U[t, s] built by
/// repeating output rows and input columns according to the occupations.
/// Labelled amplitudes: (U x U) acting on the vectorized pair.
inline TwoPhotonState two_photon_transfer(const JonesMatrix& u, const TwoPhotonState& state) {
  if (const auto* f = std::get_if<FockPair>(&state)) {
    const std::array<cdouble, 3> in{f->two_h, f->one_each, f->two_v};
    std::array<cdouble, 3> out{};
    for (std::size_t ti = 0; ti < 3; ++ti) {
      const auto& t = detail::two_photon_occupations[ti];
      const auto rows = detail::expand_modes(t);
      for (std::size_t si = 0; si < 3; ++si) {
        const auto& s = detail::two_photon_occupations[si];
        const auto cols = detail::expand_modes(s);
        Eigen::MatrixXcd sub(2, 2);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) sub(r, c) = u(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
        const double norm = std::sqrt(detail::factorial_product(s) * detail::factorial_product(t));
        out[ti] += in[si] * permanent(sub) / norm;
      }
    }
    return FockPair{out[0], out[1], out[2]};
  }

  const Eigen::Matrix2cd& amp = std::get<LabelledPair>(state).amp;
  Eigen::Matrix4cd kron;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) kron(2 * i + k, 2 * j + l) = u(i, j) * u(k, l);
  Eigen::Vector4cd vec;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) vec(2 * i + k) = amp(i, k);
  const Eigen::Vector4cd res = kron * vec;
  Eigen::Matrix2cd out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out(i, k) = res(2 * i + k);
  return LabelledPair{out};
}

/// Coincidence probability read off a state already expressed in detector modes.
inline double coincidence_in_detector_modes(const TwoPhotonState& state) {
  if (const auto* f = std::get_if<FockPair>(&state)) return std::norm(f->one_each);
  const auto& amp = std::get<LabelledPair>(state).amp;
  return std::norm(amp(0, 1)) + std::norm(amp(1, 0));
}

} // namespace hompol
