#pragma once

#include <random>

#include "hyperchip/optics.hpp"

namespace testing {

using namespace hyperchip;

// Haar unitary: QR of a complex Ginibre matrix with the phase fix on R.
inline MatrixXc haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<Real> g;
  MatrixXc z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<MatrixXc> qr(z);
  MatrixXc q = qr.householderQ();
  const MatrixXc r = qr.matrixQR();
  for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

// Hilbert-Schmidt random density matrix (rank `rank`).
inline Matrix4c random_density(std::mt19937_64& rng, int rank = 4) {
  std::normal_distribution<Real> g;
  MatrixXc z(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) z(i, j) = Complex(g(rng), g(rng));
  Matrix4c rho = z * z.adjoint();
  return rho / rho.trace();
}

// 2x2 permanent, the whole oracle for two photons.
inline Complex perm2(Complex a, Complex b, Complex c, Complex d) { return a * d + b * c; }

// Full 16x16 single-photon map of an 8x8 (arm, slot, pol) unitary, built from
// the mode-index formula rather than ModeUnitary::embedded().
inline MatrixXc with_temporal(const MatrixXc& u8) {
  MatrixXc u = MatrixXc::Zero(16, 16);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int t = 0; t < kTemporalDim; ++t) u(a * kTemporalDim + t, b * kTemporalDim + t) = u8(a, b);
  return u;
}

// Output amplitude of the canonical pair {k, l} by the permanent formula
// perm(U[out, in]) / sqrt(prod n_out! prod n_in!).
inline Complex oracle_amplitude(const Amplitudes& in, const MatrixXc& u, int k, int l) {
  Complex total = 0.0;
  for (const auto& [pair, c] : in) {
    const int i = pair.first.index();
    const int j = pair.second.index();
    Real norm = 1.0;
    if (i == j) norm *= std::sqrt(2.0);
    if (k == l) norm *= std::sqrt(2.0);
    total += c * perm2(u(k, i), u(k, j), u(l, i), u(l, j)) / norm;
  }
  return total;
}

inline Amplitudes random_amplitudes(std::mt19937_64& rng) {
  std::normal_distribution<Real> g;
  std::uniform_int_distribution<int> pick(0, kModesPerStage - 1);
  Amplitudes a;
  const int terms = 1 + static_cast<int>(rng() % 6);
  for (int n = 0; n < terms; ++n) {
    const ModeLabel x = ModeLabel::from_index(Stage::pre_chip, pick(rng));
    const ModeLabel y = ModeLabel::from_index(Stage::pre_chip, pick(rng));
    a[{x, y}] += Complex(g(rng), g(rng));
  }
  return a;
}


// Largest deviation between apply() and the oracle over `trials` Haar
// unitaries on both arms (8 modes) and random two-photon inputs.
inline Real permanent_oracle_error(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Real worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const MatrixXc u8 = haar_unitary(8, rng);
    const ModeUnitary element(ArmScope::both, u8, Stage::pre_chip, Stage::post_chip);
    const TwoPhotonState in(Stage::pre_chip, random_amplitudes(rng));
    const TwoPhotonState out = apply(in, element);
    const MatrixXc u = with_temporal(u8);
    for (int k = 0; k < kModesPerStage; ++k)
      for (int l = k; l < kModesPerStage; ++l) {
        const ModeLabel a = ModeLabel::from_index(Stage::post_chip, k);
        const ModeLabel b = ModeLabel::from_index(Stage::post_chip, l);
        worst = std::max(worst, std::abs(out.amplitude(a, b) - oracle_amplitude(in.amplitudes(), u, k, l)));
      }
  }
  return worst;
}

}  // namespace testing
