#pragma once

#include <string>
#include <vector>

#include "hyperchip/counts.hpp"

namespace hyperchip {

/// Two-qubit polarization density matrix, basis order {HH, HV, VH, VV}.
class DensityMatrix2Q {
 public:
  DensityMatrix2Q() : rho_(Matrix4c::Identity() / 4.0) {}
  /// Throws PhysicsError unless Hermitian and unit-trace within 1e-10.
  explicit DensityMatrix2Q(const Matrix4c& rho);

  const Matrix4c& matrix() const { return rho_; }
  Real min_eigenvalue() const;

  static DensityMatrix2Q pure(const Vector4c& psi);

 private:
  Matrix4c rho_;
};

enum class BellState : std::uint8_t { phi_plus, phi_minus, psi_plus, psi_minus };

Vector4c bell_state(BellState which);

/// Correlated path pair the tomography post-selects on.
enum class PathPair : std::uint8_t { rA_ellB, ellA_rB };

/// Single-photon analyzer settings.
enum class Analyzer : char { H = 'H', V = 'V', D = 'D', A = 'A', R = 'R', L = 'L' };

Eigen::Vector3d analyzer_direction(Analyzer a);

struct TomographySetting {
  Analyzer first;   // photon A
  Analyzer second;  // photon B
  PathPair pair = PathPair::rA_ellB;
};

/// The usual 16 two-photon projections
/// (HH HV VV VH RH RV DV DH DR DD RD HD VD VL HL RL).
std::vector<TomographySetting> standard_settings(PathPair pair);
/// All 36 combinations of {H, V, D, A, R, L}.
std::vector<TomographySetting> overcomplete_settings(PathPair pair);

/// Counts for each setting: detectors tag the input modes of the selected
/// pair and analyze the polarization. Efficiencies and accidentals come from
/// `cfg`. With `sample == false` the expected counts are used.
std::vector<ExperimentRecord> simulate_counts(const MixedState& state,
                                              const std::vector<TomographySetting>& settings,
                                              Real shots_per_setting, const SourceConfig& cfg,
                                              std::uint64_t seed, bool sample = true);

/// Counts from an arbitrary two-qubit density matrix with no loss or
/// background, for reconstruction checks.
std::vector<ExperimentRecord> simulate_counts(const Matrix4c& rho,
                                              const std::vector<TomographySetting>& settings,
                                              Real shots_per_setting, std::uint64_t seed,
                                              bool sample = true);

struct Reconstruction {
  DensityMatrix2Q rho;
  Matrix4c linear_estimate;
  int iterations = 0;
  Real gradient_norm = 0.0;
  Real neg_log_likelihood = 0.0;
  bool converged = false;
  std::string diagnostics;
};

struct MleOptions {
  Real gradient_tolerance = 1e-8;
  int max_iterations = 100000;
};

/// Linear inversion of the Born-rule system in the Pauli basis.
/// Throws PhysicsError when the settings do not span all 16 parameters.
Matrix4c linear_inversion(const std::vector<ExperimentRecord>& records);

/// Linear inversion followed by Poisson maximum likelihood over rho = T T^dag
/// with T lower triangular (BFGS). Non-convergence is reported in the
/// result, not thrown.
Reconstruction reconstruct(const std::vector<ExperimentRecord>& records,
                           const MleOptions& options = {});

template <typename Scalar>
Scalar fidelity(const Mat4<Scalar>& rho, const Vec4<Scalar>& target) {
  const Vec4<Scalar> t = target.normalized();
  return std::clamp((t.adjoint() * rho * t)(0, 0).real(), Scalar(0), Scalar(1));
}

inline Real fidelity(const DensityMatrix2Q& rho, const Vector4c& target) {
  return fidelity<Real>(rho.matrix(), target);
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square
/// roots of the eigenvalues of rho (Y x Y) rho^* (Y x Y).
template <typename Scalar>
Scalar concurrence(const Mat4<Scalar>& rho) {
  const Mat4<Scalar> yy = kron(pauli::y<Scalar>(), pauli::y<Scalar>());
  const Mat4<Scalar> tilde = yy * rho.conjugate() * yy;
  // sqrt(rho) tilde sqrt(rho) is Hermitian with the same spectrum.
  Eigen::SelfAdjointEigenSolver<Mat4<Scalar>> es(rho);
  const auto ev = es.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt();
  const Mat4<Scalar> sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const Mat4<Scalar> r = sq * tilde * sq;
  Eigen::SelfAdjointEigenSolver<Mat4<Scalar>> er(Mat4<Scalar>((r + r.adjoint()) / Scalar(2)));
  Eigen::Matrix<Scalar, 4, 1> l = er.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<Scalar>());
  return std::max(Scalar(0), l(0) - l(1) - l(2) - l(3));
}

inline Real concurrence(const DensityMatrix2Q& rho) { return concurrence<Real>(rho.matrix()); }

/// Trace distance 1/2 ||a - b||_1.
Real trace_distance(const Matrix4c& a, const Matrix4c& b);

/// Polarization state of a path pair, read off the four-qubit register.
Matrix4c branch_polarization(const MixedState& state, PathPair pair);

struct FigureWithError {
  Real value = 0.0;
  Real sigma = 0.0;
};

struct MonteCarloErrors {
  FigureWithError fidelity;
  FigureWithError concurrence;
};

/// Poisson-resamples every record's count, reconstructs each resample and
/// reports the sample standard deviations. Values are from the unperturbed
/// reconstruction. Throws PhysicsError for fewer than 100 resamples.
MonteCarloErrors monte_carlo_errors(const std::vector<ExperimentRecord>& records,
                                    const Vector4c& target, int n_resamples, std::uint64_t seed,
                                    unsigned threads = 1);

}  // namespace hyperchip
