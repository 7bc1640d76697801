#pragma once

#include <array>

#include "hyperchip/optics.hpp"

namespace hyperchip {

/// Qubits carried by the photon pair, in the internal order
/// (pi_A, k_A, pi_B, k_B): polarization then path, photon A then photon B.
/// Logical |0> is H for polarization and ell for path.
enum class Qubit : std::uint8_t { pol_A = 0, path_A = 1, pol_B = 2, path_B = 3 };

inline constexpr int kQubits = 4;
inline constexpr int kOutcomes = 16;

/// Orthonormal single-qubit measurement basis. Outcome 0 is `zero`
/// (eigenvalue +1), outcome 1 is its orthogonal complement.
struct LocalBasis {
  Vector2c zero;

  static LocalBasis z();
  static LocalBasis x();
  static LocalBasis y();
  /// Basis whose outcome-0 vector is `ket` (normalized).
  static LocalBasis from_ket(const Vector2c& ket);

  Vector2c one() const;
};

using LocalBases = std::array<LocalBasis, kQubits>;

/// Outcome index = sum_q bit_q << (3 - q), qubits in (pi_A, k_A, pi_B, k_B).
constexpr int outcome_bit(int outcome, Qubit q) {
  return (outcome >> (3 - static_cast<int>(q))) & 1;
}

/// Analysis stage after the source. Path qubits in the z basis are read by
/// tagging the input mode (the photon bypasses the splitter); equatorial path
/// bases are read with a phase plate on r followed by the chip splitter, with
/// outcome 0 on port ell'. Polarization is read by the analyzer in front of
/// each detector. Returns the unnormalized coincidence probability of each
/// joint outcome.
std::array<Real, kOutcomes> outcome_probabilities(const MixedState& source_state,
                                                  const LocalBases& bases);

/// Element routing a path qubit of `arm` to the detectors for `basis`.
ModeUnitary path_router(Arm arm, const LocalBasis& basis);

/// Pass-through used for tagging: ell -> ell', r -> r'.
ModeUnitary bypass(Arm arm);

/// 16x16 density matrix of the four qubits, temporal labels traced out.
/// Requires a pre-chip state with one photon in each arm.
Matrix16c qubit_density_matrix(const MixedState& state);

/// State vector of the four qubits for a pure pre-chip state whose temporal
/// labels are all tau_0.
Vector16c qubit_state_vector(const TwoPhotonState& state);

}  // namespace hyperchip
