#pragma once

#include <array>
#include <optional>

#include "hyperchip/two_photon_state.hpp"

namespace hyperchip {

enum class ArmScope : std::uint8_t { A, B, both };

/// Linear-optical element acting on the (spatial x polarization) modes of one
/// arm, or of both arms at once. Temporal labels pass through untouched.
///
/// Basis of `matrix()`: index = slot * 2 + pol for a single arm, and
/// (arm * 2 + slot) * 2 + pol when the scope is `both`. The element maps
/// modes of stage `input_stage()` onto modes of `output_stage()`.
class ModeUnitary {
 public:
  ModeUnitary(ArmScope scope, MatrixXc matrix, Stage input, Stage output);

  ArmScope scope() const { return scope_; }
  const MatrixXc& matrix() const { return matrix_; }
  Stage input_stage() const { return input_; }
  Stage output_stage() const { return output_; }

  /// Embedding into the full 16-mode single-photon space (identity on the
  /// arm outside the scope and on temporal labels).
  Matrix16cSym embedded() const;

  /// Element applied after `first` (matrix product this * first).
  ModeUnitary after(const ModeUnitary& first) const;

 private:
  ArmScope scope_;
  MatrixXc matrix_;
  Stage input_;
  Stage output_;
};

/// Balanced chip beam splitter, real Hadamard convention:
/// |ell> -> (|ell'> + |r'>)/sqrt2, |r> -> (|ell'> - |r'>)/sqrt2.
ModeUnitary beam_splitter(Arm arm);

/// Both beam splitters of the chip as one element.
ModeUnitary chip();

/// Block-diagonal element acting with `a` on arm A and `b` on arm B. Both
/// must be single-arm elements with matching stages.
ModeUnitary combine(const ModeUnitary& a, const ModeUnitary& b);

enum class WaveplateKind : std::uint8_t { HWP, QWP };

/// Jones matrix of a linear retarder with fast axis at `angle` from H.
Matrix2c retarder_jones(Real retardance, Real angle);

/// Waveplate on one spatial mode's polarization. `retardance_error` is added
/// to the nominal pi (HWP) or pi/2 (QWP) retardance. HWP(0) = diag(1, -1).
ModeUnitary waveplate(WaveplateKind kind, Real angle, Spatial mode, Arm arm,
                      Real retardance_error = 0.0);

/// Arbitrary Jones unitary on one spatial mode.
ModeUnitary polarization_element(const Matrix2c& jones, Spatial mode, Arm arm);

/// Multiplies both polarizations of one spatial mode by exp(i phase).
ModeUnitary phase_plate(Spatial mode, Arm arm, Real phase);

ModeUnitary identity_element(ArmScope scope, Stage stage);

/// Second-quantized evolution S -> U S U^T. Throws PhysicsError when the
/// element's input stage differs from the state's, or when a stage-changing
/// single-arm element would leave the other (occupied) arm behind.
TwoPhotonState apply(const TwoPhotonState& state, const ModeUnitary& u);
MixedState apply(const MixedState& state, const ModeUnitary& u);

/// Per-mode amplitude transmission filter, keyed by (arm, slot).
using SlotTransmission = std::array<std::array<Real, 2>, 2>;

struct LossyResult {
  MixedState state;    // renormalized, conditioned on both photons surviving
  Real survival = 1.0; // probability that both photons survive
};

/// Applies intensity transmissions `eta[arm][slot]` mode by mode and
/// post-selects on both photons surviving.
LossyResult attenuate(const MixedState& state, const SlotTransmission& eta);

}  // namespace hyperchip
