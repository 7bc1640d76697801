#pragma once

#include <array>

#include "hyperchip/optics.hpp"
#include "hyperchip/wavepacket.hpp"

namespace hyperchip {

/// Total transmission (fiber array x chip x collection) of each input mode,
/// indexed [arm][slot] with slot 0 = ell, 1 = r.
using EfficiencyTable = SlotTransmission;

EfficiencyTable unit_efficiencies();
/// Tabulated totals: ell_A 22 %, r_A 23 %, ell_B 13 %, r_B 18 %.
EfficiencyTable measured_efficiencies();

Real efficiency(const EfficiencyTable& table, Arm arm, Spatial input_mode);

/// Everything the source and the surrounding optics need to emit a state.
struct SourceConfig {
  Real theta = 0.0;  // polarization phase (rad)
  Real phi = 0.0;    // path phase (rad)

  /// Weight of white noise mixed into the polarization factor.
  Real pol_depolarization = 0.0;
  /// Weight of uncorrelated cross-polarized pairs, |HV> and |VH> in equal
  /// parts, mixed into the polarization factor.
  Real pol_cross_fraction = 0.0;
  /// Factor on the off-diagonal path coherence.
  Real path_visibility = 1.0;

  WavepacketConfig wavepacket;
  /// Amplitude overlap of the two inputs of BS_A / BS_B at zero delay
  /// (residual spectral and spatial mismatch).
  Real mode_overlap_A = 1.0;
  Real mode_overlap_B = 1.0;

  /// Retardance error of the zero-order HWP that turns the source into the
  /// cluster state (rad).
  Real cluster_hwp_retardance_error = 0.0;

  EfficiencyTable efficiencies = unit_efficiencies();

  /// Emitted pairs per second. Not published; fixes only absolute rates.
  Real pair_rate_hz = 2600.0;
  Real accidental_rate_hz = 0.0;

  /// Throws PhysicsError on out-of-range parameters.
  void validate() const;

  /// Noise-free source with lossless optics and no background.
  static SourceConfig ideal();
  /// Noise parameters calibrated against the reported visibilities,
  /// tomographies and stabilizer values.
  static SourceConfig calibrated();
};

/// Per-mode polarization unitaries in front of the chip, ordered
/// (ell_A, r_A, ell_B, r_B).
struct CompensationSetting {
  std::array<Matrix2c, 4> jones{Matrix2c::Identity(), Matrix2c::Identity(),
                                Matrix2c::Identity(), Matrix2c::Identity()};

  static CompensationSetting identity();
  /// H <-> V on both arm-B modes, identity on arm A.
  static CompensationSetting swap_arm_b();
  /// H <-> V on r_A and r_B: one photon of each correlated pair is flipped,
  /// which puts the polarization phase onto the path superposition.
  static CompensationSetting swap_r_modes();

  /// Setting that undoes the given per-mode unitaries.
  static CompensationSetting inverse_of(const std::array<Matrix2c, 4>& disturbance);
};

/// 1/2 (|H_A H_B> + e^{i theta}|V_A V_B>) (x) (|r_A ell_B> + e^{i phi}|ell_A r_B>)
/// with depolarizing noise on the polarization factor and dephasing on the
/// path factor. The photon travelling on ell_A carries the delayed wavepacket.
MixedState emit_hyperentangled(const SourceConfig& cfg);

/// Path-only variant: polarization fixed to |H_A H_B>.
MixedState emit_path_entangled(const SourceConfig& cfg);

/// Hyperentangled state with theta = pi and a zero-degree HWP on r_A:
/// (|Phi+>|r_A ell_B> + |Phi->|ell_A r_B>)/sqrt2 for the ideal source.
MixedState emit_cluster(const SourceConfig& cfg);

/// One H photon in each input of the chosen splitter; the ell photon carries
/// the delay.
MixedState emit_hom_pair(const SourceConfig& cfg, Arm arm);

/// Throws PhysicsError if a Jones matrix is not unitary or the state is not in
/// front of the chip.
MixedState apply_compensation(const MixedState& state, const CompensationSetting& setting);

}  // namespace hyperchip
