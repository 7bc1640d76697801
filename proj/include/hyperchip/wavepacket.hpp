#pragma once

#include <utility>

#include "hyperchip/types.hpp"

namespace hyperchip {

enum class OverlapShape : std::uint8_t {
  gaussian,
  /// Gaussian times the main lobe of sinc(dx / sinc_width); zero past the
  /// first node so the overlap stays monotone in |dx|.
  gaussian_sinc,
};

/// Delays are optical path offsets in micrometres.
struct WavepacketConfig {
  Real delay_A_um = 0.0;
  Real delay_B_um = 0.0;
  Real coherence_sigma_um = 13.36;
  OverlapShape shape = OverlapShape::gaussian;
  Real sinc_width_um = 40.0;

  Real mismatch_um() const { return delay_A_um - delay_B_um; }
};

/// Amplitude overlap O(dx) in [0, 1] between the two wavepackets, with
/// dx = delay_A - delay_B. Throws PhysicsError for a non-positive sigma.
Real temporal_overlap(const WavepacketConfig& cfg);

/// Coefficients (O, sqrt(1 - O^2)) on {tau_0, tau_perp} of a wavepacket with
/// overlap O against the reference packet tau_0.
std::pair<Real, Real> temporal_components(Real overlap);

/// Width parameter of the interference envelope for photons behind a
/// Gaussian band-pass of the given FWHM:
/// sigma = sqrt(ln 2) * lambda^2 / (pi * dlambda).
/// 710 nm / 10 nm gives 13.36 um.
Real coherence_sigma_from_filter(Real center_nm, Real fwhm_nm);

}  // namespace hyperchip
