#include "hyperchip/wavepacket.hpp"

#include <algorithm>
#include <cmath>

namespace hyperchip {

Real temporal_overlap(const WavepacketConfig& cfg) {
  if (!(cfg.coherence_sigma_um > 0.0)) throw PhysicsError("coherence sigma must be positive");
  const Real dx = cfg.mismatch_um();
  const Real sigma = cfg.coherence_sigma_um;
  Real o = std::exp(-dx * dx / (2.0 * sigma * sigma));
  if (cfg.shape == OverlapShape::gaussian_sinc) {
    if (!(cfg.sinc_width_um > 0.0)) throw PhysicsError("sinc width must be positive");
    const Real u = kPi * dx / cfg.sinc_width_um;
    if (std::abs(u) >= kPi) return 0.0;
    if (u != 0.0) o *= std::sin(u) / u;
  }
  return std::clamp(o, 0.0, 1.0);
}

std::pair<Real, Real> temporal_components(Real overlap) {
  if (overlap < 0.0 || overlap > 1.0) throw PhysicsError("overlap outside [0, 1]");
  return {overlap, std::sqrt(std::max(0.0, 1.0 - overlap * overlap))};
}

Real coherence_sigma_from_filter(Real center_nm, Real fwhm_nm) {
  if (!(center_nm > 0.0) || !(fwhm_nm > 0.0)) throw PhysicsError("filter parameters must be positive");
  const Real sigma_nm = std::sqrt(std::log(2.0)) * center_nm * center_nm / (kPi * fwhm_nm);
  return sigma_nm * 1e-3;
}

}  // namespace hyperchip
