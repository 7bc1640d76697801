#pragma once

#include <span>
#include <vector>

#include "hyperchip/types.hpp"

namespace hyperchip {

enum class EnvelopeModel : std::uint8_t {
  /// b (1 + a exp(-(x - c)^2 / (2 w^2)))
  gaussian,
  /// b (1 + a exp(-(x - c)^2 / (2 w^2)) sinc((x - c) / s))
  gaussian_sinc,
};

struct EnvelopeFit {
  EnvelopeModel model = EnvelopeModel::gaussian;
  Real baseline = 0.0;
  /// Signed relative amplitude: negative for a dip, positive for a peak.
  Real amplitude = 0.0;
  Real center = 0.0;
  Real width = 0.0;
  Real sinc_width = 0.0;  // gaussian_sinc only
  bool converged = false;

  Real extremum() const { return baseline * (1.0 + amplitude); }
  bool is_dip() const { return amplitude < 0.0; }
  Real evaluate(Real x) const;
};

/// Weighted least-squares fit of a peak/dip envelope on a flat baseline.
/// `sigma` may be empty (unit weights). Throws PhysicsError for fewer than 5
/// points or mismatched sizes.
EnvelopeFit fit_envelope(std::span<const Real> x, std::span<const Real> y,
                         std::span<const Real> sigma = {},
                         EnvelopeModel model = EnvelopeModel::gaussian);

/// Visibility from a fitted envelope: (C_base - C_min)/C_base for dips and
/// (C_max - C_base)/C_base for peaks, clamped to [0, 1].
Real visibility(const EnvelopeFit& fit);

}  // namespace hyperchip
