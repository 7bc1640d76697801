#pragma once

#include <optional>

#include "hyperchip/two_photon_state.hpp"

namespace hyperchip {

/// Time-insensitive bucket detector behind an optional polarization analyzer.
struct DetectorSpec {
  Arm arm = Arm::A;
  Spatial port = Spatial::r_prime;
  /// Bloch direction of the transmitted polarization (+z = H, +x = D, +y = R).
  std::optional<Eigen::Vector3d> analyzer;
};

/// |n> = cos(t/2)|H> + e^{i p} sin(t/2)|V> for the Bloch vector n(t, p).
Vector2c polarization_ket(const Eigen::Vector3d& bloch);

/// Inverse of polarization_ket() up to global phase.
Eigen::Vector3d bloch_vector(const Vector2c& ket);

/// Probability that one photon fires each detector. Temporal labels are traced
/// out. Throws PhysicsError if both detectors watch the same spatial mode or a
/// port belongs to a different stage than the state.
Real coincidence_probability(const TwoPhotonState& state, const DetectorSpec& first,
                             const DetectorSpec& second);
Real coincidence_probability(const MixedState& state, const DetectorSpec& first,
                             const DetectorSpec& second);

}  // namespace hyperchip
