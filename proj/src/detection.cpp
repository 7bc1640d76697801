#include "hyperchip/detection.hpp"

#include <algorithm>
#include <cmath>

namespace hyperchip {

namespace {

Matrix2c projector(const std::optional<Eigen::Vector3d>& analyzer) {
  if (!analyzer) return Matrix2c::Identity();
  const Vector2c k = polarization_ket(*analyzer);
  return k * k.adjoint();
}

}  // namespace

Vector2c polarization_ket(const Eigen::Vector3d& bloch) {
  const Real n = bloch.norm();
  if (std::abs(n - 1.0) > 1e-9) throw PhysicsError("analyzer direction must be a unit vector");
  const Real theta = std::acos(std::clamp(bloch.z() / n, -1.0, 1.0));
  const Real phi = std::atan2(bloch.y(), bloch.x());
  Vector2c k;
  k << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return k;
}

Eigen::Vector3d bloch_vector(const Vector2c& ket) {
  const Vector2c k = ket.normalized();
  const Complex h = k(0);
  const Complex v = k(1);
  const Complex coh = std::conj(h) * v;
  return {2.0 * coh.real(), 2.0 * coh.imag(), std::norm(h) - std::norm(v)};
}

Real coincidence_probability(const TwoPhotonState& state, const DetectorSpec& first,
                             const DetectorSpec& second) {
  if (first.arm == second.arm && first.port == second.port)
    throw PhysicsError("coincidence detectors must watch distinct spatial modes");
  if (stage_of(first.port) != state.stage() || stage_of(second.port) != state.stage())
    throw PhysicsError("detector port does not belong to the state's stage");

  const Matrix2c p1 = projector(first.analyzer);
  const Matrix2c p2 = projector(second.analyzer);
  Real prob = 0.0;
  for (int t1 = 0; t1 < kTemporalDim; ++t1) {
    for (int t2 = 0; t2 < kTemporalDim; ++t2) {
      Matrix2c amp;  // amp(p1, p2)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          amp(a, b) = state.amplitude({first.arm, first.port, static_cast<Polarization>(a), t1},
                                      {second.arm, second.port, static_cast<Polarization>(b), t2});
      prob += (p1 * amp * p2.transpose()).squaredNorm();
    }
  }
  return prob;
}

Real coincidence_probability(const MixedState& state, const DetectorSpec& first,
                             const DetectorSpec& second) {
  Real prob = 0.0;
  for (const auto& c : state.components())
    prob += c.weight * coincidence_probability(c.state, first, second);
  return prob;
}

}  // namespace hyperchip
