#include "hyperchip/apparatus.hpp"

#include <cmath>

#include "hyperchip/detection.hpp"

namespace hyperchip {

namespace {

constexpr Real kBasisTolerance = 1e-9;

struct PathRoute {
  ModeUnitary element;
  Spatial zero_port;
};

PathRoute route(Arm arm, const LocalBasis& basis) {
  const Complex a = basis.zero(0);
  const Complex b = basis.zero(1);
  if (std::abs(b) < kBasisTolerance) return {bypass(arm), Spatial::ell_prime};
  if (std::abs(a) < kBasisTolerance) return {bypass(arm), Spatial::r_prime};
  if (std::abs(std::abs(a) - std::abs(b)) > kBasisTolerance)
    throw PhysicsError("path qubits can only be read in the z basis or an equatorial basis");
  const Real chi = std::arg(b) - std::arg(a);
  const ModeUnitary plate = phase_plate(Spatial::r, arm, -chi);
  return {beam_splitter(arm).after(plate), Spatial::ell_prime};
}

Spatial other_port(Spatial s) { return s == Spatial::ell_prime ? Spatial::r_prime : Spatial::ell_prime; }

}  // namespace

LocalBasis LocalBasis::z() { return {Vector2c(1.0, 0.0)}; }

LocalBasis LocalBasis::x() {
  const Real s = 1.0 / std::sqrt(2.0);
  return {Vector2c(s, s)};
}

LocalBasis LocalBasis::y() {
  const Real s = 1.0 / std::sqrt(2.0);
  return {Vector2c(Complex(s), Complex(0.0, s))};
}

LocalBasis LocalBasis::from_ket(const Vector2c& ket) {
  if (ket.norm() == 0.0) throw PhysicsError("basis vector has zero norm");
  return {ket.normalized()};
}

Vector2c LocalBasis::one() const {
  // Orthogonal complement, fixed phase convention.
  return Vector2c(-std::conj(zero(1)), std::conj(zero(0)));
}

ModeUnitary bypass(Arm arm) {
  return ModeUnitary(arm == Arm::A ? ArmScope::A : ArmScope::B, MatrixXc::Identity(4, 4),
                     Stage::pre_chip, Stage::post_chip);
}

ModeUnitary path_router(Arm arm, const LocalBasis& basis) { return route(arm, basis).element; }

std::array<Real, kOutcomes> outcome_probabilities(const MixedState& source_state,
                                                  const LocalBases& bases) {
  if (source_state.stage() != Stage::pre_chip)
    throw PhysicsError("analysis expects the state in front of the chip");
  const PathRoute ra = route(Arm::A, bases[static_cast<int>(Qubit::path_A)]);
  const PathRoute rb = route(Arm::B, bases[static_cast<int>(Qubit::path_B)]);
  const MixedState routed = apply(source_state, combine(ra.element, rb.element));

  auto analyzer = [&](Qubit q, int bit) -> Eigen::Vector3d {
    const LocalBasis& b = bases[static_cast<int>(q)];
    return bloch_vector(bit == 0 ? b.zero : b.one());
  };

  std::array<Real, kOutcomes> probs{};
  for (int o = 0; o < kOutcomes; ++o) {
    DetectorSpec da{Arm::A,
                    outcome_bit(o, Qubit::path_A) == 0 ? ra.zero_port : other_port(ra.zero_port),
                    analyzer(Qubit::pol_A, outcome_bit(o, Qubit::pol_A))};
    DetectorSpec db{Arm::B,
                    outcome_bit(o, Qubit::path_B) == 0 ? rb.zero_port : other_port(rb.zero_port),
                    analyzer(Qubit::pol_B, outcome_bit(o, Qubit::pol_B))};
    probs[o] = coincidence_probability(routed, da, db);
  }
  return probs;
}

namespace {

// Qubit-register amplitudes of one pure component for fixed temporal labels.
Vector16c register_vector(const TwoPhotonState& s, int ta, int tb) {
  Vector16c v = Vector16c::Zero();
  for (int pa = 0; pa < 2; ++pa)
    for (int ka = 0; ka < 2; ++ka)
      for (int pb = 0; pb < 2; ++pb)
        for (int kb = 0; kb < 2; ++kb) {
          const ModeLabel ma{Arm::A, spatial_of(Stage::pre_chip, ka), static_cast<Polarization>(pa), ta};
          const ModeLabel mb{Arm::B, spatial_of(Stage::pre_chip, kb), static_cast<Polarization>(pb), tb};
          v(pa * 8 + ka * 4 + pb * 2 + kb) = s.amplitude(ma, mb);
        }
  return v;
}

}  // namespace

Matrix16c qubit_density_matrix(const MixedState& state) {
  if (state.stage() != Stage::pre_chip)
    throw PhysicsError("qubit readout expects a pre-chip state");
  Matrix16c rho = Matrix16c::Zero();
  for (const auto& c : state.components())
    for (int ta = 0; ta < kTemporalDim; ++ta)
      for (int tb = 0; tb < kTemporalDim; ++tb) {
        const Vector16c v = register_vector(c.state, ta, tb);
        rho += c.weight * (v * v.adjoint());
      }
  if (std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw PhysicsError("state is not one photon per arm; no four-qubit encoding");
  return rho;
}

Vector16c qubit_state_vector(const TwoPhotonState& state) {
  const Vector16c v = register_vector(state, 0, 0);
  if (std::abs(v.squaredNorm() - 1.0) > 1e-9)
    throw PhysicsError("state is not a tau_0 one-photon-per-arm state");
  return v;
}

}  // namespace hyperchip
