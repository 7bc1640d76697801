#include "hyperchip/optics.hpp"

#include <cmath>

namespace hyperchip {

namespace {

int scope_dim(ArmScope scope) { return scope == ArmScope::both ? 8 : 4; }

ModeUnitary single_mode_element(const Matrix2c& jones, Spatial mode, Arm arm) {
  MatrixXc m = MatrixXc::Identity(4, 4);
  const int base = slot_of(mode) * 2;
  m.block(base, base, 2, 2) = jones;
  const Stage s = stage_of(mode);
  return ModeUnitary(arm == Arm::A ? ArmScope::A : ArmScope::B, std::move(m), s, s);
}

bool occupies_arm(const TwoPhotonState& state, Arm arm) {
  for (const auto& [pair, c] : state.amplitudes())
    if (pair.first.arm == arm || pair.second.arm == arm) return true;
  return false;
}

}  // namespace

ModeUnitary::ModeUnitary(ArmScope scope, MatrixXc matrix, Stage input, Stage output)
    : scope_(scope), matrix_(std::move(matrix)), input_(input), output_(output) {
  const int dim = scope_dim(scope_);
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw PhysicsError("mode unitary has the wrong dimension for its scope");
  if (!is_unitary(matrix_, 1e-10)) throw PhysicsError("mode element is not unitary");
}

Matrix16cSym ModeUnitary::embedded() const {
  Matrix16cSym u = Matrix16cSym::Zero();
  // Rows/columns of the scoped block in units of (arm, slot, pol).
  auto place = [&](int arm_offset, const MatrixXc& block) {
    const int n = static_cast<int>(block.rows());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int t = 0; t < kTemporalDim; ++t)
          u((arm_offset + r) * kTemporalDim + t, (arm_offset + c) * kTemporalDim + t) =
              block(r, c);
  };
  switch (scope_) {
    case ArmScope::both:
      place(0, matrix_);
      break;
    case ArmScope::A:
      place(0, matrix_);
      place(4, MatrixXc::Identity(4, 4));
      break;
    case ArmScope::B:
      place(0, MatrixXc::Identity(4, 4));
      place(4, matrix_);
      break;
  }
  return u;
}

ModeUnitary ModeUnitary::after(const ModeUnitary& first) const {
  if (first.output_stage() != input_stage())
    throw PhysicsError("cannot compose elements acting on different stages");
  if (scope_ == first.scope_) return ModeUnitary(scope_, matrix_ * first.matrix_, first.input_, output_);
  // Promote both to the two-arm scope.
  auto promote = [](const ModeUnitary& u) -> MatrixXc {
    if (u.scope() == ArmScope::both) return u.matrix();
    MatrixXc m = MatrixXc::Identity(8, 8);
    const int off = u.scope() == ArmScope::A ? 0 : 4;
    m.block(off, off, 4, 4) = u.matrix();
    return m;
  };
  return ModeUnitary(ArmScope::both, promote(*this) * promote(first), first.input_, output_);
}

ModeUnitary beam_splitter(Arm arm) {
  const Real s = 1.0 / std::sqrt(2.0);
  // Columns are inputs (ell, r) x pol, rows outputs (ell', r') x pol.
  MatrixXc m = MatrixXc::Zero(4, 4);
  for (int p = 0; p < 2; ++p) {
    m(0 + p, 0 + p) = s;   // ell -> ell'
    m(2 + p, 0 + p) = s;   // ell -> r'
    m(0 + p, 2 + p) = s;   // r -> ell'
    m(2 + p, 2 + p) = -s;  // r -> -r'
  }
  return ModeUnitary(arm == Arm::A ? ArmScope::A : ArmScope::B, std::move(m), Stage::pre_chip,
                     Stage::post_chip);
}

ModeUnitary combine(const ModeUnitary& a, const ModeUnitary& b) {
  if (a.scope() != ArmScope::A || b.scope() != ArmScope::B)
    throw PhysicsError("combine expects an arm-A element and an arm-B element");
  if (a.input_stage() != b.input_stage() || a.output_stage() != b.output_stage())
    throw PhysicsError("combine: stage mismatch between arms");
  MatrixXc m = MatrixXc::Zero(8, 8);
  m.topLeftCorner(4, 4) = a.matrix();
  m.bottomRightCorner(4, 4) = b.matrix();
  return ModeUnitary(ArmScope::both, std::move(m), a.input_stage(), a.output_stage());
}

ModeUnitary chip() { return combine(beam_splitter(Arm::A), beam_splitter(Arm::B)); }

Matrix2c retarder_jones(Real retardance, Real angle) {
  const Real c = std::cos(angle);
  const Real s = std::sin(angle);
  Matrix2c rot;
  rot << c, -s, s, c;
  Matrix2c phase = Matrix2c::Zero();
  phase(0, 0) = 1.0;
  phase(1, 1) = std::polar(1.0, retardance);
  return rot * phase * rot.transpose();
}

ModeUnitary waveplate(WaveplateKind kind, Real angle, Spatial mode, Arm arm,
                      Real retardance_error) {
  const Real nominal = kind == WaveplateKind::HWP ? kPi : kPi / 2;
  return single_mode_element(retarder_jones(nominal + retardance_error, angle), mode, arm);
}

ModeUnitary polarization_element(const Matrix2c& jones, Spatial mode, Arm arm) {
  if (!is_unitary(jones, 1e-10)) throw PhysicsError("Jones matrix is not unitary");
  return single_mode_element(jones, mode, arm);
}

ModeUnitary phase_plate(Spatial mode, Arm arm, Real phase) {
  return single_mode_element(std::polar(1.0, phase) * Matrix2c::Identity(), mode, arm);
}

ModeUnitary identity_element(ArmScope scope, Stage stage) {
  const int dim = scope_dim(scope);
  return ModeUnitary(scope, MatrixXc::Identity(dim, dim), stage, stage);
}

TwoPhotonState apply(const TwoPhotonState& state, const ModeUnitary& u) {
  if (state.stage() != u.input_stage())
    throw PhysicsError("element input stage does not match the state's stage");
  if (u.input_stage() != u.output_stage() && u.scope() != ArmScope::both) {
    const Arm other = u.scope() == ArmScope::A ? Arm::B : Arm::A;
    if (occupies_arm(state, other))
      throw PhysicsError("single-arm stage change would leave the other arm's photon behind");
  }
  const Matrix16cSym full = u.embedded();
  const Matrix16cSym s = full * state.symmetric_matrix() * full.transpose();
  return TwoPhotonState::from_symmetric_matrix(u.output_stage(), s);
}

MixedState apply(const MixedState& state, const ModeUnitary& u) {
  std::vector<WeightedState> out;
  out.reserve(state.size());
  for (const auto& c : state.components()) out.push_back({c.weight, apply(c.state, u)});
  return MixedState(std::move(out));
}

LossyResult attenuate(const MixedState& state, const SlotTransmission& eta) {
  Eigen::Matrix<Real, kModesPerStage, 1> d;
  for (int i = 0; i < kModesPerStage; ++i) {
    const ModeLabel m = ModeLabel::from_index(state.stage(), i);
    const Real t = eta[static_cast<int>(m.arm)][slot_of(m.spatial)];
    if (t < 0.0 || t > 1.0) throw PhysicsError("transmission outside [0, 1]");
    d(i) = std::sqrt(t);
  }
  std::vector<WeightedState> out;
  Real survival = 0.0;
  for (const auto& c : state.components()) {
    const Matrix16cSym s = d.asDiagonal() * c.state.symmetric_matrix() * d.asDiagonal();
    if (s.cwiseAbs().maxCoeff() == 0.0) continue;
    auto [filtered, n2] = TwoPhotonState::from_symmetric_matrix_lossy(state.stage(), s);
    survival += c.weight * n2;
    out.push_back({c.weight * n2, std::move(filtered)});
  }
  if (!(survival > 0.0)) throw PhysicsError("no photon pair survives the transmission filter");
  for (auto& c : out) c.weight /= survival;
  return {MixedState(std::move(out)), survival};
}

}  // namespace hyperchip
