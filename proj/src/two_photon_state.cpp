#include "hyperchip/two_photon_state.hpp"

#include <cmath>
#include <numeric>

namespace hyperchip {

namespace {

constexpr Real kPruneTolerance = 1e-15;

}  // namespace

std::string to_string(Arm arm) { return arm == Arm::A ? "A" : "B"; }

std::string to_string(Spatial spatial) {
  switch (spatial) {
    case Spatial::ell:
      return "ell";
    case Spatial::r:
      return "r";
    case Spatial::ell_prime:
      return "ell'";
    case Spatial::r_prime:
      return "r'";
  }
  return "?";
}

std::string to_string(const ModeLabel& label) {
  return std::string(label.polarization == Polarization::H ? "H" : "V") + "," +
         to_string(label.spatial) + "_" + to_string(label.arm) + ",t" +
         std::to_string(label.temporal);
}

Amplitudes canonicalize(const Amplitudes& amplitudes) {
  Amplitudes out;
  for (const auto& [pair, c] : amplitudes) {
    ModePair key = pair.first <= pair.second ? pair : ModePair{pair.second, pair.first};
    out[key] += c;
  }
  std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < kPruneTolerance; });
  return out;
}

TwoPhotonState::TwoPhotonState(Stage stage, const Amplitudes& amplitudes)
    : stage_(stage), amplitudes_(canonicalize(amplitudes)) {
  for (const auto& [pair, c] : amplitudes_) {
    if (pair.first.stage() != stage || pair.second.stage() != stage)
      throw PhysicsError("two-photon state mixes pre- and post-chip mode labels");
    if (pair.first.temporal < 0 || pair.first.temporal >= kTemporalDim ||
        pair.second.temporal < 0 || pair.second.temporal >= kTemporalDim)
      throw PhysicsError("temporal label out of range");
  }
  const Real n2 = norm_squared();
  if (!(n2 > 0.0)) throw PhysicsError("two-photon state has zero norm");
  const Real inv = 1.0 / std::sqrt(n2);
  for (auto& [pair, c] : amplitudes_) c *= inv;
}

Complex TwoPhotonState::amplitude(const ModeLabel& a, const ModeLabel& b) const {
  const ModePair key = a <= b ? ModePair{a, b} : ModePair{b, a};
  const auto it = amplitudes_.find(key);
  return it == amplitudes_.end() ? Complex{} : it->second;
}

Real TwoPhotonState::norm_squared() const {
  return std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                         [](Real acc, const auto& kv) { return acc + std::norm(kv.second); });
}

Matrix16cSym TwoPhotonState::symmetric_matrix() const {
  Matrix16cSym s = Matrix16cSym::Zero();
  for (const auto& [pair, c] : amplitudes_) {
    const int i = pair.first.index();
    const int j = pair.second.index();
    if (i == j) {
      s(i, i) = std::sqrt(2.0) * c;
    } else {
      s(i, j) = c;
      s(j, i) = c;
    }
  }
  return s;
}

std::pair<TwoPhotonState, Real> TwoPhotonState::from_symmetric_matrix_lossy(
    Stage stage, const Matrix16cSym& s) {
  Amplitudes amps;
  Real n2 = 0.0;
  for (int i = 0; i < kModesPerStage; ++i) {
    for (int j = i; j < kModesPerStage; ++j) {
      const Complex c = (i == j) ? s(i, i) / std::sqrt(2.0) : Complex(0.5) * (s(i, j) + s(j, i));
      if (std::abs(c) < kPruneTolerance) continue;
      amps[{ModeLabel::from_index(stage, i), ModeLabel::from_index(stage, j)}] = c;
      n2 += std::norm(c);
    }
  }
  return {TwoPhotonState(stage, amps), n2};
}

TwoPhotonState TwoPhotonState::from_symmetric_matrix(Stage stage, const Matrix16cSym& s) {
  return from_symmetric_matrix_lossy(stage, s).first;
}

TwoPhotonState product_state(const ModeLabel& first, const ModeLabel& second) {
  if (first.stage() != second.stage())
    throw PhysicsError("product_state: labels belong to different stages");
  return TwoPhotonState(first.stage(), {{{first, second}, Complex(1.0)}});
}

MixedState::MixedState(TwoPhotonState pure) { components_.push_back({1.0, std::move(pure)}); }

MixedState::MixedState(std::vector<WeightedState> components) {
  std::erase_if(components, [](const WeightedState& c) { return c.weight == 0.0; });
  if (components.empty()) throw PhysicsError("mixed state needs at least one component");
  Real total = 0.0;
  for (const auto& c : components) {
    if (c.weight < 0.0) throw PhysicsError("mixture weight is negative");
    if (c.state.stage() != components.front().state.stage())
      throw PhysicsError("mixture components belong to different stages");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw PhysicsError("mixture weights do not sum to 1");
  components_ = std::move(components);
}

MixedState MixedState::mix(Real p, const MixedState& a, const MixedState& b) {
  if (p < 0.0 || p > 1.0) throw PhysicsError("mixing probability outside [0, 1]");
  std::vector<WeightedState> out;
  for (const auto& c : a.components()) out.push_back({p * c.weight, c.state});
  for (const auto& c : b.components()) out.push_back({(1.0 - p) * c.weight, c.state});
  // Renormalize away rounding so the 1e-12 invariant survives long chains.
  Real total = 0.0;
  for (const auto& c : out) total += c.weight;
  for (auto& c : out) c.weight /= total;
  return MixedState(std::move(out));
}

}  // namespace hyperchip
