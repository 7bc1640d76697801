#include "hyperchip/source.hpp"

#include <cmath>

namespace hyperchip {

namespace {

using PolVector = Vector4c;  // index = pol_A * 2 + pol_B

TwoPhotonState hyperentangled_component(const PolVector& pol, Real path_phase, Real overlap) {
  const auto [o, o_perp] = temporal_components(overlap);
  const Real s = 1.0 / std::sqrt(2.0);
  const Complex branch2 = std::polar(s, path_phase);
  Amplitudes amps;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Complex c = pol(a * 2 + b);
      if (c == Complex{}) continue;
      const auto pa = static_cast<Polarization>(a);
      const auto pb = static_cast<Polarization>(b);
      amps[{{Arm::A, Spatial::r, pa, 0}, {Arm::B, Spatial::ell, pb, 0}}] += s * c;
      amps[{{Arm::A, Spatial::ell, pa, 0}, {Arm::B, Spatial::r, pb, 0}}] += branch2 * c * o;
      amps[{{Arm::A, Spatial::ell, pa, 1}, {Arm::B, Spatial::r, pb, 0}}] += branch2 * c * o_perp;
    }
  }
  return TwoPhotonState(Stage::pre_chip, amps);
}

// (1 - p - q) |pol><pol| + p I/4 + q (|HV><HV| + |VH><VH|) / 2.
std::vector<std::pair<Real, PolVector>> polarization_ensemble(const PolVector& pol, Real p, Real q) {
  std::vector<std::pair<Real, PolVector>> out{{1.0 - p - q, pol}};
  for (int k = 0; k < 4; ++k) {
    const Real cross = (k == 1 || k == 2) ? q / 2.0 : 0.0;
    out.emplace_back(p / 4.0 + cross, PolVector::Unit(k));
  }
  return out;
}

Real branch_overlap(const SourceConfig& cfg) {
  return cfg.mode_overlap_A * cfg.mode_overlap_B * temporal_overlap(cfg.wavepacket);
}

MixedState emit_with_polarization(const SourceConfig& cfg, const PolVector& pol) {
  cfg.validate();
  const Real v = cfg.path_visibility;
  const Real overlap = branch_overlap(cfg);
  std::vector<WeightedState> comps;
  for (const auto& [wp, pv] :
       polarization_ensemble(pol, cfg.pol_depolarization, cfg.pol_cross_fraction)) {
    if (wp == 0.0) continue;
    // Dephasing as a mixture of the two path phases phi and phi + pi.
    comps.push_back({wp * (1.0 + v) / 2.0, hyperentangled_component(pv, cfg.phi, overlap)});
    comps.push_back({wp * (1.0 - v) / 2.0, hyperentangled_component(pv, cfg.phi + kPi, overlap)});
  }
  return MixedState(std::move(comps));
}

Matrix2c swap_hv() { return pauli::x(); }

}  // namespace

EfficiencyTable unit_efficiencies() { return {{{1.0, 1.0}, {1.0, 1.0}}}; }

EfficiencyTable measured_efficiencies() { return {{{0.22, 0.23}, {0.13, 0.18}}}; }

Real efficiency(const EfficiencyTable& table, Arm arm, Spatial input_mode) {
  if (stage_of(input_mode) != Stage::pre_chip)
    throw PhysicsError("efficiencies are tabulated for chip input modes");
  return table[static_cast<int>(arm)][slot_of(input_mode)];
}

void SourceConfig::validate() const {
  auto in_unit = [](Real x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(pol_depolarization)) throw PhysicsError("pol_depolarization outside [0, 1]");
  if (!in_unit(pol_cross_fraction)) throw PhysicsError("pol_cross_fraction outside [0, 1]");
  if (pol_depolarization + pol_cross_fraction > 1.0)
    throw PhysicsError("polarization noise weights exceed 1");
  if (!in_unit(path_visibility)) throw PhysicsError("path_visibility outside [0, 1]");
  if (!in_unit(mode_overlap_A) || !in_unit(mode_overlap_B))
    throw PhysicsError("mode overlap outside [0, 1]");
  if (!(wavepacket.coherence_sigma_um > 0.0)) throw PhysicsError("coherence sigma must be positive");
  for (const auto& arm : efficiencies)
    for (Real e : arm)
      if (!(e > 0.0 && e <= 1.0)) throw PhysicsError("efficiency outside (0, 1]");
  if (!(pair_rate_hz > 0.0)) throw PhysicsError("pair rate must be positive");
  if (accidental_rate_hz < 0.0) throw PhysicsError("accidental rate must be non-negative");
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw PhysicsError("phases must be finite");
}

SourceConfig SourceConfig::ideal() {
  SourceConfig cfg;
  cfg.wavepacket.coherence_sigma_um = coherence_sigma_from_filter(710.0, 10.0);
  return cfg;
}

SourceConfig SourceConfig::calibrated() {
  SourceConfig cfg = ideal();
  cfg.pol_depolarization = 0.01;
  cfg.pol_cross_fraction = 0.0235;
  cfg.path_visibility = 0.9524;
  cfg.mode_overlap_A = 0.9925;
  cfg.mode_overlap_B = 0.9955;
  cfg.cluster_hwp_retardance_error = 0.72;
  cfg.efficiencies = measured_efficiencies();
  cfg.pair_rate_hz = 2600.0;
  // 12 accidental coincidences every 30 s.
  cfg.accidental_rate_hz = 12.0 / 30.0;
  return cfg;
}

CompensationSetting CompensationSetting::identity() { return {}; }

CompensationSetting CompensationSetting::swap_arm_b() {
  CompensationSetting s;
  s.jones[2] = swap_hv();
  s.jones[3] = swap_hv();
  return s;
}

CompensationSetting CompensationSetting::swap_r_modes() {
  CompensationSetting s;
  s.jones[1] = swap_hv();
  s.jones[3] = swap_hv();
  return s;
}

CompensationSetting CompensationSetting::inverse_of(const std::array<Matrix2c, 4>& disturbance) {
  CompensationSetting s;
  for (std::size_t i = 0; i < 4; ++i) s.jones[i] = disturbance[i].adjoint();
  return s;
}

MixedState emit_hyperentangled(const SourceConfig& cfg) {
  const Real s = 1.0 / std::sqrt(2.0);
  PolVector pol = PolVector::Zero();
  pol(0) = s;                            // H_A H_B
  pol(3) = std::polar(s, cfg.theta);     // V_A V_B
  return emit_with_polarization(cfg, pol);
}

MixedState emit_path_entangled(const SourceConfig& cfg) {
  return emit_with_polarization(cfg, PolVector::Unit(0));
}

MixedState emit_cluster(const SourceConfig& cfg) {
  SourceConfig c = cfg;
  c.theta = kPi;
  return apply(emit_hyperentangled(c), waveplate(WaveplateKind::HWP, 0.0, Spatial::r, Arm::A,
                                                 cfg.cluster_hwp_retardance_error));
}

MixedState emit_hom_pair(const SourceConfig& cfg, Arm arm) {
  cfg.validate();
  const Real overlap =
      (arm == Arm::A ? cfg.mode_overlap_A : cfg.mode_overlap_B) * temporal_overlap(cfg.wavepacket);
  const auto [o, o_perp] = temporal_components(overlap);
  const ModeLabel r{arm, Spatial::r, Polarization::H, 0};
  Amplitudes amps;
  amps[{{arm, Spatial::ell, Polarization::H, 0}, r}] = o;
  amps[{{arm, Spatial::ell, Polarization::H, 1}, r}] = o_perp;
  return MixedState(TwoPhotonState(Stage::pre_chip, amps));
}

MixedState apply_compensation(const MixedState& state, const CompensationSetting& setting) {
  if (state.stage() != Stage::pre_chip)
    throw PhysicsError("compensation acts in front of the chip");
  const std::array<std::pair<Arm, Spatial>, 4> modes{
      {{Arm::A, Spatial::ell}, {Arm::A, Spatial::r}, {Arm::B, Spatial::ell}, {Arm::B, Spatial::r}}};
  MixedState out = state;
  for (std::size_t i = 0; i < 4; ++i)
    out = apply(out, polarization_element(setting.jones[i], modes[i].second, modes[i].first));
  return out;
}

}  // namespace hyperchip
