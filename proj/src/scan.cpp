#include "hyperchip/scan.hpp"

#include <cmath>

namespace hyperchip {

namespace {

constexpr std::uint64_t kResampleStream = 0x5ca1ab1eULL << 32;

const std::vector<InputPair> kPathPairs{{{Arm::A, Spatial::r}, {Arm::B, Spatial::ell}, 0.5},
                                        {{Arm::A, Spatial::ell}, {Arm::B, Spatial::r}, 0.5}};

struct FitOutcome {
  EnvelopeFit fit;
  Real visibility = 0.0;
  Real sigma = 0.0;
};

Real sample_sd(const std::vector<Real>& v) {
  if (v.size() < 2) return 0.0;
  Real mean = 0.0;
  for (Real x : v) mean += x;
  mean /= static_cast<Real>(v.size());
  Real ss = 0.0;
  for (Real x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<Real>(v.size() - 1));
}

FitOutcome analyse(const std::vector<Real>& x, const std::vector<Real>& y, bool sampled,
                   const ScanOptions& opt, std::uint64_t stream) {
  std::vector<Real> sigma;
  if (sampled) {
    sigma.reserve(y.size());
    for (Real v : y) sigma.push_back(std::sqrt(std::max(v, 1.0)));
  }
  FitOutcome out;
  out.fit = fit_envelope(x, y, sigma, opt.model);
  out.visibility = visibility(out.fit);
  if (!sampled || opt.mc_resamples < 2) return out;

  std::vector<Real> vis(static_cast<std::size_t>(opt.mc_resamples));
  parallel_for(vis.size(), opt.threads, [&](std::size_t k) {
    auto rng = derived_rng(opt.seed, kResampleStream + stream * 100000 + k);
    std::vector<Real> yr(x.size()), sr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      yr[i] = static_cast<Real>(sample_poisson(std::max(out.fit.evaluate(x[i]), 0.0), rng));
      sr[i] = std::sqrt(std::max(yr[i], 1.0));
    }
    vis[k] = visibility(fit_envelope(x, yr, sr, opt.model));
  });
  out.sigma = sample_sd(vis);
  return out;
}

// Samples all records (index-derived streams) and fits raw and net curves.
ScanResult finish(std::string label, std::vector<ExperimentRecord> records,
                  const ScanOptions& opt, std::uint64_t stream) {
  parallel_for(records.size(), opt.threads, [&](std::size_t i) {
    if (opt.sample) {
      auto rng = derived_rng(opt.seed, stream * 100000 + i);
      sample_counts(records[i], &rng);
    } else {
      sample_counts(records[i], nullptr);
    }
  });

  std::vector<Real> x, y, y_net;
  for (const auto& r : records) {
    x.push_back(r.setting.delta_x_um);
    if (opt.sample) {
      y.push_back(static_cast<Real>(r.raw_counts));
      y_net.push_back(static_cast<Real>(r.raw_counts - r.accidentals));
    } else {
      y.push_back(r.expected_counts());
      y_net.push_back(r.expected_signal());
    }
  }

  ScanResult result;
  result.label = std::move(label);
  result.records = std::move(records);
  const FitOutcome raw = analyse(x, y, opt.sample, opt, 2 * stream);
  const FitOutcome net = analyse(x, y_net, opt.sample, opt, 2 * stream + 1);
  result.fit = raw.fit;
  result.visibility = raw.visibility;
  result.visibility_sigma = raw.sigma;
  result.fit_net = net.fit;
  result.visibility_net = net.visibility;
  result.visibility_net_sigma = net.sigma;
  return result;
}

void check_scan_inputs(const std::vector<Real>& delays, Real shots) {
  if (delays.empty()) throw PhysicsError("scan needs at least one delay");
  if (!(shots > 0.0)) throw PhysicsError("shots must be positive");
}

std::string phase_name(Real phase) { return std::abs(phase) < 1e-12 ? "0" : "pi"; }

}  // namespace

std::vector<Real> delay_grid(Real from_um, Real to_um, std::size_t points) {
  if (points < 2) throw PhysicsError("delay grid needs at least two points");
  std::vector<Real> out(points);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = from_um + (to_um - from_um) * static_cast<Real>(i) / static_cast<Real>(points - 1);
  return out;
}

ExperimentRecord simulate_record(const MixedState& source_state, const MeasurementSetting& setting,
                                 Real shots, const SourceConfig& cfg,
                                 const std::vector<InputPair>& inputs,
                                 const ModeUnitary& chip_element) {
  const LossyResult lossy = attenuate(source_state, cfg.efficiencies);
  const MixedState out = apply(lossy.state, chip_element);
  const Real p = coincidence_probability(out, setting.first, setting.second);
  return apply_efficiencies(make_record(setting, p, shots, cfg, inputs), cfg.efficiencies);
}

ScanResult hom_scan(const SourceConfig& cfg, Arm bs_arm, const std::vector<Real>& delays,
                    Real shots, const ScanOptions& options) {
  check_scan_inputs(delays, shots);
  const std::vector<InputPair> inputs{{{bs_arm, Spatial::ell}, {bs_arm, Spatial::r}, 1.0}};
  const MeasurementSetting base{0.0, cfg.phi, cfg.theta, {bs_arm, Spatial::ell_prime, {}},
                                {bs_arm, Spatial::r_prime, {}}};
  std::vector<ExperimentRecord> records(delays.size());
  parallel_for(delays.size(), options.threads, [&](std::size_t i) {
    SourceConfig c = cfg;
    c.wavepacket.delay_A_um = delays[i];
    c.wavepacket.delay_B_um = 0.0;
    MeasurementSetting s = base;
    s.delta_x_um = delays[i];
    records[i] = simulate_record(emit_hom_pair(c, bs_arm), s, shots, c, inputs, beam_splitter(bs_arm));
  });
  return finish(std::string("hom_") + (bs_arm == Arm::A ? "A" : "B"), std::move(records), options,
                bs_arm == Arm::A ? 1 : 2);
}

std::array<ScanResult, 4> he_scan(const SourceConfig& cfg, const std::vector<Real>& delays,
                                  Real shots, const ScanOptions& options) {
  check_scan_inputs(delays, shots);
  const ModeUnitary element = chip();
  std::array<ScanResult, 4> out;
  for (std::size_t k = 0; k < kHyperentangledSettings.size(); ++k) {
    const auto [phi, theta] = kHyperentangledSettings[k];
    std::vector<ExperimentRecord> records(delays.size());
    parallel_for(delays.size(), options.threads, [&](std::size_t i) {
      SourceConfig c = cfg;
      c.phi = phi;
      c.theta = theta;
      c.wavepacket.delay_A_um = delays[i];
      c.wavepacket.delay_B_um = 0.0;
      const MixedState state =
          apply_compensation(emit_hyperentangled(c), CompensationSetting::swap_r_modes());
      const MeasurementSetting s{delays[i], phi, theta, {Arm::A, Spatial::r_prime, {}},
                                 {Arm::B, Spatial::ell_prime, {}}};
      records[i] = simulate_record(state, s, shots, c, kPathPairs, element);
    });
    out[k] = finish("he_phi" + phase_name(phi) + "_theta" + phase_name(theta), std::move(records),
                    options, 10 + k);
  }
  return out;
}

std::array<ScanResult, 2> path_scan(const SourceConfig& cfg, const std::vector<Real>& delays,
                                    Real shots, const ScanOptions& options) {
  check_scan_inputs(delays, shots);
  const ModeUnitary element = chip();
  std::array<ScanResult, 2> out;
  const std::array<Real, 2> phases{0.0, kPi};
  for (std::size_t k = 0; k < phases.size(); ++k) {
    std::vector<ExperimentRecord> records(delays.size());
    parallel_for(delays.size(), options.threads, [&](std::size_t i) {
      SourceConfig c = cfg;
      c.phi = phases[k];
      c.wavepacket.delay_A_um = delays[i];
      c.wavepacket.delay_B_um = 0.0;
      const MeasurementSetting s{delays[i], phases[k], 0.0, {Arm::A, Spatial::r_prime, {}},
                                 {Arm::B, Spatial::ell_prime, {}}};
      records[i] = simulate_record(emit_path_entangled(c), s, shots, c, kPathPairs, element);
    });
    out[k] = finish("path_phi" + phase_name(phases[k]), std::move(records), options, 20 + k);
  }
  return out;
}

}  // namespace hyperchip
