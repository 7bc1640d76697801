#pragma once

#include <array>
#include <string>
#include <vector>

#include "hyperchip/counts.hpp"
#include "hyperchip/fit.hpp"

namespace hyperchip {

struct ScanOptions {
  /// false: use expectation values, no Poisson noise.
  bool sample = true;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  EnvelopeModel model = EnvelopeModel::gaussian;
  /// Refits on Poisson resamples of the fitted curve for the uncertainty.
  int mc_resamples = 50;
};

struct ScanResult {
  std::string label;
  std::vector<ExperimentRecord> records;
  EnvelopeFit fit;
  Real visibility = 0.0;
  Real visibility_sigma = 0.0;
  /// Same analysis after subtracting the accidental estimate.
  EnvelopeFit fit_net;
  Real visibility_net = 0.0;
  Real visibility_net_sigma = 0.0;

  bool is_dip() const { return fit.is_dip(); }
};

/// Evenly spaced delays in [from, to], inclusive.
std::vector<Real> delay_grid(Real from_um, Real to_um, std::size_t points);

/// HOM dip of one splitter: a photon in each input, delay on the ell photon.
/// Throws PhysicsError on an empty delay list or non-positive shots.
ScanResult hom_scan(const SourceConfig& cfg, Arm bs_arm, const std::vector<Real>& delays,
                    Real shots, const ScanOptions& options);

/// (phi, theta) settings of the hyperentangled scan, in output order.
inline constexpr std::array<std::array<Real, 2>, 4> kHyperentangledSettings{
    {{0.0, 0.0}, {0.0, kPi}, {kPi, 0.0}, {kPi, kPi}}};

/// Coincidences r'_A / ell'_B vs path mismatch for each (phi, theta) in
/// kHyperentangledSettings. The source is compensated with
/// CompensationSetting::swap_r_modes().
std::array<ScanResult, 4> he_scan(const SourceConfig& cfg, const std::vector<Real>& delays,
                                  Real shots, const ScanOptions& options);

/// Path-only scan with |H_A H_B> polarization; index 0 is phi = 0, 1 is phi = pi.
std::array<ScanResult, 2> path_scan(const SourceConfig& cfg, const std::vector<Real>& delays,
                                    Real shots, const ScanOptions& options);

/// Lossy chip propagation of a pre-chip state into one coincidence record:
/// efficiencies filter the state, the chip splitters act, and the record's
/// rate is scaled by the surviving fraction.
ExperimentRecord simulate_record(const MixedState& source_state, const MeasurementSetting& setting,
                                 Real shots, const SourceConfig& cfg,
                                 const std::vector<InputPair>& inputs, const ModeUnitary& chip_element);

}  // namespace hyperchip
