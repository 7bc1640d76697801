#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "hyperchip/detection.hpp"
#include "hyperchip/source.hpp"

namespace hyperchip {

/// Deterministic per-task stream: seeds an mt19937_64 from (master, index)
/// through splitmix64, so results do not depend on evaluation order.
std::mt19937_64 derived_rng(std::uint64_t master_seed, std::uint64_t index);

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Poisson sample; returns the mean rounded when `mean` is huge and 0 for a
/// zero mean.
std::int64_t sample_poisson(Real mean, std::mt19937_64& rng);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; callers write to disjoint slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Pair of chip input modes that feeds a coincidence, with the fraction of
/// emitted pairs it carries.
struct InputMode {
  Arm arm = Arm::A;
  Spatial mode = Spatial::ell;
};

struct InputPair {
  InputMode first;
  InputMode second;
  Real population = 1.0;
};

struct MeasurementSetting {
  Real delta_x_um = 0.0;
  Real phi = 0.0;
  Real theta = 0.0;
  DetectorSpec first;
  DetectorSpec second;
};

/// One measurement setting with its simulated counts.
struct ExperimentRecord {
  MeasurementSetting setting;
  /// Pairs emitted during the acquisition.
  Real shots = 0.0;
  Real duration_s = 0.0;
  /// Post-selected coincidence probability per surviving pair.
  Real probability = 0.0;
  /// Fraction of emitted pairs that survive to the detectors.
  Real rate_factor = 1.0;
  bool path_asymmetric = false;
  std::vector<InputPair> inputs;
  Real expected_accidentals = 0.0;

  std::int64_t raw_counts = 0;
  /// Background estimate subtracted in the "net" analysis.
  std::int64_t accidentals = 0;
  /// Estimated detection probability, in [0, 1].
  Real normalized = 0.0;

  Real expected_signal() const { return shots * rate_factor * probability; }
  Real expected_counts() const { return expected_signal() + expected_accidentals; }
};

/// Record before efficiencies and sampling: rate_factor 1, counts unset.
ExperimentRecord make_record(const MeasurementSetting& setting, Real probability, Real shots,
                             const SourceConfig& cfg, std::vector<InputPair> inputs);

/// Scales the expected rate by the population-weighted product of the two
/// photons' input efficiencies. `path_asymmetric` is raised when contributing
/// pairs see different products. The probability and normalized columns are
/// left alone. Throws PhysicsError if a record has no input pair listed.
ExperimentRecord apply_efficiencies(ExperimentRecord record, const EfficiencyTable& table);

/// Fills raw_counts (Poisson signal + Poisson background), the rounded
/// background estimate and the normalized column. With `rng == nullptr` the
/// expectation values are used instead (counts rounded).
void sample_counts(ExperimentRecord& record, std::mt19937_64* rng);

}  // namespace hyperchip
