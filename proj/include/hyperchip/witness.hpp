#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hyperchip/apparatus.hpp"
#include "hyperchip/counts.hpp"

namespace hyperchip {

/// Local operator on each qubit, ordered (pi_A, k_A, pi_B, k_B). Polarization
/// slots hold one of I X Y Z, path slots one of i x y z.
struct StabilizerSpec {
  std::array<char, kQubits> ops{'I', 'i', 'I', 'i'};

  /// Accepts either the four-letter register form ("ZxZx" style, in qubit
  /// order) or space-separated factors such as "X_A X_B z_A".
  /// Throws std::invalid_argument on malformed input.
  static StabilizerSpec parse(std::string_view text);

  /// Throws std::invalid_argument when a polarization operator sits on a path
  /// qubit (or vice versa) or every factor is the identity.
  void validate() const;

  /// Factor notation, e.g. "X_A X_B z_A".
  std::string label() const;
  std::string compact() const { return {ops.begin(), ops.end()}; }

  bool acts_on(Qubit q) const;
  LocalBasis basis(Qubit q) const;
  bool operator==(const StabilizerSpec&) const = default;
};

struct Expectation {
  Real value = 0.0;
  Real sigma = 0.0;
};

struct StabilizerMeasurement {
  StabilizerSpec spec;
  Expectation expectation;
  /// Per-outcome raw counts and the accidental estimate removed from each.
  std::array<Real, kOutcomes> counts{};
  Real accidentals_per_outcome = 0.0;
  Real total_counts = 0.0;
};

/// Per-outcome counts of one joint measurement of the four qubits: each
/// outcome is a separate detector-pair acquisition collecting
/// `shots * survival * p + background`, survival from the efficiency table
/// and background from the accidental rate. `seed == nullopt` gives
/// expectation counts.
std::array<Real, kOutcomes> outcome_counts(const MixedState& state, const LocalBases& bases,
                                           Real shots, const SourceConfig& cfg,
                                           std::optional<std::uint64_t> seed);

/// Expectation of `spec` on a pre-chip state, measured as in the lab: analyzers
/// for polarization, tagging for path z, splitter routing for path x / y.
/// The accidental estimate is subtracted from every outcome (clamped at 0)
/// before forming the +-1 weighted frequency.
StabilizerMeasurement measure_stabilizer(const MixedState& state, const StabilizerSpec& spec,
                                         Real shots, const SourceConfig& cfg,
                                         std::optional<std::uint64_t> seed);

/// <psi|S|psi> evaluated directly on the qubit register (no apparatus).
Real exact_expectation(const Matrix16c& rho, const StabilizerSpec& spec);

/// The six stabilizers of the witness, in the order of its formula:
/// Z_A Z_B, Z_A x_A x_B, X_A X_B z_A, z_A z_B, Z_B x_A x_B, X_A X_B z_B.
const std::array<StabilizerSpec, 6>& witness_stabilizers();

/// Coefficients c_k in W = 2 + sum_k c_k <S_k> / 2.
inline constexpr std::array<Real, 6> kWitnessSigns{-1.0, -1.0, +1.0, +1.0, -1.0, -1.0};

/// Published values of the six stabilizers, same order as witness_stabilizers().
const std::array<Expectation, 6>& table1_expectations();

struct WitnessReport {
  std::array<Expectation, 6> terms;
  Expectation w;
  Expectation fidelity_bound;
};

/// W = (4 - ZZ - Z_A xx + XX z_A + zz - Z_B xx - XX z_B) / 2, quadrature
/// uncertainty, fidelity bound (1 - W) / 2. Throws PhysicsError if a term
/// lies outside [-1, 1].
WitnessReport witness(const std::array<Expectation, 6>& expectations);

/// Measures all six stabilizers (in parallel, derived seeds) and evaluates W.
WitnessReport measure_witness(const MixedState& state, Real shots_per_term, const SourceConfig& cfg,
                              std::optional<std::uint64_t> seed, unsigned threads = 1);

}  // namespace hyperchip
