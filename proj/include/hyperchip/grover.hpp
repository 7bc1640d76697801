#pragma once

#include <array>

#include "hyperchip/witness.hpp"

namespace hyperchip {

// Grover frame: qubits (1, 2, 3, 4) = (k_B, pi_A, k_A, pi_B), qubit 1 most
// significant. Path ell = |0>; polarization V = |0>, H = |1> (with this
// encoding U|C4> is exactly the box cluster). Item index = r2 * 2 + r3.

enum class GroverMode : std::uint8_t { postselect, feedforward };

/// Oracle bases: qubit 1 in (|0> +- e^{i alpha}|1>)/sqrt2, qubit 4 likewise
/// with beta; each angle is 0 or pi.
struct GroverTag {
  int alpha_bit = 0;
  int beta_bit = 0;

  int index() const { return alpha_bit * 2 + beta_bit; }
  static GroverTag from_index(int i) { return {(i >> 1) & 1, i & 1}; }
};

struct GroverRun {
  GroverTag tag;
  GroverMode mode = GroverMode::postselect;
  Real shots = 1e6;
  std::uint64_t seed = 1;
  /// false: expectation counts, no sampling.
  bool sample = true;
};

struct GroverResult {
  GroverTag tag;
  GroverMode mode = GroverMode::postselect;
  /// Readout histogram over the four items (net counts).
  std::array<Real, 4> histogram{};
  int expected_item = 0;
  Expectation success;
  /// Retained / detected net coincidences.
  Real retained_fraction = 0.0;
  Real retained_counts = 0.0;
  Real detected_counts = 0.0;
};

/// Readout correction from the byproduct outcomes: corrected (r2, r3) =
/// (r2, r3) xor flip[s1 * 2 + s4]; item_of_tag[tag.index()] is the item the
/// oracle marks.
struct FeedforwardMap {
  std::array<std::array<int, 2>, 4> flip{};
  std::array<int, 4> item_of_tag{};

  /// flip(s1, s4) = s1 * flip(1, 0) xor s4 * flip(0, 1), flip(0, 0) = 0.
  bool is_xor() const;
};

/// Grover-frame qubit (0-based) -> register qubit.
inline constexpr std::array<Qubit, 4> kGroverQubits{Qubit::path_B, Qubit::pol_A, Qubit::path_A,
                                                    Qubit::pol_B};

/// Re-indexes a register density matrix (pi_A, k_A, pi_B, k_B; H = 0) into the
/// Grover frame.
Matrix16c to_grover_frame(const Matrix16c& register_rho);

/// U = (X H) (x) H (x) (Z H) (x) H in the Grover frame.
Matrix16c box_transform();

/// |+>^4 with CZ on the square 1-2, 2-3, 3-4, 4-1.
Vector16c box_cluster_reference();

/// U rho U^dag in the Grover frame. Throws PhysicsError unless the state is a
/// one-photon-per-arm pre-chip state.
Matrix16c box_cluster(const MixedState& state);

/// Enumerates all tags and 16 outcomes on the ideal box cluster. Throws
/// PhysicsError if some readout is not deterministic or the corrections are
/// tag dependent.
FeedforwardMap derive_feedforward_map();

/// Box-frame measurement of qubit g (0-based) for `tag`.
LocalBasis box_basis(int g, const GroverTag& tag);

/// Register-order bases the apparatus uses: U^dag applied to the box-frame
/// bases, re-encoded with H = |0>.
LocalBases physical_bases(const GroverTag& tag);

/// Runs the one-way search on a pre-chip state through the apparatus (counts
/// with efficiencies and accidentals, estimate subtracted). Throws
/// PhysicsError for non-positive shots.
GroverResult run_grover(const MixedState& state, const GroverRun& run, const SourceConfig& cfg);

/// Exact readout distribution on a Grover-frame density matrix of the box
/// cluster: returns success and retained fraction without apparatus noise.
GroverResult ideal_grover(const Matrix16c& box_rho, const GroverTag& tag, GroverMode mode);

/// Mean coincidence efficiency of the two correlated path pairs.
Real pair_efficiency(const EfficiencyTable& eff);

/// Retained-coincidence rate: brightness x pair efficiency x retained fraction.
/// Zero brightness gives 0; negative brightness throws PhysicsError.
Real protocol_rate(const GroverResult& result, Real brightness_hz, const EfficiencyTable& eff);

}  // namespace hyperchip
