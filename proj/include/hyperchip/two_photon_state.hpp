#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hyperchip/modes.hpp"
#include "hyperchip/types.hpp"

namespace hyperchip {

/// Unordered pair of single-photon modes; `first <= second` once canonical.
using ModePair = std::pair<ModeLabel, ModeLabel>;
using Amplitudes = std::map<ModePair, Complex>;

using Matrix16cSym = Eigen::Matrix<Complex, kModesPerStage, kModesPerStage>;

/// Merges (a, b) / (b, a) entries into the canonical ordering and drops
/// numerically zero amplitudes. Idempotent.
Amplitudes canonicalize(const Amplitudes& amplitudes);

/// Two-photon pure state in second quantization.
///
/// An entry c for the unordered pair {i, j} stands for c a_i^dag a_j^dag |0>
/// when i != j and for c (a_i^dag)^2 / sqrt(2) |0> when i == j, so |c|^2 is
/// directly the probability of finding that pair. The sqrt(2) only shows up
/// when converting to the symmetric matrix used for evolution.
class TwoPhotonState {
 public:
  /// Canonicalizes and normalizes. Throws PhysicsError if the amplitudes mix
  /// pre- and post-chip labels or have zero norm.
  TwoPhotonState(Stage stage, const Amplitudes& amplitudes);

  Stage stage() const { return stage_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }

  Complex amplitude(const ModeLabel& a, const ModeLabel& b) const;
  Real norm_squared() const;

  /// Symmetric S with |psi> = 1/2 sum_ij S_ij a_i^dag a_j^dag |0>.
  Matrix16cSym symmetric_matrix() const;

  /// Inverse of symmetric_matrix(); the result is renormalized.
  static TwoPhotonState from_symmetric_matrix(Stage stage, const Matrix16cSym& s);

  /// Same as from_symmetric_matrix() but reports the norm before
  /// renormalizing, for lossy (post-selecting) operations.
  static std::pair<TwoPhotonState, Real> from_symmetric_matrix_lossy(Stage stage,
                                                                     const Matrix16cSym& s);

 private:
  Stage stage_;
  Amplitudes amplitudes_;
};

/// Convenience: a_first^dag a_second^dag |0>.
TwoPhotonState product_state(const ModeLabel& first, const ModeLabel& second);

struct WeightedState {
  Real weight;
  TwoPhotonState state;
};

/// Classical mixture of two-photon states sharing one stage.
class MixedState {
 public:
  explicit MixedState(TwoPhotonState pure);
  /// Weights must be non-negative and sum to 1 within 1e-12.
  explicit MixedState(std::vector<WeightedState> components);

  const std::vector<WeightedState>& components() const { return components_; }
  Stage stage() const { return components_.front().state.stage(); }
  std::size_t size() const { return components_.size(); }

  /// Mixes two ensembles: p * a + (1 - p) * b.
  static MixedState mix(Real p, const MixedState& a, const MixedState& b);

 private:
  std::vector<WeightedState> components_;
};

}  // namespace hyperchip
