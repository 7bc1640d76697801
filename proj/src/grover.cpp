#include "hyperchip/grover.hpp"

#include <algorithm>
#include <cmath>

namespace hyperchip {

namespace {

constexpr std::uint64_t kGroverStream = 0x6e0000ULL;

bool is_polarization(Qubit q) { return q == Qubit::pol_A || q == Qubit::pol_B; }

// Register index of the Grover-frame basis state g.
int register_index(int g) {
  int r = 0;
  for (int k = 0; k < 4; ++k) {
    int bit = (g >> (3 - k)) & 1;
    const Qubit q = kGroverQubits[static_cast<std::size_t>(k)];
    if (is_polarization(q)) bit ^= 1;  // V = |0> in the Grover frame
    r |= bit << (3 - static_cast<int>(q));
  }
  return r;
}

int grover_bit(int register_outcome, int g) {
  return outcome_bit(register_outcome, kGroverQubits[static_cast<std::size_t>(g)]);
}

Matrix2c local_box_unitary(int g) {
  switch (g) {
    case 0: return pauli::x() * pauli::hadamard();
    case 2: return pauli::z() * pauli::hadamard();
    default: return pauli::hadamard();
  }
}

Vector2c phase_ket(int bit) {
  const Real s = 1.0 / std::sqrt(2.0);
  return Vector2c(s, bit ? -s : s);
}

// Probabilities of the 16 box-frame outcomes (bit k = qubit k + 1, MSB first).
std::array<Real, 16> box_outcome_probabilities(const Matrix16c& rho, const GroverTag& tag) {
  std::array<Vector2c, 4> zero;
  std::array<Vector2c, 4> one;
  for (int g = 0; g < 4; ++g) {
    const LocalBasis b = box_basis(g, tag);
    zero[static_cast<std::size_t>(g)] = b.zero;
    one[static_cast<std::size_t>(g)] = b.one();
  }
  std::array<Real, 16> p{};
  for (int o = 0; o < 16; ++o) {
    Vector16c v = Vector16c::Ones();
    for (int i = 0; i < 16; ++i)
      for (int g = 0; g < 4; ++g) {
        const int out_bit = (o >> (3 - g)) & 1;
        const int in_bit = (i >> (3 - g)) & 1;
        const Vector2c& ket = out_bit ? one[static_cast<std::size_t>(g)] : zero[static_cast<std::size_t>(g)];
        v(i) *= ket(in_bit);
      }
    p[static_cast<std::size_t>(o)] = (v.adjoint() * rho * v)(0, 0).real();
  }
  return p;
}

struct Tally {
  std::array<Real, 4> histogram{};
  Real retained = 0.0;
  Real detected = 0.0;
};

void add_outcome(Tally& t, int s1, int r2, int r3, int s4, Real weight, GroverMode mode,
                 const FeedforwardMap& map) {
  t.detected += weight;
  const int byproduct = s1 * 2 + s4;
  if (mode == GroverMode::postselect && byproduct != 0) return;
  const auto& f = map.flip[static_cast<std::size_t>(byproduct)];
  const int item = (r2 ^ f[0]) * 2 + (r3 ^ f[1]);
  t.histogram[static_cast<std::size_t>(item)] += weight;
  t.retained += weight;
}

GroverResult summarize(const Tally& t, const GroverTag& tag, GroverMode mode, int expected_item) {
  GroverResult r;
  r.tag = tag;
  r.mode = mode;
  r.histogram = t.histogram;
  r.expected_item = expected_item;
  r.retained_counts = t.retained;
  r.detected_counts = t.detected;
  r.retained_fraction = t.detected > 0.0 ? t.retained / t.detected : 0.0;
  if (t.retained > 0.0) {
    const Real s = std::clamp(t.histogram[static_cast<std::size_t>(expected_item)] / t.retained, 0.0, 1.0);
    r.success = {s, std::sqrt(std::max(0.0, s * (1.0 - s)) / t.retained)};
  }
  return r;
}

const FeedforwardMap& cached_map() {
  static const FeedforwardMap map = derive_feedforward_map();
  return map;
}

}  // namespace

bool FeedforwardMap::is_xor() const {
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s4 = 0; s4 < 2; ++s4)
      for (int k = 0; k < 2; ++k) {
        const int lin = (s1 * flip[2][static_cast<std::size_t>(k)]) ^ (s4 * flip[1][static_cast<std::size_t>(k)]);
        if (flip[static_cast<std::size_t>(s1 * 2 + s4)][static_cast<std::size_t>(k)] != lin) return false;
      }
  return true;
}

Matrix16c to_grover_frame(const Matrix16c& register_rho) {
  Matrix16c out;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) out(a, b) = register_rho(register_index(a), register_index(b));
  return out;
}

Matrix16c box_transform() {
  const Matrix4c u12 = kron(local_box_unitary(0), local_box_unitary(1));
  const Matrix4c u34 = kron(local_box_unitary(2), local_box_unitary(3));
  return kron(u12, u34);
}

Vector16c box_cluster_reference() {
  static constexpr std::array<std::array<int, 2>, 4> edges{{{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  Vector16c v;
  for (int i = 0; i < 16; ++i) {
    int parity = 0;
    for (const auto& e : edges) parity ^= ((i >> (3 - e[0])) & 1) & ((i >> (3 - e[1])) & 1);
    v(i) = parity ? -0.25 : 0.25;
  }
  return v;
}

Matrix16c box_cluster(const MixedState& state) {
  const Matrix16c u = box_transform();
  return u * to_grover_frame(qubit_density_matrix(state)) * u.adjoint();
}

LocalBasis box_basis(int g, const GroverTag& tag) {
  switch (g) {
    case 0: return LocalBasis::from_ket(phase_ket(tag.alpha_bit));
    case 3: return LocalBasis::from_ket(phase_ket(tag.beta_bit));
    default: return LocalBasis::x();
  }
}

LocalBases physical_bases(const GroverTag& tag) {
  LocalBases out;
  for (int g = 0; g < 4; ++g) {
    Vector2c ket = local_box_unitary(g).adjoint() * box_basis(g, tag).zero;
    const Qubit q = kGroverQubits[static_cast<std::size_t>(g)];
    if (is_polarization(q)) std::swap(ket(0), ket(1));
    out[static_cast<std::size_t>(q)] = LocalBasis::from_ket(ket);
  }
  return out;
}

FeedforwardMap derive_feedforward_map() {
  const Vector16c box = box_cluster_reference();
  const Matrix16c rho = box * box.adjoint();
  FeedforwardMap map;
  std::array<std::array<int, 4>, 4> readout{};  // [tag][byproduct] -> item
  for (int t = 0; t < 4; ++t) {
    const auto p = box_outcome_probabilities(rho, GroverTag::from_index(t));
    for (int byproduct = 0; byproduct < 4; ++byproduct) {
      const int s1 = byproduct >> 1;
      const int s4 = byproduct & 1;
      Real total = 0.0;
      int found = -1;
      for (int item = 0; item < 4; ++item) {
        const int o = (s1 << 3) | ((item >> 1) << 2) | ((item & 1) << 1) | s4;
        const Real q = p[static_cast<std::size_t>(o)];
        total += q;
        if (q > 1e-12) {
          if (found >= 0) throw PhysicsError("readout is not deterministic for this oracle");
          found = item;
        }
      }
      if (found < 0 || std::abs(total - 0.25) > 1e-12)
        throw PhysicsError("byproduct outcome probabilities are not uniform");
      readout[static_cast<std::size_t>(t)][static_cast<std::size_t>(byproduct)] = found;
    }
    map.item_of_tag[static_cast<std::size_t>(t)] = readout[static_cast<std::size_t>(t)][0];
  }
  for (int byproduct = 0; byproduct < 4; ++byproduct) {
    const int f = readout[0][static_cast<std::size_t>(byproduct)] ^ map.item_of_tag[0];
    for (int t = 1; t < 4; ++t)
      if ((readout[static_cast<std::size_t>(t)][static_cast<std::size_t>(byproduct)] ^
           map.item_of_tag[static_cast<std::size_t>(t)]) != f)
        throw PhysicsError("readout correction depends on the oracle");
    map.flip[static_cast<std::size_t>(byproduct)] = {f >> 1, f & 1};
  }
  return map;
}

GroverResult ideal_grover(const Matrix16c& box_rho, const GroverTag& tag, GroverMode mode) {
  const FeedforwardMap& map = cached_map();
  const auto p = box_outcome_probabilities(box_rho, tag);
  Tally t;
  for (int o = 0; o < 16; ++o)
    add_outcome(t, (o >> 3) & 1, (o >> 2) & 1, (o >> 1) & 1, o & 1, p[static_cast<std::size_t>(o)],
                mode, map);
  return summarize(t, tag, mode, map.item_of_tag[static_cast<std::size_t>(tag.index())]);
}

GroverResult run_grover(const MixedState& state, const GroverRun& run, const SourceConfig& cfg) {
  if (!(run.shots > 0.0)) throw PhysicsError("shots must be positive");
  const FeedforwardMap& map = cached_map();
  std::optional<std::uint64_t> seed;
  if (run.sample) seed = derive_seed(run.seed, kGroverStream + static_cast<std::uint64_t>(run.tag.index()));
  const auto counts = outcome_counts(state, physical_bases(run.tag), run.shots, cfg, seed);
  const Real background = cfg.accidental_rate_hz * run.shots / cfg.pair_rate_hz;
  Tally t;
  for (int o = 0; o < kOutcomes; ++o) {
    const Real net = counts[static_cast<std::size_t>(o)] - background;  // unclamped, see witness
    add_outcome(t, grover_bit(o, 0), grover_bit(o, 1), grover_bit(o, 2), grover_bit(o, 3), net,
                run.mode, map);
  }
  return summarize(t, run.tag, run.mode, map.item_of_tag[static_cast<std::size_t>(run.tag.index())]);
}

Real pair_efficiency(const EfficiencyTable& eff) {
  return 0.5 * (efficiency(eff, Arm::A, Spatial::r) * efficiency(eff, Arm::B, Spatial::ell) +
                efficiency(eff, Arm::A, Spatial::ell) * efficiency(eff, Arm::B, Spatial::r));
}

Real protocol_rate(const GroverResult& result, Real brightness_hz, const EfficiencyTable& eff) {
  if (brightness_hz < 0.0) throw PhysicsError("brightness must be non-negative");
  return brightness_hz * pair_efficiency(eff) * result.retained_fraction;
}

}  // namespace hyperchip
