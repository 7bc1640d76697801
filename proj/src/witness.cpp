#include "hyperchip/witness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperchip {

namespace {

constexpr std::uint64_t kStabilizerStream = 0x57ab0000ULL;

bool is_path(Qubit q) { return q == Qubit::path_A || q == Qubit::path_B; }

Matrix2c local_operator(char op) {
  switch (std::toupper(static_cast<unsigned char>(op))) {
    case 'I': return pauli::identity();
    case 'X': return pauli::x();
    case 'Y': return pauli::y();
    case 'Z': return pauli::z();
  }
  throw std::invalid_argument(std::string("unknown local operator '") + op + "'");
}

StabilizerSpec parse_factors(std::string_view text) {
  StabilizerSpec spec;
  std::array<bool, kQubits> seen{};
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok.size() != 3 || tok[1] != '_' || (tok[2] != 'A' && tok[2] != 'B'))
      throw std::invalid_argument("malformed stabilizer factor '" + tok + "'");
    const char op = tok[0];
    const bool path = std::islower(static_cast<unsigned char>(op)) != 0;
    const int arm = tok[2] == 'A' ? 0 : 1;
    const int q = arm * 2 + (path ? 1 : 0);
    if (seen[static_cast<std::size_t>(q)])
      throw std::invalid_argument("stabilizer factor '" + tok + "' repeats a qubit");
    seen[static_cast<std::size_t>(q)] = true;
    spec.ops[static_cast<std::size_t>(q)] = op;
  }
  return spec;
}

}  // namespace

StabilizerSpec StabilizerSpec::parse(std::string_view text) {
  StabilizerSpec spec;
  if (text.size() == kQubits && text.find(' ') == std::string_view::npos &&
      text.find('_') == std::string_view::npos) {
    for (std::size_t i = 0; i < kQubits; ++i) spec.ops[i] = text[i];
  } else {
    spec = parse_factors(text);
  }
  spec.validate();
  return spec;
}

void StabilizerSpec::validate() const {
  bool nontrivial = false;
  for (int q = 0; q < kQubits; ++q) {
    const char op = ops[static_cast<std::size_t>(q)];
    const bool path = is_path(static_cast<Qubit>(q));
    const std::string_view allowed = path ? "ixyz" : "IXYZ";
    if (allowed.find(op) == std::string_view::npos)
      throw std::invalid_argument(std::string("operator '") + op + "' not allowed on " +
                                  (path ? "a path" : "a polarization") + " qubit");
    nontrivial = nontrivial || (op != 'I' && op != 'i');
  }
  if (!nontrivial) throw std::invalid_argument("stabilizer is the identity");
}

std::string StabilizerSpec::label() const {
  // Polarization factors first, then path, A before B.
  static constexpr std::array<int, 4> order{0, 2, 1, 3};
  std::string out;
  for (int q : order) {
    const char op = ops[static_cast<std::size_t>(q)];
    if (op == 'I' || op == 'i') continue;
    if (!out.empty()) out += ' ';
    out += op;
    out += '_';
    out += q < 2 ? 'A' : 'B';
  }
  return out;
}

bool StabilizerSpec::acts_on(Qubit q) const {
  const char op = ops[static_cast<std::size_t>(q)];
  return op != 'I' && op != 'i';
}

LocalBasis StabilizerSpec::basis(Qubit q) const {
  switch (std::toupper(static_cast<unsigned char>(ops[static_cast<std::size_t>(q)]))) {
    case 'X': return LocalBasis::x();
    case 'Y': return LocalBasis::y();
    default: return LocalBasis::z();
  }
}

std::array<Real, kOutcomes> outcome_counts(const MixedState& state, const LocalBases& bases,
                                           Real shots, const SourceConfig& cfg,
                                           std::optional<std::uint64_t> seed) {
  if (!(shots > 0.0)) throw PhysicsError("shots must be positive");
  if (state.stage() != Stage::pre_chip)
    throw PhysicsError("the analysis stage expects the state in front of the chip");
  const LossyResult lossy = attenuate(state, cfg.efficiencies);
  const auto probs = outcome_probabilities(lossy.state, bases);
  const Real background = cfg.accidental_rate_hz * shots / cfg.pair_rate_hz;
  std::optional<std::mt19937_64> rng;
  if (seed) rng = std::mt19937_64(*seed);
  std::array<Real, kOutcomes> out{};
  for (std::size_t o = 0; o < out.size(); ++o) {
    const Real mean = shots * lossy.survival * probs[o] + background;
    out[o] = rng ? static_cast<Real>(sample_poisson(mean, *rng)) : mean;
  }
  return out;
}

StabilizerMeasurement measure_stabilizer(const MixedState& state, const StabilizerSpec& spec,
                                         Real shots, const SourceConfig& cfg,
                                         std::optional<std::uint64_t> seed) {
  spec.validate();
  LocalBases bases;
  for (int q = 0; q < kQubits; ++q)
    bases[static_cast<std::size_t>(q)] = spec.basis(static_cast<Qubit>(q));

  StabilizerMeasurement out;
  out.spec = spec;
  out.counts = outcome_counts(state, bases, shots, cfg, seed);
  out.accidentals_per_outcome = cfg.accidental_rate_hz * shots / cfg.pair_rate_hz;
  // Net counts are not clamped: a negative net count is an honest
  // fluctuation and clamping would bias the parity towards zero.
  std::array<int, kOutcomes> sign{};
  Real signed_sum = 0.0;
  for (int o = 0; o < kOutcomes; ++o) {
    const Real net = out.counts[static_cast<std::size_t>(o)] - out.accidentals_per_outcome;
    int parity = 0;
    for (int q = 0; q < kQubits; ++q)
      if (spec.acts_on(static_cast<Qubit>(q))) parity ^= outcome_bit(o, static_cast<Qubit>(q));
    sign[static_cast<std::size_t>(o)] = parity ? -1 : 1;
    out.total_counts += net;
    signed_sum += parity ? -net : net;
  }
  if (!(out.total_counts > 0.0)) throw PhysicsError("no coincidences above background");
  const Real e = std::clamp(signed_sum / out.total_counts, -1.0, 1.0);
  // Poisson propagation on the raw counts (background included).
  Real var = 0.0;
  for (std::size_t o = 0; o < sign.size(); ++o) var += out.counts[o] * (sign[o] - e) * (sign[o] - e);
  out.expectation = {e, std::sqrt(var) / out.total_counts};
  return out;
}

Real exact_expectation(const Matrix16c& rho, const StabilizerSpec& spec) {
  spec.validate();
  const Matrix4c a = kron(local_operator(spec.ops[0]), local_operator(spec.ops[1]));
  const Matrix4c b = kron(local_operator(spec.ops[2]), local_operator(spec.ops[3]));
  const Matrix16c op = kron(a, b);
  return (op * rho).trace().real();
}

const std::array<StabilizerSpec, 6>& witness_stabilizers() {
  static const std::array<StabilizerSpec, 6> specs{
      StabilizerSpec::parse("Z_A Z_B"),     StabilizerSpec::parse("Z_A x_A x_B"),
      StabilizerSpec::parse("X_A X_B z_A"), StabilizerSpec::parse("z_A z_B"),
      StabilizerSpec::parse("Z_B x_A x_B"), StabilizerSpec::parse("X_A X_B z_B")};
  return specs;
}

const std::array<Expectation, 6>& table1_expectations() {
  static const std::array<Expectation, 6> values{{{+0.940, 0.028},
                                                  {+0.8092, 0.036},
                                                  {-0.860, 0.030},
                                                  {-0.990, 0.007},
                                                  {+0.8081, 0.035},
                                                  {+0.860, 0.030}}};
  return values;
}

WitnessReport witness(const std::array<Expectation, 6>& expectations) {
  WitnessReport r;
  r.terms = expectations;
  Real w = 4.0;
  Real var = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    const Real e = expectations[k].value;
    if (!std::isfinite(e) || e < -1.0 - 1e-12 || e > 1.0 + 1e-12)
      throw PhysicsError("stabilizer expectation outside [-1, 1]");
    w += kWitnessSigns[k] * e;
    var += expectations[k].sigma * expectations[k].sigma;
  }
  r.w = {w / 2.0, std::sqrt(var) / 2.0};
  r.fidelity_bound = {(1.0 - r.w.value) / 2.0, r.w.sigma / 2.0};
  return r;
}

WitnessReport measure_witness(const MixedState& state, Real shots_per_term, const SourceConfig& cfg,
                              std::optional<std::uint64_t> seed, unsigned threads) {
  const auto& specs = witness_stabilizers();
  std::array<Expectation, 6> terms;
  parallel_for(specs.size(), threads, [&](std::size_t k) {
    std::optional<std::uint64_t> s;
    if (seed) s = derive_seed(*seed, kStabilizerStream + k);
    terms[k] = measure_stabilizer(state, specs[k], shots_per_term, cfg, s).expectation;
  });
  return witness(terms);
}

}  // namespace hyperchip
