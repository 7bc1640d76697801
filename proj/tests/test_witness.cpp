#include "doctest.h"
#include "support.hpp"

#include "hyperchip/grover.hpp"
#include "hyperchip/witness.hpp"

using namespace hyperchip;

namespace {

// Register-order (pi_A, k_A, pi_B, k_B) density matrix from a direct
// construction of the ideal cluster: (|Phi+>|r_A ell_B> + |Phi->|ell_A r_B>)/sqrt2.
Vector16c cluster_vector() {
  Vector16c v = Vector16c::Zero();
  auto idx = [](int pa, int ka, int pb, int kb) { return (pa << 3) | (ka << 2) | (pb << 1) | kb; };
  const Real h = 0.5;
  v(idx(0, 1, 0, 0)) = h;   // H r_A, H ell_B
  v(idx(1, 1, 1, 0)) = h;   // V V
  v(idx(0, 0, 0, 1)) = h;   // ell_A r_B branch
  v(idx(1, 0, 1, 1)) = -h;
  return v;
}

}  // namespace

TEST_CASE("stabilizer parsing") {
  const StabilizerSpec a = StabilizerSpec::parse("X_A X_B z_A");
  CHECK(a.compact() == "XzXi");
  CHECK(StabilizerSpec::parse("XzXi") == a);
  // the paper's other spelling of the same term
  CHECK(StabilizerSpec::parse("X_A z_A X_B") == a);
  CHECK_THROWS_AS(StabilizerSpec::parse("Q_A"), std::invalid_argument);
  CHECK_THROWS_AS(StabilizerSpec::parse("IiIi"), std::invalid_argument);
}

TEST_CASE("ideal cluster: stabilizers give W = -1") {
  const MixedState c = emit_cluster(SourceConfig::ideal());
  const Matrix16c rho = qubit_density_matrix(c);
  const Vector16c v = cluster_vector();
  CHECK(std::abs((v.adjoint() * rho * v)(0, 0).real() - 1.0) < 1e-12);
  std::array<Expectation, 6> e;
  for (std::size_t k = 0; k < 6; ++k) {
    e[k].value = exact_expectation(rho, witness_stabilizers()[k]);
    CHECK(std::abs(std::abs(e[k].value) - 1.0) < 1e-12);
    CHECK(e[k].value * kWitnessSigns[k] < 0.0);  // every term pulls W down
  }
  CHECK(std::abs(witness(e).w.value + 1.0) < 1e-12);
  CHECK(std::abs(witness(e).fidelity_bound.value - 1.0) < 1e-12);

  // the simulated apparatus agrees on expected counts
  const WitnessReport r = measure_witness(c, 1e6, SourceConfig::ideal(), std::nullopt);
  CHECK(std::abs(r.w.value + 1.0) < 1e-12);
}

TEST_CASE("published expectation values") {
  const WitnessReport r = witness(table1_expectations());
  CHECK(r.w.value == doctest::Approx(-0.634).epsilon(0.0015));
  CHECK(std::abs(r.w.value + 0.634) < 1e-3);
  CHECK(std::abs(r.fidelity_bound.value - 0.817) < 1e-3);
  CHECK(r.w.sigma == doctest::Approx(0.036).epsilon(0.02));
}

TEST_CASE("fully mixed state: W = 2") {
  std::array<Expectation, 6> zero{};
  CHECK(witness(zero).w.value == doctest::Approx(2.0));
  std::array<Expectation, 6> bad{};
  bad[2].value = 1.5;
  CHECK_THROWS_AS(witness(bad), PhysicsError);
}

TEST_CASE("expectations of random states stay in [-1, 1]") {
  std::mt19937_64 rng(3);
  std::normal_distribution<Real> g;
  for (int k = 0; k < 1000; ++k) {
    Eigen::Matrix<Complex, 16, 3> z;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 3; ++j) z(i, j) = Complex(g(rng), g(rng));
    Matrix16c rho = z * z.adjoint();
    rho /= rho.trace();
    for (const auto& s : witness_stabilizers()) {
      const Real e = exact_expectation(rho, s);
      CHECK(e >= -1.0 - 1e-12);
      CHECK(e <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("witness rises with polarization noise") {
  Real last = -2.0;
  for (Real p : {0.0, 0.05, 0.1, 0.2}) {
    SourceConfig cfg = SourceConfig::ideal();
    cfg.pol_depolarization = p;
    const Real w = measure_witness(emit_cluster(cfg), 1e6, cfg, std::nullopt).w.value;
    CHECK(w >= last - 1e-12);
    last = w;
  }
}

TEST_CASE("sampled witness is thread-independent") {
  const SourceConfig cfg = SourceConfig::calibrated();
  const MixedState c = emit_cluster(cfg);
  const WitnessReport a = measure_witness(c, 1e5, cfg, 9, 1);
  const WitnessReport b = measure_witness(c, 1e5, cfg, 9, 4);
  CHECK(a.w.value == b.w.value);
  CHECK(a.w.sigma == b.w.sigma);
}
