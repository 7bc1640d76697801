#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "hyperchip/tomography.hpp"

using namespace hyperchip;

namespace {

Matrix4c projector(const Vector4c& v) { return v * v.adjoint(); }

const ExperimentRecord& find(const std::vector<TomographySetting>& s, const std::vector<ExperimentRecord>& r,
                             Analyzer a, Analyzer b) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i].first == a && s[i].second == b) return r[i];
  throw std::logic_error("setting not found");
}

}  // namespace

TEST_CASE("16 standard settings, 36 overcomplete") {
  CHECK(standard_settings(PathPair::rA_ellB).size() == 16);
  CHECK(overcomplete_settings(PathPair::rA_ellB).size() == 36);
}

TEST_CASE("Bell-state count oracles") {
  const auto s = standard_settings(PathPair::rA_ellB);
  const Real shots = 1e5;
  const auto plus = simulate_counts(projector(bell_state(BellState::phi_plus)), s, shots, 1, false);
  CHECK(find(s, plus, Analyzer::H, Analyzer::H).expected_counts() == doctest::Approx(shots / 2));
  CHECK(find(s, plus, Analyzer::H, Analyzer::V).expected_counts() == doctest::Approx(0.0));
  CHECK(find(s, plus, Analyzer::D, Analyzer::D).expected_counts() == doctest::Approx(shots / 2));
  const auto minus = simulate_counts(projector(bell_state(BellState::phi_minus)), s, shots, 1, false);
  CHECK(find(s, minus, Analyzer::D, Analyzer::D).expected_counts() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(find(s, minus, Analyzer::R, Analyzer::D).expected_counts() == doctest::Approx(shots / 4));
}

TEST_CASE("figures of merit on known states") {
  for (BellState b : {BellState::phi_plus, BellState::phi_minus, BellState::psi_plus, BellState::psi_minus}) {
    const DensityMatrix2Q rho = DensityMatrix2Q::pure(bell_state(b));
    CHECK(concurrence(rho) == doctest::Approx(1.0));
    CHECK(fidelity(rho, bell_state(b)) == doctest::Approx(1.0));
  }
  // Werner: C = max(0, (3p - 1) / 2)
  for (Real p : {0.1, 0.4, 0.7, 1.0}) {
    const Matrix4c w = p * projector(bell_state(BellState::psi_minus)) + (1 - p) * Matrix4c::Identity() / 4.0;
    CHECK(concurrence<Real>(w) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)));
  }
  Vector4c hh = Vector4c::Zero();
  hh(0) = 1.0;
  CHECK(concurrence(DensityMatrix2Q::pure(hh)) == doctest::Approx(0.0));
  CHECK(fidelity(DensityMatrix2Q::pure(hh), bell_state(BellState::phi_plus)) == doctest::Approx(0.5));
}

TEST_CASE("density matrix validation") {
  Matrix4c bad = Matrix4c::Identity() / 4.0;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix2Q{bad}, PhysicsError);
  CHECK_THROWS_AS(DensityMatrix2Q{Matrix4c::Identity()}, PhysicsError);
}

TEST_CASE("round trip of random states, expected counts") {
  std::mt19937_64 rng(11);
  const auto s = standard_settings(PathPair::rA_ellB);
  Real worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Matrix4c rho = testing::random_density(rng, 1 + k % 4);
    const Reconstruction rec = reconstruct(simulate_counts(rho, s, 1e6, 1, false));
    worst = std::max(worst, trace_distance(rec.rho.matrix(), rho));
    CHECK(rec.rho.min_eigenvalue() > -1e-12);
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("sampled reconstruction lands near the truth") {
  std::mt19937_64 rng(5);
  const Matrix4c rho = testing::random_density(rng);
  const Reconstruction rec = reconstruct(simulate_counts(rho, standard_settings(PathPair::rA_ellB), 1e6, 3));
  CHECK(rec.converged);
  CHECK(trace_distance(rec.rho.matrix(), rho) < 0.01);
}

TEST_CASE("incomplete settings are rejected") {
  auto s = standard_settings(PathPair::rA_ellB);
  s.resize(10);
  const auto r = simulate_counts(Matrix4c(Matrix4c::Identity() / 4.0), s, 1e4, 1, false);
  CHECK_THROWS_AS(linear_inversion(r), PhysicsError);
}

TEST_CASE("cluster branches carry Phi+ and Phi-") {
  const MixedState c = emit_cluster(SourceConfig::ideal());
  CHECK(fidelity<Real>(branch_polarization(c, PathPair::rA_ellB), bell_state(BellState::phi_plus)) ==
        doctest::Approx(1.0));
  CHECK(fidelity<Real>(branch_polarization(c, PathPair::ellA_rB), bell_state(BellState::phi_minus)) ==
        doctest::Approx(1.0));
  const auto recs = simulate_counts(c, standard_settings(PathPair::ellA_rB), 1e5, SourceConfig::ideal(), 1, false);
  CHECK(fidelity(reconstruct(recs).rho, bell_state(BellState::phi_minus)) > 0.999);
}

TEST_CASE("Monte Carlo errors: at least 100 resamples, deterministic in the seed") {
  const Matrix4c rho = projector(bell_state(BellState::phi_plus)) * 0.9 + Matrix4c::Identity() * 0.025;
  const auto recs = simulate_counts(rho, standard_settings(PathPair::rA_ellB), 1e4, 2);
  CHECK_THROWS_AS(monte_carlo_errors(recs, bell_state(BellState::phi_plus), 50, 1), PhysicsError);
  const auto a = monte_carlo_errors(recs, bell_state(BellState::phi_plus), 100, 1, 1);
  const auto b = monte_carlo_errors(recs, bell_state(BellState::phi_plus), 100, 1, 3);
  CHECK(a.fidelity.sigma == b.fidelity.sigma);
  CHECK(a.concurrence.sigma == b.concurrence.sigma);
  CHECK(a.fidelity.sigma > 0.0);
}
