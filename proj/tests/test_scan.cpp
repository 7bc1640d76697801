#include "doctest.h"

#include "hyperchip/fit.hpp"
#include "hyperchip/scan.hpp"

using namespace hyperchip;

namespace {

ScanOptions expectation() {
  ScanOptions o;
  o.sample = false;
  return o;
}

const std::vector<Real>& grid() {
  static const std::vector<Real> d = delay_grid(-80.0, 80.0, 81);
  return d;
}

}  // namespace

TEST_CASE("ideal HOM visibility is 1 on both splitters") {
  const SourceConfig cfg = SourceConfig::ideal();
  for (Arm a : {Arm::A, Arm::B}) {
    const ScanResult r = hom_scan(cfg, a, grid(), 1e6, expectation());
    CHECK(r.is_dip());
    CHECK(std::abs(r.visibility - 1.0) < 1e-9);
    CHECK(std::abs(r.fit.center) < 1e-6);
  }
}

TEST_CASE("ideal HE scan: (0,0) and (pi,pi) dip, the others peak") {
  const auto scans = he_scan(SourceConfig::ideal(), grid(), 1e6, expectation());
  const bool dips[4] = {true, false, false, true};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(scans[k].is_dip() == dips[k]);
    CHECK(std::abs(scans[k].visibility - 1.0) < 1e-9);
  }
}

TEST_CASE("path scan width follows the filter") {
  const auto scans = path_scan(SourceConfig::ideal(), grid(), 1e6, expectation());
  CHECK(scans[0].is_dip());
  CHECK_FALSE(scans[1].is_dip());
  // single-photon overlap enters linearly here (HOM goes as O^2)
  CHECK(scans[0].fit.width == doctest::Approx(coherence_sigma_from_filter(710.0, 10.0)).epsilon(1e-4));
  const ScanResult hom = hom_scan(SourceConfig::ideal(), Arm::A, grid(), 1e6, expectation());
  CHECK(hom.fit.width == doctest::Approx(coherence_sigma_from_filter(710.0, 10.0) / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("visibility falls as the noise grows") {
  Real last_he = 2.0;
  Real last_path = 2.0;
  for (Real v : {1.0, 0.95, 0.9, 0.8}) {
    SourceConfig cfg = SourceConfig::ideal();
    cfg.path_visibility = v;
    const Real he = he_scan(cfg, grid(), 1e6, expectation())[0].visibility;
    const Real path = path_scan(cfg, grid(), 1e6, expectation())[0].visibility;
    CHECK(he <= last_he + 1e-12);
    CHECK(path <= last_path + 1e-12);
    CHECK(path == doctest::Approx(v).epsilon(1e-6));
    last_he = he;
    last_path = path;
  }
  Real last = 2.0;
  for (Real p : {0.0, 0.02, 0.05, 0.1}) {
    SourceConfig cfg = SourceConfig::ideal();
    cfg.pol_depolarization = p;
    const Real he = he_scan(cfg, grid(), 1e6, expectation())[0].visibility;
    CHECK(he <= last + 1e-12);
    last = he;
  }
}

TEST_CASE("accidental subtraction raises the HOM visibility") {
  const SourceConfig cfg = SourceConfig::calibrated();
  for (Arm a : {Arm::A, Arm::B}) {
    const ScanResult r = hom_scan(cfg, a, grid(), 1e6, expectation());
    CHECK(r.visibility_net > r.visibility);
  }
}

TEST_CASE("sampled scans are seed-deterministic and thread-independent") {
  ScanOptions o;
  o.seed = 7;
  o.mc_resamples = 20;
  const ScanResult a = hom_scan(SourceConfig::calibrated(), Arm::A, grid(), 5e4, o);
  o.threads = 3;
  const ScanResult b = hom_scan(SourceConfig::calibrated(), Arm::A, grid(), 5e4, o);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].raw_counts == b.records[i].raw_counts);
  CHECK(a.visibility == b.visibility);
  CHECK(a.visibility_sigma == b.visibility_sigma);
}

TEST_CASE("envelope fit recovers a synthetic dip") {
  std::vector<Real> x, y;
  for (Real v : delay_grid(-60, 60, 61)) {
    x.push_back(v);
    y.push_back(1000.0 * (1.0 - 0.8 * std::exp(-(v - 2.0) * (v - 2.0) / (2.0 * 9.0 * 9.0))));
  }
  const EnvelopeFit f = fit_envelope(x, y);
  CHECK(f.converged);
  CHECK(f.center == doctest::Approx(2.0));
  CHECK(f.width == doctest::Approx(9.0));
  CHECK(visibility(f) == doctest::Approx(0.8));
  CHECK_THROWS_AS(fit_envelope(std::vector<Real>{1, 2}, std::vector<Real>{1, 2}), PhysicsError);
}

TEST_CASE("scan preconditions") {
  CHECK_THROWS_AS(hom_scan(SourceConfig::ideal(), Arm::A, {}, 1e3, expectation()), PhysicsError);
  CHECK_THROWS_AS(hom_scan(SourceConfig::ideal(), Arm::A, grid(), 0.0, expectation()), PhysicsError);
}
