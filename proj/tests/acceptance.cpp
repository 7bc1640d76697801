// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
// usage: acceptance <scratch dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

#include "hyperchip/config.hpp"
#include "hyperchip/grover.hpp"
#include "hyperchip/report.hpp"
#include "hyperchip/scan.hpp"
#include "hyperchip/tomography.hpp"
#include "hyperchip/witness.hpp"

namespace fs = std::filesystem;
using namespace hyperchip;

namespace {

constexpr std::uint64_t kSeed = 20150814;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string num(Real v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool within(Real v, Real target, Real tol) { return std::abs(v - target) <= tol; }

Real seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
}

ScanOptions sampled(std::uint64_t seed) {
  ScanOptions o;
  o.seed = seed;
  o.mc_resamples = 50;
  return o;
}

ScanOptions expected() {
  ScanOptions o;
  o.sample = false;
  return o;
}

const std::vector<Real>& grid() {
  static const std::vector<Real> d = delay_grid(-80.0, 80.0, 41);
  return d;
}

// Emitted pairs per delay point for the sampled scans. Interference scans
// need more than HOM: a peak visibility is read against the low baseline
// (sigma_V ~ 0.0075 at 1e6), and the dip and peak bands only overlap on
// [0.88, 0.89], so the noise has to be well below 0.005.
constexpr Real kHomShots = 1e6;
constexpr Real kScanShots = 1e8;
// Emitted pairs per tomography setting (about 3.5 % reach the detectors).
constexpr Real kTomoShots = 1e7;

Verdict oracle() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const Real err = testing::permanent_oracle_error(1000, kSeed);
  const Real secs = seconds_since(t0);
  v.require(err < 1e-12, "max |amp - perm| = " + num(err * 1e15, 3) + "e-15 over 1000 unitaries");
  v.require(secs < 10.0, "runtime " + num(secs, 2) + " s");
  return v;
}

Verdict hom() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (Arm a : {Arm::A, Arm::B}) {
    const ScanResult r = hom_scan(SourceConfig::ideal(), a, grid(), 1e6, expected());
    v.require(std::abs(r.visibility - 1.0) < 1e-9, "ideal " + r.label + " V-1 = " + num(r.visibility - 1.0, 12));
  }
  const std::array<Real, 2> raw_target{0.976, 0.982};
  const std::array<Real, 2> net_target{0.985, 0.991};
  for (std::size_t k = 0; k < 2; ++k) {
    const Arm a = k == 0 ? Arm::A : Arm::B;
    const ScanResult r = hom_scan(SourceConfig::calibrated(), a, grid(), kHomShots, sampled(kSeed));
    v.require(within(r.visibility, raw_target[k], 0.01), r.label + " V = " + num(r.visibility));
    v.require(r.visibility_net > r.visibility && within(r.visibility_net, net_target[k], 0.01),
              "net " + num(r.visibility_net));
  }
  const Real secs = seconds_since(t0);
  v.require(secs < 30.0, "runtime " + num(secs, 2) + " s");
  return v;
}

Verdict he() {
  Verdict v;
  const bool dips[4] = {true, false, false, true};
  const auto ideal = he_scan(SourceConfig::ideal(), grid(), 1e6, expected());
  bool classes = true;
  Real worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    classes = classes && ideal[k].is_dip() == dips[k];
    worst = std::max(worst, std::abs(ideal[k].visibility - 1.0));
  }
  v.require(classes && worst < 1e-9, "ideal dip/peak/peak/dip, max |V-1| = " + num(worst, 12));
  const Real model = he_scan(SourceConfig::calibrated(), grid(), 1e6, expected())[0].visibility;
  v.require(within(model, 0.860, 0.03) && within(model, 0.93, 0.05), "model V " + num(model));
  const auto cal = he_scan(SourceConfig::calibrated(), grid(), kScanShots, sampled(kSeed));
  for (std::size_t k = 0; k < 4; ++k) {
    const bool dip = cal[k].is_dip();
    const Real target = dip ? 0.860 : 0.93;
    const Real tol = dip ? 0.03 : 0.05;
    v.require(dip == dips[k] && within(cal[k].visibility, target, tol),
              cal[k].label + (dip ? " dip " : " peak ") + num(cal[k].visibility));
  }
  return v;
}

Verdict path() {
  Verdict v;
  SourceConfig cfg = SourceConfig::calibrated();
  cfg.wavepacket.coherence_sigma_um = coherence_sigma_from_filter(710.0, 10.0);
  const auto s = path_scan(cfg, grid(), kScanShots, sampled(kSeed));
  v.require(s[0].is_dip() && within(s[0].visibility, 0.915, 0.03), "dip V = " + num(s[0].visibility));
  v.require(!s[1].is_dip() && within(s[1].visibility, 0.892, 0.03), "peak V = " + num(s[1].visibility));
  for (const auto& r : s)
    v.require(within(r.fit.width, 13.2, 0.5), r.label + " width " + num(r.fit.width, 2) + " um");
  return v;
}

// Least-squares slope of log sigma vs log shots.
Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / static_cast<Real>(x.size());
    my += std::log(y[i]) / static_cast<Real>(y.size());
  }
  Real sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

Verdict tomography() {
  Verdict v;
  std::mt19937_64 rng(kSeed);
  Real worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Matrix4c rho = testing::random_density(rng, 1 + k % 4);
    const auto recs = simulate_counts(rho, standard_settings(PathPair::rA_ellB), 1e6, 1, false);
    worst = std::max(worst, trace_distance(reconstruct(recs).rho.matrix(), rho));
  }
  v.require(worst < 1e-3, "round trip max D = " + num(worst, 6));

  const SourceConfig cfg = SourceConfig::calibrated();
  const MixedState cluster = emit_cluster(cfg);
  struct Branch {
    PathPair pair;
    BellState bell;
    const char* name;
    Real f, c;
  };
  const Branch branches[2] = {{PathPair::ellA_rB, BellState::phi_minus, "Phi-", 0.91, 0.88},
                              {PathPair::rA_ellB, BellState::phi_plus, "Phi+", 0.83, 0.91}};
  for (const auto& b : branches) {
    const auto recs = simulate_counts(cluster, standard_settings(b.pair), kTomoShots, cfg, kSeed);
    const MonteCarloErrors e = monte_carlo_errors(recs, bell_state(b.bell), 100, kSeed + 1);
    v.require(within(e.fidelity.value, b.f, 0.05), std::string("F(") + b.name + ") = " + num(e.fidelity.value));
    v.require(within(e.concurrence.value, b.c, 0.05), std::string("C(") + b.name + ") = " + num(e.concurrence.value));
  }

  // Below ~1e7 emitted pairs per setting the small eigenvalues of the
  // calibrated state sit against the positivity constraint and the spread
  // shrinks more slowly (slope ~ -0.4 at 1e5..1e7), so fit the asymptotic range.
  const std::vector<Real> shots{1e7, 1e8, 1e9};
  std::vector<Real> sigma;
  for (Real n : shots) {
    const auto recs = simulate_counts(cluster, standard_settings(PathPair::ellA_rB), n, cfg, kSeed + 7);
    sigma.push_back(monte_carlo_errors(recs, bell_state(BellState::phi_minus), 100, kSeed + 9).fidelity.sigma);
  }
  const Real slope = loglog_slope(shots, sigma);
  v.require(within(slope, -0.5, 0.1), "MC sigma slope " + num(slope, 3));
  return v;
}

Verdict witness_criterion() {
  Verdict v;
  const Matrix16c rho = qubit_density_matrix(emit_cluster(SourceConfig::ideal()));
  std::array<Expectation, 6> ideal{};
  for (std::size_t k = 0; k < 6; ++k) ideal[k].value = exact_expectation(rho, witness_stabilizers()[k]);
  const Real w_ideal = witness(ideal).w.value;
  v.require(std::abs(w_ideal + 1.0) < 1e-12, "ideal W = " + num(w_ideal, 12));

  const WitnessReport t1 = witness(table1_expectations());
  v.require(within(t1.w.value, -0.634, 0.001), "Table 1 W = " + num(t1.w.value));
  v.require(within(t1.fidelity_bound.value, 0.817, 0.001), "bound = " + num(t1.fidelity_bound.value));

  const SourceConfig cfg = SourceConfig::calibrated();
  const WitnessReport sim = measure_witness(emit_cluster(cfg), 1e6, cfg, kSeed);
  for (std::size_t k = 0; k < 6; ++k) {
    const Expectation& ref = table1_expectations()[k];
    v.require(within(sim.terms[k].value, ref.value, 3.0 * ref.sigma),
              witness_stabilizers()[k].label() + " " + num(sim.terms[k].value, 3));
  }
  v.require(true, "simulated W = " + num(sim.w.value, 3));
  return v;
}

Verdict grover() {
  Verdict v;
  const FeedforwardMap map = derive_feedforward_map();
  v.require(map.is_xor(), "relabeling is XOR");
  const Matrix16c box = box_cluster(emit_cluster(SourceConfig::ideal()));
  Real worst = 0.0;
  for (int t = 0; t < 4; ++t)
    for (GroverMode m : {GroverMode::postselect, GroverMode::feedforward})
      worst = std::max(worst, std::abs(1.0 - ideal_grover(box, GroverTag::from_index(t), m).success.value));
  v.require(worst < 1e-12, "ideal max |1-s| = " + num(worst, 12));

  const SourceConfig cfg = SourceConfig::calibrated();
  const MixedState cluster = emit_cluster(cfg);
  std::array<Real, 2> success{};
  std::array<Real, 2> rate{};
  for (int m = 0; m < 2; ++m)
    for (int t = 0; t < 4; ++t) {
      const GroverRun run{GroverTag::from_index(t), m == 0 ? GroverMode::postselect : GroverMode::feedforward,
                          1e7, kSeed, true};
      const GroverResult r = run_grover(cluster, run, cfg);
      success[static_cast<std::size_t>(m)] += r.success.value / 4.0;
      rate[static_cast<std::size_t>(m)] += protocol_rate(r, cfg.pair_rate_hz, cfg.efficiencies) / 4.0;
    }
  v.require(within(success[0], 0.960, 0.02), "postselect s = " + num(success[0]));
  v.require(within(success[1], 0.964, 0.02), "feedforward s = " + num(success[1]));
  const Real ratio = rate[1] / rate[0];
  v.require(within(ratio, 4.0, 0.04), "rate ratio " + num(ratio, 3) + " (17 Hz -> " + num(17.0 * ratio, 1) + " Hz)");
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs every subcommand at two parallelism levels (and once more at the
// second) and compares the output trees byte for byte.
Verdict determinism(const fs::path& scratch) {
  Verdict v;
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const fs::path cfg_path = scratch / "short.ini";
  {
    RunConfig c;
    c.seed = kSeed;
    c.scan.points = 21;
    c.scan.mc_resamples = 20;
    c.set_shots(20000);
    c.tomography.mc_resamples = 100;
    write_text(cfg_path, serialize_config(c));
  }
  const std::vector<std::string> commands{"hom", "hescan", "pathscan", "tomo", "witness", "witness --table1",
                                          "grover"};
  const std::array<std::pair<const char*, unsigned>, 3> runs{{{"t1", 1}, {"t4", 4}, {"t4b", 4}}};
  bool launched = true;
  for (const auto& [name, threads] : runs)
    for (std::size_t i = 0; i < commands.size(); ++i) {
      const fs::path out = scratch / name / std::to_string(i);
      const std::string cmd = std::string("\"") + HYPERCHIP_CLI + "\" --config \"" + cfg_path.string() +
                              "\" --out \"" + out.string() + "\" --threads " + std::to_string(threads) + " " +
                              commands[i] + " > /dev/null";
      launched = launched && std::system(cmd.c_str()) == 0;
    }
  v.require(launched, "all commands exit 0");
  std::size_t files = 0;
  bool same = true;
  for (const auto& entry : fs::recursive_directory_iterator(scratch / "t1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), scratch / "t1");
    const std::string ref = slurp(entry.path());
    for (const char* other : {"t4", "t4b"}) {
      const fs::path p = scratch / other / rel;
      if (!fs::exists(p) || slurp(p) != ref) {
        same = false;
        v.require(false, "differs: " + rel.string());
      }
    }
    ++files;
  }
  v.require(same && files > 0, std::to_string(files) + " files byte-identical at 1 and 4 threads");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "hyperchip_acceptance";
  const std::array<std::pair<const char*, std::function<Verdict()>>, 8> criteria{{
      {"oracle equivalence", oracle},
      {"HOM visibilities", hom},
      {"hyperentangled scans", he},
      {"path scan", path},
      {"tomography", tomography},
      {"witness", witness_criterion},
      {"Grover search", grover},
      {"determinism", [&] { return determinism(scratch); }},
  }};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    if (!v.pass) ++failures;
    std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
