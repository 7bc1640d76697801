// hyperchip: one subcommand per experiment. Outputs are CSV + JSON in --out.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "hyperchip/config.hpp"
#include "hyperchip/grover.hpp"
#include "hyperchip/report.hpp"
#include "hyperchip/scan.hpp"
#include "hyperchip/tomography.hpp"
#include "hyperchip/witness.hpp"

namespace fs = std::filesystem;
using namespace hyperchip;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<Real> shots;
  std::optional<unsigned> threads;
  bool ideal = false;
  bool expectation = false;
};

RunConfig resolve(const Globals& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.output_dir = *g.out;
  if (g.shots) cfg.set_shots(*g.shots);
  if (g.threads) cfg.threads = *g.threads;
  if (g.ideal) cfg.make_ideal();
  cfg.validate();
  return cfg;
}

ScanOptions scan_options(const RunConfig& cfg, const Globals& g) {
  ScanOptions o;
  o.sample = !g.expectation;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  o.model = cfg.scan.fit_model;
  o.mc_resamples = cfg.scan.mc_resamples;
  return o;
}

std::vector<Real> delays(const RunConfig& cfg) {
  return delay_grid(cfg.scan.delay_min_um, cfg.scan.delay_max_um,
                    static_cast<std::size_t>(cfg.scan.points));
}

template <std::size_t N>
void write_scans(const RunConfig& cfg, const std::array<ScanResult, N>& scans, const std::string& name) {
  const fs::path dir = cfg.output_dir;
  Json summary;
  summary["seed"] = cfg.seed;
  summary["shots_per_point"] = cfg.scan.shots;
  Json list = Json::array();
  for (const auto& s : scans) {
    write_text(dir / (s.label + ".csv"), scan_csv(s));
    list.push_back(scan_json(s));
  }
  summary["scans"] = list;
  write_json(dir / (name + ".json"), summary);
  for (const auto& s : scans)
    std::cout << s.label << ": " << (s.is_dip() ? "dip" : "peak") << " V = " << format_number(s.visibility)
              << " (net " << format_number(s.visibility_net) << ")\n";
}

void cmd_hom(const Globals& g) {
  const RunConfig cfg = resolve(g);
  const auto d = delays(cfg);
  const ScanOptions o = scan_options(cfg, g);
  const std::array<ScanResult, 2> scans{hom_scan(cfg.source, Arm::A, d, cfg.scan.shots, o),
                                        hom_scan(cfg.source, Arm::B, d, cfg.scan.shots, o)};
  write_scans(cfg, scans, "hom");
}

void cmd_hescan(const Globals& g) {
  const RunConfig cfg = resolve(g);
  write_scans(cfg, he_scan(cfg.source, delays(cfg), cfg.scan.shots, scan_options(cfg, g)), "hescan");
}

void cmd_pathscan(const Globals& g) {
  const RunConfig cfg = resolve(g);
  write_scans(cfg, path_scan(cfg.source, delays(cfg), cfg.scan.shots, scan_options(cfg, g)),
              "pathscan");
}

void cmd_tomo(const Globals& g, bool overcomplete_flag) {
  RunConfig cfg = resolve(g);
  const bool overcomplete = overcomplete_flag || cfg.tomography.overcomplete;
  const MixedState cluster = emit_cluster(cfg.source);
  const fs::path dir = cfg.output_dir;
  Json summary;
  summary["seed"] = cfg.seed;
  summary["shots_per_setting"] = cfg.tomography.shots_per_setting;
  summary["settings"] = overcomplete ? 36 : 16;
  Json branches = Json::array();
  // r_A ell_B carries Phi+, ell_A r_B carries Phi-.
  const std::array<std::tuple<PathPair, BellState, const char*, const char*>, 2> cases{
      {{PathPair::ellA_rB, BellState::phi_minus, "ellA_rB", "phi_minus"},
       {PathPair::rA_ellB, BellState::phi_plus, "rA_ellB", "phi_plus"}}};
  std::uint64_t k = 0;
  for (const auto& [pair, bell, pair_name, target_name] : cases) {
    const auto settings = overcomplete ? overcomplete_settings(pair) : standard_settings(pair);
    const auto records = simulate_counts(cluster, settings, cfg.tomography.shots_per_setting, cfg.source,
                                         derive_seed(cfg.seed, k), !g.expectation);
    const Reconstruction rec = reconstruct(records);
    const MonteCarloErrors err = monte_carlo_errors(records, bell_state(bell), cfg.tomography.mc_resamples,
                                                    derive_seed(cfg.seed, k + 1), cfg.threads);
    write_text(dir / (std::string("tomo_") + pair_name + ".csv"), tomography_csv(settings, records));
    branches.push_back(tomography_json(rec, err, pair_name, target_name));
    std::cout << pair_name << ": F = " << format_number(err.fidelity.value) << " +- "
              << format_number(err.fidelity.sigma) << ", C = " << format_number(err.concurrence.value)
              << " +- " << format_number(err.concurrence.sigma) << "\n";
    k += 2;
  }
  summary["branches"] = branches;
  write_json(dir / "tomo.json", summary);
}

void cmd_witness(const Globals& g, bool table1) {
  const RunConfig cfg = resolve(g);
  WitnessReport report;
  Json summary;
  if (table1) {
    report = witness(table1_expectations());
    summary["source"] = "table1";
  } else {
    const std::optional<std::uint64_t> seed =
        g.expectation ? std::nullopt : std::optional<std::uint64_t>(cfg.seed);
    report = measure_witness(emit_cluster(cfg.source), cfg.witness.shots_per_term, cfg.source, seed,
                             cfg.threads);
    summary["source"] = "simulation";
    summary["seed"] = cfg.seed;
    summary["shots_per_term"] = cfg.witness.shots_per_term;
  }
  summary.update(witness_json(report));
  write_json(fs::path(cfg.output_dir) / "witness.json", summary);
  std::cout << "W = " << format_number(report.w.value) << " +- " << format_number(report.w.sigma)
            << ", fidelity bound = " << format_number(report.fidelity_bound.value) << "\n";
}

void cmd_grover(const Globals& g) {
  const RunConfig cfg = resolve(g);
  const MixedState cluster = emit_cluster(cfg.source);
  const FeedforwardMap map = derive_feedforward_map();
  Json summary;
  summary["seed"] = cfg.seed;
  summary["shots_per_tag"] = cfg.grover.shots_per_tag;
  Json item_map = Json::array();
  for (int t = 0; t < 4; ++t) {
    const GroverTag tag = GroverTag::from_index(t);
    item_map.push_back({{"alpha", tag.alpha_bit}, {"beta", tag.beta_bit},
                        {"item", map.item_of_tag[static_cast<std::size_t>(t)]}});
  }
  summary["tag_to_item"] = item_map;
  Json flips = Json::array();
  for (int b = 0; b < 4; ++b)
    flips.push_back({{"s1", b >> 1}, {"s4", b & 1},
                     {"flip", {map.flip[static_cast<std::size_t>(b)][0], map.flip[static_cast<std::size_t>(b)][1]}}});
  summary["relabeling"] = flips;

  // All eight runs in parallel; each has its own derived stream.
  std::array<GroverResult, 8> results;
  parallel_for(8, cfg.threads, [&](std::size_t i) {
    const GroverMode mode = i < 4 ? GroverMode::postselect : GroverMode::feedforward;
    const GroverRun run{GroverTag::from_index(static_cast<int>(i % 4)), mode, cfg.grover.shots_per_tag,
                        cfg.seed, !g.expectation};
    results[i] = run_grover(cluster, run, cfg.source);
  });

  const Real eff = pair_efficiency(cfg.source.efficiencies);
  for (int m = 0; m < 2; ++m) {
    const char* name = m == 0 ? "postselect" : "feedforward";
    Json runs = Json::array();
    Real success = 0.0, retained = 0.0;
    for (int t = 0; t < 4; ++t) {
      const GroverResult& r = results[static_cast<std::size_t>(m * 4 + t)];
      runs.push_back(grover_json(r));
      success += r.success.value / 4.0;
      retained += r.retained_fraction / 4.0;
    }
    summary[name] = {{"runs", runs}, {"mean_success", success}, {"mean_retained_fraction", retained}};
    std::cout << name << ": success = " << format_number(success)
              << ", retained fraction = " << format_number(retained) << "\n";
  }

  // Rates: at the configured brightness, and with the brightness chosen so the
  // post-selected rate equals the reference rate.
  Real ps = 0.0, ff = 0.0;
  for (int t = 0; t < 4; ++t) {
    ps += protocol_rate(results[static_cast<std::size_t>(t)], cfg.source.pair_rate_hz, cfg.source.efficiencies) / 4.0;
    ff += protocol_rate(results[static_cast<std::size_t>(4 + t)], cfg.source.pair_rate_hz, cfg.source.efficiencies) / 4.0;
  }
  Json rates;
  rates["pair_efficiency"] = eff;
  rates["brightness_hz"] = cfg.source.pair_rate_hz;
  rates["postselect_hz"] = ps;
  rates["feedforward_hz"] = ff;
  if (ps > 0.0) {
    const Real scale = cfg.grover.reference_rate_hz / ps;
    rates["rescaled_brightness_hz"] = cfg.source.pair_rate_hz * scale;
    rates["rescaled_postselect_hz"] = cfg.grover.reference_rate_hz;
    rates["rescaled_feedforward_hz"] = ff * scale;
    rates["feedforward_to_postselect"] = ff / ps;
  }
  summary["rates"] = rates;
  write_json(fs::path(cfg.output_dir) / "grover.json", summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-polarization hyperentanglement chip simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "config file (INI sections)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--shots", g.shots, "override every shot count");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--ideal", g.ideal, "noise-free source, lossless optics, no background");
  app.add_flag("--expectation", g.expectation, "expected counts instead of Poisson samples");

  bool overcomplete = false;
  bool table1 = false;
  auto* hom = app.add_subcommand("hom", "HOM dips of both splitters");
  auto* hescan = app.add_subcommand("hescan", "hyperentangled interference scans");
  auto* pathscan = app.add_subcommand("pathscan", "path-only interference scans");
  auto* tomo = app.add_subcommand("tomo", "polarization tomography of both cluster branches");
  tomo->add_flag("--overcomplete", overcomplete, "all 36 analyzer pairs");
  auto* wit = app.add_subcommand("witness", "cluster-state entanglement witness");
  wit->add_flag("--table1", table1, "evaluate W from the published expectation values");
  auto* grover = app.add_subcommand("grover", "one-way Grover search, all tags, both modes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (hom->parsed()) cmd_hom(g);
    else if (hescan->parsed()) cmd_hescan(g);
    else if (pathscan->parsed()) cmd_pathscan(g);
    else if (tomo->parsed()) cmd_tomo(g, overcomplete);
    else if (wit->parsed()) cmd_witness(g, table1);
    else if (grover->parsed()) cmd_grover(g);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
