#include "hyperchip/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace hyperchip {

namespace {

const char* model_name(EnvelopeModel m) {
  return m == EnvelopeModel::gaussian ? "gaussian" : "gaussian_sinc";
}

Json fit_json(const EnvelopeFit& fit) {
  Json j;
  j["model"] = model_name(fit.model);
  j["baseline"] = fit.baseline;
  j["amplitude"] = fit.amplitude;
  j["extremum"] = fit.extremum();
  j["center_um"] = fit.center;
  j["width_um"] = fit.width;
  if (fit.model == EnvelopeModel::gaussian_sinc) j["sinc_width_um"] = fit.sinc_width;
  j["converged"] = fit.converged;
  return j;
}

Json expectation_json(const Expectation& e) { return {{"value", e.value}, {"sigma", e.sigma}}; }

}  // namespace

std::string format_number(Real v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string scan_csv(const ScanResult& scan) {
  std::string out = "delta_x_um,phi,theta,counts,accidentals,normalized\n";
  for (const auto& r : scan.records) {
    out += format_number(r.setting.delta_x_um) + ',' + format_number(r.setting.phi) + ',' +
           format_number(r.setting.theta) + ',' + std::to_string(r.raw_counts) + ',' +
           std::to_string(r.accidentals) + ',' + format_number(r.normalized) + '\n';
  }
  return out;
}

Json scan_json(const ScanResult& scan) {
  Json j;
  j["label"] = scan.label;
  j["kind"] = scan.is_dip() ? "dip" : "peak";
  j["visibility"] = scan.visibility;
  j["visibility_sigma"] = scan.visibility_sigma;
  j["visibility_net"] = scan.visibility_net;
  j["visibility_net_sigma"] = scan.visibility_net_sigma;
  j["visibility_definition"] =
      "dip: (C_base - C_min) / C_base; peak: (C_max - C_base) / C_base";
  j["fit"] = fit_json(scan.fit);
  j["fit_net"] = fit_json(scan.fit_net);
  bool asymmetric = false;
  for (const auto& r : scan.records) asymmetric = asymmetric || r.path_asymmetric;
  j["path_asymmetric_efficiencies"] = asymmetric;
  return j;
}

Json matrix_json(const Matrix4c& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (int r = 0; r < 4; ++r) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (int c = 0; c < 4; ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"basis", {"HH", "HV", "VH", "VV"}}, {"real", re}, {"imag", im}};
}

std::string tomography_csv(const std::vector<TomographySetting>& settings,
                           const std::vector<ExperimentRecord>& records) {
  if (settings.size() != records.size())
    throw std::invalid_argument("settings and records differ in length");
  std::string out = "setting,counts,accidentals\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += static_cast<char>(settings[i].first);
    out += static_cast<char>(settings[i].second);
    out += ',' + std::to_string(records[i].raw_counts) + ',' +
           std::to_string(records[i].accidentals) + '\n';
  }
  return out;
}

Json tomography_json(const Reconstruction& rec, const MonteCarloErrors& errors,
                     const std::string& pair, const std::string& target) {
  Json j;
  j["path_pair"] = pair;
  j["target"] = target;
  j["fidelity"] = {{"value", errors.fidelity.value}, {"sigma", errors.fidelity.sigma}};
  j["concurrence"] = {{"value", errors.concurrence.value}, {"sigma", errors.concurrence.sigma}};
  j["rho"] = matrix_json(rec.rho.matrix());
  j["mle"] = {{"converged", rec.converged},
              {"iterations", rec.iterations},
              {"gradient_norm", rec.gradient_norm},
              {"diagnostics", rec.diagnostics}};
  return j;
}

Json witness_json(const WitnessReport& report) {
  Json terms = Json::array();
  const auto& specs = witness_stabilizers();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    Json t = expectation_json(report.terms[k]);
    t["stabilizer"] = specs[k].label();
    terms.push_back(t);
  }
  Json j;
  j["terms"] = terms;
  j["W"] = expectation_json(report.w);
  j["fidelity_bound"] = expectation_json(report.fidelity_bound);
  return j;
}

Json grover_json(const GroverResult& result) {
  Real total = 0.0;
  for (Real h : result.histogram) total += h;
  Json probs = Json::array();
  for (Real h : result.histogram) probs.push_back(total > 0.0 ? h / total : 0.0);
  Json j;
  j["tag"] = {{"alpha", result.tag.alpha_bit}, {"beta", result.tag.beta_bit}};
  j["mode"] = result.mode == GroverMode::postselect ? "postselect" : "feedforward";
  j["expected_item"] = result.expected_item;
  j["item_probabilities"] = probs;
  j["success"] = expectation_json(result.success);
  j["retained_fraction"] = result.retained_fraction;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& json) {
  write_text(path, json.dump(2) + "\n");
}

}  // namespace hyperchip
