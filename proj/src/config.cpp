#include "hyperchip/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace hyperchip {

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  std::string section;
  std::string key;
  Setter set;
  Getter get;
};

// Thrown by value parsers; converted to a line-anchored ConfigError.
struct BadValue {
  std::string message;
};

std::string format_real(Real v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

Real parse_real(std::string_view s) {
  Real v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw BadValue{"expected a number, got '" + std::string(s) + "'"};
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw BadValue{"expected an integer, got '" + std::string(s) + "'"};
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw BadValue{"expected true or false, got '" + std::string(s) + "'"};
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Getters reuse the mutable accessor; they only read through it.
template <typename Access>
Field real(std::string section, std::string key, Access access) {
  return {std::move(section), std::move(key),
          [access](RunConfig& c, std::string_view v) { access(c) = parse_real(v); },
          [access](const RunConfig& c) { return format_real(access(const_cast<RunConfig&>(c))); }};
}

template <typename Access>
Field integer(std::string section, std::string key, Access access) {
  return {std::move(section), std::move(key),
          [access](RunConfig& c, std::string_view v) {
            access(c) = parse_int<std::remove_reference_t<decltype(access(c))>>(v);
          },
          [access](const RunConfig& c) { return std::to_string(access(const_cast<RunConfig&>(c))); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(integer("run", "seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));
    f.push_back(integer("run", "threads", [](RunConfig& c) -> unsigned& { return c.threads; }));
    f.push_back({"run", "output_dir",
                 [](RunConfig& c, std::string_view v) {
                   if (v.empty()) throw BadValue{"output_dir must not be empty"};
                   c.output_dir = std::string(v);
                 },
                 [](const RunConfig& c) { return c.output_dir; }});

    auto src = [](auto member) {
      return [member](RunConfig& c) -> Real& { return c.source.*member; };
    };
    f.push_back(real("source", "theta", src(&SourceConfig::theta)));
    f.push_back(real("source", "phi", src(&SourceConfig::phi)));
    f.push_back(real("source", "pol_depolarization", src(&SourceConfig::pol_depolarization)));
    f.push_back(real("source", "pol_cross_fraction", src(&SourceConfig::pol_cross_fraction)));
    f.push_back(real("source", "path_visibility", src(&SourceConfig::path_visibility)));
    f.push_back(real("source", "mode_overlap_A", src(&SourceConfig::mode_overlap_A)));
    f.push_back(real("source", "mode_overlap_B", src(&SourceConfig::mode_overlap_B)));
    f.push_back(real("source", "cluster_hwp_retardance_error",
                     src(&SourceConfig::cluster_hwp_retardance_error)));
    f.push_back(real("source", "pair_rate_hz", src(&SourceConfig::pair_rate_hz)));
    f.push_back(real("source", "accidental_rate_hz", src(&SourceConfig::accidental_rate_hz)));
    f.push_back(real("source", "coherence_sigma_um",
                     [](RunConfig& c) -> Real& { return c.source.wavepacket.coherence_sigma_um; }));
    f.push_back(real("source", "sinc_width_um",
                     [](RunConfig& c) -> Real& { return c.source.wavepacket.sinc_width_um; }));
    f.push_back({"source", "overlap_shape",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "gaussian") c.source.wavepacket.shape = OverlapShape::gaussian;
                   else if (v == "gaussian_sinc") c.source.wavepacket.shape = OverlapShape::gaussian_sinc;
                   else throw BadValue{"overlap_shape must be gaussian or gaussian_sinc"};
                 },
                 [](const RunConfig& c) {
                   return std::string(c.source.wavepacket.shape == OverlapShape::gaussian
                                          ? "gaussian"
                                          : "gaussian_sinc");
                 }});
    const std::array<std::pair<const char*, std::pair<int, int>>, 4> eff{
        {{"efficiency_ell_A", {0, 0}}, {"efficiency_r_A", {0, 1}},
         {"efficiency_ell_B", {1, 0}}, {"efficiency_r_B", {1, 1}}}};
    for (const auto& [name, idx] : eff) {
      const auto [arm, slot] = idx;
      f.push_back(real("source", name, [arm, slot](RunConfig& c) -> Real& {
        return c.source.efficiencies[static_cast<std::size_t>(arm)][static_cast<std::size_t>(slot)];
      }));
    }

    f.push_back(real("scan", "delay_min_um", [](RunConfig& c) -> Real& { return c.scan.delay_min_um; }));
    f.push_back(real("scan", "delay_max_um", [](RunConfig& c) -> Real& { return c.scan.delay_max_um; }));
    f.push_back(integer("scan", "points", [](RunConfig& c) -> int& { return c.scan.points; }));
    f.push_back(real("scan", "shots", [](RunConfig& c) -> Real& { return c.scan.shots; }));
    f.push_back({"scan", "fit_model",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "gaussian") c.scan.fit_model = EnvelopeModel::gaussian;
                   else if (v == "gaussian_sinc") c.scan.fit_model = EnvelopeModel::gaussian_sinc;
                   else throw BadValue{"fit_model must be gaussian or gaussian_sinc"};
                 },
                 [](const RunConfig& c) {
                   return std::string(c.scan.fit_model == EnvelopeModel::gaussian ? "gaussian"
                                                                                  : "gaussian_sinc");
                 }});
    f.push_back(integer("scan", "mc_resamples", [](RunConfig& c) -> int& { return c.scan.mc_resamples; }));

    f.push_back(real("tomography", "shots_per_setting",
                     [](RunConfig& c) -> Real& { return c.tomography.shots_per_setting; }));
    f.push_back({"tomography", "overcomplete",
                 [](RunConfig& c, std::string_view v) { c.tomography.overcomplete = parse_bool(v); },
                 [](const RunConfig& c) { return std::string(c.tomography.overcomplete ? "true" : "false"); }});
    f.push_back(integer("tomography", "mc_resamples",
                        [](RunConfig& c) -> int& { return c.tomography.mc_resamples; }));

    f.push_back(real("witness", "shots_per_term",
                     [](RunConfig& c) -> Real& { return c.witness.shots_per_term; }));

    f.push_back(real("grover", "shots_per_tag", [](RunConfig& c) -> Real& { return c.grover.shots_per_tag; }));
    f.push_back(real("grover", "reference_rate_hz",
                     [](RunConfig& c) -> Real& { return c.grover.reference_rate_hz; }));
    return f;
  }();
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(0, message);
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                  : "config: " + message),
      line_(line) {}

void RunConfig::validate() const {
  try {
    source.validate();
  } catch (const PhysicsError& e) {
    throw ConfigError(0, e.what());
  }
  require(threads >= 1, "threads must be at least 1");
  require(scan.points >= 5, "scan.points must be at least 5");
  require(scan.delay_max_um > scan.delay_min_um, "scan.delay_max_um must exceed delay_min_um");
  require(scan.shots > 0.0, "scan.shots must be positive");
  require(scan.mc_resamples >= 0, "scan.mc_resamples must be non-negative");
  require(tomography.shots_per_setting > 0.0, "tomography.shots_per_setting must be positive");
  require(tomography.mc_resamples >= 100, "tomography.mc_resamples must be at least 100");
  require(witness.shots_per_term > 0.0, "witness.shots_per_term must be positive");
  require(grover.shots_per_tag > 0.0, "grover.shots_per_tag must be positive");
  require(grover.reference_rate_hz > 0.0, "grover.reference_rate_hz must be positive");
}

void RunConfig::make_ideal() {
  SourceConfig ideal = SourceConfig::ideal();
  ideal.theta = source.theta;
  ideal.phi = source.phi;
  ideal.wavepacket = source.wavepacket;
  ideal.pair_rate_hz = source.pair_rate_hz;
  source = ideal;
}

void RunConfig::set_shots(Real shots) {
  scan.shots = shots;
  tomography.shots_per_setting = shots;
  witness.shots_per_term = shots;
  grover.shots_per_tag = shots;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      bool known = false;
      for (const auto& f : fields()) known = known || f.section == section;
      if (!known) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view value = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError(line, "key '" + key + "' outside a section");
    const Field* field = nullptr;
    for (const auto& f : fields())
      if (f.section == section && f.key == key) field = &f;
    if (field == nullptr) throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(line, "duplicate key '" + key + "' in [" + section + "]");
    try {
      field->set(cfg, value);
    } catch (const BadValue& e) {
      throw ConfigError(line, key + ": " + e.message);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace hyperchip
