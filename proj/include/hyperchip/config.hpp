#pragma once

#include <stdexcept>
#include <string>

#include "hyperchip/fit.hpp"
#include "hyperchip/source.hpp"

namespace hyperchip {

/// Parse or validation failure; `line()` is 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct ScanBlock {
  Real delay_min_um = -80.0;
  Real delay_max_um = 80.0;
  int points = 41;
  /// Emitted pairs per delay point (30 s at the default brightness).
  Real shots = 78000.0;
  EnvelopeModel fit_model = EnvelopeModel::gaussian;
  int mc_resamples = 200;
};

struct TomographyBlock {
  Real shots_per_setting = 100000.0;
  bool overcomplete = false;
  int mc_resamples = 200;
};

struct WitnessBlock {
  Real shots_per_term = 200000.0;
};

struct GroverBlock {
  Real shots_per_tag = 200000.0;
  /// Retained rate the brightness is rescaled to in the report (Hz, post-selected).
  Real reference_rate_hz = 17.0;
};

/// Everything one CLI invocation needs. Defaults reproduce the calibrated
/// setup.
struct RunConfig {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_dir = ".";
  SourceConfig source = SourceConfig::calibrated();
  ScanBlock scan;
  TomographyBlock tomography;
  WitnessBlock witness;
  GroverBlock grover;

  /// Throws ConfigError (line 0) on out-of-range values.
  void validate() const;
  /// Replaces the noise model by the ideal one, keeping the scan geometry.
  void make_ideal();
  /// Overrides every shot count.
  void set_shots(Real shots);
};

/// INI-style text: `key = value` lines, `[section]` headers, `#` comments.
/// Unknown sections or keys, duplicates and malformed values are errors
/// naming the offending line. The result is validated.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every key, fixed order, shortest round-trip number formatting:
/// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

}  // namespace hyperchip
