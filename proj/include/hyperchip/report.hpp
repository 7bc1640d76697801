#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperchip/grover.hpp"
#include "hyperchip/scan.hpp"
#include "hyperchip/tomography.hpp"
#include "hyperchip/witness.hpp"

namespace hyperchip {

using Json = nlohmann::ordered_json;

/// Shortest representation that parses back to the same double.
std::string format_number(Real v);

/// delta_x_um, phi, theta, counts, accidentals, normalized
std::string scan_csv(const ScanResult& scan);
Json scan_json(const ScanResult& scan);

Json matrix_json(const Matrix4c& m);
std::string tomography_csv(const std::vector<TomographySetting>& settings,
                           const std::vector<ExperimentRecord>& records);
Json tomography_json(const Reconstruction& rec, const MonteCarloErrors& errors,
                     const std::string& pair, const std::string& target);

Json witness_json(const WitnessReport& report);
Json grover_json(const GroverResult& result);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& json);

}  // namespace hyperchip
