#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace hyperchip {

enum class Arm : std::uint8_t { A = 0, B = 1 };

/// Spatial mode of one arm. `ell`/`r` feed the beam splitter, `ell_prime` /
/// `r_prime` are its output ports.
enum class Spatial : std::uint8_t { ell = 0, r = 1, ell_prime = 2, r_prime = 3 };

enum class Polarization : std::uint8_t { H = 0, V = 1 };

enum class Stage : std::uint8_t { pre_chip = 0, post_chip = 1 };

inline constexpr int kTemporalDim = 2;

/// Number of single-photon modes per stage: arm x slot x polarization x time.
inline constexpr int kModesPerStage = 2 * 2 * 2 * kTemporalDim;

constexpr Stage stage_of(Spatial s) {
  return (s == Spatial::ell || s == Spatial::r) ? Stage::pre_chip : Stage::post_chip;
}

/// 0 for ell / ell', 1 for r / r'.
constexpr int slot_of(Spatial s) { return static_cast<int>(s) & 1; }

constexpr Spatial spatial_of(Stage stage, int slot) {
  return static_cast<Spatial>((stage == Stage::post_chip ? 2 : 0) + slot);
}

struct ModeLabel {
  Arm arm = Arm::A;
  Spatial spatial = Spatial::ell;
  Polarization polarization = Polarization::H;
  int temporal = 0;  // 0 = tau_0, 1 = tau_perp

  Stage stage() const { return stage_of(spatial); }

  /// Position in the 16-dimensional single-photon space of this label's stage.
  int index() const {
    return ((static_cast<int>(arm) * 2 + slot_of(spatial)) * 2 +
            static_cast<int>(polarization)) *
               kTemporalDim +
           temporal;
  }

  static ModeLabel from_index(Stage stage, int index) {
    ModeLabel m;
    m.temporal = index % kTemporalDim;
    index /= kTemporalDim;
    m.polarization = static_cast<Polarization>(index % 2);
    index /= 2;
    m.spatial = spatial_of(stage, index % 2);
    m.arm = static_cast<Arm>(index / 2);
    return m;
  }

  auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(Arm arm);
std::string to_string(Spatial spatial);
std::string to_string(const ModeLabel& label);

}  // namespace hyperchip
