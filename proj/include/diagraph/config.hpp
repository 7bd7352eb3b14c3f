#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>

#include "diagraph/geometry.hpp"

namespace diagraph {

/// Engine tunables. Lengths are in normalized grid units.
struct EngineConfig {
  std::optional<double> tiny;       ///< default max(h/2, 2)
  std::optional<double> very_long;  ///< default very_long_frac * W
  double very_long_frac = 0.5;
  SizeRules size;
  double angle_tol_deg = kDefaultAngleTolDeg;
  int align_level = 6;
  int pyramid_depth = 7;
  bool touch_strict = false;
  std::size_t max_tuples = 1'000'000;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys throw Error.
/// Keys: tiny, very_long, very_long_frac, short_mult, long_mult, long_width_frac, small_mult,
/// angle_tol_deg, align_level, pyramid_depth, touch_strict, max_tuples.
EngineConfig parse_config(std::string_view text, EngineConfig base = {});
EngineConfig load_config(const std::filesystem::path& path, EngineConfig base = {});

/// Concrete thresholds for one diagram.
struct Thresholds {
  CharacteristicLengths lengths;
  SizeThresholds size;
  double tiny = 0.0;
  double very_long = 0.0;
  double angle_tol_deg = kDefaultAngleTolDeg;
};

Thresholds resolve_thresholds(const CharacteristicLengths& cl, const EngineConfig& config);

}  // namespace diagraph
