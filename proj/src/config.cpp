#include "diagraph/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "diagraph/error.hpp"

namespace diagraph {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, const std::string& v, int line) {
  if (v == "true") return 1.0;
  if (v == "false") return 0.0;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error("config line " + std::to_string(line) + ": bad number for " + key + ": " + v);
  return out;
}

}  // namespace

EngineConfig parse_config(std::string_view text, EngineConfig cfg) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    const double x = to_number(key, val, line);
    if (key == "tiny") cfg.tiny = x;
    else if (key == "very_long") cfg.very_long = x;
    else if (key == "very_long_frac") cfg.very_long_frac = x;
    else if (key == "short_mult") cfg.size.short_mult = x;
    else if (key == "long_mult") cfg.size.long_mult = x;
    else if (key == "long_width_frac") cfg.size.long_width_frac = x;
    else if (key == "small_mult") cfg.size.small_mult = x;
    else if (key == "angle_tol_deg") cfg.angle_tol_deg = x;
    else if (key == "align_level") cfg.align_level = static_cast<int>(x);
    else if (key == "pyramid_depth") cfg.pyramid_depth = static_cast<int>(x);
    else if (key == "touch_strict") cfg.touch_strict = x != 0.0;
    else if (key == "max_tuples") cfg.max_tuples = static_cast<std::size_t>(x);
    else throw Error("config line " + std::to_string(line) + ": unknown key " + key);
  }
  if (cfg.align_level < 0 || cfg.align_level >= cfg.pyramid_depth)
    throw Error("align_level must lie within the pyramid");
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path, EngineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

Thresholds resolve_thresholds(const CharacteristicLengths& cl, const EngineConfig& config) {
  Thresholds t;
  t.lengths = cl;
  t.size = SizeThresholds::from(cl, config.size);
  t.tiny = config.tiny.value_or(std::max(cl.h / 2.0, 2.0));
  t.very_long = config.very_long.value_or(config.very_long_frac * cl.W);
  t.angle_tol_deg = config.angle_tol_deg;
  return t;
}

}  // namespace diagraph
