#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "diagraph/scene.hpp"

namespace diagraph {

/// SVG drawing of the scene's primitives in gray, plus one colored layer per solution that
/// outlines the bbox of every object in its tree and labels derived objects by type.
std::string overlay_svg(const Scene& scene, const std::vector<Tag>& solutions);
void emit_overlay(const Scene& scene, const std::vector<Tag>& solutions,
                  const std::filesystem::path& path);

}  // namespace diagraph
