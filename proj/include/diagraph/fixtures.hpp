#pragma once

#include <string_view>
#include <vector>

#include "diagraph/io.hpp"

namespace diagraph {

/// Names accepted by make_fixture: fig2-ticks, fig3-micro, datagraph4.
std::vector<std::string_view> fixture_names();

/// Deterministic synthetic diagram. Throws Error for an unknown name.
Diagram make_fixture(std::string_view name);

}  // namespace diagraph
