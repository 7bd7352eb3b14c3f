#pragma once

#include <string>
#include <variant>

#include "diagraph/geometry.hpp"

namespace diagraph {

struct ObjectRef {
  Tag tag = 0;
  friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
};

/// Result of evaluating a grammar expression; monostate is the null binding.
using Value = std::variant<std::monostate, bool, double, Point, ObjectRef>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

std::string to_string(const Value& v);

}  // namespace diagraph
