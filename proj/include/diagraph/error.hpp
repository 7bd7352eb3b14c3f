#pragma once

#include <stdexcept>
#include <string>

namespace diagraph {

/// Raised for malformed input, grammar bugs and contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diagraph
