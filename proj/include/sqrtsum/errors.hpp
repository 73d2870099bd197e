#pragma once

#include <stdexcept>
#include <string>

namespace sqrtsum {

/// Raised when a request exceeds the configured enumeration or memory
/// budget; the message carries the estimated cost.
struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace sqrtsum
