#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace edanet {

/// A single gene value. Benchmarks are binary but every algorithm here is
/// written for general cardinalities r_i >= 2 (up to 256 values per gene).
using Gene = std::uint8_t;

/// Number of values a variable can take.
using Cardinality = std::uint32_t;

enum class Direction { maximize, minimize };

inline double direction_sign(Direction d) {
  return d == Direction::maximize ? 1.0 : -1.0;
}

/// Thrown when an individual violates its gene bounds.
struct InvalidIndividualError : std::runtime_error {
  explicit InvalidIndividualError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Thrown when a graph that must be a DAG contains a cycle.
struct InvalidStructureError : std::runtime_error {
  explicit InvalidStructureError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace edanet
