#pragma once

#include <stdexcept>
#include <string>

namespace ist {

/// Mismatched grids or array lengths.
struct dimension_error : std::invalid_argument {
  explicit dimension_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A precondition on the input data does not hold (k >= 1, non-real
/// potential, operator norm out of range, ...).
struct precondition_error : std::domain_error {
  explicit precondition_error(const std::string& msg) : std::domain_error(msg) {}
};

/// A denominator or linear solve degenerated; signals inconsistent
/// discrete data rather than a bug in the caller.
struct singularity_error : std::runtime_error {
  explicit singularity_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ist
