#pragma once

#include <stdexcept>
#include <string>

namespace toruslab {

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a map expected to be invertible over the integer lattice is not.
struct non_unimodular_error : error {
  using error::error;
};

struct parse_error : error {
  using error::error;
};

// Root refinement failed to reach the requested residual.
struct convergence_failure : error {
  using error::error;
};

struct not_diagonalizable_error : error {
  using error::error;
};

struct infinite_dissipation_error : error {
  using error::error;
};

struct no_peak_error : error {
  using error::error;
};

struct power_iteration_stall : error {
  using error::error;
};

struct solve_divergence : error {
  using error::error;
};

struct negative_density_error : error {
  using error::error;
};

struct insufficient_data_error : error {
  using error::error;
};

// A stated precondition of an operation does not hold for the given input.
struct precondition_error : error {
  using error::error;
};

}  // namespace toruslab
