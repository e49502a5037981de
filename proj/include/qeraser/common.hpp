// common.hpp
// Shared aliases, tolerances and error types for the qeraser library.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qeraser {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

namespace tol {
// Structural checks (unitarity, hermiticity, orthonormality).
inline constexpr double structural = 1e-10;
// Eigenvalue positivity slack for density operators.
inline constexpr double positivity = 1e-10;
// Cross-oracle agreement in tests.
inline constexpr double oracle = 1e-12;
// Below this survival a projection is reported as null instead of renormalized.
inline constexpr double null_projection = 1e-14;
}  // namespace tol

// Raised when an operation is called with arguments violating its contract
// (bad labels, dimension mismatches, non-projectors, ...).
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a computed value breaks a structural invariant that should
// hold by construction (failed unitarity of a catalog matrix, ...).
class invariant_error : public std::runtime_error {
 public:
  explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qeraser
