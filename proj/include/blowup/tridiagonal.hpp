#pragma once

#include <span>
#include <vector>

namespace blowup {

/// Thomas algorithm for a tridiagonal system. `lower[i]` couples row i to
/// i-1 (lower[0] unused), `upper[i]` couples row i to i+1 (last unused).
/// Throws std::runtime_error on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace blowup
