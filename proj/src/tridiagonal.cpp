#include "blowup/tridiagonal.hpp"

#include <stdexcept>

namespace blowup {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
        throw std::invalid_argument("tridiagonal bands and rhs must have equal nonzero length");
    }
    std::vector<double> c(n), d(n);
    double pivot = diag[0];
    if (pivot == 0.0) throw std::runtime_error("singular tridiagonal system");
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c[i - 1];
        if (pivot == 0.0) throw std::runtime_error("singular tridiagonal system");
        c[i] = (i + 1 < n) ? upper[i] / pivot : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

}  // namespace blowup
