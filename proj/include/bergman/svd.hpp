#pragma once

#include <complex>
#include <vector>

namespace bergman {

// Singular values of a dense complex matrix (row-major, rows x cols,
// rows >= cols preferred) by one-sided Jacobi sweeps on the columns.
// Converges when the largest normalized column inner product drops below
// `tol`; values return sorted descending.
std::vector<double> singular_values_jacobi(std::vector<std::complex<double>> a, int rows,
                                           int cols, double tol = 1e-12,
                                           int max_sweeps = 64);

}  // namespace bergman
