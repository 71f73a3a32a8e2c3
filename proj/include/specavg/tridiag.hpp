#pragma once

#include <vector>

namespace specavg {

/// All eigenvalues of the real symmetric tridiagonal matrix with diagonal
/// `diag` (size n) and off-diagonal `off` (size n-1), by the implicit-shift
/// QL algorithm, returned in ascending order. Eigenvectors are not
/// accumulated.
std::vector<double> tridiag_eigenvalues(std::vector<double> diag, std::vector<double> off);

} // namespace specavg
