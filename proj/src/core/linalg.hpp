#pragma once

#include <span>
#include <vector>

namespace sconv {

/// Dense row-major n x n matrix.
struct DenseMatrix {
    int n = 0;
    std::vector<double> a;

    explicit DenseMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

/// Solves A x = b by LU factorization with partial pivoting. A is
/// consumed. Throws on a numerically singular pivot.
std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b);

} // namespace sconv
