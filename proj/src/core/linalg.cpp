#include "core/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace sconv {

std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b) {
    const int n = a.n;
    if (static_cast<int>(b.size()) != n) {
        throw std::invalid_argument("lu_solve: dimension mismatch");
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) {
            throw std::runtime_error("lu_solve: singular matrix");
        }
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a.at(col, j), a.at(piv, j));
            std::swap(b[static_cast<size_t>(col)], b[static_cast<size_t>(piv)]);
        }
        const double inv = 1.0 / a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a.at(r, col) * inv;
            if (f == 0.0) continue;
            a.at(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= a.at(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = acc / a.at(i, i);
    }
    return x;
}

} // namespace sconv
