#pragma once

#include <functional>

namespace sconv {

/// Adaptive Simpson quadrature on [a, b]. The integrand must be finite
/// on the closed interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

} // namespace sconv
