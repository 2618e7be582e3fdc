#pragma once

namespace sconv {

/// Exponent s of the fractional Laplacian together with the derived
/// kernel constants used for closed-form comparisons.
///
/// The kernel constant is the standard 1-D normalization
///   C(1,s) = 4^s Gamma(s + 1/2) / (sqrt(pi) |Gamma(-s)|),
/// under which the reference profile -(1 - t^2)_+^s has operator value
/// Gamma(2s+1) on (-1,1).
class FractionalOrder {
public:
    explicit FractionalOrder(double s);

    double s() const noexcept { return s_; }
    /// C(1,s) > 0.
    double kernel_constant() const noexcept { return c1s_; }
    /// Gamma(2s+1), the reference operator value of the unit profile.
    double gamma_2s_plus_1() const noexcept { return gamma2s1_; }

private:
    double s_;
    double c1s_;
    double gamma2s1_;
};

} // namespace sconv
