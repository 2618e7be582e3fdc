#include "core/fractional_order.hpp"

#include <cmath>
#include <stdexcept>

namespace sconv {

FractionalOrder::FractionalOrder(double s) : s_(s) {
    if (!(s > 0.0) || !(s < 1.0)) {
        throw std::invalid_argument("fractional order s must lie strictly in (0,1)");
    }
    // |Gamma(-s)| = Gamma(1-s)/s for s in (0,1).
    const double abs_gamma_neg_s = std::tgamma(1.0 - s) / s;
    c1s_ = std::pow(4.0, s) * std::tgamma(s + 0.5) /
           (std::sqrt(M_PI) * abs_gamma_neg_s);
    gamma2s1_ = std::tgamma(2.0 * s + 1.0);
}

} // namespace sconv
