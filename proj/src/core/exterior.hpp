#pragma once

#include <functional>
#include <string>

#include "core/geometry.hpp"
#include "core/quadrature.hpp"

namespace sconv {

/// The exterior datum g on R^N \ Omega: a bounded continuous evaluable
/// function plus the far-field policy used to close the kernel integral
/// beyond the sampled window of each line.
class ExteriorData {
public:
    enum class TailPolicy {
        /// Constant per side, anchored at the window ends g(x +- R z).
        /// Exact whenever g is constant along the line beyond the window.
        constant_at_window,
        /// Numerically integrated values of g along the line out to
        /// reach_radius, constant beyond. Use when g keeps varying
        /// past any reasonable window.
        exact_line_integral,
    };

    ExteriorData(std::function<double(Vec2)> g, double bound,
                 TailPolicy policy = TailPolicy::constant_at_window,
                 double reach_radius = 0.0);

    double operator()(Vec2 p) const { return g_(p); }
    double bound() const noexcept { return bound_; }
    TailPolicy tail_policy() const noexcept { return policy_; }

    /// Tail model for the line through x with direction z, sampled out
    /// to parameter radius R.
    TailModel line_tail(Vec2 x, Vec2 z, double window_radius) const;

    ExteriorData negated() const;

private:
    std::function<double(Vec2)> g_;
    double bound_ = 0.0;
    TailPolicy policy_ = TailPolicy::constant_at_window;
    double reach_radius_ = 0.0;
};

/// Builders for the datum specs understood by the CLI and scenarios:
///   constant:c
///   clamped_linear            g = clamp(x, -1, 1)
///   clamped_linear:a,lo,hi    g = clamp(a*x, lo, hi)
///   boundary_peak:px,py,r[,height]   C^1 bump of the given height at (px,py)
///   quadratic_clamped:R       g = min(|p|^2, R^2)
///   expr:<expression in x,y,r>
ExteriorData parse_exterior(const std::string& spec);

/// A 1-D datum on the line parameter, used by segment problems and the
/// dirichlet-1d command.
struct Profile {
    std::function<double(double)> f;
    std::string name;
    /// Tail hint for solve_segment; affine data must use an affine tail.
    enum class Tail { auto_constant, affine, zero } tail = Tail::auto_constant;

    double operator()(double t) const { return f(t); }
};

/// Profile specs:
///   constant:c
///   affine:slope[,intercept]
///   dyda:s                    -(1 - t^2)_+^s, zero outside
///   bump_2_4                  1 outside [2,4], (t-3)^2 inside
///   ge_one_bump[:x0,w,peak]   1 + smooth bump, peak at x0 (default 1.5, peak 2)
///   expr:<expression in t>
Profile parse_profile(const std::string& spec);

} // namespace sconv
