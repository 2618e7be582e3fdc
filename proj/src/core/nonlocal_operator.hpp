#pragma once

#include "core/exterior.hpp"
#include "core/fractional_order.hpp"
#include "core/geometry.hpp"
#include "core/grid_function.hpp"
#include "core/quadrature.hpp"

namespace sconv {

enum class OperatorMode {
    /// Integrate over the whole line; exterior samples come from g.
    full,
    /// Restrict the integral to {t : x + t z in Omega}; the kernel mass
    /// of the complement is dropped and g is never evaluated.
    localized_union,
    /// Restrict to the connected component of the clipped line that
    /// contains x.
    localized_component,
};

struct OperatorOptions {
    int direction_count = 64;
    /// Line parameter spacing; 0 uses the grid spacing of u.
    double line_spacing = 0.0;
    /// Near-field truncation radius; 0 picks a radius covering the
    /// domain from any base point.
    double truncation_radius = 0.0;
    bool normalized = false;
    OperatorMode mode = OperatorMode::full;
};

/// The 1-D fractional Laplacian of t -> u(x + t z) at t = 0, assembled
/// from bilinear samples of u inside Omega and g outside (full mode).
double directional_frac_lap(const GridFunction& u, const ExteriorData& g, Vec2 x,
                            Vec2 z, const FractionalOrder& order,
                            const OperatorOptions& opts);

struct Lambda1sResult {
    double value = 0.0;
    int argmin_direction = 0;
};

/// Infimum of the directional operator over the direction set; ties
/// break to the smallest direction index.
Lambda1sResult lambda_1s(const GridFunction& u, const ExteriorData& g, Vec2 x,
                         const DirectionSet& directions, const FractionalOrder& order,
                         const OperatorOptions& opts);

struct MongeAmpereOptions {
    /// Anisotropy ratios are log-spaced in [1/a_max, a_max].
    double a_max = 100.0;
    int anisotropy_count = 9;
};

struct MongeAmpereResult {
    double value = 0.0;
    int sign = 0;
    double a = 1.0;
    double theta = 0.0;
};

/// Minimum over A = R(theta) diag(a, 1/a) R(-theta) of the angular sum
///   sum_z w(z) dirlap(z) / |A^{-1} z|^{N+2s},
/// with theta running over the direction set. N = 2 only.
MongeAmpereResult monge_ampere_residual(const GridFunction& u, const ExteriorData& g,
                                        Vec2 x, const DirectionSet& directions,
                                        const FractionalOrder& order,
                                        const OperatorOptions& opts,
                                        const MongeAmpereOptions& ma);

/// Resolved line discretization for the given grid/options (shared by
/// the operator and the envelope solver).
struct LineDiscretization {
    double h = 0.0;
    double radius = 0.0;
};
LineDiscretization resolve_line_discretization(const GridFunction& u,
                                               const OperatorOptions& opts);

} // namespace sconv
