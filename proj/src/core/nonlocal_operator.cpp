#include "core/nonlocal_operator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sconv {

namespace {

bool in_union(const std::vector<Interval>& parts, double t) {
    for (const Interval& iv : parts) {
        if (iv.contains(t)) return true;
    }
    return false;
}

} // namespace

LineDiscretization resolve_line_discretization(const GridFunction& u,
                                               const OperatorOptions& opts) {
    LineDiscretization d;
    d.h = opts.line_spacing > 0.0 ? opts.line_spacing : u.dx();
    if (opts.truncation_radius > 0.0) {
        d.radius = opts.truncation_radius;
    } else {
        d.radius = u.domain().diameter() + 1.0;
    }
    // snap to a whole number of cells
    const int k = std::max(4, static_cast<int>(std::llround(d.radius / d.h)));
    d.radius = k * d.h;
    return d;
}

double directional_frac_lap(const GridFunction& u, const ExteriorData& g, Vec2 x,
                            Vec2 z, const FractionalOrder& order,
                            const OperatorOptions& opts) {
    if (!u.domain().contains(x)) {
        throw std::invalid_argument("operator evaluation point must lie inside the domain");
    }
    const LineDiscretization ld = resolve_line_discretization(u, opts);
    const Quadrature1D quad = build_quadrature(order, ld.h, ld.radius, opts.normalized);
    const int K = quad.half_width();
    const auto parts = u.domain().clip_line(x, z);
    if (parts.empty()) throw std::runtime_error("clip_line returned no interval for an interior point");

    const double u0 = u.eval(x);

    if (opts.mode == OperatorMode::full) {
        // assemble the 1-D restriction: u inside, g outside
        LineSample line;
        line.base = x;
        line.dir = z;
        line.h = ld.h;
        line.t_begin = -K * ld.h;
        line.values.resize(static_cast<size_t>(2 * K + 1));
        line.inside.resize(line.values.size());
        for (int j = -K; j <= K; ++j) {
            const double t = j * ld.h;
            const bool inside = j == 0 || in_union(parts, t);
            const Vec2 p = x + t * z;
            line.inside[static_cast<size_t>(j + K)] = inside ? 1 : 0;
            line.values[static_cast<size_t>(j + K)] = inside ? u.eval(p) : g(p);
        }
        line.values[static_cast<size_t>(K)] = u0;
        const TailModel tail = g.line_tail(x, z, quad.truncation_radius());
        return frac_lap_1d(line, K, quad, tail);
    }

    // localized modes: only in-domain kernel mass, no exterior, no tail
    Interval component;
    if (opts.mode == OperatorMode::localized_component) {
        component = connected_component(parts, 0.0);
    }
    double acc = 0.0;
    for (int k = 1; k <= K; ++k) {
        for (const double t : {k * ld.h, -k * ld.h}) {
            const bool included = opts.mode == OperatorMode::localized_union
                                      ? in_union(parts, t)
                                      : component.contains(t);
            if (!included) continue;
            acc += quad.weight(k) * (u.eval(x + t * z) - u0);
        }
    }
    return quad.scale() * acc;
}

Lambda1sResult lambda_1s(const GridFunction& u, const ExteriorData& g, Vec2 x,
                         const DirectionSet& directions, const FractionalOrder& order,
                         const OperatorOptions& opts) {
    Lambda1sResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions.size(); ++d) {
        const double v = directional_frac_lap(u, g, x, directions.at(d), order, opts);
        if (v < best.value) {
            best.value = v;
            best.argmin_direction = d;
        }
    }
    return best;
}

MongeAmpereResult monge_ampere_residual(const GridFunction& u, const ExteriorData& g,
                                        Vec2 x, const DirectionSet& directions,
                                        const FractionalOrder& order,
                                        const OperatorOptions& opts,
                                        const MongeAmpereOptions& ma) {
    if (u.domain().dim() != 2) {
        throw std::invalid_argument("Monge-Ampere residual requires a 2-D domain");
    }
    if (!(ma.a_max >= 1.0)) throw std::invalid_argument("a_max must be at least 1");
    if (ma.anisotropy_count < 1) throw std::invalid_argument("need at least one anisotropy");

    const int M = directions.size();
    std::vector<double> dirval(static_cast<size_t>(M));
    for (int d = 0; d < M; ++d) {
        dirval[static_cast<size_t>(d)] =
            directional_frac_lap(u, g, x, directions.at(d), order, opts);
    }
    const double w_ang = 2.0 * M_PI / M;  // both antipodal representatives
    const double exponent = (2.0 + 2.0 * order.s()) / 2.0;  // |.|^2 -> |.|^{N+2s}

    // log-spaced ratios in [1/a_max, a_max]; theta on the direction grid
    std::vector<double> ratios;
    if (ma.anisotropy_count == 1 || ma.a_max == 1.0) {
        ratios.push_back(1.0);
    } else {
        const double lo = std::log(1.0 / ma.a_max);
        const double hi = std::log(ma.a_max);
        for (int i = 0; i < ma.anisotropy_count; ++i) {
            ratios.push_back(std::exp(lo + (hi - lo) * i / (ma.anisotropy_count - 1)));
        }
    }

    MongeAmpereResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const double a : ratios) {
        for (int j = 0; j < M; ++j) {
            const double theta = directions.angle(j);
            double sum = 0.0;
            for (int d = 0; d < M; ++d) {
                const double phi = directions.angle(d) - theta;
                const double c = std::cos(phi);
                const double sn = std::sin(phi);
                // |A^{-1} z|^2 for A = R diag(a, 1/a) R^T
                const double q = (c * c) / (a * a) + (a * a) * (sn * sn);
                sum += w_ang * dirval[static_cast<size_t>(d)] / std::pow(q, exponent);
            }
            if (sum < best.value) {
                best.value = sum;
                best.a = a;
                best.theta = theta;
            }
        }
    }
    best.sign = best.value > 0.0 ? 1 : (best.value < 0.0 ? -1 : 0);
    return best;
}

} // namespace sconv
