#include "core/dirichlet1d.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "core/linalg.hpp"

namespace sconv {

namespace {

struct Window {
    int n = 0;          // interior nodes
    int half_width = 0; // K
    double h = 0.0;
    int j_min = 0;      // first sample index (1 - K)
    std::vector<double> exterior; // samples at j in [j_min, n + K], NaN at interior
};

Window sample_window(const SegmentProblem& p) {
    if (p.interior_nodes < 1) throw std::invalid_argument("need at least one interior node");
    if (!(p.window_radius > 0.0)) throw std::invalid_argument("window radius must be positive");
    Window w;
    w.n = p.interior_nodes;
    w.h = 1.0 / (w.n + 1);
    w.half_width = static_cast<int>(std::llround(p.window_radius / w.h));
    if (w.half_width < 4) throw std::invalid_argument("window too small: fewer than 4 cells");
    w.j_min = 1 - w.half_width;
    const int j_max = w.n + w.half_width;
    w.exterior.assign(static_cast<size_t>(j_max - w.j_min + 1),
                      std::numeric_limits<double>::quiet_NaN());
    for (int j = w.j_min; j <= j_max; ++j) {
        if (j >= 1 && j <= w.n) continue;
        const double t = j * w.h;
        const double v = p.exterior(t);
        if (!std::isfinite(v)) {
            throw std::invalid_argument("exterior datum is non-finite at t = " + std::to_string(t));
        }
        w.exterior[static_cast<size_t>(j - w.j_min)] = v;
    }
    return w;
}

TailModel default_tail(const Window& w) {
    // constant per side: mean of the outermost decade of samples
    const int decade = std::max(1, w.half_width / 10);
    double left = 0.0;
    double right = 0.0;
    for (int i = 0; i < decade; ++i) {
        left += w.exterior[static_cast<size_t>(i)];
        right += w.exterior[w.exterior.size() - 1 - static_cast<size_t>(i)];
    }
    return TailModel::constant(left / decade, right / decade);
}

} // namespace

std::vector<double> solve_segment(const SegmentProblem& p) {
    Window w = sample_window(p);
    const Quadrature1D quad = build_quadrature(p.order, w.h, p.window_radius, false);
    const int K = quad.half_width();
    const TailModel tail = p.tail ? *p.tail : default_tail(w);

    const int n = w.n;
    DenseMatrix A(n);
    std::vector<double> b(static_cast<size_t>(n), 0.0);
    for (int i = 1; i <= n; ++i) {
        const int row = i - 1;
        const TailModel::Contribution tc =
            tail.contribution(i * w.h, quad.truncation_radius(), quad.s());
        A.at(row, row) = 2.0 * quad.weight_sum() + tc.mass;
        b[static_cast<size_t>(row)] = tc.num;
        for (int k = 1; k <= K; ++k) {
            const double wk = quad.weight(k);
            for (const int j : {i + k, i - k}) {
                if (j >= 1 && j <= n) {
                    A.at(row, j - 1) -= wk;
                } else {
                    b[static_cast<size_t>(row)] +=
                        wk * w.exterior[static_cast<size_t>(j - w.j_min)];
                }
            }
        }
    }
    std::vector<double> v = lu_solve(std::move(A), std::move(b));
    for (const double x : v) {
        if (!std::isfinite(x)) throw std::runtime_error("segment solve produced non-finite values");
    }
    return v;
}

SegmentReport is_s_convex_on_segment(const std::function<double(double)>& u_line,
                                     const FractionalOrder& order, int interior_nodes,
                                     double window_radius, std::optional<TailModel> tail) {
    SegmentProblem p{order, u_line, interior_nodes, window_radius, std::move(tail)};
    const std::vector<double> v = solve_segment(p);

    const double h = 1.0 / (interior_nodes + 1);
    // oscillation of the candidate over the sampled window as the scale
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const int K = static_cast<int>(std::llround(window_radius / h));
    for (int j = 1 - K; j <= interior_nodes + K; ++j) {
        const double val = u_line(j * h);
        lo = std::min(lo, val);
        hi = std::max(hi, val);
    }
    const double osc = hi - lo;
    // absolute floor covering accumulated roundoff of the long kernel
    // sums behind the solve
    const double roundoff =
        4096.0 * std::numeric_limits<double>::epsilon() *
        (1.0 + std::max(std::abs(lo), std::abs(hi)));
    const double tol = 10.0 * std::pow(h, 2.0 - 2.0 * order.s()) * osc + roundoff;

    SegmentReport rep;
    rep.tolerance = tol;
    for (int i = 1; i <= interior_nodes; ++i) {
        const double gap = u_line(i * h) - v[static_cast<size_t>(i - 1)];
        if (gap > rep.worst_violation) {
            rep.worst_violation = gap;
            rep.location = i * h;
        }
    }
    rep.holds = rep.worst_violation <= tol;
    return rep;
}

ConvexityReport check_s_convexity(const std::function<double(Vec2)>& u,
                                  const Domain& domain, const FractionalOrder& order,
                                  const SamplingPlan& plan) {
    if (plan.segments < 1) throw std::invalid_argument("sampling plan needs segments >= 1");
    std::mt19937_64 rng(plan.seed);
    const BoundingBox bb = domain.bounding_box();
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
    std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);

    const double diam = domain.diameter();
    const double min_sep =
        plan.min_separation > 0.0 ? plan.min_separation
                                  : std::max(4.0 * diam / (plan.interior_nodes + 1), 0.02 * diam);

    auto draw_point = [&]() -> Vec2 {
        for (int tries = 0; tries < 10000; ++tries) {
            Vec2 p{ux(rng), domain.dim() == 1 ? 0.0 : uy(rng)};
            if (domain.contains(p)) return p;
        }
        throw std::runtime_error("could not sample a point inside the domain");
    };
    auto segment_inside = [&](Vec2 a, Vec2 b) {
        const double len = norm(b - a);
        if (len < min_sep) return false;
        const Vec2 z = (1.0 / len) * (b - a);
        const auto parts = domain.clip_line(a, z);
        for (const Interval& iv : parts) {
            if (iv.lo < 1e-12 && iv.hi > len - 1e-12) return true;
        }
        return false;
    };

    ConvexityReport rep;
    rep.segments_checked = plan.segments;
    int passed = 0;
    for (int sidx = 0; sidx < plan.segments; ++sidx) {
        Vec2 a, b;
        int guard = 0;
        do {
            a = draw_point();
            b = draw_point();
            if (++guard > 20000) throw std::runtime_error("segment sampling failed");
        } while (!segment_inside(a, b));

        const double len = norm(b - a);
        // datum along the full line in segment parameter tau: point = a + tau (b - a)
        auto line = [&, a, b, len](double tau) { return u(a + tau * (b - a)); };
        // window covers the domain and the near exterior in tau units
        const double radius = (2.0 * diam + 2.0) / len;
        SegmentReport sr =
            is_s_convex_on_segment(line, order, plan.interior_nodes, radius, std::nullopt);
        if (sr.holds) {
            ++passed;
        } else if (sr.worst_violation > rep.worst_violation) {
            rep.worst_violation = sr.worst_violation;
            rep.location = a + sr.location * (b - a);
        }
    }
    rep.pass_rate = static_cast<double>(passed) / plan.segments;
    rep.holds = passed == plan.segments;
    return rep;
}

} // namespace sconv
