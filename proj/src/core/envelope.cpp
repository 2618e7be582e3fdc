#include "core/envelope.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace sconv {

void SolverConfig::validate(int dim) const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(relaxation > 0.0) || relaxation > 1.0) {
        throw std::invalid_argument("relaxation must lie in (0,1]");
    }
    if (dim == 2 && direction_count < 8) {
        throw std::invalid_argument("need at least 8 directions in 2-D");
    }
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be positive");
    if (!(grid_spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (accelerator == Accelerator::policy_iteration && policy_inner_sweeps < 1) {
        throw std::invalid_argument("policy iteration needs at least one inner sweep");
    }
    if (!(residual_target > 0.0)) throw std::invalid_argument("residual target must be positive");
}

namespace {

struct SlotRange {
    int k_begin;
    int k_end;   // inclusive
    int side;    // +1 or -1
};

struct LinePlan {
    double fixed_num = 0.0;
    double inv_mass = 0.0;
    double mass = 0.0;
    std::uint32_t rb = 0;
    std::uint32_t re = 0;
};

bool in_union(const std::vector<Interval>& parts, double t) {
    for (const Interval& iv : parts) {
        if (iv.contains(t)) return true;
    }
    return false;
}

struct Workspace {
    const Domain* domain = nullptr;
    const ExteriorData* g = nullptr;
    Quadrature1D quad;
    DirectionSet dirs;
    OperatorMode mode = OperatorMode::full;
    std::vector<Vec2> steps;  // h * z per direction
    std::vector<LinePlan> plans;
    std::vector<SlotRange> ranges;
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -std::numeric_limits<double>::infinity();
    double mass_scale = 0.0;
    int M = 0;

    Workspace(const Domain& d, const ExteriorData& gd, const FractionalOrder& order,
              const SolverConfig& cfg, const GridFunction& u)
        : domain(&d),
          g(&gd),
          quad(build_quadrature(order,
                                cfg.line_spacing > 0.0 ? cfg.line_spacing : cfg.grid_spacing,
                                [&] {
                                    OperatorOptions oo;
                                    oo.line_spacing = cfg.line_spacing;
                                    oo.truncation_radius = cfg.truncation_radius;
                                    return resolve_line_discretization(u, oo).radius;
                                }(),
                                false)),
          dirs(d.dim() == 1 ? DirectionSet::axis()
                            : DirectionSet::half_circle(cfg.direction_count)),
          mode(cfg.mode) {
        M = dirs.size();
        const double h = quad.h();
        steps.resize(static_cast<size_t>(M));
        for (int dd = 0; dd < M; ++dd) steps[static_cast<size_t>(dd)] = h * dirs.at(dd);
        build_plans(u, cfg.threads);
    }

    void build_plans(const GridFunction& u, int threads) {
        const auto& interior = u.interior();
        const int n = static_cast<int>(interior.size());
        plans.assign(static_cast<size_t>(n) * M, LinePlan{});

        const int chunk_count =
            std::max(1, std::min(n, threads > 0 ? threads
                                                : static_cast<int>(std::thread::hardware_concurrency())));
        std::vector<std::vector<SlotRange>> chunk_ranges(static_cast<size_t>(chunk_count));
        std::vector<std::pair<int, int>> bounds;
        const int per = (n + chunk_count - 1) / chunk_count;
        for (int ci = 0; ci < chunk_count; ++ci) {
            bounds.emplace_back(ci * per, std::min(n, (ci + 1) * per));
        }
        std::atomic<double> glo{std::numeric_limits<double>::infinity()};
        std::atomic<double> ghi{-std::numeric_limits<double>::infinity()};

        auto work = [&](int ci) {
            auto [b, e] = bounds[static_cast<size_t>(ci)];
            auto& local = chunk_ranges[static_cast<size_t>(ci)];
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            const int K = quad.half_width();
            const double h = quad.h();
            const double R = quad.truncation_radius();
            const double wsum = quad.weight_sum();
            for (int i = b; i < e; ++i) {
                const int f = interior[static_cast<size_t>(i)];
                const int iy = f / u.nx();
                const int ix = f - iy * u.nx();
                const Vec2 x = u.node_point(ix, iy);
                for (int d = 0; d < M; ++d) {
                    const Vec2 z = dirs.at(d);
                    auto parts = domain->clip_line(x, z);
                    Interval comp;
                    if (mode == OperatorMode::localized_component) {
                        comp = connected_component(parts, 0.0);
                        parts.assign(1, comp);
                    }
                    LinePlan plan;
                    plan.rb = static_cast<std::uint32_t>(local.size());
                    double localized_mass = 0.0;
                    for (int side = 0; side < 2; ++side) {
                        const double sgn = side == 0 ? 1.0 : -1.0;
                        int open = -1;
                        for (int k = 1; k <= K; ++k) {
                            const double t = sgn * k * h;
                            if (in_union(parts, t)) {
                                if (open < 0) open = k;
                                if (mode != OperatorMode::full) localized_mass += quad.weight(k);
                            } else {
                                if (open >= 0) {
                                    local.push_back({open, k - 1, side == 0 ? 1 : -1});
                                    open = -1;
                                }
                                if (mode == OperatorMode::full) {
                                    const Vec2 p = x + t * z;
                                    const double gv = (*g)(p);
                                    plan.fixed_num += quad.weight(k) * gv;
                                    lo = std::min(lo, gv);
                                    hi = std::max(hi, gv);
                                }
                            }
                        }
                        if (open >= 0) local.push_back({open, K, side == 0 ? 1 : -1});
                    }
                    if (mode == OperatorMode::full) {
                        const TailModel tail = g->line_tail(x, z, R);
                        const auto tc = tail.contribution(0.0, R, quad.s());
                        plan.fixed_num += tc.num;
                        plan.mass = 2.0 * wsum + tc.mass;
                    } else {
                        plan.mass = localized_mass;
                    }
                    plan.inv_mass = plan.mass > 0.0 ? 1.0 / plan.mass : 0.0;
                    plan.re = static_cast<std::uint32_t>(local.size());
                    plans[static_cast<size_t>(i) * M + d] = plan;
                }
            }
            // atomic min/max for doubles
            for (double cur = glo.load(); lo < cur && !glo.compare_exchange_weak(cur, lo);) {
            }
            for (double cur = ghi.load(); hi > cur && !ghi.compare_exchange_weak(cur, hi);) {
            }
        };
        {
            std::vector<std::thread> pool;
            for (int ci = 0; ci < chunk_count; ++ci) pool.emplace_back(work, ci);
            for (auto& th : pool) th.join();
        }
        // splice chunk-local ranges, fixing plan offsets
        std::vector<std::uint32_t> base(static_cast<size_t>(chunk_count) + 1, 0);
        for (int ci = 0; ci < chunk_count; ++ci) {
            base[static_cast<size_t>(ci) + 1] =
                base[static_cast<size_t>(ci)] +
                static_cast<std::uint32_t>(chunk_ranges[static_cast<size_t>(ci)].size());
        }
        ranges.resize(base.back());
        for (int ci = 0; ci < chunk_count; ++ci) {
            const auto& local = chunk_ranges[static_cast<size_t>(ci)];
            std::copy(local.begin(), local.end(), ranges.begin() + base[static_cast<size_t>(ci)]);
            auto [b, e] = bounds[static_cast<size_t>(ci)];
            for (int i = b; i < e; ++i) {
                for (int d = 0; d < M; ++d) {
                    auto& plan = plans[static_cast<size_t>(i) * M + d];
                    plan.rb += base[static_cast<size_t>(ci)];
                    plan.re += base[static_cast<size_t>(ci)];
                }
            }
        }
        g_lo = glo.load();
        g_hi = ghi.load();
        for (const auto& plan : plans) mass_scale = std::max(mass_scale, plan.mass);
    }
};

// Bellman update of one node against the snapshot: minimum over
// directions of the nonlocal mean. Returns the minimizing value,
// direction, and the operator residual min_d mass_d (val_d - u0).
struct NodeUpdate {
    double value;
    int dir;
    double lambda;
};

inline NodeUpdate update_node(const Workspace& ws, const GridFunction& grid,
                              const std::vector<double>& vals, int node_index, Vec2 x,
                              double u0, int only_dir = -1) {
    const int M = ws.M;
    const double* v = vals.data();
    const int nx = grid.nx();
    const int ny = grid.ny();
    const Vec2 org = grid.origin();
    const double inv_dx = 1.0 / grid.dx();

    NodeUpdate out{std::numeric_limits<double>::infinity(), 0,
                   std::numeric_limits<double>::infinity()};
    const int d_begin = only_dir >= 0 ? only_dir : 0;
    const int d_end = only_dir >= 0 ? only_dir + 1 : M;
    for (int d = d_begin; d < d_end; ++d) {
        const LinePlan& plan = ws.plans[static_cast<size_t>(node_index) * M + d];
        if (plan.mass <= 0.0) continue;
        double num = plan.fixed_num;
        const Vec2 step = ws.steps[static_cast<size_t>(d)];
        for (std::uint32_t ri = plan.rb; ri < plan.re; ++ri) {
            const SlotRange r = ws.ranges[ri];
            const double sx = r.side > 0 ? step.x : -step.x;
            const double sy = r.side > 0 ? step.y : -step.y;
            double px = x.x + r.k_begin * sx;
            double py = x.y + r.k_begin * sy;
            if (ny == 1) {
                for (int k = r.k_begin; k <= r.k_end; ++k, px += sx) {
                    const double fx = (px - org.x) * inv_dx;
                    const int ix = static_cast<int>(fx);
                    const double ax = fx - ix;
                    num += ws.quad.weight(k) *
                           (v[ix] * (1.0 - ax) + v[ix + 1] * ax);
                }
            } else {
                for (int k = r.k_begin; k <= r.k_end; ++k, px += sx, py += sy) {
                    const double fx = (px - org.x) * inv_dx;
                    const double fy = (py - org.y) * inv_dx;
                    const int ix = static_cast<int>(fx);
                    const int iy = static_cast<int>(fy);
                    const double ax = fx - ix;
                    const double ay = fy - iy;
                    const double* row = v + static_cast<size_t>(iy) * nx + ix;
                    const double lower = row[0] * (1.0 - ax) + row[1] * ax;
                    const double upper = row[nx] * (1.0 - ax) + row[nx + 1] * ax;
                    num += ws.quad.weight(k) * (lower * (1.0 - ay) + upper * ay);
                }
            }
        }
        const double val = num * plan.inv_mass;
        const double lam = num - plan.mass * u0;
        if (val < out.value) {
            out.value = val;
            out.dir = d;
        }
        out.lambda = std::min(out.lambda, lam);
    }
    if (!std::isfinite(out.value)) {
        throw std::runtime_error("no admissible direction at a node (localized mode)");
    }
    return out;
}

struct SweepStats {
    double max_change = 0.0;
    double residual = 0.0;
};

} // namespace

EnvelopeResult solve_envelope(const Domain& domain, const ExteriorData& g,
                              const FractionalOrder& order, const SolverConfig& config) {
    config.validate(domain.dim());

    auto fill = [&g](Vec2 p) { return g(p); };
    GridFunction grid(domain, config.grid_spacing, fill, 0.0);
    Workspace ws(domain, g, order, config, grid);

    // oscillation scale of the datum over everything sampled
    double glo = ws.g_lo;
    double ghi = ws.g_hi;
    for (size_t f = 0; f < grid.values().size(); ++f) {
        if (!grid.node_inside(static_cast<int>(f))) {
            glo = std::min(glo, grid.value(static_cast<int>(f)));
            ghi = std::max(ghi, grid.value(static_cast<int>(f)));
        }
    }
    const double osc = std::max(ghi - glo, 0.0);

    const auto& interior = grid.interior();
    const int n = static_cast<int>(interior.size());
    // start from the constant subsolution min g
    for (const int f : interior) grid.set_value(f, glo);

    std::vector<double> cur = grid.values();
    std::vector<double> next = cur;
    std::vector<int> policy(static_cast<size_t>(n), 0);

    std::vector<Vec2> points(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int f = interior[static_cast<size_t>(i)];
        const int iy = f / grid.nx();
        points[static_cast<size_t>(i)] = grid.node_point(f - iy * grid.nx(), iy);
    }

    const double eps_change = 64.0 * std::numeric_limits<double>::epsilon() *
                              (1.0 + std::max(std::abs(glo), std::abs(ghi)));
    const double eps_resid = 1024.0 * std::numeric_limits<double>::epsilon() *
                             ws.mass_scale * (1.0 + std::max(std::abs(glo), std::abs(ghi)));
    const double change_tol = config.tolerance * osc + eps_change;
    const double resid_tol = config.residual_target * osc + eps_resid;

    const bool jacobi = config.sweep_order == SweepOrder::jacobi;
    const double relax = config.relaxation;

    // Small problems are cheaper single-threaded than paying per-sweep
    // thread spawns.
    int thread_count = config.threads > 0
                           ? config.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 4096) thread_count = 1;
    thread_count = std::max(1, std::min(thread_count, n));
    std::vector<std::pair<int, int>> spans;
    {
        const int per = (n + thread_count - 1) / thread_count;
        for (int ci = 0; ci < thread_count; ++ci) {
            const int b = ci * per;
            const int e = std::min(n, b + per);
            if (b < e) spans.emplace_back(b, e);
        }
    }

    // One Jacobi pass over [b, e) against the cur snapshot; frozen < 0
    // minimizes over all directions, otherwise it follows the stored
    // policy.
    auto jacobi_span = [&](int b, int e, bool frozen) -> SweepStats {
        SweepStats local;
        for (int i = b; i < e; ++i) {
            const int f = interior[static_cast<size_t>(i)];
            const double u0 = cur[static_cast<size_t>(f)];
            const NodeUpdate up =
                update_node(ws, grid, cur, i, points[static_cast<size_t>(i)], u0,
                            frozen ? policy[static_cast<size_t>(i)] : -1);
            next[static_cast<size_t>(f)] = u0 + relax * (up.value - u0);
            if (!frozen) policy[static_cast<size_t>(i)] = up.dir;
            local.max_change = std::max(local.max_change, std::abs(up.value - u0));
            local.residual = std::max(local.residual, std::abs(up.lambda));
        }
        return local;
    };

    auto parallel_jacobi = [&](bool frozen) -> SweepStats {
        SweepStats stats;
        if (spans.size() == 1) {
            stats = jacobi_span(0, n, frozen);
        } else {
            std::vector<SweepStats> chunk_stats(spans.size());
            std::vector<std::thread> pool;
            for (size_t ci = 0; ci < spans.size(); ++ci) {
                pool.emplace_back([&, ci]() {
                    chunk_stats[ci] = jacobi_span(spans[ci].first, spans[ci].second, frozen);
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& cs : chunk_stats) {
                stats.max_change = std::max(stats.max_change, cs.max_change);
                stats.residual = std::max(stats.residual, cs.residual);
            }
        }
        std::swap(cur, next);
        return stats;
    };

    auto minimizing_sweep = [&]() -> SweepStats {
        if (jacobi) return parallel_jacobi(false);
        // Gauss-Seidel: lexicographic, in place, single-threaded by
        // contract for determinism.
        SweepStats stats;
        for (int i = 0; i < n; ++i) {
            const int f = interior[static_cast<size_t>(i)];
            const double u0 = cur[static_cast<size_t>(f)];
            const NodeUpdate up =
                update_node(ws, grid, cur, i, points[static_cast<size_t>(i)], u0);
            cur[static_cast<size_t>(f)] = u0 + relax * (up.value - u0);
            policy[static_cast<size_t>(i)] = up.dir;
            stats.max_change = std::max(stats.max_change, std::abs(up.value - u0));
            stats.residual = std::max(stats.residual, std::abs(up.lambda));
        }
        return stats;
    };

    // Policy inner solves are always Jacobi passes.
    auto frozen_sweep = [&]() -> double { return parallel_jacobi(true).max_change; };

    int sweeps = 0;
    bool converged = false;
    SweepStats last;

    if (config.accelerator == Accelerator::none) {
        while (sweeps < config.max_sweeps) {
            last = minimizing_sweep();
            ++sweeps;
            if (last.max_change <= change_tol && last.residual <= resid_tol) {
                converged = true;
                break;
            }
        }
    } else {
        const int warmup = std::min(config.policy_warmup_sweeps, config.max_sweeps);
        for (int i = 0; i < warmup && sweeps < config.max_sweeps; ++i) {
            last = minimizing_sweep();
            ++sweeps;
        }
        const double inner_floor = std::max(0.02 * change_tol, eps_change);
        while (sweeps < config.max_sweeps && !converged) {
            for (int i = 0; i < config.policy_inner_sweeps && sweeps < config.max_sweeps; ++i) {
                const double change = frozen_sweep();
                ++sweeps;
                if (change <= inner_floor) break;
            }
            if (sweeps >= config.max_sweeps) break;
            last = minimizing_sweep();
            ++sweeps;
            if (last.max_change <= change_tol && last.residual <= resid_tol) converged = true;
        }
    }

    grid.values() = cur;
    EnvelopeResult result{std::move(grid), last.residual, sweeps, converged,
                          std::move(policy), osc, ws.dirs};
    return result;
}

EnvelopeResult s_concave_envelope(const Domain& domain, const ExteriorData& g,
                                  const FractionalOrder& order, const SolverConfig& config) {
    EnvelopeResult r = solve_envelope(domain, g.negated(), order, config);
    for (double& v : r.u.values()) v = -v;
    return r;
}

std::vector<double> classical_convex_envelope_1d(std::span<const double> t,
                                                 std::span<const double> v) {
    const size_t n = t.size();
    if (n != v.size()) throw std::invalid_argument("abscissae/values size mismatch");
    if (n < 2) throw std::invalid_argument("need at least two points for a hull");
    for (size_t i = 1; i < n; ++i) {
        if (!(t[i] > t[i - 1])) {
            throw std::invalid_argument("abscissae must be strictly increasing");
        }
    }
    // monotone chain, lower hull only
    std::vector<size_t> hull;
    auto cross = [&](size_t a, size_t b, size_t c) {
        return (t[b] - t[a]) * (v[c] - v[a]) - (v[b] - v[a]) * (t[c] - t[a]);
    };
    for (size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) {
            hull.pop_back();
        }
        hull.push_back(i);
    }
    std::vector<double> out(n);
    size_t seg = 0;
    for (size_t i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() - 1 && t[hull[seg + 1]] <= t[i]) ++seg;
        const size_t a = hull[seg];
        const size_t b = hull[seg + 1];
        const double w = (t[i] - t[a]) / (t[b] - t[a]);
        out[i] = v[a] * (1.0 - w) + v[b] * w;
    }
    return out;
}

} // namespace sconv
