#include "sconv/sconv.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "core/dirichlet1d.hpp"
#include "core/envelope.hpp"
#include "core/exterior.hpp"
#include "core/fractional_order.hpp"
#include "core/geometry.hpp"
#include "core/grid_function.hpp"
#include "core/nonlocal_operator.hpp"
#include "core/quadrature.hpp"
#include "core/scenario.hpp"

namespace {

thread_local std::string g_last_error;

sconv_status fail(sconv_status code, const char* what) {
    g_last_error = what ? what : "unknown error";
    return code;
}

/* Runs fn, translating exceptions into status codes. */
template <typename Fn>
sconv_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return fail(SCONV_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SCONV_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SCONV_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SCONV_ERR_INTERNAL, "unknown exception");
    }
}

sconv::FractionalOrder make_order(double s) { return sconv::FractionalOrder(s); }

sconv::OperatorOptions to_core_opts(const sconv_operator_opts* opts) {
    sconv::OperatorOptions oo;
    if (!opts) return oo;
    oo.direction_count = opts->direction_count;
    oo.line_spacing = opts->line_spacing;
    oo.truncation_radius = opts->truncation_radius;
    oo.normalized = opts->normalized != 0;
    switch (opts->mode) {
        case SCONV_MODE_FULL: oo.mode = sconv::OperatorMode::full; break;
        case SCONV_MODE_LOCALIZED_UNION:
            oo.mode = sconv::OperatorMode::localized_union;
            break;
        case SCONV_MODE_LOCALIZED_COMPONENT:
            oo.mode = sconv::OperatorMode::localized_component;
            break;
        default: throw std::invalid_argument("unknown operator mode");
    }
    return oo;
}

sconv::SolverConfig to_core_config(const sconv_solver_config* cfg) {
    sconv::SolverConfig sc;
    if (!cfg) return sc;
    sc.tolerance = cfg->tolerance;
    sc.max_sweeps = cfg->max_sweeps;
    sc.sweep_order = cfg->sweep_order == SCONV_SWEEP_GAUSS_SEIDEL
                         ? sconv::SweepOrder::gauss_seidel_lexicographic
                         : sconv::SweepOrder::jacobi;
    sc.relaxation = cfg->relaxation;
    sc.direction_count = cfg->direction_count;
    switch (cfg->mode) {
        case SCONV_MODE_FULL: sc.mode = sconv::OperatorMode::full; break;
        case SCONV_MODE_LOCALIZED_UNION:
            sc.mode = sconv::OperatorMode::localized_union;
            break;
        case SCONV_MODE_LOCALIZED_COMPONENT:
            sc.mode = sconv::OperatorMode::localized_component;
            break;
        default: throw std::invalid_argument("unknown operator mode");
    }
    sc.accelerator = cfg->accelerator == SCONV_ACCEL_POLICY_ITERATION
                         ? sconv::Accelerator::policy_iteration
                         : sconv::Accelerator::none;
    sc.policy_inner_sweeps = cfg->policy_inner_sweeps;
    sc.policy_warmup_sweeps = cfg->policy_warmup_sweeps;
    sc.grid_spacing = cfg->grid_spacing;
    sc.line_spacing = cfg->line_spacing;
    sc.truncation_radius = cfg->truncation_radius;
    sc.residual_target = cfg->residual_target;
    sc.threads = cfg->threads;
    return sc;
}

sconv::DirectionSet directions_for(const sconv::Domain& d, int count) {
    return d.dim() == 1 ? sconv::DirectionSet::axis()
                        : sconv::DirectionSet::half_circle(count);
}

} // namespace

struct sconv_domain {
    sconv::Domain d;
};

struct sconv_exterior {
    sconv::ExteriorData g;
};

struct sconv_profile {
    sconv::Profile p;
};

struct sconv_field {
    sconv::GridFunction u;
    sconv::ExteriorData g;
};

struct sconv_result {
    sconv::EnvelopeResult r;
    sconv::ExteriorData g;
};

extern "C" {

const char* sconv_version(void) { return "0.1.0"; }

const char* sconv_last_error(void) { return g_last_error.c_str(); }

double sconv_kernel_constant(double s) {
    try {
        return make_order(s).kernel_constant();
    } catch (const std::exception&) {
        return 0.0;
    }
}

double sconv_gamma_2s_plus_1(double s) {
    try {
        return make_order(s).gamma_2s_plus_1();
    } catch (const std::exception&) {
        return 0.0;
    }
}

/* ------------------------------------------------------------------ */

sconv_status sconv_domain_create(const char* spec, sconv_domain** out) {
    if (!spec || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new sconv_domain{sconv::Domain::parse(spec)};
        return SCONV_OK;
    });
}

void sconv_domain_destroy(sconv_domain* d) { delete d; }

int sconv_domain_dim(const sconv_domain* d) { return d ? d->d.dim() : 0; }

int sconv_domain_strictly_convex(const sconv_domain* d) {
    return d && d->d.strictly_convex() ? 1 : 0;
}

int sconv_domain_contains(const sconv_domain* d, double x, double y) {
    return d && d->d.contains({x, y}) ? 1 : 0;
}

double sconv_domain_signed_distance(const sconv_domain* d, double x, double y) {
    return d ? d->d.signed_distance({x, y}) : 0.0;
}

sconv_status sconv_domain_clip_line(const sconv_domain* d, double x, double y,
                                    double zx, double zy, double* t_lo, double* t_hi,
                                    int capacity, int* count) {
    if (!d || !t_lo || !t_hi || !count || capacity < 1) {
        return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument or zero capacity");
    }
    return guarded([&]() {
        const auto parts = d->d.clip_line({x, y}, {zx, zy});
        *count = static_cast<int>(parts.size());
        for (int i = 0; i < *count && i < capacity; ++i) {
            t_lo[i] = parts[static_cast<size_t>(i)].lo;
            t_hi[i] = parts[static_cast<size_t>(i)].hi;
        }
        return SCONV_OK;
    });
}

sconv_status sconv_domain_component(const sconv_domain* d, double x, double y,
                                    double zx, double zy, double* t_lo, double* t_hi) {
    if (!d || !t_lo || !t_hi) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const auto parts = d->d.clip_line({x, y}, {zx, zy});
        const sconv::Interval iv = sconv::connected_component(parts, 0.0);
        *t_lo = iv.lo;
        *t_hi = iv.hi;
        return SCONV_OK;
    });
}

/* ------------------------------------------------------------------ */

sconv_status sconv_exterior_create(const char* spec, sconv_exterior** out) {
    if (!spec || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new sconv_exterior{sconv::parse_exterior(spec)};
        return SCONV_OK;
    });
}

sconv_status sconv_exterior_create_callback(sconv_field_fn fn, void* user,
                                            double bound, sconv_exterior** out) {
    if (!fn || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        auto g = [fn, user](sconv::Vec2 p) { return fn(p.x, p.y, user); };
        *out = new sconv_exterior{sconv::ExteriorData(g, bound)};
        return SCONV_OK;
    });
}

void sconv_exterior_destroy(sconv_exterior* g) { delete g; }

double sconv_exterior_eval(const sconv_exterior* g, double x, double y) {
    return g ? g->g({x, y}) : 0.0;
}

sconv_status sconv_profile_create(const char* spec, sconv_profile** out) {
    if (!spec || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new sconv_profile{sconv::parse_profile(spec)};
        return SCONV_OK;
    });
}

sconv_status sconv_profile_create_callback(sconv_profile_fn fn, void* user,
                                           sconv_profile** out) {
    if (!fn || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        sconv::Profile p;
        p.f = [fn, user](double t) { return fn(t, user); };
        p.name = "callback";
        *out = new sconv_profile{std::move(p)};
        return SCONV_OK;
    });
}

void sconv_profile_destroy(sconv_profile* p) { delete p; }

double sconv_profile_eval(const sconv_profile* p, double t) {
    return p ? p->p(t) : 0.0;
}

/* ------------------------------------------------------------------ */

sconv_status sconv_frac_lap_1d(double s, int normalized, const double* samples,
                               int count, int index, double h, double radius,
                               sconv_tail_kind tail, double tail_left,
                               double tail_right, double* out) {
    if (!samples || !out || count < 1) {
        return fail(SCONV_ERR_INVALID_ARGUMENT, "null samples or output");
    }
    return guarded([&]() {
        const sconv::FractionalOrder order(s);
        const sconv::Quadrature1D quad =
            sconv::build_quadrature(order, h, radius, normalized != 0);
        sconv::TailModel tm = sconv::TailModel::none();
        switch (tail) {
            case SCONV_TAIL_NONE: break;
            case SCONV_TAIL_ZERO: tm = sconv::TailModel::zero(); break;
            case SCONV_TAIL_CONSTANT:
                tm = sconv::TailModel::constant(tail_left, tail_right);
                break;
            case SCONV_TAIL_AFFINE: tm = sconv::TailModel::affine(); break;
            default: throw std::invalid_argument("unknown tail kind");
        }
        *out = sconv::frac_lap_1d({samples, static_cast<size_t>(count)}, index,
                                  index * h, quad, tm);
        return SCONV_OK;
    });
}

sconv_status sconv_solve_segment(double s, const sconv_profile* exterior, int n,
                                 double window_radius, double* out_values) {
    if (!exterior || !out_values) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        sconv::SegmentProblem prob{make_order(s), exterior->p.f, n, window_radius,
                                   std::nullopt};
        if (exterior->p.tail == sconv::Profile::Tail::affine) {
            prob.tail = sconv::TailModel::affine();
        } else if (exterior->p.tail == sconv::Profile::Tail::zero) {
            prob.tail = sconv::TailModel::zero();
        }
        const auto v = sconv::solve_segment(prob);
        std::memcpy(out_values, v.data(), v.size() * sizeof(double));
        return SCONV_OK;
    });
}

sconv_status sconv_segment_check(double s, const sconv_profile* candidate, int n,
                                 double window_radius, int* holds,
                                 double* worst_violation, double* location) {
    if (!candidate || !holds) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const auto rep =
            sconv::is_s_convex_on_segment(candidate->p.f, make_order(s), n, window_radius);
        *holds = rep.holds ? 1 : 0;
        if (worst_violation) *worst_violation = rep.worst_violation;
        if (location) *location = rep.location;
        return SCONV_OK;
    });
}

/* ------------------------------------------------------------------ */

void sconv_operator_opts_init(sconv_operator_opts* opts) {
    if (!opts) return;
    opts->direction_count = 64;
    opts->line_spacing = 0.0;
    opts->truncation_radius = 0.0;
    opts->normalized = 0;
    opts->mode = SCONV_MODE_FULL;
}

sconv_status sconv_field_create(const sconv_domain* d, const sconv_exterior* g,
                                sconv_field_fn fn, void* user, double dx,
                                sconv_field** out) {
    if (!d || !g || !fn || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        auto fill = [&](sconv::Vec2 p) { return g->g(p); };
        sconv::GridFunction u(d->d, dx, fill, 0.0);
        for (const int f : u.interior()) {
            const int iy = f / u.nx();
            const sconv::Vec2 p = u.node_point(f - iy * u.nx(), iy);
            u.set_value(f, fn(p.x, p.y, user));
        }
        *out = new sconv_field{std::move(u), g->g};
        return SCONV_OK;
    });
}

void sconv_field_destroy(sconv_field* f) { delete f; }

double sconv_field_eval(const sconv_field* f, double x, double y) {
    return f ? f->u.eval({x, y}) : 0.0;
}

sconv_status sconv_directional_frac_lap(const sconv_field* f, const sconv_exterior* g,
                                        double s, const sconv_operator_opts* opts,
                                        double x, double y, double zx, double zy,
                                        double* out) {
    if (!f || !g || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = sconv::directional_frac_lap(f->u, g->g, {x, y}, {zx, zy}, make_order(s),
                                           to_core_opts(opts));
        return SCONV_OK;
    });
}

sconv_status sconv_lambda_1s(const sconv_field* f, const sconv_exterior* g, double s,
                             const sconv_operator_opts* opts, double x, double y,
                             double* value, int* argmin_direction) {
    if (!f || !g || !value) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const sconv::OperatorOptions oo = to_core_opts(opts);
        const auto dirs = directions_for(f->u.domain(), oo.direction_count);
        const auto res = sconv::lambda_1s(f->u, g->g, {x, y}, dirs, make_order(s), oo);
        *value = res.value;
        if (argmin_direction) *argmin_direction = res.argmin_direction;
        return SCONV_OK;
    });
}

sconv_status sconv_monge_ampere(const sconv_field* f, const sconv_exterior* g,
                                double s, const sconv_operator_opts* opts, double x,
                                double y, double a_max, int anisotropy_count,
                                double* value, int* sign) {
    if (!f || !g || !value) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const sconv::OperatorOptions oo = to_core_opts(opts);
        const auto dirs = directions_for(f->u.domain(), oo.direction_count);
        sconv::MongeAmpereOptions ma;
        ma.a_max = a_max;
        ma.anisotropy_count = anisotropy_count;
        const auto res = sconv::monge_ampere_residual(f->u, g->g, {x, y}, dirs,
                                                      make_order(s), oo, ma);
        *value = res.value;
        if (sign) *sign = res.sign;
        return SCONV_OK;
    });
}

/* ------------------------------------------------------------------ */

void sconv_solver_config_init(sconv_solver_config* cfg) {
    if (!cfg) return;
    const sconv::SolverConfig d;
    cfg->tolerance = d.tolerance;
    cfg->max_sweeps = d.max_sweeps;
    cfg->sweep_order = SCONV_SWEEP_JACOBI;
    cfg->relaxation = d.relaxation;
    cfg->direction_count = d.direction_count;
    cfg->mode = SCONV_MODE_FULL;
    cfg->accelerator = SCONV_ACCEL_NONE;
    cfg->policy_inner_sweeps = d.policy_inner_sweeps;
    cfg->policy_warmup_sweeps = d.policy_warmup_sweeps;
    cfg->grid_spacing = d.grid_spacing;
    cfg->line_spacing = d.line_spacing;
    cfg->truncation_radius = d.truncation_radius;
    cfg->residual_target = d.residual_target;
    cfg->threads = d.threads;
}

sconv_status sconv_solve_envelope(const sconv_domain* d, const sconv_exterior* g,
                                  double s, const sconv_solver_config* cfg,
                                  sconv_result** out) {
    if (!d || !g || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        auto res = sconv::solve_envelope(d->d, g->g, make_order(s), to_core_config(cfg));
        const bool converged = res.converged;
        *out = new sconv_result{std::move(res), g->g};
        if (!converged) {
            return fail(SCONV_ERR_NO_CONVERGENCE,
                        "envelope iteration hit max_sweeps before convergence");
        }
        return SCONV_OK;
    });
}

sconv_status sconv_solve_concave_envelope(const sconv_domain* d, const sconv_exterior* g,
                                          double s, const sconv_solver_config* cfg,
                                          sconv_result** out) {
    if (!d || !g || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        auto res = sconv::s_concave_envelope(d->d, g->g, make_order(s), to_core_config(cfg));
        const bool converged = res.converged;
        *out = new sconv_result{std::move(res), g->g};
        if (!converged) {
            return fail(SCONV_ERR_NO_CONVERGENCE,
                        "envelope iteration hit max_sweeps before convergence");
        }
        return SCONV_OK;
    });
}

void sconv_result_destroy(sconv_result* r) { delete r; }

double sconv_result_residual(const sconv_result* r) { return r ? r->r.residual : 0.0; }
int sconv_result_sweeps(const sconv_result* r) { return r ? r->r.sweeps_used : 0; }
int sconv_result_converged(const sconv_result* r) {
    return r && r->r.converged ? 1 : 0;
}
double sconv_result_osc_g(const sconv_result* r) { return r ? r->r.osc_g : 0.0; }

int sconv_result_node_count(const sconv_result* r) {
    return r ? static_cast<int>(r->r.u.interior().size()) : 0;
}

sconv_status sconv_result_nodes(const sconv_result* r, double* x, double* y,
                                double* value, int* policy, double* policy_angle) {
    if (!r) return fail(SCONV_ERR_INVALID_ARGUMENT, "null result");
    const auto& u = r->r.u;
    const auto& interior = u.interior();
    for (size_t i = 0; i < interior.size(); ++i) {
        const int f = interior[i];
        const int iy = f / u.nx();
        const sconv::Vec2 p = u.node_point(f - iy * u.nx(), iy);
        if (x) x[i] = p.x;
        if (y) y[i] = p.y;
        if (value) value[i] = u.value(f);
        if (policy) policy[i] = r->r.policy[i];
        if (policy_angle) policy_angle[i] = r->r.directions.angle(r->r.policy[i]);
    }
    return SCONV_OK;
}

double sconv_result_eval(const sconv_result* r, double x, double y) {
    return r ? r->r.u.eval({x, y}) : 0.0;
}

sconv_status sconv_result_field(const sconv_result* r, sconv_field** out) {
    if (!r || !out) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new sconv_field{r->r.u, r->g};
        return SCONV_OK;
    });
}

/* ------------------------------------------------------------------ */

sconv_status sconv_check_s_convexity(const sconv_field* f, double s, int segments,
                                     int nodes_per_segment, uint64_t seed, int* holds,
                                     double* worst_violation, double* loc_x,
                                     double* loc_y, double* pass_rate) {
    if (!f || !holds) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        sconv::SamplingPlan plan;
        plan.segments = segments;
        plan.interior_nodes = nodes_per_segment;
        plan.seed = seed;
        const auto& grid = f->u;
        const auto& domain = grid.domain();
        auto g = f->g;
        auto u = [&grid, &domain, g](sconv::Vec2 p) {
            return domain.contains(p) ? grid.eval(p) : g(p);
        };
        const auto rep = sconv::check_s_convexity(u, domain, make_order(s), plan);
        *holds = rep.holds ? 1 : 0;
        if (worst_violation) *worst_violation = rep.worst_violation;
        if (loc_x) *loc_x = rep.location.x;
        if (loc_y) *loc_y = rep.location.y;
        if (pass_rate) *pass_rate = rep.pass_rate;
        return SCONV_OK;
    });
}

sconv_status sconv_convex_hull_1d(const double* t, const double* v, int count,
                                  double* out_hull) {
    if (!t || !v || !out_hull) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const auto hull = sconv::classical_convex_envelope_1d(
            {t, static_cast<size_t>(count)}, {v, static_cast<size_t>(count)});
        std::memcpy(out_hull, hull.data(), hull.size() * sizeof(double));
        return SCONV_OK;
    });
}

/* ------------------------------------------------------------------ */

int sconv_scenario_count(void) {
    return static_cast<int>(sconv::scenario_registry().size());
}

const char* sconv_scenario_name(int index) {
    const auto& reg = sconv::scenario_registry();
    if (index < 0 || index >= static_cast<int>(reg.size())) return nullptr;
    return reg[static_cast<size_t>(index)].name.c_str();
}

const char* sconv_scenario_summary(int index) {
    const auto& reg = sconv::scenario_registry();
    if (index < 0 || index >= static_cast<int>(reg.size())) return nullptr;
    return reg[static_cast<size_t>(index)].summary.c_str();
}

sconv_status sconv_scenario_run(const char* name, const char* overrides,
                                char** report_json) {
    if (!name || !report_json) return fail(SCONV_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const sconv::KeyValueConfig cfg =
            sconv::KeyValueConfig::parse(overrides ? overrides : "");
        const auto rep = sconv::run_scenario(name, cfg);
        const std::string json = sconv::report_to_json(rep);
        char* buf = static_cast<char*>(std::malloc(json.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, json.c_str(), json.size() + 1);
        *report_json = buf;
        return SCONV_OK;
    });
}

void sconv_string_free(char* s) { std::free(s); }

} /* extern "C" */
