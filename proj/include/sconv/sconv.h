/* sconv - fractional convex envelopes and the operators behind them.
 *
 * C API of the shared library. All handles are opaque; functions
 * return sconv_status and write results through out-parameters.
 * sconv_last_error() describes the most recent failure on the calling
 * thread.
 */
#ifndef SCONV_H
#define SCONV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sconv_status {
    SCONV_OK = 0,
    SCONV_ERR_INVALID_ARGUMENT = 1,
    SCONV_ERR_PARSE = 2,
    SCONV_ERR_GEOMETRY = 3,
    SCONV_ERR_NO_CONVERGENCE = 4,
    SCONV_ERR_INTERNAL = 5
} sconv_status;

const char* sconv_version(void);
/* Message for the last failure on this thread; empty string if none. */
const char* sconv_last_error(void);

/* ------------------------------------------------------------------ */
/* Fractional order helpers                                            */

/* The kernel normalization constant C(1,s); 0 on invalid s. */
double sconv_kernel_constant(double s);
/* Gamma(2s+1), the reference operator value of the unit profile. */
double sconv_gamma_2s_plus_1(double s);

/* ------------------------------------------------------------------ */
/* Domains                                                             */

typedef struct sconv_domain sconv_domain;

/* Specs: "ball:r", "ball:cx,cy,r", "interval:a,b", "ellipse:a,b",
 * "ellipse:cx,cy,a,b", "square:hw", "square:cx,cy,hw", "dumbbell",
 * "dumbbell:lobe_x,lobe_r,neck_hh". */
sconv_status sconv_domain_create(const char* spec, sconv_domain** out);
void sconv_domain_destroy(sconv_domain* d);

int sconv_domain_dim(const sconv_domain* d);
int sconv_domain_strictly_convex(const sconv_domain* d);
int sconv_domain_contains(const sconv_domain* d, double x, double y);
double sconv_domain_signed_distance(const sconv_domain* d, double x, double y);

/* Clipped line through (x,y) with unit direction (zx,zy): writes up to
 * capacity interval bounds into t_lo/t_hi and the interval count. */
sconv_status sconv_domain_clip_line(const sconv_domain* d, double x, double y,
                                    double zx, double zy, double* t_lo,
                                    double* t_hi, int capacity, int* count);
/* The connected component of the clipped line containing t = 0. */
sconv_status sconv_domain_component(const sconv_domain* d, double x, double y,
                                    double zx, double zy, double* t_lo,
                                    double* t_hi);

/* ------------------------------------------------------------------ */
/* Exterior data and 1-D profiles                                      */

typedef struct sconv_exterior sconv_exterior;
typedef double (*sconv_field_fn)(double x, double y, void* user);

/* Specs: "constant:c", "clamped_linear", "clamped_linear:a,lo,hi",
 * "boundary_peak:px,py,r[,h]", "quadratic_clamped:R",
 * "expr:<expression in x,y,r>". */
sconv_status sconv_exterior_create(const char* spec, sconv_exterior** out);
sconv_status sconv_exterior_create_callback(sconv_field_fn fn, void* user,
                                            double bound, sconv_exterior** out);
void sconv_exterior_destroy(sconv_exterior* g);
double sconv_exterior_eval(const sconv_exterior* g, double x, double y);

typedef struct sconv_profile sconv_profile;
typedef double (*sconv_profile_fn)(double t, void* user);

/* Specs: "constant:c", "affine:a[,b]", "dyda:s", "bump_2_4",
 * "ge_one_bump[:x0,w,peak]", "expr:<expression in t>". */
sconv_status sconv_profile_create(const char* spec, sconv_profile** out);
sconv_status sconv_profile_create_callback(sconv_profile_fn fn, void* user,
                                           sconv_profile** out);
void sconv_profile_destroy(sconv_profile* p);
double sconv_profile_eval(const sconv_profile* p, double t);

/* ------------------------------------------------------------------ */
/* 1-D kernel                                                          */

typedef enum sconv_tail_kind {
    SCONV_TAIL_NONE = 0,
    SCONV_TAIL_ZERO = 1,
    SCONV_TAIL_CONSTANT = 2,
    SCONV_TAIL_AFFINE = 3
} sconv_tail_kind;

/* Discrete fractional Laplacian of uniformly sampled values at the
 * given index. h is the sample spacing, radius the near-field
 * truncation (>= 4h). tail_left/right are used by SCONV_TAIL_CONSTANT. */
sconv_status sconv_frac_lap_1d(double s, int normalized, const double* samples,
                               int count, int index, double h, double radius,
                               sconv_tail_kind tail, double tail_left,
                               double tail_right, double* out);

/* ------------------------------------------------------------------ */
/* Segment Dirichlet problems and the s-convexity check                */

/* Solves the fractional Dirichlet problem on the parameter segment
 * (0,1) with n interior nodes; exterior data from the profile. Writes
 * n values. window_radius in parameter units. */
sconv_status sconv_solve_segment(double s, const sconv_profile* exterior, int n,
                                 double window_radius, double* out_values);

/* Checks the segment definition of s-convexity for the candidate
 * profile (evaluable on the whole line). */
sconv_status sconv_segment_check(double s, const sconv_profile* candidate, int n,
                                 double window_radius, int* holds,
                                 double* worst_violation, double* location);

/* ------------------------------------------------------------------ */
/* Operator evaluation                                                 */

typedef enum sconv_operator_mode {
    SCONV_MODE_FULL = 0,
    SCONV_MODE_LOCALIZED_UNION = 1,
    SCONV_MODE_LOCALIZED_COMPONENT = 2
} sconv_operator_mode;

typedef struct sconv_operator_opts {
    int direction_count;     /* half-circle directions, 2-D only */
    double line_spacing;     /* 0: grid spacing */
    double truncation_radius;/* 0: domain-derived */
    int normalized;          /* multiply by C(1,s) */
    sconv_operator_mode mode;
} sconv_operator_opts;

void sconv_operator_opts_init(sconv_operator_opts* opts);

typedef struct sconv_field sconv_field;

/* A field samples u inside the domain onto a lattice of spacing dx;
 * exterior lattice ghosts come from g. */
sconv_status sconv_field_create(const sconv_domain* d, const sconv_exterior* g,
                                sconv_field_fn fn, void* user, double dx,
                                sconv_field** out);
void sconv_field_destroy(sconv_field* f);
double sconv_field_eval(const sconv_field* f, double x, double y);

/* Directional 1-D fractional Laplacian at (x,y) along the unit
 * direction (zx,zy). */
sconv_status sconv_directional_frac_lap(const sconv_field* f,
                                        const sconv_exterior* g, double s,
                                        const sconv_operator_opts* opts, double x,
                                        double y, double zx, double zy,
                                        double* out);

/* Infimum over the direction set; argmin ties break to the smallest
 * index. */
sconv_status sconv_lambda_1s(const sconv_field* f, const sconv_exterior* g,
                             double s, const sconv_operator_opts* opts, double x,
                             double y, double* value, int* argmin_direction);

/* Minimum over anisotropies A = R(theta) diag(a,1/a) R(-theta) of the
 * kernel-weighted angular sum; sign in {-1,0,1}. */
sconv_status sconv_monge_ampere(const sconv_field* f, const sconv_exterior* g,
                                double s, const sconv_operator_opts* opts,
                                double x, double y, double a_max,
                                int anisotropy_count, double* value, int* sign);

/* ------------------------------------------------------------------ */
/* Envelope solver                                                     */

typedef enum sconv_sweep_order {
    SCONV_SWEEP_JACOBI = 0,
    SCONV_SWEEP_GAUSS_SEIDEL = 1
} sconv_sweep_order;

typedef enum sconv_accelerator {
    SCONV_ACCEL_NONE = 0,
    SCONV_ACCEL_POLICY_ITERATION = 1
} sconv_accelerator;

typedef struct sconv_solver_config {
    double tolerance;          /* sup-change threshold, relative to osc(g) */
    int max_sweeps;
    sconv_sweep_order sweep_order;
    double relaxation;         /* in (0,1] */
    int direction_count;
    sconv_operator_mode mode;
    sconv_accelerator accelerator;
    int policy_inner_sweeps;
    int policy_warmup_sweeps;
    double grid_spacing;
    double line_spacing;       /* 0: grid spacing */
    double truncation_radius;  /* 0: domain-derived */
    double residual_target;    /* relative to osc(g) */
    int threads;               /* 0: hardware concurrency */
} sconv_solver_config;

void sconv_solver_config_init(sconv_solver_config* cfg);

typedef struct sconv_result sconv_result;

/* Solves the envelope problem. Returns SCONV_ERR_NO_CONVERGENCE (with
 * the best iterate still available in *out) when max_sweeps is hit. */
sconv_status sconv_solve_envelope(const sconv_domain* d, const sconv_exterior* g,
                                  double s, const sconv_solver_config* cfg,
                                  sconv_result** out);
sconv_status sconv_solve_concave_envelope(const sconv_domain* d,
                                          const sconv_exterior* g, double s,
                                          const sconv_solver_config* cfg,
                                          sconv_result** out);
void sconv_result_destroy(sconv_result* r);

double sconv_result_residual(const sconv_result* r);
int sconv_result_sweeps(const sconv_result* r);
int sconv_result_converged(const sconv_result* r);
double sconv_result_osc_g(const sconv_result* r);
int sconv_result_node_count(const sconv_result* r);
/* Writes node_count entries per non-null buffer: coordinates, values,
 * argmin direction index, argmin direction angle. */
sconv_status sconv_result_nodes(const sconv_result* r, double* x, double* y,
                                double* value, int* policy, double* policy_angle);
double sconv_result_eval(const sconv_result* r, double x, double y);
/* A field view of the solution (shares no state; field must be
 * destroyed independently). */
sconv_status sconv_result_field(const sconv_result* r, sconv_field** out);

/* ------------------------------------------------------------------ */
/* N-dimensional s-convexity check                                     */

sconv_status sconv_check_s_convexity(const sconv_field* f, double s, int segments,
                                     int nodes_per_segment, uint64_t seed,
                                     int* holds, double* worst_violation,
                                     double* loc_x, double* loc_y,
                                     double* pass_rate);

/* ------------------------------------------------------------------ */
/* Classical 1-D convex envelope (comparison baseline)                 */

sconv_status sconv_convex_hull_1d(const double* t, const double* v, int count,
                                  double* out_hull);

/* ------------------------------------------------------------------ */
/* Scenario library                                                    */

int sconv_scenario_count(void);
const char* sconv_scenario_name(int index);
const char* sconv_scenario_summary(int index);

/* Runs a scenario with flat "key = value" overrides (may be NULL).
 * On success *report_json holds a JSON document (checks, tables,
 * resolved params, all_pass); free it with sconv_string_free. A failed
 * expected check is reported inside the JSON, not as a status. */
sconv_status sconv_scenario_run(const char* name, const char* overrides,
                                char** report_json);
void sconv_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCONV_H */
