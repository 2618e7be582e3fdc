#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/exterior.hpp"
#include "core/fractional_order.hpp"
#include "core/geometry.hpp"
#include "core/grid_function.hpp"
#include "core/nonlocal_operator.hpp"

namespace sconv {

enum class SweepOrder { jacobi, gauss_seidel_lexicographic };
enum class Accelerator { none, policy_iteration };

struct SolverConfig {
    /// Sup-norm change threshold per sweep, relative to osc(g).
    double tolerance = 1e-8;
    int max_sweeps = 20000;
    SweepOrder sweep_order = SweepOrder::jacobi;
    /// In (0, 1]; 1 is the plain Bellman update.
    double relaxation = 1.0;
    int direction_count = 64;
    OperatorMode mode = OperatorMode::full;
    Accelerator accelerator = Accelerator::none;
    /// Linear sweeps per frozen policy (policy_iteration only).
    int policy_inner_sweeps = 400;
    int policy_warmup_sweeps = 8;
    /// Lattice spacing.
    double grid_spacing = 1.0 / 64;
    /// Line parameter spacing; 0 uses grid_spacing.
    double line_spacing = 0.0;
    /// Kernel truncation radius; 0 picks a radius covering the domain.
    double truncation_radius = 0.0;
    /// Residual stopping threshold, relative to osc(g).
    double residual_target = 1e-3;
    /// Worker threads for Jacobi sweeps; 0 = hardware concurrency.
    int threads = 0;

    void validate(int dim) const;
};

struct EnvelopeResult {
    GridFunction u;
    /// sup over interior nodes of |min_z L_h u| (unnormalized kernel).
    double residual = 0.0;
    int sweeps_used = 0;
    bool converged = false;
    /// Argmin direction index per interior node (parallel to
    /// u.interior()).
    std::vector<int> policy;
    double osc_g = 0.0;
    DirectionSet directions;
};

/// Computes the s-convex envelope: the solution of the Bellman problem
/// "min over directions of the 1-D fractional Laplacian equals zero"
/// inside the domain, with exterior datum g. Iterates the monotone
/// nonlocal-mean update upward from the constant subsolution min g.
EnvelopeResult solve_envelope(const Domain& domain, const ExteriorData& g,
                              const FractionalOrder& order, const SolverConfig& config);

/// The s-concave envelope via the identity with the negated datum.
EnvelopeResult s_concave_envelope(const Domain& domain, const ExteriorData& g,
                                  const FractionalOrder& order, const SolverConfig& config);

/// Lower convex hull of 1-D samples (t strictly increasing): the
/// classical convex envelope baseline. Returns hull values at the
/// input abscissae.
std::vector<double> classical_convex_envelope_1d(std::span<const double> t,
                                                 std::span<const double> v);

} // namespace sconv
