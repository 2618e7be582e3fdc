#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "core/exterior.hpp"
#include "core/fractional_order.hpp"
#include "core/geometry.hpp"
#include "core/quadrature.hpp"

namespace sconv {

/// The fractional Dirichlet problem on the unit parameter segment:
/// find v with the discrete operator vanishing at the interior nodes
/// t_k = k/(n+1), k = 1..n, given exterior data on the rest of the line.
struct SegmentProblem {
    FractionalOrder order;
    /// Datum in the segment parameter, evaluated for t outside (0,1).
    std::function<double(double)> exterior;
    int interior_nodes = 255;
    /// Sampling window half-width in parameter units; the far field
    /// beyond it is closed by the tail model.
    double window_radius = 4.0;
    /// Empty: constant tail from the mean of the outermost decade of
    /// sampled data on each side.
    std::optional<TailModel> tail;
};

/// Solves the segment problem by a dense factorization of the monotone
/// linear system. The result satisfies the discrete maximum principle.
std::vector<double> solve_segment(const SegmentProblem& problem);

struct SegmentReport {
    bool holds = true;
    double worst_violation = 0.0;
    /// Parameter of the worst violation in (0,1).
    double location = 0.0;
    double tolerance = 0.0;
};

/// Checks u <= v + tol along the segment, where v solves the segment
/// problem with u itself as exterior data. u is given in the segment
/// parameter and must be evaluable on the whole sampled line.
SegmentReport is_s_convex_on_segment(const std::function<double(double)>& u_line,
                                     const FractionalOrder& order, int interior_nodes,
                                     double window_radius,
                                     std::optional<TailModel> tail = std::nullopt);

struct SamplingPlan {
    int segments = 200;
    int interior_nodes = 128;
    /// Minimum endpoint separation in physical units (0: 4 grid cells).
    double min_separation = 0.0;
    std::uint64_t seed = 42;
};

struct ConvexityReport {
    bool holds = true;
    double worst_violation = 0.0;
    Vec2 location;
    double pass_rate = 1.0;
    int segments_checked = 0;
};

/// Runs the segment check over randomly sampled chords of the domain.
/// u must be evaluable on all of R^N (candidate inside, its own
/// extension outside).
ConvexityReport check_s_convexity(const std::function<double(Vec2)>& u,
                                  const Domain& domain, const FractionalOrder& order,
                                  const SamplingPlan& plan);

} // namespace sconv
