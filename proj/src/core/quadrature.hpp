#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/fractional_order.hpp"

namespace sconv {

/// Far-field closure of the kernel integral beyond the sampled window.
///
/// In second-difference form the operator contribution of |r| > R is
///   integral_R^inf (u(t+r) + u(t-r) - 2 u(t)) r^{-1-2s} dr,
/// which this class supplies as a pair (num, mass) with the meaning
///   tail = num - mass * u(t).
class TailModel {
public:
    enum class Kind { none, zero, constant_exterior, affine, analytic };

    /// No far field: evaluation requires the full sample window.
    static TailModel none() { return TailModel(Kind::none); }
    /// u vanishes beyond the window.
    static TailModel zero() { return TailModel(Kind::zero); }
    /// u equals the given constants beyond the window, one per side.
    static TailModel constant(double left, double right);
    /// u continues affinely: the symmetric second difference vanishes,
    /// so the far field contributes exactly zero.
    static TailModel affine() { return TailModel(Kind::affine); }
    /// u given by a callable in the line parameter beyond the window;
    /// integrated numerically out to |t - center| = outer_radius and
    /// continued by its values there.
    static TailModel analytic(std::function<double(double)> line_values,
                              double outer_radius);

    Kind kind() const noexcept { return kind_; }

    struct Contribution {
        double num = 0.0;
        double mass = 0.0;
    };

    /// Tail terms for an evaluation centred at line parameter t_center
    /// with the near field truncated at the given radius.
    Contribution contribution(double t_center, double radius, double s) const;

private:
    explicit TailModel(Kind k) : kind_(k) {}

    Kind kind_;
    double left_ = 0.0;
    double right_ = 0.0;
    std::function<double(double)> values_;
    double outer_radius_ = 0.0;
};

/// Quadrature weights for the 1-D fractional Laplacian on a uniform
/// sampling, in symmetrized second-difference form:
///
///   L_h u(t) = sum_{k=1..K} w_k (u(t+kh) + u(t-kh) - 2 u(t)) + tail.
///
/// The singular cell [0,h] carries the exact moment of r^{1-2s} against
/// the discrete second difference; the remaining cells integrate the
/// kernel against a piecewise-linear reconstruction of the second
/// difference. All weights are nonnegative, which makes every scheme
/// built on top of them monotone.
class Quadrature1D {
public:
    double h() const noexcept { return h_; }
    int half_width() const noexcept { return half_width_; }
    double truncation_radius() const noexcept { return radius_; }
    double s() const noexcept { return s_; }
    bool normalized() const noexcept { return normalized_; }
    /// C(1,s) in normalized mode, 1 otherwise.
    double scale() const noexcept { return scale_; }

    /// w_k for k in [1, half_width].
    double weight(int k) const { return weights_[static_cast<size_t>(k)]; }
    std::span<const double> weights() const { return {weights_.data() + 1, weights_.size() - 1}; }
    double weight_sum() const noexcept { return weight_sum_; }

    /// Weight of the outermost node when the near field is truncated at
    /// k_cut <= half_width nodes (the piecewise-linear hat of the last
    /// retained cell loses its outward half).
    double truncated_edge_weight(int k_cut) const;
    /// Sum of weights for a truncated window of k_cut nodes per side.
    double truncated_weight_sum(int k_cut) const;

    friend Quadrature1D build_quadrature(const FractionalOrder& order, double h,
                                         double truncation_radius, bool normalized);

private:
    double h_ = 0.0;
    int half_width_ = 0;
    double radius_ = 0.0;
    double s_ = 0.0;
    bool normalized_ = false;
    double scale_ = 1.0;
    std::vector<double> weights_;   // index k = 1..K; [0] unused
    std::vector<double> cell_m1_;   // M1 of cell [kh,(k+1)h], k = 1..K-1
    double singular_weight_ = 0.0;  // moment of the cell [0,h] over h^2
    double weight_sum_ = 0.0;
};

/// Builds the weight set. Requires h > 0 and truncation_radius >= 4h.
/// In normalized mode results of frac_lap_1d are multiplied by C(1,s).
Quadrature1D build_quadrature(const FractionalOrder& order, double h,
                              double truncation_radius, bool normalized = false);

/// Discrete 1-D fractional Laplacian of the sampled values at the given
/// index. t_center is the line parameter of that sample (used by
/// analytic tails). When the index is closer to the window edge than
/// half_width, the near field is symmetrically truncated and the tail
/// model takes over from the reduced radius; with TailModel::none this
/// is an error.
double frac_lap_1d(std::span<const double> samples, int index, double t_center,
                   const Quadrature1D& quad, const TailModel& tail);

/// Root of the discrete relation L_h u(t) = 0 solved for the centre
/// value: a convex combination of the neighbouring samples and the tail
/// data. Requires a tail model with positive mass or at least one
/// in-window neighbour.
double nonlocal_mean_update(std::span<const double> samples, int index,
                            double t_center, const Quadrature1D& quad,
                            const TailModel& tail);

struct LineSample;

/// LineSample form: the node's line parameter comes from the sample.
/// The sample spacing must match the quadrature.
double frac_lap_1d(const LineSample& line, int index, const Quadrature1D& quad,
                   const TailModel& tail);

} // namespace sconv
