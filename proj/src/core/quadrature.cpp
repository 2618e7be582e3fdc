#include "core/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "core/geometry.hpp"
#include "core/integrate.hpp"

namespace sconv {

TailModel TailModel::constant(double left, double right) {
    if (!std::isfinite(left) || !std::isfinite(right)) {
        throw std::invalid_argument("constant tail values must be finite");
    }
    TailModel t(Kind::constant_exterior);
    t.left_ = left;
    t.right_ = right;
    return t;
}

TailModel TailModel::analytic(std::function<double(double)> line_values,
                              double outer_radius) {
    if (!line_values) throw std::invalid_argument("analytic tail needs a callable");
    if (!(outer_radius > 0.0)) {
        throw std::invalid_argument("analytic tail outer radius must be positive");
    }
    TailModel t(Kind::analytic);
    t.values_ = std::move(line_values);
    t.outer_radius_ = outer_radius;
    return t;
}

TailModel::Contribution TailModel::contribution(double t_center, double radius,
                                                double s) const {
    Contribution c;
    if (kind_ == Kind::none || kind_ == Kind::affine) return c;

    // Kernel mass of one side beyond the truncation radius.
    const double side_mass = std::pow(radius, -2.0 * s) / (2.0 * s);
    c.mass = 2.0 * side_mass;
    switch (kind_) {
        case Kind::zero:
            break;
        case Kind::constant_exterior:
            c.num = (left_ + right_) * side_mass;
            break;
        case Kind::analytic: {
            const double outer = std::max(outer_radius_, radius);
            const double ex = -1.0 - 2.0 * s;
            auto side = [&](double sign) {
                double num = adaptive_simpson(
                    [&](double r) { return values_(t_center + sign * r) * std::pow(r, ex); },
                    radius, outer, 1e-10);
                // constant continuation past the sampled reach
                num += values_(t_center + sign * outer) *
                       std::pow(outer, -2.0 * s) / (2.0 * s);
                return num;
            };
            c.num = side(+1.0) + side(-1.0);
            break;
        }
        default:
            break;
    }
    return c;
}

Quadrature1D build_quadrature(const FractionalOrder& order, double h,
                              double truncation_radius, bool normalized) {
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing h must be positive");
    if (!(truncation_radius >= 4.0 * h)) {
        throw std::invalid_argument("truncation radius must be at least 4h");
    }
    const double s = order.s();
    const int K = static_cast<int>(std::llround(truncation_radius / h));

    Quadrature1D q;
    q.h_ = h;
    q.half_width_ = K;
    q.radius_ = K * h;
    q.s_ = s;
    q.normalized_ = normalized;
    q.scale_ = normalized ? order.kernel_constant() : 1.0;
    q.weights_.assign(static_cast<size_t>(K) + 1, 0.0);
    q.cell_m1_.assign(static_cast<size_t>(K), 0.0);

    // Singular cell [0,h]: quadratic model paired with the exact moment
    // of r^{1-2s}.
    q.singular_weight_ = std::pow(h, -2.0 * s) / (2.0 - 2.0 * s);
    q.weights_[1] += q.singular_weight_;

    // Cells [kh, (k+1)h]: kernel against the hat functions of the
    // piecewise-linear second difference.
    const bool half = std::abs(s - 0.5) < 1e-14;
    for (int k = 1; k < K; ++k) {
        const double a = k * h;
        const double b = (k + 1) * h;
        const double i0 = (std::pow(a, -2.0 * s) - std::pow(b, -2.0 * s)) / (2.0 * s);
        const double i1 = half ? std::log(b / a)
                               : (std::pow(b, 1.0 - 2.0 * s) - std::pow(a, 1.0 - 2.0 * s)) /
                                     (1.0 - 2.0 * s);
        const double m1 = (i1 - a * i0) / h;
        q.cell_m1_[static_cast<size_t>(k)] = m1;
        q.weights_[static_cast<size_t>(k)] += i0 - m1;
        q.weights_[static_cast<size_t>(k) + 1] += m1;
    }
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) sum += q.weights_[static_cast<size_t>(k)];
    q.weight_sum_ = sum;
    return q;
}

double Quadrature1D::truncated_edge_weight(int k_cut) const {
    if (k_cut < 1 || k_cut > half_width_) {
        throw std::invalid_argument("truncation level out of range");
    }
    if (k_cut == half_width_) return weights_[static_cast<size_t>(k_cut)];
    if (k_cut == 1) return singular_weight_;
    return cell_m1_[static_cast<size_t>(k_cut) - 1];
}

double Quadrature1D::truncated_weight_sum(int k_cut) const {
    if (k_cut == half_width_) return weight_sum_;
    double sum = 0.0;
    for (int k = 1; k < k_cut; ++k) sum += weights_[static_cast<size_t>(k)];
    return sum + truncated_edge_weight(k_cut);
}

namespace {

struct SumResult {
    double acc = 0.0;       // sum of w_k * second differences
    double neighbor = 0.0;  // sum of w_k * (u_{+k} + u_{-k})
    double mass = 0.0;      // 2 * sum of w_k
    int k_cut = 0;
};

SumResult near_field(std::span<const double> samples, int index,
                     const Quadrature1D& quad, const TailModel& tail) {
    const int n = static_cast<int>(samples.size());
    if (index < 0 || index >= n) throw std::invalid_argument("sample index out of range");
    const int room = std::min(index, n - 1 - index);
    int k_cut = std::min(quad.half_width(), room);
    if (k_cut < 1) throw std::invalid_argument("evaluation node has no in-window neighbours");
    if (k_cut < quad.half_width() && tail.kind() == TailModel::Kind::none) {
        throw std::invalid_argument(
            "evaluation too close to the window edge for TailModel::none");
    }
    const double u0 = samples[static_cast<size_t>(index)];
    if (!std::isfinite(u0)) throw std::invalid_argument("non-finite sample value");

    SumResult r;
    r.k_cut = k_cut;
    for (int k = 1; k <= k_cut; ++k) {
        const double w =
            (k == k_cut) ? quad.truncated_edge_weight(k_cut) : quad.weight(k);
        const double up = samples[static_cast<size_t>(index + k)];
        const double um = samples[static_cast<size_t>(index - k)];
        if (!std::isfinite(up) || !std::isfinite(um)) {
            throw std::invalid_argument("non-finite sample value");
        }
        r.acc += w * ((up - u0) + (um - u0));
        r.neighbor += w * (up + um);
        r.mass += 2.0 * w;
    }
    return r;
}

} // namespace

double frac_lap_1d(std::span<const double> samples, int index, double t_center,
                   const Quadrature1D& quad, const TailModel& tail) {
    const SumResult nf = near_field(samples, index, quad, tail);
    const double radius = nf.k_cut * quad.h();
    const TailModel::Contribution tc = tail.contribution(t_center, radius, quad.s());
    const double u0 = samples[static_cast<size_t>(index)];
    return quad.scale() * (nf.acc + tc.num - tc.mass * u0);
}

double nonlocal_mean_update(std::span<const double> samples, int index,
                            double t_center, const Quadrature1D& quad,
                            const TailModel& tail) {
    const SumResult nf = near_field(samples, index, quad, tail);
    const double radius = nf.k_cut * quad.h();
    const TailModel::Contribution tc = tail.contribution(t_center, radius, quad.s());
    const double total_mass = nf.mass + tc.mass;
    if (!(total_mass > 0.0)) {
        throw std::runtime_error("nonlocal mean update with vanishing total mass");
    }
    return (nf.neighbor + tc.num) / total_mass;
}

double frac_lap_1d(const LineSample& line, int index, const Quadrature1D& quad,
                   const TailModel& tail) {
    if (std::abs(line.h - quad.h()) > 1e-12 * quad.h()) {
        throw std::invalid_argument("line sample spacing does not match the quadrature");
    }
    return frac_lap_1d(std::span<const double>(line.values), index, line.t_at(index),
                       quad, tail);
}

} // namespace sconv
