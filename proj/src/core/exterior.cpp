#include "core/exterior.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "core/expr.hpp"

namespace sconv {

namespace {

std::vector<double> split_args(const std::string& spec, size_t colon) {
    std::vector<double> args;
    if (colon == std::string::npos) return args;
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            args.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad numeric field in spec: " + spec);
        }
    }
    return args;
}

} // namespace

ExteriorData::ExteriorData(std::function<double(Vec2)> g, double bound,
                           TailPolicy policy, double reach_radius)
    : g_(std::move(g)), bound_(bound), policy_(policy), reach_radius_(reach_radius) {
    if (!g_) throw std::invalid_argument("exterior datum needs a callable");
    if (!(bound_ >= 0.0) || !std::isfinite(bound_)) {
        throw std::invalid_argument("exterior bound must be finite and nonnegative");
    }
}

TailModel ExteriorData::line_tail(Vec2 x, Vec2 z, double window_radius) const {
    if (policy_ == TailPolicy::constant_at_window) {
        return TailModel::constant(g_(x - window_radius * z), g_(x + window_radius * z));
    }
    const double reach = std::max(reach_radius_, 2.0 * window_radius);
    auto along = [g = g_, x, z](double t) { return g(x + t * z); };
    return TailModel::analytic(along, reach);
}

ExteriorData ExteriorData::negated() const {
    auto g = g_;
    return ExteriorData([g](Vec2 p) { return -g(p); }, bound_, policy_, reach_radius_);
}

ExteriorData parse_exterior(const std::string& spec) {
    const size_t colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);

    if (kind == "constant") {
        const auto args = split_args(spec, colon);
        if (args.size() != 1) throw std::invalid_argument("constant:c expected");
        const double c = args[0];
        return ExteriorData([c](Vec2) { return c; }, std::abs(c));
    }
    if (kind == "clamped_linear") {
        const auto args = split_args(spec, colon);
        double a = 1.0, lo = -1.0, hi = 1.0;
        if (args.size() == 3) {
            a = args[0];
            lo = args[1];
            hi = args[2];
        } else if (!args.empty()) {
            throw std::invalid_argument("clamped_linear takes zero or three parameters");
        }
        if (!(lo < hi)) throw std::invalid_argument("clamped_linear needs lo < hi");
        auto g = [a, lo, hi](Vec2 p) { return std::min(std::max(a * p.x, lo), hi); };
        // along a line the clamp saturates at t ~ (|lo,hi|/|a|) / |z_x|,
        // unbounded for near-tangential lines; integrate far enough that
        // the constant continuation error is negligible
        const double reach = (std::max(std::abs(lo), std::abs(hi)) / std::max(std::abs(a), 1e-12));
        return ExteriorData(g, std::max(std::abs(lo), std::abs(hi)),
                            ExteriorData::TailPolicy::exact_line_integral,
                            48.0 * reach + 8.0);
    }
    if (kind == "boundary_peak") {
        const auto args = split_args(spec, colon);
        if (args.size() != 3 && args.size() != 4) {
            throw std::invalid_argument("boundary_peak:px,py,r[,height] expected");
        }
        const Vec2 c{args[0], args[1]};
        const double r = args[2];
        const double height = args.size() == 4 ? args[3] : 1.0;
        if (!(r > 0.0)) throw std::invalid_argument("boundary_peak radius must be positive");
        auto g = [c, r, height](Vec2 p) {
            const double d = norm(p - c) / r;
            if (d >= 1.0) return 0.0;
            const double w = 1.0 - d * d;
            return height * w * w;
        };
        return ExteriorData(g, std::abs(height));
    }
    if (kind == "quadratic_clamped") {
        const auto args = split_args(spec, colon);
        if (args.size() != 1 || !(args[0] > 0.0)) {
            throw std::invalid_argument("quadratic_clamped:R expected with R > 0");
        }
        const double cap = args[0] * args[0];
        auto g = [cap](Vec2 p) { return std::min(dot(p, p), cap); };
        const double reach = args[0];
        return ExteriorData(g, cap, ExteriorData::TailPolicy::exact_line_integral,
                            4.0 * reach + 8.0);
    }
    if (kind == "expr") {
        if (colon == std::string::npos) throw std::invalid_argument("expr:<expression> expected");
        auto f = compile_expression(spec.substr(colon + 1));
        // bound probed on a coarse far grid; the caller may refine
        double bound = 0.0;
        for (double x = -16.0; x <= 16.0; x += 0.5) {
            for (double y = -16.0; y <= 16.0; y += 0.5) {
                bound = std::max(bound, std::abs(f(x, y)));
            }
        }
        if (!std::isfinite(bound)) {
            throw std::invalid_argument("expression datum is unbounded on the probe grid");
        }
        return ExteriorData([f](Vec2 p) { return f(p.x, p.y); }, bound);
    }
    throw std::invalid_argument("unrecognized exterior datum spec: " + spec);
}

Profile parse_profile(const std::string& spec) {
    const size_t colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    Profile p;
    p.name = spec;

    if (kind == "constant") {
        const auto args = split_args(spec, colon);
        if (args.size() != 1) throw std::invalid_argument("constant:c expected");
        const double c = args[0];
        p.f = [c](double) { return c; };
        return p;
    }
    if (kind == "affine") {
        const auto args = split_args(spec, colon);
        if (args.empty() || args.size() > 2) {
            throw std::invalid_argument("affine:slope[,intercept] expected");
        }
        const double a = args[0];
        const double b = args.size() == 2 ? args[1] : 0.0;
        p.f = [a, b](double t) { return a * t + b; };
        p.tail = Profile::Tail::affine;
        return p;
    }
    if (kind == "dyda") {
        const auto args = split_args(spec, colon);
        if (args.size() != 1 || !(args[0] > 0.0) || !(args[0] < 1.0)) {
            throw std::invalid_argument("dyda:s expected with s in (0,1)");
        }
        const double s = args[0];
        p.f = [s](double t) {
            const double q = 1.0 - t * t;
            return q > 0.0 ? -std::pow(q, s) : 0.0;
        };
        p.tail = Profile::Tail::zero;
        return p;
    }
    if (kind == "bump_2_4") {
        p.f = [](double t) { return (t >= 2.0 && t <= 4.0) ? (t - 3.0) * (t - 3.0) : 1.0; };
        return p;
    }
    if (kind == "ge_one_bump") {
        const auto args = split_args(spec, colon);
        double x0 = 1.5, w = 0.5, peak = 2.0;
        if (args.size() == 3) {
            x0 = args[0];
            w = args[1];
            peak = args[2];
        } else if (!args.empty()) {
            throw std::invalid_argument("ge_one_bump[:x0,w,peak] expected");
        }
        if (!(w > 0.0) || !(peak > 1.0)) {
            throw std::invalid_argument("ge_one_bump needs w > 0 and peak > 1");
        }
        p.f = [x0, w, peak](double t) {
            const double z = (t - x0) / w;
            if (std::abs(z) >= 1.0) return 1.0;
            return 1.0 + (peak - 1.0) * std::exp(1.0 - 1.0 / (1.0 - z * z));
        };
        return p;
    }
    if (kind == "expr") {
        if (colon == std::string::npos) throw std::invalid_argument("expr:<expression> expected");
        auto f = compile_expression(spec.substr(colon + 1));
        p.f = [f](double t) { return f(t, 0.0); };
        return p;
    }
    throw std::invalid_argument("unrecognized profile spec: " + spec);
}

} // namespace sconv
