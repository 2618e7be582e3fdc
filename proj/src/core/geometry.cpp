#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sconv {

namespace {

constexpr double kClipTol = 1e-12;

void require_unit(Vec2 z) {
    if (std::abs(dot(z, z) - 1.0) > 1e-9) {
        throw std::invalid_argument("direction must be a unit vector");
    }
}

// Chord of |x + t z - c| = r. Quadratic in t with unit leading term.
bool ball_chord(Vec2 x, Vec2 z, Vec2 c, double r, Interval& out) {
    const Vec2 d = x - c;
    const double b = dot(d, z);
    const double q = dot(d, d) - r * r;
    const double disc = b * b - q;
    if (disc <= 0.0) return false;
    const double root = std::sqrt(disc);
    out = {-b - root, -b + root};
    return true;
}

// Liang-Barsky style slab clipping for |x + t z - c|_inf < hw.
bool box_chord(Vec2 x, Vec2 z, Vec2 lo, Vec2 hi, Interval& out) {
    double tlo = -std::numeric_limits<double>::infinity();
    double thi = std::numeric_limits<double>::infinity();
    const double px[2] = {x.x, x.y};
    const double pz[2] = {z.x, z.y};
    const double bl[2] = {lo.x, lo.y};
    const double bh[2] = {hi.x, hi.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(pz[axis]) < 1e-15) {
            if (px[axis] <= bl[axis] || px[axis] >= bh[axis]) return false;
            continue;
        }
        double t0 = (bl[axis] - px[axis]) / pz[axis];
        double t1 = (bh[axis] - px[axis]) / pz[axis];
        if (t0 > t1) std::swap(t0, t1);
        tlo = std::max(tlo, t0);
        thi = std::min(thi, t1);
    }
    if (!(tlo < thi)) return false;
    out = {tlo, thi};
    return true;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
    if (v.empty()) return v;
    std::sort(v.begin(), v.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    out.push_back(v[0]);
    for (size_t i = 1; i < v.size(); ++i) {
        if (v[i].lo <= out.back().hi + kClipTol) {
            out.back().hi = std::max(out.back().hi, v[i].hi);
        } else {
            out.push_back(v[i]);
        }
    }
    return out;
}

double box_signed_distance(Vec2 p, Vec2 c, Vec2 half) {
    const double qx = std::abs(p.x - c.x) - half.x;
    const double qy = std::abs(p.y - c.y) - half.y;
    if (qx <= 0.0 && qy <= 0.0) return -std::max(qx, qy);  // inside depth
    const double ox = std::max(qx, 0.0);
    const double oy = std::max(qy, 0.0);
    return -std::hypot(ox, oy);
}

} // namespace

Domain Domain::ball(int dim, Vec2 center, double radius) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    Domain d;
    d.shape_ = Ball{center, radius};
    d.dim_ = dim;
    if (dim == 1) d.shape_ = Ball{{center.x, 0.0}, radius};
    return d;
}

Domain Domain::ellipse(Vec2 center, double semi_x, double semi_y) {
    if (!(semi_x > 0.0) || !(semi_y > 0.0)) {
        throw std::invalid_argument("ellipse semi-axes must be positive");
    }
    Domain d;
    d.shape_ = Ellipse{center, semi_x, semi_y};
    return d;
}

Domain Domain::square(Vec2 center, double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("square half-width must be positive");
    Domain d;
    d.shape_ = Square{center, half_width};
    return d;
}

Domain Domain::dumbbell(double lobe_x, double lobe_radius, double neck_half_height) {
    if (!(lobe_x > 0.0) || !(lobe_radius > 0.0) || !(neck_half_height > 0.0) ||
        neck_half_height >= lobe_radius) {
        throw std::invalid_argument("invalid dumbbell parameters");
    }
    Domain d;
    d.shape_ = Dumbbell{lobe_x, lobe_radius, neck_half_height};
    return d;
}

bool Domain::strictly_convex() const noexcept {
    return std::holds_alternative<Ball>(shape_) || std::holds_alternative<Ellipse>(shape_);
}

bool Domain::contains(Vec2 p) const {
    if (dim_ == 1) p.y = 0.0;
    if (const auto* b = std::get_if<Ball>(&shape_)) {
        const Vec2 d = p - b->c;
        return dot(d, d) < b->r * b->r;
    }
    if (const auto* e = std::get_if<Ellipse>(&shape_)) {
        const double u = (p.x - e->c.x) / e->a;
        const double v = (p.y - e->c.y) / e->b;
        return u * u + v * v < 1.0;
    }
    if (const auto* sq = std::get_if<Square>(&shape_)) {
        return std::abs(p.x - sq->c.x) < sq->hw && std::abs(p.y - sq->c.y) < sq->hw;
    }
    const auto& db = std::get<Dumbbell>(shape_);
    const Vec2 cl{-db.lobe_x, 0.0};
    const Vec2 cr{db.lobe_x, 0.0};
    const double r2 = db.lobe_r * db.lobe_r;
    const Vec2 dl = p - cl;
    const Vec2 dr = p - cr;
    if (dot(dl, dl) < r2 || dot(dr, dr) < r2) return true;
    return std::abs(p.x) < db.lobe_x && std::abs(p.y) < db.neck_hh;
}

double Domain::signed_distance(Vec2 p) const {
    if (dim_ == 1) p.y = 0.0;
    if (const auto* b = std::get_if<Ball>(&shape_)) {
        return b->r - norm(p - b->c);
    }
    if (const auto* e = std::get_if<Ellipse>(&shape_)) {
        const double u = (p.x - e->c.x) / e->a;
        const double v = (p.y - e->c.y) / e->b;
        // scaled radial gap; sign-exact, magnitude approximate
        return (1.0 - std::sqrt(u * u + v * v)) * std::min(e->a, e->b);
    }
    if (const auto* sq = std::get_if<Square>(&shape_)) {
        return box_signed_distance(p, sq->c, {sq->hw, sq->hw});
    }
    const auto& db = std::get<Dumbbell>(shape_);
    const double left = db.lobe_r - norm(p - Vec2{-db.lobe_x, 0.0});
    const double right = db.lobe_r - norm(p - Vec2{db.lobe_x, 0.0});
    const double neck =
        box_signed_distance(p, {0.0, 0.0}, {db.lobe_x, db.neck_hh});
    return std::max({left, right, neck});
}

BoundingBox Domain::bounding_box() const {
    if (const auto* b = std::get_if<Ball>(&shape_)) {
        if (dim_ == 1) return {{b->c.x - b->r, 0.0}, {b->c.x + b->r, 0.0}};
        return {{b->c.x - b->r, b->c.y - b->r}, {b->c.x + b->r, b->c.y + b->r}};
    }
    if (const auto* e = std::get_if<Ellipse>(&shape_)) {
        return {{e->c.x - e->a, e->c.y - e->b}, {e->c.x + e->a, e->c.y + e->b}};
    }
    if (const auto* sq = std::get_if<Square>(&shape_)) {
        return {{sq->c.x - sq->hw, sq->c.y - sq->hw}, {sq->c.x + sq->hw, sq->c.y + sq->hw}};
    }
    const auto& db = std::get<Dumbbell>(shape_);
    const double w = db.lobe_x + db.lobe_r;
    return {{-w, -db.lobe_r}, {w, db.lobe_r}};
}

double Domain::diameter() const {
    const BoundingBox bb = bounding_box();
    return norm(bb.hi - bb.lo);
}

std::vector<Interval> Domain::clip_line(Vec2 x, Vec2 z) const {
    require_unit(z);
    if (dim_ == 1) {
        x.y = 0.0;
        z = {z.x >= 0.0 ? 1.0 : -1.0, 0.0};
    }
    if (signed_distance(x) < -1e-9) return {};

    std::vector<Interval> parts;
    Interval iv;
    if (const auto* b = std::get_if<Ball>(&shape_)) {
        if (ball_chord(x, z, b->c, b->r, iv)) parts.push_back(iv);
    } else if (const auto* e = std::get_if<Ellipse>(&shape_)) {
        // scale to the unit disk; the quadratic keeps its roots in t
        const Vec2 xs{(x.x - e->c.x) / e->a, (x.y - e->c.y) / e->b};
        const Vec2 zs{z.x / e->a, z.y / e->b};
        const double A = dot(zs, zs);
        const double B = dot(xs, zs);
        const double C = dot(xs, xs) - 1.0;
        const double disc = B * B - A * C;
        if (disc > 0.0 && A > 0.0) {
            const double root = std::sqrt(disc);
            parts.push_back({(-B - root) / A, (-B + root) / A});
        }
    } else if (const auto* sq = std::get_if<Square>(&shape_)) {
        if (box_chord(x, z, {sq->c.x - sq->hw, sq->c.y - sq->hw},
                      {sq->c.x + sq->hw, sq->c.y + sq->hw}, iv)) {
            parts.push_back(iv);
        }
    } else {
        const auto& db = std::get<Dumbbell>(shape_);
        if (ball_chord(x, z, {-db.lobe_x, 0.0}, db.lobe_r, iv)) parts.push_back(iv);
        if (ball_chord(x, z, {db.lobe_x, 0.0}, db.lobe_r, iv)) parts.push_back(iv);
        if (box_chord(x, z, {-db.lobe_x, -db.neck_hh}, {db.lobe_x, db.neck_hh}, iv)) {
            parts.push_back(iv);
        }
    }
    return merge_intervals(std::move(parts));
}

std::string Domain::describe() const {
    std::ostringstream os;
    if (const auto* b = std::get_if<Ball>(&shape_)) {
        if (dim_ == 1) {
            os << "interval:" << b->c.x - b->r << "," << b->c.x + b->r;
        } else {
            os << "ball:" << b->c.x << "," << b->c.y << "," << b->r;
        }
    } else if (const auto* e = std::get_if<Ellipse>(&shape_)) {
        os << "ellipse:" << e->c.x << "," << e->c.y << "," << e->a << "," << e->b;
    } else if (const auto* sq = std::get_if<Square>(&shape_)) {
        os << "square:" << sq->c.x << "," << sq->c.y << "," << sq->hw;
    } else {
        const auto& db = std::get<Dumbbell>(shape_);
        os << "dumbbell:" << db.lobe_x << "," << db.lobe_r << "," << db.neck_hh;
    }
    return os.str();
}

Domain Domain::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                args.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad numeric field in domain spec: " + spec);
            }
        }
    }
    if (kind == "ball") {
        if (args.size() == 1) return ball(2, {0.0, 0.0}, args[0]);
        if (args.size() == 3) return ball(2, {args[0], args[1]}, args[2]);
    } else if (kind == "interval") {
        if (args.size() == 2 && args[0] < args[1]) {
            return ball(1, {0.5 * (args[0] + args[1]), 0.0}, 0.5 * (args[1] - args[0]));
        }
    } else if (kind == "ellipse") {
        if (args.size() == 2) return ellipse({0.0, 0.0}, args[0], args[1]);
        if (args.size() == 4) return ellipse({args[0], args[1]}, args[2], args[3]);
    } else if (kind == "square") {
        if (args.size() == 1) return square({0.0, 0.0}, args[0]);
        if (args.size() == 3) return square({args[0], args[1]}, args[2]);
    } else if (kind == "dumbbell") {
        if (args.empty()) return dumbbell();
        if (args.size() == 3) return dumbbell(args[0], args[1], args[2]);
    }
    throw std::invalid_argument("unrecognized domain spec: " + spec);
}

Interval connected_component(std::span<const Interval> intervals, double t) {
    for (const Interval& iv : intervals) {
        if (iv.contains(t)) return iv;
    }
    throw std::invalid_argument("parameter lies in no interval of the clipped line");
}

DirectionSet DirectionSet::half_circle(int count) {
    if (count < 1) throw std::invalid_argument("direction count must be positive");
    DirectionSet ds;
    ds.spacing_ = M_PI / count;
    ds.dirs_.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double th = k * ds.spacing_;
        ds.dirs_.push_back({std::cos(th), std::sin(th)});
        ds.angles_.push_back(th);
    }
    return ds;
}

DirectionSet DirectionSet::axis() {
    DirectionSet ds;
    ds.dirs_.push_back({1.0, 0.0});
    ds.angles_.push_back(0.0);
    ds.spacing_ = M_PI;
    return ds;
}

} // namespace sconv
