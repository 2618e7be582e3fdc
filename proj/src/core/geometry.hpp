#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sconv {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Open parameter interval (lo, hi) along a line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double t) const { return t > lo && t < hi; }
};

struct BoundingBox {
    Vec2 lo;
    Vec2 hi;
};

/// The domain Omega: membership, signed distance (positive inside),
/// and exact clipping of lines against the boundary.
///
/// Supported shapes: ball and ellipse (strictly convex), square and
/// dumbbell (counterexample geometries). Dimension 1 domains are
/// intervals on the x-axis represented as balls.
class Domain {
public:
    static Domain ball(int dim, Vec2 center, double radius);
    static Domain ellipse(Vec2 center, double semi_x, double semi_y);
    static Domain square(Vec2 center, double half_width);
    /// Two unit balls at (+-lobe_x, 0) joined by the rectangle
    /// |x| <= lobe_x, |y| <= neck_half_height.
    static Domain dumbbell(double lobe_x = 1.5, double lobe_radius = 1.0,
                           double neck_half_height = 0.2);
    /// Parses "ball:r", "ball:cx,cy,r", "ellipse:a,b", "ellipse:cx,cy,a,b",
    /// "square:hw", "square:cx,cy,hw", "dumbbell", "dumbbell:lx,lr,nh",
    /// "interval:a,b" (1-D).
    static Domain parse(const std::string& spec);

    int dim() const noexcept { return dim_; }
    bool strictly_convex() const noexcept;
    bool contains(Vec2 p) const;
    /// Positive in Omega, negative outside. Exact for balls and squares,
    /// a sign-consistent approximation for ellipses and dumbbells.
    double signed_distance(Vec2 p) const;
    BoundingBox bounding_box() const;
    double diameter() const;

    /// Ordered disjoint open intervals with x + t z in Omega iff t lies
    /// in their union. Returns an empty list when x is outside the
    /// closure. z must be a unit vector.
    std::vector<Interval> clip_line(Vec2 x, Vec2 z) const;

    std::string describe() const;

private:
    struct Ball {
        Vec2 c;
        double r;
    };
    struct Ellipse {
        Vec2 c;
        double a, b;
    };
    struct Square {
        Vec2 c;
        double hw;
    };
    struct Dumbbell {
        double lobe_x, lobe_r, neck_hh;
    };

    Domain() = default;
    std::variant<Ball, Ellipse, Square, Dumbbell> shape_;
    int dim_ = 2;
};

/// The interval of the list that contains the given parameter
/// (the connected component of the clipped line through x).
Interval connected_component(std::span<const Interval> intervals, double t = 0.0);

/// Directions covering a half circle, antipodal representatives removed
/// (the kernel is even, so +-z give the same operator value).
class DirectionSet {
public:
    /// N = 2: z_k = (cos(k pi / count), sin(k pi / count)).
    static DirectionSet half_circle(int count);
    /// N = 1: the single direction (1, 0).
    static DirectionSet axis();

    int size() const noexcept { return static_cast<int>(dirs_.size()); }
    Vec2 at(int i) const { return dirs_[static_cast<size_t>(i)]; }
    double angle(int i) const { return angles_[static_cast<size_t>(i)]; }
    double angular_spacing() const noexcept { return spacing_; }

private:
    std::vector<Vec2> dirs_;
    std::vector<double> angles_;
    double spacing_ = 0.0;
};

/// A discretized 1-D restriction t -> u(x + t z) with per-node
/// inside/outside classification.
struct LineSample {
    Vec2 base;
    Vec2 dir;
    double h = 0.0;
    double t_begin = 0.0;
    std::vector<double> values;
    std::vector<std::uint8_t> inside;

    double t_at(int i) const { return t_begin + i * h; }
    int size() const { return static_cast<int>(values.size()); }
};

} // namespace sconv
