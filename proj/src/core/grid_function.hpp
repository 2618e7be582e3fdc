#pragma once

#include <functional>
#include <vector>

#include "core/geometry.hpp"

namespace sconv {

/// A function sampled on a uniform lattice covering the bounding box of
/// Omega (plus a ghost margin). Nodes inside Omega are the unknowns;
/// nodes outside hold the exterior datum so that bilinear interpolation
/// of inside points near the boundary blends into g at the crossing.
class GridFunction {
public:
    GridFunction(const Domain& domain, double dx,
                 const std::function<double(Vec2)>& exterior_fill,
                 double interior_init);

    const Domain& domain() const noexcept { return domain_; }
    double dx() const noexcept { return dx_; }
    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    Vec2 origin() const noexcept { return origin_; }

    int flat(int ix, int iy) const { return iy * nx_ + ix; }
    Vec2 node_point(int ix, int iy) const {
        return {origin_.x + ix * dx_, origin_.y + iy * dx_};
    }
    bool node_inside(int flat_index) const {
        return inside_[static_cast<size_t>(flat_index)] != 0;
    }

    /// Flat lattice indices of the nodes inside Omega, lexicographic.
    const std::vector<int>& interior() const noexcept { return interior_; }

    double value(int flat_index) const { return values_[static_cast<size_t>(flat_index)]; }
    void set_value(int flat_index, double v) { values_[static_cast<size_t>(flat_index)] = v; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    /// Bilinear interpolation (linear in 1-D). p must lie within the
    /// padded lattice.
    double eval(Vec2 p) const;

private:
    Domain domain_;
    double dx_ = 0.0;
    Vec2 origin_;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> inside_;
    std::vector<int> interior_;
};

} // namespace sconv
