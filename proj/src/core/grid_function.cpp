#include "core/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace sconv {

GridFunction::GridFunction(const Domain& domain, double dx,
                           const std::function<double(Vec2)>& exterior_fill,
                           double interior_init)
    : domain_(domain), dx_(dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    const BoundingBox bb = domain.bounding_box();
    const double pad = 2.0 * dx;
    origin_ = {bb.lo.x - pad, domain.dim() == 1 ? 0.0 : bb.lo.y - pad};
    nx_ = static_cast<int>(std::ceil((bb.hi.x + pad - origin_.x) / dx)) + 1;
    ny_ = domain.dim() == 1
              ? 1
              : static_cast<int>(std::ceil((bb.hi.y + pad - origin_.y) / dx)) + 1;

    values_.assign(static_cast<size_t>(nx_) * ny_, 0.0);
    inside_.assign(values_.size(), 0);
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            const int f = flat(ix, iy);
            const Vec2 p = node_point(ix, iy);
            if (domain.contains(p)) {
                inside_[static_cast<size_t>(f)] = 1;
                interior_.push_back(f);
                values_[static_cast<size_t>(f)] = interior_init;
            } else {
                values_[static_cast<size_t>(f)] = exterior_fill(p);
            }
        }
    }
    if (interior_.empty()) {
        throw std::invalid_argument("grid spacing too coarse: no lattice node inside the domain");
    }
}

double GridFunction::eval(Vec2 p) const {
    const double fx = (p.x - origin_.x) / dx_;
    int ix = static_cast<int>(std::floor(fx));
    if (ix < 0) ix = 0;
    if (ix > nx_ - 2) ix = nx_ - 2;
    const double ax = fx - ix;

    if (ny_ == 1) {
        return values_[static_cast<size_t>(ix)] * (1.0 - ax) +
               values_[static_cast<size_t>(ix + 1)] * ax;
    }
    const double fy = (p.y - origin_.y) / dx_;
    int iy = static_cast<int>(std::floor(fy));
    if (iy < 0) iy = 0;
    if (iy > ny_ - 2) iy = ny_ - 2;
    const double ay = fy - iy;

    const size_t base = static_cast<size_t>(flat(ix, iy));
    const double v00 = values_[base];
    const double v10 = values_[base + 1];
    const double v01 = values_[base + static_cast<size_t>(nx_)];
    const double v11 = values_[base + static_cast<size_t>(nx_) + 1];
    return (v00 * (1.0 - ax) + v10 * ax) * (1.0 - ay) + (v01 * (1.0 - ax) + v11 * ax) * ay;
}

} // namespace sconv
