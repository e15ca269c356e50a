#ifndef TSD_GEOMETRY_HPP_
#define TSD_GEOMETRY_HPP_

#include <cmath>

namespace tsd {

// Center-convention box used throughout the tracker. File I/O converts to the
// top-left "x,y,w,h" convention at the boundary.
struct BoundingBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool valid() const { return w > 0.0 && h > 0.0; }
    double area() const { return w * h; }

    static BoundingBox from_topleft(double x, double y, double w, double h) {
        return {x + w / 2.0, y + h / 2.0, w, h};
    }
    double left() const { return cx - w / 2.0; }
    double top() const { return cy - h / 2.0; }
};

inline double center_error(const BoundingBox& a, const BoundingBox& b) {
    return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.left() + a.w, b.left() + b.w) -
                                        std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.top() + a.h, b.top() + b.h) -
                                        std::max(a.top(), b.top()));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

} // namespace tsd

#endif
