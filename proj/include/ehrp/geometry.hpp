#pragma once

#include <cmath>

namespace ehrp {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(Position a, Position b) { return a.x == b.x && a.y == b.y; }

inline double euclidean_distance(Position a, Position b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, bounds inclusive (shared cell boundaries contain
/// points of both cells; callers tie-break by id).
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    Position center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }

    bool contains(Position p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

}  // namespace ehrp
