#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace mhd {

using Vec2 = Eigen::Vector2d;

/// Conforming triangulation of an axis-aligned rectangle.
/// Each cell of the nx x ny grid is split along its lower-left -> upper-right
/// diagonal; triangles are counter-clockwise.
struct Mesh {
    struct BoundaryEdge {
        int a = -1, b = -1; ///< endpoint vertex ids
        int tag = -1;       ///< 0 bottom, 1 right, 2 top, 3 left
    };

    std::array<double, 4> box{}; ///< x0, x1, y0, y1
    int nx = 0, ny = 0;
    std::vector<Vec2> vertices;                 ///< row-major, (y,x) lexicographic
    std::vector<std::array<int, 3>> triangles;  ///< CCW vertex ids
    std::vector<BoundaryEdge> boundary_edges;

    double hx() const { return (box[1] - box[0]) / nx; }
    double hy() const { return (box[3] - box[2]) / ny; }
    /// Longest edge length (the cell diagonal).
    double h() const;
    double area() const { return (box[1] - box[0]) * (box[3] - box[2]); }
    double triangle_area(int t) const;

    /// Plain-text vertex / triangle / boundary-edge listing.
    void dump(std::ostream& os) const;
};

/// Uniform triangulation of [x0,x1] x [y0,y1] with nx x ny cells.
/// Throws std::invalid_argument for non-positive counts or a degenerate box.
Mesh build_rect_mesh(double x0, double x1, double y0, double y1, int nx, int ny);

} // namespace mhd
