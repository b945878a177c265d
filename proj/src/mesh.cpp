#include "mhd/mesh.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mhd {

double Mesh::triangle_area(int t) const {
    const auto& tri = triangles[t];
    const Vec2& a = vertices[tri[0]];
    const Vec2& b = vertices[tri[1]];
    const Vec2& c = vertices[tri[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double Mesh::h() const { return std::hypot(hx(), hy()); }

void Mesh::dump(std::ostream& os) const {
    os << "vertices " << vertices.size() << "\n";
    for (const auto& v : vertices) os << v.x() << " " << v.y() << "\n";
    os << "triangles " << triangles.size() << "\n";
    for (const auto& t : triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    os << "boundary_edges " << boundary_edges.size() << "\n";
    for (const auto& e : boundary_edges) os << e.a << " " << e.b << " " << e.tag << "\n";
}

Mesh build_rect_mesh(double x0, double x1, double y0, double y1, int nx, int ny) {
    if (nx <= 0 || ny <= 0)
        throw std::invalid_argument("build_rect_mesh: cell counts must be positive");
    if (!(x1 > x0) || !(y1 > y0))
        throw std::invalid_argument("build_rect_mesh: degenerate box");

    Mesh mesh;
    mesh.box = {x0, x1, y0, y1};
    mesh.nx = nx;
    mesh.ny = ny;

    const double hx = (x1 - x0) / nx;
    const double hy = (y1 - y0) / ny;

    mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.emplace_back(x0 + i * hx, y0 + j * hy);

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    mesh.triangles.reserve(static_cast<size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11}); // below the diagonal
            mesh.triangles.push_back({v00, v11, v01}); // above the diagonal
        }
    }

    for (int i = 0; i < nx; ++i) mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), 0});
    for (int j = 0; j < ny; ++j) mesh.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), 1});
    for (int i = nx; i > 0; --i) mesh.boundary_edges.push_back({vid(i, ny), vid(i - 1, ny), 2});
    for (int j = ny; j > 0; --j) mesh.boundary_edges.push_back({vid(0, j), vid(0, j - 1), 3});

    return mesh;
}

} // namespace mhd
