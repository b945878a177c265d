#pragma once

#include <functional>
#include <vector>

#include "mhd/mesh.hpp"
#include "mhd/quadrature.hpp"

namespace mhd {

enum class FieldKind { Velocity, Pressure };

/// Coefficient vector tagged with the space it lives in.
struct FieldVec {
    Eigen::VectorXd coeffs;
    FieldKind kind = FieldKind::Velocity;
};

/// Taylor-Hood pair on a triangulation: continuous piecewise-quadratic
/// vector velocities (2 components per node, interleaved) and continuous
/// piecewise-linear pressures on the vertices.
///
/// Quadratic nodes: the mesh vertices first, then the edge midpoints ordered
/// lexicographically by (y, x).
struct SpacePair {
    Mesh mesh;

    int n_vertices = 0;
    int n_edges = 0;
    int n_p2_nodes = 0;       ///< n_vertices + n_edges
    int n_velocity_dofs = 0;  ///< 2 * n_p2_nodes
    int n_pressure_dofs = 0;  ///< n_vertices

    std::vector<Vec2> p2_coords;                 ///< coordinates per quadratic node
    std::vector<std::array<int, 6>> cell_nodes;  ///< per triangle: 3 vertices, then
                                                 ///< midpoints of edges (0,1),(1,2),(0,2)
    std::vector<int> boundary_p2_nodes;          ///< sorted node ids on the box boundary
    std::vector<char> node_on_boundary;          ///< indicator per quadratic node

    int vdof(int node, int comp) const { return 2 * node + comp; }
};

SpacePair build_spaces(const Mesh& mesh);

using VectorField = std::function<Vec2(const Vec2&, double)>;
using ScalarField = std::function<double(const Vec2&, double)>;

/// Nodal interpolant of a vector field at time t.
/// Throws EvaluationFailure if the callable returns a non-finite value.
FieldVec interpolate_velocity(const SpacePair& space, const VectorField& f, double t);

/// Vertex interpolant of a scalar field at time t.
FieldVec interpolate_pressure(const SpacePair& space, const ScalarField& f, double t);

/// Quadratic basis values at a barycentric point, local node order as in
/// SpacePair::cell_nodes.
std::array<double, 6> p2_values(double l0, double l1, double l2);

/// Reference-coordinate gradients (d/dxi, d/deta) of the quadratic basis.
std::array<Eigen::Vector2d, 6> p2_ref_grads(double l0, double l1, double l2);

/// Affine element geometry: Jacobian, its inverse transpose, determinant.
struct ElementGeometry {
    Eigen::Matrix2d J;
    Eigen::Matrix2d invJT;
    double detJ = 0.0;
    std::array<Vec2, 3> corners;
};
ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Evaluate a velocity coefficient vector at a barycentric point of a cell.
Vec2 eval_velocity(const SpacePair& space, const Eigen::VectorXd& coeffs, int cell,
                   double l0, double l1, double l2);

/// Velocity gradient (rows: component, cols: d/dx_j) at a barycentric point.
Eigen::Matrix2d eval_velocity_gradient(const SpacePair& space, const Eigen::VectorXd& coeffs,
                                       int cell, double l0, double l1, double l2,
                                       const ElementGeometry& geom);

} // namespace mhd
