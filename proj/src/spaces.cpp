#include "mhd/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mhd/errors.hpp"

namespace mhd {

std::array<double, 6> p2_values(double l0, double l1, double l2) {
    return {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
            4 * l0 * l1, 4 * l1 * l2, 4 * l0 * l2};
}

std::array<Eigen::Vector2d, 6> p2_ref_grads(double l0, double l1, double l2) {
    // Reference barycentric gradients: grad l0 = (-1,-1), l1 = (1,0), l2 = (0,1).
    const Eigen::Vector2d g0(-1, -1), g1(1, 0), g2(0, 1);
    return {(4 * l0 - 1) * g0,
            (4 * l1 - 1) * g1,
            (4 * l2 - 1) * g2,
            4.0 * (l1 * g0 + l0 * g1),
            4.0 * (l2 * g1 + l1 * g2),
            4.0 * (l2 * g0 + l0 * g2)};
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
    ElementGeometry g;
    const auto& tri = mesh.triangles[t];
    g.corners = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
    g.J.col(0) = g.corners[1] - g.corners[0];
    g.J.col(1) = g.corners[2] - g.corners[0];
    g.detJ = g.J(0, 0) * g.J(1, 1) - g.J(0, 1) * g.J(1, 0);
    Eigen::Matrix2d inv;
    inv << g.J(1, 1), -g.J(0, 1), -g.J(1, 0), g.J(0, 0);
    g.invJT = inv.transpose() / g.detJ;
    return g;
}

SpacePair build_spaces(const Mesh& mesh) {
    SpacePair sp;
    sp.mesh = mesh;
    sp.n_vertices = static_cast<int>(mesh.vertices.size());
    sp.n_pressure_dofs = sp.n_vertices;

    // Collect unique edges as sorted vertex pairs.
    std::map<std::pair<int, int>, int> edge_ids;
    auto edge_key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    for (const auto& tri : mesh.triangles) {
        edge_ids.emplace(edge_key(tri[0], tri[1]), -1);
        edge_ids.emplace(edge_key(tri[1], tri[2]), -1);
        edge_ids.emplace(edge_key(tri[0], tri[2]), -1);
    }

    // Number edge midpoints lexicographically by (y, x) after the vertices.
    struct MidRec { Vec2 m; std::pair<int, int> key; };
    std::vector<MidRec> mids;
    mids.reserve(edge_ids.size());
    for (const auto& [key, _] : edge_ids) {
        Vec2 m = 0.5 * (mesh.vertices[key.first] + mesh.vertices[key.second]);
        mids.push_back({m, key});
    }
    std::sort(mids.begin(), mids.end(), [](const MidRec& a, const MidRec& b) {
        if (a.m.y() != b.m.y()) return a.m.y() < b.m.y();
        return a.m.x() < b.m.x();
    });
    sp.n_edges = static_cast<int>(mids.size());
    sp.n_p2_nodes = sp.n_vertices + sp.n_edges;
    sp.n_velocity_dofs = 2 * sp.n_p2_nodes;

    sp.p2_coords.reserve(sp.n_p2_nodes);
    for (const auto& v : mesh.vertices) sp.p2_coords.push_back(v);
    for (int e = 0; e < sp.n_edges; ++e) {
        edge_ids[mids[e].key] = sp.n_vertices + e;
        sp.p2_coords.push_back(mids[e].m);
    }

    sp.cell_nodes.reserve(mesh.triangles.size());
    for (const auto& tri : mesh.triangles) {
        sp.cell_nodes.push_back({tri[0], tri[1], tri[2],
                                 edge_ids[edge_key(tri[0], tri[1])],
                                 edge_ids[edge_key(tri[1], tri[2])],
                                 edge_ids[edge_key(tri[0], tri[2])]});
    }

    // Boundary detection is geometric against the box sides.
    const double tol = 1e-12 * std::max({std::abs(mesh.box[0]), std::abs(mesh.box[1]),
                                         std::abs(mesh.box[2]), std::abs(mesh.box[3]), 1.0});
    sp.node_on_boundary.assign(sp.n_p2_nodes, 0);
    for (int n = 0; n < sp.n_p2_nodes; ++n) {
        const Vec2& p = sp.p2_coords[n];
        const bool on = std::abs(p.x() - mesh.box[0]) < tol || std::abs(p.x() - mesh.box[1]) < tol ||
                        std::abs(p.y() - mesh.box[2]) < tol || std::abs(p.y() - mesh.box[3]) < tol;
        if (on) {
            sp.node_on_boundary[n] = 1;
            sp.boundary_p2_nodes.push_back(n);
        }
    }
    return sp;
}

FieldVec interpolate_velocity(const SpacePair& space, const VectorField& f, double t) {
    FieldVec out;
    out.kind = FieldKind::Velocity;
    out.coeffs.resize(space.n_velocity_dofs);
    for (int n = 0; n < space.n_p2_nodes; ++n) {
        const Vec2 v = f(space.p2_coords[n], t);
        if (!std::isfinite(v.x()) || !std::isfinite(v.y()))
            throw EvaluationFailure("interpolate_velocity: non-finite value at node");
        out.coeffs(2 * n) = v.x();
        out.coeffs(2 * n + 1) = v.y();
    }
    return out;
}

FieldVec interpolate_pressure(const SpacePair& space, const ScalarField& f, double t) {
    FieldVec out;
    out.kind = FieldKind::Pressure;
    out.coeffs.resize(space.n_pressure_dofs);
    for (int n = 0; n < space.n_pressure_dofs; ++n) {
        const double v = f(space.p2_coords[n], t);
        if (!std::isfinite(v))
            throw EvaluationFailure("interpolate_pressure: non-finite value at vertex");
        out.coeffs(n) = v;
    }
    return out;
}

Vec2 eval_velocity(const SpacePair& space, const Eigen::VectorXd& coeffs, int cell,
                   double l0, double l1, double l2) {
    const auto phi = p2_values(l0, l1, l2);
    const auto& nodes = space.cell_nodes[cell];
    Vec2 v = Vec2::Zero();
    for (int a = 0; a < 6; ++a) {
        v.x() += coeffs(2 * nodes[a]) * phi[a];
        v.y() += coeffs(2 * nodes[a] + 1) * phi[a];
    }
    return v;
}

Eigen::Matrix2d eval_velocity_gradient(const SpacePair& space, const Eigen::VectorXd& coeffs,
                                       int cell, double l0, double l1, double l2,
                                       const ElementGeometry& geom) {
    const auto gref = p2_ref_grads(l0, l1, l2);
    const auto& nodes = space.cell_nodes[cell];
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 6; ++a) {
        const Eigen::Vector2d g = geom.invJT * gref[a];
        G.row(0) += coeffs(2 * nodes[a]) * g.transpose();
        G.row(1) += coeffs(2 * nodes[a] + 1) * g.transpose();
    }
    return G;
}

} // namespace mhd
