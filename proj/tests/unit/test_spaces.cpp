#include <cmath>
#include <random>

#include "doctest.h"
#include "mhd/diagnostics.hpp"
#include "mhd/spaces.hpp"

using namespace mhd;

TEST_CASE("spaces: Taylor-Hood counts") {
    {
        const SpacePair sp = build_spaces(build_rect_mesh(0, 1, 0, 1, 1, 1));
        CHECK(sp.n_vertices == 4);
        CHECK(sp.n_edges == 5);
        CHECK(sp.n_p2_nodes == 9);
        CHECK(sp.n_velocity_dofs == 18);
        CHECK(sp.n_pressure_dofs == 4);
    }
    {
        const SpacePair sp = build_spaces(build_rect_mesh(0, 1, 0, 1, 2, 2));
        CHECK(sp.n_vertices == 9);
        CHECK(sp.n_edges == 16);
        CHECK(sp.n_p2_nodes == 25);
        CHECK(sp.n_velocity_dofs == 50);
        CHECK(sp.n_pressure_dofs == 9);
    }
    {
        const SpacePair sp = build_spaces(build_rect_mesh(0, 2, 0, 1.5, 4, 3));
        CHECK(sp.n_vertices == 20);
        CHECK(sp.n_edges == 43);
        CHECK(sp.n_p2_nodes == 63);
        CHECK(sp.n_velocity_dofs == 126);
    }
}

TEST_CASE("spaces: quadratic node layout") {
    const SpacePair sp = build_spaces(build_rect_mesh(0, 2, 0, 1.5, 4, 3));

    // Vertices first, in mesh order.
    for (int v = 0; v < sp.n_vertices; ++v)
        CHECK((sp.p2_coords[v] - sp.mesh.vertices[v]).norm() == doctest::Approx(0.0));

    // Midpoints sorted lexicographically by (y, x).
    for (int n = sp.n_vertices + 1; n < sp.n_p2_nodes; ++n) {
        const Vec2 a = sp.p2_coords[n - 1], b = sp.p2_coords[n];
        CHECK((a.y() < b.y() || (a.y() == b.y() && a.x() < b.x())));
    }
    CHECK(sp.p2_coords[sp.n_vertices].isApprox(Vec2(0.25, 0.0)));

    // cell_nodes: 3 vertices then midpoints of edges (0,1), (1,2), (0,2).
    for (size_t c = 0; c < sp.cell_nodes.size(); ++c) {
        const auto& cn = sp.cell_nodes[c];
        const Vec2 v0 = sp.p2_coords[cn[0]], v1 = sp.p2_coords[cn[1]], v2 = sp.p2_coords[cn[2]];
        CHECK((sp.p2_coords[cn[3]] - 0.5 * (v0 + v1)).norm() < 1e-14);
        CHECK((sp.p2_coords[cn[4]] - 0.5 * (v1 + v2)).norm() < 1e-14);
        CHECK((sp.p2_coords[cn[5]] - 0.5 * (v0 + v2)).norm() < 1e-14);
    }
}

TEST_CASE("spaces: boundary node detection") {
    const SpacePair sp = build_spaces(build_rect_mesh(0, 2, 0, 1.5, 4, 3));
    CHECK(sp.boundary_p2_nodes.size() == 28); // 14 vertices + 14 edge midpoints
    for (int n : sp.boundary_p2_nodes) {
        const Vec2 x = sp.p2_coords[n];
        const bool on = x.x() == doctest::Approx(0.0) || x.x() == doctest::Approx(2.0) ||
                        x.y() == doctest::Approx(0.0) || x.y() == doctest::Approx(1.5);
        CHECK(on);
        CHECK(sp.node_on_boundary[n] == 1);
    }
    int flagged = 0;
    for (char f : sp.node_on_boundary) flagged += f;
    CHECK(flagged == 28);
}

TEST_CASE("spaces: quadratic basis partition of unity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double l0 = uni(rng), l1 = uni(rng) * (1.0 - l0), l2 = 1.0 - l0 - l1;
        const auto vals = p2_values(l0, l1, l2);
        double s = 0.0;
        for (double v : vals) s += v;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));

        const auto grads = p2_ref_grads(l0, l1, l2);
        Eigen::Vector2d g = Eigen::Vector2d::Zero();
        for (const auto& gi : grads) g += gi;
        CHECK(g.norm() < 1e-13);
    }
}

TEST_CASE("spaces: nodal interpolation is exact on quadratics") {
    const SpacePair sp = build_spaces(build_rect_mesh(0, 2, 0, 1.5, 3, 2));
    auto f = [](const Vec2& x, double) -> Vec2 {
        return {x.x() * x.x() - 3.0 * x.x() * x.y() + 0.25, 2.0 * x.y() * x.y() + x.x() - x.y()};
    };
    const FieldVec u = interpolate_velocity(sp, f, 0.0);
    CHECK(u.kind == FieldKind::Velocity);
    REQUIRE(u.coeffs.size() == sp.n_velocity_dofs);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(0.05, 0.9);
    for (int trial = 0; trial < 40; ++trial) {
        const int cell = static_cast<int>(rng() % sp.cell_nodes.size());
        double l0 = uni(rng), l1 = uni(rng) * (1.0 - l0), l2 = 1.0 - l0 - l1;
        const ElementGeometry geom = element_geometry(sp.mesh, cell);
        const Vec2 x = geom.corners[0] * l0 + geom.corners[1] * l1 + geom.corners[2] * l2;
        const Vec2 uh = eval_velocity(sp, u.coeffs, cell, l0, l1, l2);
        CHECK((uh - f(x, 0.0)).norm() < 1e-12);

        // Gradient of the quadratic is reproduced too.
        const Eigen::Matrix2d G = eval_velocity_gradient(sp, u.coeffs, cell, l0, l1, l2, geom);
        Eigen::Matrix2d Gex;
        Gex << 2.0 * x.x() - 3.0 * x.y(), -3.0 * x.x(), 1.0, 4.0 * x.y() - 1.0;
        CHECK((G - Gex).norm() < 1e-11);
    }
}

TEST_CASE("spaces: interpolation error decays at third order") {
    auto f = [](const Vec2& x, double) -> Vec2 {
        const double pi = std::acos(-1.0);
        return {std::sin(pi * x.x()) * std::sin(pi * x.y()),
                std::cos(pi * x.x()) * std::cos(pi * x.y())};
    };
    double errs[2];
    int n = 8;
    for (int lev = 0; lev < 2; ++lev, n *= 2) {
        const SpacePair sp = build_spaces(build_rect_mesh(0, 1, 0, 1, n, n));
        const FieldVec u = interpolate_velocity(sp, f, 0.0);
        errs[lev] = error_norms(sp, u.coeffs, f, 0.0, QuadRule::collapsed(6), true).l2;
    }
    const double rate = std::log2(errs[0] / errs[1]);
    CHECK(rate > 2.8);
}

TEST_CASE("spaces: pressure interpolation hits vertex values") {
    const SpacePair sp = build_spaces(build_rect_mesh(0, 1, 0, 1, 3, 3));
    auto p = [](const Vec2& x, double t) { return 2.0 * x.x() - x.y() + t; };
    const FieldVec ph = interpolate_pressure(sp, p, 0.5);
    CHECK(ph.kind == FieldKind::Pressure);
    REQUIRE(ph.coeffs.size() == sp.n_pressure_dofs);
    for (int v = 0; v < sp.n_vertices; ++v)
        CHECK(ph.coeffs[v] == doctest::Approx(p(sp.mesh.vertices[v], 0.5)).epsilon(1e-14));
}

TEST_CASE("spaces: non-finite field values rejected") {
    const SpacePair sp = build_spaces(build_rect_mesh(0, 1, 0, 1, 2, 2));
    auto bad = [](const Vec2& x, double) -> Vec2 {
        return {std::sqrt(x.x() - 0.6), 0.0}; // NaN for x < 0.6
    };
    CHECK_THROWS_AS(interpolate_velocity(sp, bad, 0.0), EvaluationFailure);
}
