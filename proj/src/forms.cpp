#include "mhd/forms.hpp"

#include <cmath>
#include <cstdlib>

namespace mhd {

PhysicalParams::PhysicalParams(double nu_, double nu_m_, bool ideal_)
    : nu(nu_), nu_m(nu_m_), ideal(ideal_) {
    if (ideal) {
        if (nu < 0.0 || nu_m < 0.0)
            throw std::invalid_argument("PhysicalParams: negative viscosity");
    } else if (nu <= 0.0 || nu_m <= 0.0) {
        throw std::invalid_argument("PhysicalParams: viscosities must be positive");
    }
}

namespace {

struct QuadCache {
    std::vector<std::array<double, 6>> phi;
    std::vector<std::array<Eigen::Vector2d, 6>> gref;
    explicit QuadCache(const QuadRule& quad) {
        phi.reserve(quad.size());
        gref.reserve(quad.size());
        for (int q = 0; q < quad.size(); ++q) {
            const double l0 = quad.bary(q, 0), l1 = quad.bary(q, 1), l2 = quad.bary(q, 2);
            phi.push_back(p2_values(l0, l1, l2));
            gref.push_back(p2_ref_grads(l0, l1, l2));
        }
    }
};

Vec2 physical_point(const ElementGeometry& g, double l0, double l1, double l2) {
    return l0 * g.corners[0] + l1 * g.corners[1] + l2 * g.corners[2];
}

} // namespace

SpMat assemble_mass(const SpacePair& space, const QuadRule& quad) {
    QuadCache qc(quad);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(space.mesh.triangles.size() * 72);
    for (size_t t = 0; t < space.mesh.triangles.size(); ++t) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(t));
        const auto& nodes = space.cell_nodes[t];
        double Me[6][6] = {};
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    Me[a][b] += w * qc.phi[q][a] * qc.phi[q][b];
        }
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                for (int c = 0; c < 2; ++c)
                    trips.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + c, Me[a][b]);
    }
    SpMat M(space.n_velocity_dofs, space.n_velocity_dofs);
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

SpMat assemble_stiffness(const SpacePair& space, const QuadRule& quad) {
    QuadCache qc(quad);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(space.mesh.triangles.size() * 72);
    for (size_t t = 0; t < space.mesh.triangles.size(); ++t) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(t));
        const auto& nodes = space.cell_nodes[t];
        double Ke[6][6] = {};
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            Eigen::Vector2d g[6];
            for (int a = 0; a < 6; ++a) g[a] = geom.invJT * qc.gref[q][a];
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    Ke[a][b] += w * g[a].dot(g[b]);
        }
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                for (int c = 0; c < 2; ++c)
                    trips.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + c, Ke[a][b]);
    }
    SpMat K(space.n_velocity_dofs, space.n_velocity_dofs);
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

SpMat assemble_div(const SpacePair& space, const QuadRule& quad) {
    QuadCache qc(quad);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(space.mesh.triangles.size() * 36);
    for (size_t t = 0; t < space.mesh.triangles.size(); ++t) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(t));
        const auto& nodes = space.cell_nodes[t];
        const auto& tri = space.mesh.triangles[t];
        double De[3][12] = {}; // rows: vertex test, cols: 6 nodes x 2 comps
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            const double psi[3] = {quad.bary(q, 0), quad.bary(q, 1), quad.bary(q, 2)};
            for (int b = 0; b < 6; ++b) {
                const Eigen::Vector2d g = geom.invJT * qc.gref[q][b];
                for (int i = 0; i < 3; ++i) {
                    De[i][2 * b] += w * psi[i] * g.x();
                    De[i][2 * b + 1] += w * psi[i] * g.y();
                }
            }
        }
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 6; ++b)
                for (int c = 0; c < 2; ++c)
                    trips.emplace_back(tri[i], 2 * nodes[b] + c, De[i][2 * b + c]);
    }
    SpMat D(space.n_pressure_dofs, space.n_velocity_dofs);
    D.setFromTriplets(trips.begin(), trips.end());
    return D;
}

namespace {

/// Shared transport assembly; wind evaluated per quadrature point.
template <typename WindAt>
SpMat assemble_convection_impl(const SpacePair& space, const QuadRule& quad, WindAt&& wind_at) {
    QuadCache qc(quad);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(space.mesh.triangles.size() * 72);
    for (size_t t = 0; t < space.mesh.triangles.size(); ++t) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(t));
        const auto& nodes = space.cell_nodes[t];
        // I[a][b] = (w . grad phi_b, phi_a); the skew form is (I - I^T)/2.
        double I[6][6] = {};
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            const Vec2 wv = wind_at(static_cast<int>(t), q, geom);
            Eigen::Vector2d g[6];
            for (int a = 0; a < 6; ++a) g[a] = geom.invJT * qc.gref[q][a];
            for (int b = 0; b < 6; ++b) {
                const double adv = w * (wv.x() * g[b].x() + wv.y() * g[b].y());
                for (int a = 0; a < 6; ++a) I[a][b] += adv * qc.phi[q][a];
            }
        }
        static const bool plain = std::getenv("MHD_PLAIN_CONV") != nullptr;
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                const double v = plain ? I[a][b] : 0.5 * (I[a][b] - I[b][a]);
                for (int c = 0; c < 2; ++c)
                    trips.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + c, v);
            }
    }
    SpMat C(space.n_velocity_dofs, space.n_velocity_dofs);
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
}

} // namespace

SpMat assemble_convection(const SpacePair& space, const FieldVec& wind, const QuadRule& quad) {
    if (wind.kind != FieldKind::Velocity ||
        wind.coeffs.size() != space.n_velocity_dofs)
        throw std::invalid_argument("assemble_convection: wind does not match the velocity space");
    QuadCache qc(quad);
    return assemble_convection_impl(space, quad,
        [&](int t, int q, const ElementGeometry&) {
            const auto& nodes = space.cell_nodes[t];
            Vec2 v = Vec2::Zero();
            for (int a = 0; a < 6; ++a) {
                v.x() += wind.coeffs(2 * nodes[a]) * qc.phi[q][a];
                v.y() += wind.coeffs(2 * nodes[a] + 1) * qc.phi[q][a];
            }
            return v;
        });
}

SpMat assemble_convection(const SpacePair& space, const Vec2& wind, const QuadRule& quad) {
    return assemble_convection_impl(space, quad,
        [&](int, int, const ElementGeometry&) { return wind; });
}

Eigen::VectorXd assemble_load(const SpacePair& space, const VectorField& f, double t,
                              const QuadRule& quad) {
    QuadCache qc(quad);
    Eigen::VectorXd L = Eigen::VectorXd::Zero(space.n_velocity_dofs);
    for (size_t tcell = 0; tcell < space.mesh.triangles.size(); ++tcell) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(tcell));
        const auto& nodes = space.cell_nodes[tcell];
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            const Vec2 x = physical_point(geom, quad.bary(q, 0), quad.bary(q, 1), quad.bary(q, 2));
            const Vec2 fv = f(x, t);
            if (!std::isfinite(fv.x()) || !std::isfinite(fv.y()))
                throw EvaluationFailure("assemble_load: non-finite forcing value");
            for (int a = 0; a < 6; ++a) {
                L(2 * nodes[a]) += w * fv.x() * qc.phi[q][a];
                L(2 * nodes[a] + 1) += w * fv.y() * qc.phi[q][a];
            }
        }
    }
    return L;
}

Eigen::VectorXd pressure_integrals(const SpacePair& space, const QuadRule& quad) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(space.n_pressure_dofs);
    for (size_t t = 0; t < space.mesh.triangles.size(); ++t) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(t));
        const auto& tri = space.mesh.triangles[t];
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            for (int i = 0; i < 3; ++i) m(tri[i]) += w * quad.bary(q, i);
        }
    }
    return m;
}

std::array<Eigen::VectorXd, 2> component_integrals(const SpacePair& space, const QuadRule& quad) {
    QuadCache qc(quad);
    std::array<Eigen::VectorXd, 2> r = {Eigen::VectorXd::Zero(space.n_velocity_dofs),
                                        Eigen::VectorXd::Zero(space.n_velocity_dofs)};
    for (size_t t = 0; t < space.mesh.triangles.size(); ++t) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(t));
        const auto& nodes = space.cell_nodes[t];
        for (int q = 0; q < quad.size(); ++q) {
            const double w = quad.weights(q) * geom.detJ;
            for (int a = 0; a < 6; ++a)
                for (int c = 0; c < 2; ++c)
                    r[c](2 * nodes[a] + c) += w * qc.phi[q][a];
        }
    }
    return r;
}

double integrate_squared(const SpacePair& space, const VectorField& f, double t,
                         const QuadRule& quad) {
    double acc = 0.0;
    for (size_t tcell = 0; tcell < space.mesh.triangles.size(); ++tcell) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(tcell));
        for (int q = 0; q < quad.size(); ++q) {
            const Vec2 x = physical_point(geom, quad.bary(q, 0), quad.bary(q, 1), quad.bary(q, 2));
            acc += quad.weights(q) * geom.detJ * f(x, t).squaredNorm();
        }
    }
    return acc;
}

FemOperators FemOperators::build(const SpacePair& space, const QuadRule& quad) {
    FemOperators ops;
    ops.M = assemble_mass(space, quad);
    ops.K = assemble_stiffness(space, quad);
    ops.D = assemble_div(space, quad);
    ops.p_int = pressure_integrals(space, quad);
    ops.comp_int = component_integrals(space, quad);
    ops.area = space.mesh.area();
    return ops;
}

double weighted_norm(const SpMat& M, const Eigen::VectorXd& x) {
    return std::sqrt(std::max(0.0, x.dot(M * x)));
}

} // namespace mhd
