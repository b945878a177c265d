#pragma once

#include <Eigen/Sparse>

#include "mhd/errors.hpp"
#include "mhd/spaces.hpp"

namespace mhd {

using SpMat = Eigen::SparseMatrix<double>;

/// Viscosity pair of the Elsasser split.  nu_plus/nu_minus are the symmetric
/// and antisymmetric combinations; nu_star = nu_plus - |nu_minus| is the
/// coercivity constant.
struct PhysicalParams {
    double nu = 0.0;
    double nu_m = 0.0;
    bool ideal = false; ///< permits nu = nu_m = 0 (inviscid conservation runs)

    PhysicalParams() = default;
    PhysicalParams(double nu_, double nu_m_, bool ideal_ = false);

    double nu_plus() const { return 0.5 * (nu + nu_m); }
    double nu_minus() const { return 0.5 * (nu - nu_m); }
    double nu_star() const { return nu < nu_m ? nu : nu_m; }
};

/// Velocity mass matrix: (u, v).
SpMat assemble_mass(const SpacePair& space, const QuadRule& quad = QuadRule::triangle(5));

/// Velocity stiffness matrix: (grad u, grad v), componentwise.
SpMat assemble_stiffness(const SpacePair& space, const QuadRule& quad = QuadRule::triangle(5));

/// Divergence coupling: D(q, v) = (q, div v), rows pressure, cols velocity.
SpMat assemble_div(const SpacePair& space, const QuadRule& quad = QuadRule::triangle(5));

/// Skew-symmetrized transport with a quadratic-field wind w:
///   C[v][u] = 1/2 (w . grad u, v) - 1/2 (w . grad v, u).
/// Exactly antisymmetric by construction.
SpMat assemble_convection(const SpacePair& space, const FieldVec& wind,
                          const QuadRule& quad = QuadRule::triangle(5));

/// Same transport form with a constant wind.
SpMat assemble_convection(const SpacePair& space, const Vec2& wind,
                          const QuadRule& quad = QuadRule::triangle(5));

/// Load vector: (f, v) at time t.
Eigen::VectorXd assemble_load(const SpacePair& space, const VectorField& f, double t,
                              const QuadRule& quad = QuadRule::triangle(5));

/// Integrals of the pressure basis: m_i = (psi_i, 1).
Eigen::VectorXd pressure_integrals(const SpacePair& space,
                                   const QuadRule& quad = QuadRule::triangle(5));

/// Integrals of the velocity basis per component: r[c]_i = (phi_i e_c, e_c).
/// Dotting with a coefficient vector gives the integral of that component.
std::array<Eigen::VectorXd, 2> component_integrals(const SpacePair& space,
                                                   const QuadRule& quad = QuadRule::triangle(5));

/// Quadrature of |f(.,t)|^2 over the domain.
double integrate_squared(const SpacePair& space, const VectorField& f, double t,
                         const QuadRule& quad = QuadRule::triangle(5));

/// Frequently reused operators for one space (mass, stiffness, divergence,
/// pressure integrals, component integrals, domain area).
struct FemOperators {
    SpMat M;
    SpMat K;
    SpMat D;
    Eigen::VectorXd p_int;
    std::array<Eigen::VectorXd, 2> comp_int;
    double area = 0.0;

    static FemOperators build(const SpacePair& space,
                              const QuadRule& quad = QuadRule::triangle(5));
};

/// sqrt(x' M x); the discrete L2 norm when M is the mass matrix.
double weighted_norm(const SpMat& M, const Eigen::VectorXd& x);

} // namespace mhd
