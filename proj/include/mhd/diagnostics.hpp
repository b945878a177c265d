#pragma once

#include <limits>
#include <vector>

#include "mhd/forms.hpp"

namespace mhd {

/// Elsasser energy 1/2 (||z+||^2 + ||z-||^2) in the discrete L2 norm.
double energy_elsasser(const Eigen::VectorXd& zp, const Eigen::VectorXd& zm, const SpMat& M);

/// Primitive energy 1/2 (||u||^2 + ||B0 + b||^2) with u, b recovered from the
/// Elsasser pair; comp_int supplies the component integrals of the basis.
double energy_primitive(const Eigen::VectorXd& zp, const Eigen::VectorXd& zm, const SpMat& M,
                        const std::array<Eigen::VectorXd, 2>& comp_int, const Vec2& b0,
                        double area);

/// Cross helicity 1/2 (u, B0 + b).
double cross_helicity(const Eigen::VectorXd& zp, const Eigen::VectorXd& zm, const SpMat& M,
                      const std::array<Eigen::VectorXd, 2>& comp_int, const Vec2& b0);

/// Viscous energy increment of one midpoint step evaluated at the half-step
/// fields: tau [ nu_star (|z+|_1^2 + |z-|_1^2) + |nu_-| |z+ + sgn(nu_-) z-|_1^2 ].
double dissipation_increment(const Eigen::VectorXd& zp_half, const Eigen::VectorXd& zm_half,
                             double tau, const PhysicalParams& params, const SpMat& K);

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
};

/// Quadrature-evaluated L2 and H1-seminorm distance between a coefficient
/// field and a closed-form field at time t (exact gradients by high-order
/// finite differences of the callable).  l2_only skips the gradient part.
ErrorNorms error_norms(const SpacePair& space, const Eigen::VectorXd& coeffs,
                       const VectorField& exact, double t,
                       const QuadRule& quad = QuadRule::triangle(5), bool l2_only = false);

/// Observed orders log(e_{i-1}/e_i) / log(h_{i-1}/h_i); the first entry and
/// any division involving a zero error are NaN sentinels.
std::vector<double> convergence_rates(const std::vector<double>& errors,
                                      const std::vector<double>& hs);

/// Per-step diagnostic row; magnetic helicity stays NaN (not applicable in 2D).
struct DiagnosticRecord {
    double t = 0.0;
    double energy_elsasser = 0.0;
    double energy_primitive = 0.0;
    double cross_helicity = 0.0;
    double dissipation_cum = 0.0;
    double magnetic_helicity = std::numeric_limits<double>::quiet_NaN();
    double err_zp_l2 = std::numeric_limits<double>::quiet_NaN();
    double err_zm_l2 = std::numeric_limits<double>::quiet_NaN();
};

} // namespace mhd
