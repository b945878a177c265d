#pragma once

#include <string>

#include "mhd/forms.hpp"

namespace mhd {

/// A benchmark configuration: viscosities, applied field B0, domain, and the
/// exact solution / forcing callables when the problem is manufactured.
/// The two Elsasser momentum equations generally need different forcings
/// (f = f_NSE +/- g_induction), hence the pair.
struct ProblemSpec {
    std::string name;
    PhysicalParams params;
    Vec2 b0 = Vec2::Zero();
    std::array<double, 4> box{0.0, 1.0, 0.0, 1.0};

    VectorField exact_zp, exact_zm; ///< null when no closed-form solution
    ScalarField exact_p;
    VectorField forcing_p, forcing_m; ///< null means zero forcing
    VectorField initial_zp, initial_zm;
    bool homogeneous_bc = false; ///< zero Dirichlet traces instead of exact ones

    bool manufactured() const { return static_cast<bool>(exact_zp); }
};

/// Pointwise Elsasser map z+/- = u +/- b on matching coefficient vectors.
std::pair<FieldVec, FieldVec> elsasser_from_primitive(const FieldVec& u, const FieldVec& b);

/// Inverse map u = (z+ + z-)/2, b = (z+ - z-)/2.
std::pair<FieldVec, FieldVec> primitive_from_elsasser(const FieldVec& zp, const FieldVec& zm);

/// Divergence-free travelling vortex on [0.5,1.5]^2 with decaying wave part
/// and a slowly growing quadratic shear; exact for any B0.
ProblemSpec travelling_wave(const PhysicalParams& params, const Vec2& b0);

/// Duct-flow parameters: channel [0,L] x [-1,1], driving pressure gradient G,
/// coupling number S, Hartmann number Ha, applied transverse field strength M.
struct HartmannParams {
    double L = 6.0;
    double G = 1.0;
    double S = 1.0;
    double Ha = 5.0;
    double M = 10.0;
};

/// Steady laminar duct flow under a transverse field B0 = (0, M).
ProblemSpec hartmann_channel(const HartmannParams& hp, const PhysicalParams& params);

/// Impulsive amplitude g(t) = e^{g1} (cos g2 + sin g2) and its pieces.
double lindberg_g1(double t, double omega);
double lindberg_g2(double t, double omega);
double lindberg_G(double t, double omega);
double lindberg_G_dt(double t, double omega);

/// Duct flow modulated in time by lindberg_G; stiff near the end of the
/// impulse (omega = 3.1 gives the reference burst around t = 1.6).
ProblemSpec lindberg_hartmann(const HartmannParams& hp, const PhysicalParams& params,
                              double omega);

/// Unforced decay on the unit square: smooth divergence-free initial fields,
/// homogeneous Dirichlet walls, no closed-form solution.  Used for the
/// conservation studies (pass ideal parameters for the inviscid case).
ProblemSpec decay_problem(const PhysicalParams& params, const Vec2& b0);

} // namespace mhd
