#pragma once

/// Shared test oracles.
///
/// The residual oracle differentiates the closed-form exact solutions of a
/// manufactured problem numerically (4th-order central differences) and
/// checks that they satisfy the strong Elsasser momentum equation
///   dt z_s + (z_{-s} . grad) z_s - s (B0 . grad) z_s
///     - nu_plus lap z_s - nu_minus lap z_{-s} + grad p = f_s
/// against the problem's own forcing callable.  Any sign slip, dropped term,
/// or wrong hand-derived derivative in the problem definitions shows up as a
/// nonzero residual.

#include <algorithm>
#include <cmath>

#include "mhd/problems.hpp"

namespace oracles {

using mhd::Vec2;
using mhd::VectorField;
using mhd::ScalarField;

inline Vec2 fd_time(const VectorField& f, const Vec2& x, double t, double h) {
    return (-f(x, t + 2 * h) + 8.0 * f(x, t + h) - 8.0 * f(x, t - h) + f(x, t - 2 * h)) /
           (12.0 * h);
}

/// Jacobian, rows = component, cols = d/dx_j.
inline Eigen::Matrix2d fd_jacobian(const VectorField& f, const Vec2& x, double t, double h) {
    Eigen::Matrix2d J;
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = h;
        const Vec2 d =
            (-f(x + 2 * e, t) + 8.0 * f(x + e, t) - 8.0 * f(x - e, t) + f(x - 2 * e, t)) /
            (12.0 * h);
        J(0, j) = d.x();
        J(1, j) = d.y();
    }
    return J;
}

inline Vec2 fd_laplacian(const VectorField& f, const Vec2& x, double t, double h) {
    Vec2 lap = Vec2::Zero();
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = h;
        lap += (-f(x + 2 * e, t) + 16.0 * f(x + e, t) - 30.0 * f(x, t) + 16.0 * f(x - e, t) -
                f(x - 2 * e, t)) /
               (12.0 * h * h);
    }
    return lap;
}

inline Vec2 fd_grad_scalar(const ScalarField& p, const Vec2& x, double t, double h) {
    Vec2 g;
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = h;
        g[j] = (-p(x + 2 * e, t) + 8.0 * p(x + e, t) - 8.0 * p(x - e, t) + p(x - 2 * e, t)) /
               (12.0 * h);
    }
    return g;
}

inline double fd_divergence(const VectorField& f, const Vec2& x, double t, double h) {
    const Eigen::Matrix2d J = fd_jacobian(f, x, t, h);
    return J(0, 0) + J(1, 1);
}

/// Residual of one Elsasser momentum equation relative to the largest term
/// magnitude (plus one, so near-zero states are judged absolutely).
/// h_time may differ from h_space for problems with fast time scales.
inline double momentum_residual_rel(const mhd::ProblemSpec& prob, double s, const Vec2& x,
                                    double t, double h_space, double h_time) {
    const VectorField& self = s > 0 ? prob.exact_zp : prob.exact_zm;
    const VectorField& other = s > 0 ? prob.exact_zm : prob.exact_zp;
    const VectorField& forcing = s > 0 ? prob.forcing_p : prob.forcing_m;

    const Vec2 dt = fd_time(self, x, t, h_time);
    const Eigen::Matrix2d J = fd_jacobian(self, x, t, h_space);
    const Vec2 conv = J * other(x, t);
    const Vec2 b0_adv = s * (J * prob.b0);
    const Vec2 lap_self = fd_laplacian(self, x, t, h_space);
    const Vec2 lap_other = fd_laplacian(other, x, t, h_space);
    const Vec2 gp = fd_grad_scalar(prob.exact_p, x, t, h_space);
    const Vec2 f = forcing ? forcing(x, t) : Vec2::Zero();

    const double nup = prob.params.nu_plus();
    const double num = prob.params.nu_minus();
    const Vec2 r = dt + conv - b0_adv - nup * lap_self - num * lap_other + gp - f;

    double scale = 1.0;
    for (const Vec2& v : {dt, conv, b0_adv, Vec2(nup * lap_self), Vec2(num * lap_other), gp, f})
        scale = std::max(scale, v.norm());
    return r.norm() / scale;
}

/// Max relative momentum residual over both fields and a grid of interior
/// sample points at one time.
inline double max_residual_rel(const mhd::ProblemSpec& prob, double t, double h_space,
                               double h_time) {
    double worst = 0.0;
    const auto& b = prob.box;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const Vec2 x(b[0] + 0.25 * i * (b[1] - b[0]), b[2] + 0.25 * j * (b[3] - b[2]));
            worst = std::max(worst, momentum_residual_rel(prob, +1.0, x, t, h_space, h_time));
            worst = std::max(worst, momentum_residual_rel(prob, -1.0, x, t, h_space, h_time));
        }
    return worst;
}

} // namespace oracles
