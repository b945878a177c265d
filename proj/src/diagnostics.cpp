#include "mhd/diagnostics.hpp"

#include <cmath>

namespace mhd {

double energy_elsasser(const Eigen::VectorXd& zp, const Eigen::VectorXd& zm, const SpMat& M) {
    return 0.5 * (zp.dot(M * zp) + zm.dot(M * zm));
}

double energy_primitive(const Eigen::VectorXd& zp, const Eigen::VectorXd& zm, const SpMat& M,
                        const std::array<Eigen::VectorXd, 2>& comp_int, const Vec2& b0,
                        double area) {
    const Eigen::VectorXd u = 0.5 * (zp + zm);
    const Eigen::VectorXd b = 0.5 * (zp - zm);
    const double u2 = u.dot(M * u);
    const double b2 = b.dot(M * b);
    const Vec2 b_mean(comp_int[0].dot(b), comp_int[1].dot(b));
    return 0.5 * (u2 + b2 + 2.0 * b0.dot(b_mean) + b0.squaredNorm() * area);
}

double cross_helicity(const Eigen::VectorXd& zp, const Eigen::VectorXd& zm, const SpMat& M,
                      const std::array<Eigen::VectorXd, 2>& comp_int, const Vec2& b0) {
    const Eigen::VectorXd u = 0.5 * (zp + zm);
    const Eigen::VectorXd b = 0.5 * (zp - zm);
    const Vec2 u_mean(comp_int[0].dot(u), comp_int[1].dot(u));
    return 0.5 * (u.dot(M * b) + b0.dot(u_mean));
}

double dissipation_increment(const Eigen::VectorXd& zp_half, const Eigen::VectorXd& zm_half,
                             double tau, const PhysicalParams& params, const SpMat& K) {
    const double nus = params.nu_star();
    const double num = params.nu_minus();
    double incr = nus * (zp_half.dot(K * zp_half) + zm_half.dot(K * zm_half));
    if (num != 0.0) {
        const double sign = num > 0.0 ? 1.0 : -1.0;
        const Eigen::VectorXd mix = zp_half + sign * zm_half;
        incr += std::abs(num) * mix.dot(K * mix);
    }
    return tau * incr;
}

namespace {

/// Fourth-order central-difference Jacobian of a closed-form field.
Eigen::Matrix2d fd_gradient(const VectorField& f, const Vec2& x, double t) {
    const double h = 1e-4;
    Eigen::Matrix2d G;
    for (int d = 0; d < 2; ++d) {
        Vec2 e = Vec2::Zero();
        e(d) = 1.0;
        const Vec2 fp2 = f(x + 2 * h * e, t), fp1 = f(x + h * e, t);
        const Vec2 fm1 = f(x - h * e, t), fm2 = f(x - 2 * h * e, t);
        const Vec2 der = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
        G(0, d) = der.x();
        G(1, d) = der.y();
    }
    return G;
}

} // namespace

ErrorNorms error_norms(const SpacePair& space, const Eigen::VectorXd& coeffs,
                       const VectorField& exact, double t, const QuadRule& quad, bool l2_only) {
    ErrorNorms out;
    double l2 = 0.0, h1 = 0.0;
    for (size_t c = 0; c < space.mesh.triangles.size(); ++c) {
        const auto geom = element_geometry(space.mesh, static_cast<int>(c));
        for (int q = 0; q < quad.size(); ++q) {
            const double l0 = quad.bary(q, 0), l1 = quad.bary(q, 1), l2b = quad.bary(q, 2);
            const double w = quad.weights(q) * geom.detJ;
            const Vec2 x = l0 * geom.corners[0] + l1 * geom.corners[1] + l2b * geom.corners[2];
            const Vec2 diff = eval_velocity(space, coeffs, static_cast<int>(c), l0, l1, l2b) -
                              exact(x, t);
            l2 += w * diff.squaredNorm();
            if (!l2_only) {
                const Eigen::Matrix2d Gh =
                    eval_velocity_gradient(space, coeffs, static_cast<int>(c), l0, l1, l2b, geom);
                const Eigen::Matrix2d Gd = Gh - fd_gradient(exact, x, t);
                h1 += w * Gd.squaredNorm();
            }
        }
    }
    out.l2 = std::sqrt(l2);
    out.h1_semi = std::sqrt(h1);
    return out;
}

std::vector<double> convergence_rates(const std::vector<double>& errors,
                                      const std::vector<double>& hs) {
    if (errors.size() != hs.size())
        throw std::invalid_argument("convergence_rates: size mismatch");
    std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (size_t i = 1; i < errors.size(); ++i) {
        if (errors[i] <= 0.0 || errors[i - 1] <= 0.0 || hs[i] <= 0.0 || hs[i - 1] <= 0.0 ||
            hs[i] == hs[i - 1])
            continue;
        rates[i] = std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]);
    }
    return rates;
}

} // namespace mhd
