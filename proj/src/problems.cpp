#include "mhd/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace mhd {

namespace {

const double PI = std::acos(-1.0);

/// Closed-form derivatives of one Elsasser field, enough to assemble the
/// strong-form forcing.
struct AnalyticField {
    VectorField val;
    VectorField dt;
    VectorField lap;
    std::function<Eigen::Matrix2d(const Vec2&, double)> grad;
};

/// f_s = dt z_s - s (B0 . grad) z_s + (z_other . grad) z_s
///       - nu_plus lap z_s - nu_minus lap z_other + grad p
VectorField make_forcing(const AnalyticField& self, const AnalyticField& other, double s,
                         const VectorField& grad_p, const PhysicalParams& params,
                         const Vec2& b0) {
    const double nup = params.nu_plus();
    const double num = params.nu_minus();
    return [=](const Vec2& x, double t) -> Vec2 {
        const Eigen::Matrix2d G = self.grad(x, t);
        const Vec2 wind = other.val(x, t);
        Vec2 f = self.dt(x, t);
        f -= s * (G * b0);
        f += G * wind;
        f -= nup * self.lap(x, t);
        f -= num * other.lap(x, t);
        f += grad_p(x, t);
        return f;
    };
}

} // namespace

std::pair<FieldVec, FieldVec> elsasser_from_primitive(const FieldVec& u, const FieldVec& b) {
    if (u.kind != b.kind || u.coeffs.size() != b.coeffs.size())
        throw std::invalid_argument("elsasser_from_primitive: mismatched fields");
    FieldVec zp{u.coeffs + b.coeffs, u.kind};
    FieldVec zm{u.coeffs - b.coeffs, u.kind};
    return {zp, zm};
}

std::pair<FieldVec, FieldVec> primitive_from_elsasser(const FieldVec& zp, const FieldVec& zm) {
    if (zp.kind != zm.kind || zp.coeffs.size() != zm.coeffs.size())
        throw std::invalid_argument("primitive_from_elsasser: mismatched fields");
    FieldVec u{0.5 * (zp.coeffs + zm.coeffs), zp.kind};
    FieldVec b{0.5 * (zp.coeffs - zm.coeffs), zp.kind};
    return {u, b};
}

ProblemSpec travelling_wave(const PhysicalParams& params, const Vec2& b0) {
    const double nu = params.nu;
    const double nu_m = params.nu_m;

    auto wave_a = [=](const Vec2& x, double t) {
        return 0.25 * std::cos(2 * PI * (x.x() - t)) * std::sin(2 * PI * (x.y() - t)) *
               std::exp(-8 * PI * PI * nu * t);
    };
    auto wave_b = [=](const Vec2& x, double t) {
        return -0.25 * std::sin(2 * PI * (x.x() - t)) * std::cos(2 * PI * (x.y() - t)) *
               std::exp(-8 * PI * PI * nu * t);
    };

    auto field = [=](double s) {
        AnalyticField F;
        F.val = [=](const Vec2& x, double t) -> Vec2 {
            const double E2 = std::exp(nu_m * t);
            return {0.75 + wave_a(x, t) + s * 0.1 * (x.y() + 1) * (x.y() + 1) * E2,
                    wave_b(x, t) + s * 0.1 * (x.x() + 1) * (x.x() + 1) * E2};
        };
        F.dt = [=](const Vec2& x, double t) -> Vec2 {
            const double th = 2 * PI * (x.x() - t), ph = 2 * PI * (x.y() - t);
            const double E1 = std::exp(-8 * PI * PI * nu * t);
            const double E2 = std::exp(nu_m * t);
            const double da = 0.5 * PI * (std::sin(th) * std::sin(ph) - std::cos(th) * std::cos(ph)) * E1 -
                              8 * PI * PI * nu * wave_a(x, t);
            const double db = 0.5 * PI * (std::cos(th) * std::cos(ph) - std::sin(th) * std::sin(ph)) * E1 -
                              8 * PI * PI * nu * wave_b(x, t);
            return {da + s * nu_m * 0.1 * (x.y() + 1) * (x.y() + 1) * E2,
                    db + s * nu_m * 0.1 * (x.x() + 1) * (x.x() + 1) * E2};
        };
        F.lap = [=](const Vec2& x, double t) -> Vec2 {
            const double E2 = std::exp(nu_m * t);
            return {-8 * PI * PI * wave_a(x, t) + s * 0.2 * E2,
                    -8 * PI * PI * wave_b(x, t) + s * 0.2 * E2};
        };
        F.grad = [=](const Vec2& x, double t) -> Eigen::Matrix2d {
            const double th = 2 * PI * (x.x() - t), ph = 2 * PI * (x.y() - t);
            const double E1 = std::exp(-8 * PI * PI * nu * t);
            const double E2 = std::exp(nu_m * t);
            Eigen::Matrix2d G;
            G(0, 0) = -0.5 * PI * std::sin(th) * std::sin(ph) * E1;
            G(0, 1) = 0.5 * PI * std::cos(th) * std::cos(ph) * E1 + s * 0.2 * (x.y() + 1) * E2;
            G(1, 0) = -0.5 * PI * std::cos(th) * std::cos(ph) * E1 + s * 0.2 * (x.x() + 1) * E2;
            G(1, 1) = 0.5 * PI * std::sin(th) * std::sin(ph) * E1;
            return G;
        };
        return F;
    };

    const AnalyticField zp = field(+1.0), zm = field(-1.0);

    auto grad_p = [=](const Vec2& x, double t) -> Vec2 {
        const double E = std::exp(-16 * PI * PI * nu * t);
        return {PI / 16.0 * std::sin(4 * PI * (x.x() - t)) * E,
                PI / 16.0 * std::sin(4 * PI * (x.y() - t)) * E};
    };

    ProblemSpec spec;
    spec.name = "wave";
    spec.params = params;
    spec.b0 = b0;
    spec.box = {0.5, 1.5, 0.5, 1.5};
    spec.exact_zp = zp.val;
    spec.exact_zm = zm.val;
    spec.exact_p = [=](const Vec2& x, double t) {
        return -(std::cos(4 * PI * (x.x() - t)) + std::cos(4 * PI * (x.y() - t))) / 64.0 *
               std::exp(-16 * PI * PI * nu * t);
    };
    spec.forcing_p = make_forcing(zp, zm, +1.0, grad_p, params, b0);
    spec.forcing_m = make_forcing(zm, zp, -1.0, grad_p, params, b0);
    spec.initial_zp = zp.val;
    spec.initial_zm = zm.val;
    return spec;
}

namespace {

/// 1D duct profiles and their y-derivatives.
struct DuctProfile {
    double G, S, Ha, nu;
    double u1(double y) const {
        return G / (nu * Ha * std::tanh(Ha)) * (1.0 - std::cosh(y * Ha) / std::cosh(Ha));
    }
    double du1(double y) const {
        return -G / (nu * std::tanh(Ha)) * std::sinh(y * Ha) / std::cosh(Ha);
    }
    double ddu1(double y) const {
        return -G * Ha / (nu * std::tanh(Ha)) * std::cosh(y * Ha) / std::cosh(Ha);
    }
    double b1(double y) const { return G / S * (std::sinh(y * Ha) / std::sinh(Ha) - y); }
    double db1(double y) const { return G / S * (Ha * std::cosh(y * Ha) / std::sinh(Ha) - 1.0); }
    double ddb1(double y) const { return G / S * Ha * Ha * std::sinh(y * Ha) / std::sinh(Ha); }
};

/// Duct problem with the Elsasser profiles modulated by amp(t); amp = 1 gives
/// the steady flow.
ProblemSpec duct_problem(const HartmannParams& hp, const PhysicalParams& params,
                         const std::function<double(double)>& amp,
                         const std::function<double(double)>& damp, const std::string& name) {
    if (hp.L <= 0 || hp.S <= 0 || hp.Ha <= 0)
        throw std::invalid_argument("duct_problem: L, S, Ha must be positive");
    const DuctProfile prof{hp.G, hp.S, hp.Ha, params.nu};
    const double S = hp.S, Gp = hp.G;

    auto field = [=](double s) {
        AnalyticField F;
        F.val = [=](const Vec2& x, double t) -> Vec2 {
            return {(prof.u1(x.y()) + s * prof.b1(x.y())) * amp(t), 0.0};
        };
        F.dt = [=](const Vec2& x, double t) -> Vec2 {
            return {(prof.u1(x.y()) + s * prof.b1(x.y())) * damp(t), 0.0};
        };
        F.lap = [=](const Vec2& x, double t) -> Vec2 {
            return {(prof.ddu1(x.y()) + s * prof.ddb1(x.y())) * amp(t), 0.0};
        };
        F.grad = [=](const Vec2& x, double t) -> Eigen::Matrix2d {
            Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
            G(0, 1) = (prof.du1(x.y()) + s * prof.db1(x.y())) * amp(t);
            return G;
        };
        return F;
    };

    const AnalyticField zp = field(+1.0), zm = field(-1.0);
    auto grad_p = [=](const Vec2& x, double t) -> Vec2 {
        return {-Gp * amp(t), -S * prof.b1(x.y()) * prof.db1(x.y()) * amp(t)};
    };

    ProblemSpec spec;
    spec.name = name;
    spec.params = params;
    spec.b0 = Vec2(0.0, hp.M);
    spec.box = {0.0, hp.L, -1.0, 1.0};
    spec.exact_zp = zp.val;
    spec.exact_zm = zm.val;
    spec.exact_p = [=](const Vec2& x, double t) {
        return (-Gp * x.x() - 0.5 * S * prof.b1(x.y()) * prof.b1(x.y())) * amp(t);
    };
    spec.forcing_p = make_forcing(zp, zm, +1.0, grad_p, params, spec.b0);
    spec.forcing_m = make_forcing(zm, zp, -1.0, grad_p, params, spec.b0);
    spec.initial_zp = zp.val;
    spec.initial_zm = zm.val;
    return spec;
}

} // namespace

ProblemSpec hartmann_channel(const HartmannParams& hp, const PhysicalParams& params) {
    return duct_problem(
        hp, params, [](double) { return 1.0; }, [](double) { return 0.0; }, "hartmann");
}

double lindberg_g1(double t, double omega) {
    return std::pow(10.0, omega) * (t + 2.0 * std::exp(-t) - 2.0);
}

double lindberg_g2(double t, double omega) {
    return std::pow(10.0, omega) * (1.0 - std::exp(-t) - t * std::exp(-1.0));
}

double lindberg_G(double t, double omega) {
    return std::exp(lindberg_g1(t, omega)) * (std::cos(lindberg_g2(t, omega)) +
                                              std::sin(lindberg_g2(t, omega)));
}

double lindberg_G_dt(double t, double omega) {
    const double p = std::pow(10.0, omega);
    const double g1 = lindberg_g1(t, omega), g2 = lindberg_g2(t, omega);
    const double dg1 = p * (1.0 - 2.0 * std::exp(-t));
    const double dg2 = p * (std::exp(-t) - std::exp(-1.0));
    return std::exp(g1) * (dg1 * (std::cos(g2) + std::sin(g2)) +
                           dg2 * (std::cos(g2) - std::sin(g2)));
}

ProblemSpec lindberg_hartmann(const HartmannParams& hp, const PhysicalParams& params,
                              double omega) {
    auto spec = duct_problem(
        hp, params, [omega](double t) { return lindberg_G(t, omega); },
        [omega](double t) { return lindberg_G_dt(t, omega); }, "lindberg");
    return spec;
}

ProblemSpec decay_problem(const PhysicalParams& params, const Vec2& b0) {
    ProblemSpec spec;
    spec.name = "decay";
    spec.params = params;
    spec.b0 = b0;
    spec.box = {0.0, 1.0, 0.0, 1.0};
    spec.homogeneous_bc = true;
    // Stream functions sin^2(pi x) sin^2(pi y) and sin^2(pi x) sin^2(2 pi y)/2:
    // both fields are divergence-free with zero trace.
    spec.initial_zp = [](const Vec2& x, double) -> Vec2 {
        const double sx = std::sin(PI * x.x());
        return {PI * sx * sx * std::sin(2 * PI * x.y()),
                -PI * std::sin(2 * PI * x.x()) * std::sin(PI * x.y()) * std::sin(PI * x.y())};
    };
    spec.initial_zm = [](const Vec2& x, double) -> Vec2 {
        const double sx = std::sin(PI * x.x());
        const double s2y = std::sin(2 * PI * x.y());
        return {PI * sx * sx * std::sin(4 * PI * x.y()),
                -0.5 * PI * std::sin(2 * PI * x.x()) * s2y * s2y};
    };
    return spec;
}

} // namespace mhd
