#include "mhd/baseline.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

#include "mhd/errors.hpp"

namespace mhd {

Bdf2Stepper::Bdf2Stepper(const SpacePair& space, const ProblemSpec& prob, PimOptions opt)
    : space_(space), prob_(prob), opt_(opt), ops_(FemOperators::build(space)),
      solver_p_(opt.linear_tol), solver_m_(opt.linear_tol) {
    conv_b0_ = assemble_convection(space_, prob_.b0);
}

Eigen::VectorXd Bdf2Stepper::boundary_trace(const VectorField& g, double t) const {
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(space_.n_velocity_dofs);
    if (prob_.homogeneous_bc || !g) return vals;
    for (int n : space_.boundary_p2_nodes) {
        const Vec2 v = g(space_.p2_coords[n], t);
        if (!std::isfinite(v.x()) || !std::isfinite(v.y()))
            throw EvaluationFailure("boundary_trace: non-finite boundary value");
        vals(2 * n) = v.x();
        vals(2 * n + 1) = v.y();
    }
    return vals;
}

ElsasserState Bdf2Stepper::initial_state(double t0, double tau) const {
    if (!(tau > 0.0)) throw std::invalid_argument("initial_state: tau must be positive");
    ElsasserState s;
    s.zp_prev = interpolate_velocity(space_, prob_.initial_zp, t0);
    s.zm_prev = interpolate_velocity(space_, prob_.initial_zm, t0);
    s.zp = interpolate_velocity(space_, prob_.initial_zp, t0 + tau);
    s.zm = interpolate_velocity(space_, prob_.initial_zm, t0 + tau);
    s.has_prev = true;
    s.t = t0 + tau;
    s.tau_prev = tau;
    s.step_index = 1;
    return s;
}

std::pair<ElsasserState, StepReport> Bdf2Stepper::step(const ElsasserState& state, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("bdf2 step: tau must be positive");
    if (!state.has_prev)
        throw InsufficientHistory("bdf2 step: needs two starting levels");
    if (std::abs(tau - state.tau_prev) > 1e-12 * tau)
        throw std::invalid_argument("bdf2 step: constant step size required");

    const double t_new = state.t + tau;
    const double mass_coef = 1.5 / tau; // 3/(2 tau)
    const double nup = prob_.params.nu_plus();
    const double num = prob_.params.nu_minus();

    // Extrapolated coupling fields 2 z_n - z_{n-1}.
    const Eigen::VectorXd wind_m = 2.0 * state.zm.coeffs - state.zm_prev.coeffs;
    const Eigen::VectorXd wind_p = 2.0 * state.zp.coeffs - state.zp_prev.coeffs;

    auto rhs_for = [&](const Eigen::VectorXd& zn, const Eigen::VectorXd& znm1,
                       const Eigen::VectorXd& cross, const VectorField& forcing) {
        Eigen::VectorXd rhs = ops_.M * ((4.0 * zn - znm1) / (2.0 * tau));
        if (num != 0.0) rhs -= num * (ops_.K * cross);
        if (forcing) rhs += assemble_load(space_, forcing, t_new);
        return rhs;
    };

    const Eigen::VectorXd rhs_p = rhs_for(state.zp.coeffs, state.zp_prev.coeffs, wind_m,
                                          prob_.forcing_p);

    const Eigen::VectorXd gp = boundary_trace(prob_.exact_zp, t_new);
    const Eigen::VectorXd gm = boundary_trace(prob_.exact_zm, t_new);

    auto sys_p = build_oseen_system(space_, ops_, mass_coef, nup, wind_m, conv_b0_, -1.0,
                                    rhs_p, gp);
    const SaddleSolution sol_p = solver_p_.solve(sys_p);

    static const bool gs = std::getenv("MHD_GS_BASELINE") != nullptr;
    const Eigen::VectorXd wind_p_eff =
        gs ? Eigen::VectorXd(2.0 * sol_p.velocity - state.zp.coeffs) : wind_p;
    const Eigen::VectorXd rhs_m = rhs_for(state.zm.coeffs, state.zm_prev.coeffs, wind_p_eff,
                                          prob_.forcing_m);
    auto sys_m = build_oseen_system(space_, ops_, mass_coef, nup, wind_p_eff, conv_b0_, +1.0,
                                    rhs_m, gm);
    const SaddleSolution sol_m = solver_m_.solve(sys_m);

    ElsasserState next;
    next.zp = FieldVec{sol_p.velocity, FieldKind::Velocity};
    next.zm = FieldVec{sol_m.velocity, FieldKind::Velocity};
    if (const char* amp = std::getenv("MHD_STEP_NOISE")) {
        static std::mt19937 rng(1234);
        std::normal_distribution<double> dist;
        const double eps = std::atof(amp);
        for (auto* z : {&next.zp, &next.zm}) {
            Eigen::VectorXd noise(z->coeffs.size());
            for (auto& v : noise.reshaped()) v = dist(rng);
            z->coeffs += eps * z->coeffs.norm() / noise.norm() * noise;
        }
    }
    next.zp_prev = state.zp;
    next.zm_prev = state.zm;
    next.has_prev = true;
    next.t = t_new;
    next.tau_prev = tau;
    next.step_index = state.step_index + 1;

    StepReport rep;
    rep.tau = tau;
    rep.iter.iterations = 1;
    rep.iter.converged = true;
    rep.iter.max_rel_residual = std::max(sol_p.rel_residual, sol_m.rel_residual);
    rep.energy = 0.5 * (next.zp.coeffs.dot(ops_.M * next.zp.coeffs) +
                        next.zm.coeffs.dot(ops_.M * next.zm.coeffs));
    return {std::move(next), rep};
}

} // namespace mhd
