#include "mhd/stepper.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "mhd/diagnostics.hpp"
#include "mhd/errors.hpp"

namespace mhd {

std::pair<Eigen::VectorXd, Eigen::VectorXd> initial_guess(const ElsasserState& state) {
    if (state.has_prev)
        return {1.5 * state.zp.coeffs - 0.5 * state.zp_prev.coeffs,
                1.5 * state.zm.coeffs - 0.5 * state.zm_prev.coeffs};
    return {state.zp.coeffs, state.zm.coeffs};
}

Eigen::VectorXd extrapolate(const Eigen::VectorXd& zn, const Eigen::VectorXd& z_half) {
    return 2.0 * z_half - zn;
}

double theoretical_tau_bound(const PhysicalParams& params, double gamma_n, int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("theoretical_tau_bound: d must be 2 or 3");
    if (gamma_n < 0.0) throw std::invalid_argument("theoretical_tau_bound: gamma_n must be >= 0");
    if (gamma_n == 0.0) return std::numeric_limits<double>::infinity();
    const double nu = params.nu, nu_m = params.nu_m;
    if (nu + nu_m == 0.0 || nu * nu + nu_m * nu_m == 0.0) return 0.0;
    const double dd = static_cast<double>(d);
    const double delta = std::pow(2.0 * (dd - 1.0) / std::pow(dd, 1.5), dd / 4.0);
    const double expo = 4.0 / (4.0 - dd);
    const double visc_ratio = (nu * nu - nu * nu_m + nu_m * nu_m) / (nu * nu + nu_m * nu_m);
    const double small = std::pow(2.0 * nu * nu_m / (dd * (nu + nu_m)), dd / (4.0 - dd));
    return 8.0 / (4.0 - dd) / std::pow(delta * delta * gamma_n, expo) * visc_ratio * small;
}

double theoretical_rate(const PhysicalParams& params) {
    if (params.nu <= 0.0 || params.nu_m <= 0.0)
        throw std::invalid_argument("theoretical_rate: requires positive viscosities");
    const double nu = params.nu, nu_m = params.nu_m;
    return 1.0 - 2.0 * nu * nu_m / (nu * nu + nu * nu_m + nu_m * nu_m);
}

PimStepper::PimStepper(const SpacePair& space, const ProblemSpec& prob, PimOptions opt)
    : space_(space), prob_(prob), opt_(opt), ops_(FemOperators::build(space)),
      solver_p_(opt.linear_tol), solver_m_(opt.linear_tol) {
    conv_b0_ = assemble_convection(space_, prob_.b0);
}

ElsasserState PimStepper::initial_state(double t0) const {
    ElsasserState s;
    s.zp = interpolate_velocity(space_, prob_.initial_zp, t0);
    s.zm = interpolate_velocity(space_, prob_.initial_zm, t0);
    s.t = t0;
    return s;
}

Eigen::VectorXd PimStepper::boundary_trace(const VectorField& g, double t) const {
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

HalfStep PimStepper::be_half_step(const ElsasserState& state, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("be_half_step: tau must be positive");
    const double t_half = state.t + 0.5 * tau;
    const double mass_coef = 2.0 / tau;
    const double nup = prob_.params.nu_plus();
    const double num = prob_.params.nu_minus();

    Eigen::VectorXd rhs_base_p = mass_coef * (ops_.M * state.zp.coeffs);
    Eigen::VectorXd rhs_base_m = mass_coef * (ops_.M * state.zm.coeffs);
    if (prob_.forcing_p) rhs_base_p += assemble_load(space_, prob_.forcing_p, t_half);
    if (prob_.forcing_m) rhs_base_m += assemble_load(space_, prob_.forcing_m, t_half);

    const Eigen::VectorXd gp = boundary_trace(prob_.exact_zp, t_half);
    const Eigen::VectorXd gm = boundary_trace(prob_.exact_zm, t_half);

    auto [zp_k, zm_k] = initial_guess(state);

    HalfStep half;
    half.t_half = t_half;
    IterationReport& rep = half.iter;

    Eigen::VectorXd diff_p_old, diff_m_old;
    double prev_diff_norm = -1.0;

    for (int k = 1; k <= opt_.maxit; ++k) {
        Eigen::VectorXd rhs_p = rhs_base_p;
        Eigen::VectorXd rhs_m = rhs_base_m;
        if (num != 0.0) {
            rhs_p -= num * (ops_.K * zm_k);
            rhs_m -= num * (ops_.K * zp_k);
        }

        auto solve_one = [&](double sign, const Eigen::VectorXd& wind,
                             const Eigen::VectorXd& rhs, const Eigen::VectorXd& g,
                             SaddleSolver& solver) {
            auto sys = build_oseen_system(space_, ops_, mass_coef, nup, wind, conv_b0_,
                                          -sign, rhs, g);
            return solver.solve(sys);
        };

        SaddleSolution sol_p, sol_m;
        if (opt_.concurrent) {
            auto fut = std::async(std::launch::async, solve_one, +1.0, std::cref(zm_k),
                                  std::cref(rhs_p), std::cref(gp), std::ref(solver_p_));
            sol_m = solve_one(-1.0, zp_k, rhs_m, gm, solver_m_);
            sol_p = fut.get();
        } else {
            sol_p = solve_one(+1.0, zm_k, rhs_p, gp, solver_p_);
            sol_m = solve_one(-1.0, zp_k, rhs_m, gm, solver_m_);
        }
        rep.max_rel_residual = std::max({rep.max_rel_residual, sol_p.rel_residual,
                                         sol_m.rel_residual});

        const Eigen::VectorXd diff_p = sol_p.velocity - zp_k;
        const Eigen::VectorXd diff_m = sol_m.velocity - zm_k;
        zp_k = sol_p.velocity;
        zm_k = sol_m.velocity;
        half.pp = sol_p.pressure;
        half.pm = sol_m.pressure;
        half.lambda_p = sol_p.lambda;
        half.lambda_m = sol_m.lambda;
        rep.iterations = k;

        const double np_k = weighted_norm(ops_.M, zp_k);
        const double nm_k = weighted_norm(ops_.M, zm_k);
        const double floor = 1e-14;
        const double rel_p = weighted_norm(ops_.M, diff_p) / std::max(np_k, floor);
        const double rel_m = weighted_norm(ops_.M, diff_m) / std::max(nm_k, floor);
        rep.rel_changes.push_back(std::max(rel_p, rel_m));

        const double diff_h1 = std::sqrt(diff_p.dot(ops_.M * diff_p) + diff_p.dot(ops_.K * diff_p) +
                                         diff_m.dot(ops_.M * diff_m) + diff_m.dot(ops_.K * diff_m));
        if (prev_diff_norm > 0.0) rep.contraction_ratios.push_back(diff_h1 / prev_diff_norm);
        prev_diff_norm = diff_h1;

        if (rel_p <= opt_.picard_tol && rel_m <= opt_.picard_tol) {
            rep.converged = true;
            break;
        }
    }

    if (!rep.converged)
        throw NonConvergence("be_half_step: sweeps did not converge in " +
                                 std::to_string(opt_.maxit) + " iterations",
                             rep.iterations, rep.rel_changes.empty() ? 0.0 : rep.rel_changes.back());

    rep.gamma = std::max(std::sqrt(std::max(0.0, zp_k.dot(ops_.K * zp_k))),
                         std::sqrt(std::max(0.0, zm_k.dot(ops_.K * zm_k))));
    rep.tau_bound = theoretical_tau_bound(prob_.params, rep.gamma, 2);
    rep.tau_within_bound = tau <= rep.tau_bound;

    half.zp = zp_k;
    half.zm = zm_k;
    return half;
}

double PimStepper::dissipation_increment(const Eigen::VectorXd& zp_half,
                                         const Eigen::VectorXd& zm_half, double tau) const {
    return mhd::dissipation_increment(zp_half, zm_half, tau, prob_.params, ops_.K);
}

std::pair<ElsasserState, StepReport> PimStepper::step(const ElsasserState& state, double tau) {
    HalfStep half = be_half_step(state, tau);

    ElsasserState next;
    next.zp = FieldVec{extrapolate(state.zp.coeffs, half.zp), FieldKind::Velocity};
    next.zm = FieldVec{extrapolate(state.zm.coeffs, half.zm), FieldKind::Velocity};
    next.zp_prev = state.zp;
    next.zm_prev = state.zm;
    next.has_prev = true;
    next.t = state.t + tau;
    next.tau_prev = tau;
    next.step_index = state.step_index + 1;

    StepReport rep;
    rep.tau = tau;
    rep.iter = half.iter;
    rep.dissipation_increment = dissipation_increment(half.zp, half.zm, tau);
    rep.energy = 0.5 * (next.zp.coeffs.dot(ops_.M * next.zp.coeffs) +
                        next.zm.coeffs.dot(ops_.M * next.zm.coeffs));
    return {std::move(next), rep};
}

} // namespace mhd
