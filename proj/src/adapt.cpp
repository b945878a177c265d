#include "mhd/adapt.hpp"

#include <algorithm>
#include <cmath>

#include "mhd/errors.hpp"

namespace mhd {

void StepHistory::push(double time, const Eigen::VectorXd& zp_new,
                       const Eigen::VectorXd& zm_new) {
    if (count < 3) {
        t[count] = time;
        zp[count] = zp_new;
        zm[count] = zm_new;
        ++count;
        return;
    }
    t = {t[1], t[2], time};
    zp = {zp[1], zp[2], zp_new};
    zm = {zm[1], zm[2], zm_new};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ab2_predict(const StepHistory& hist, double t_next) {
    if (!hist.full())
        throw InsufficientHistory("ab2_predict: needs three accepted levels");
    const double tau_n = hist.tau_last();
    const double tau_nm1 = hist.tau_prev();
    if (tau_n <= 0.0 || tau_nm1 <= 0.0)
        throw std::invalid_argument("ab2_predict: history times must increase");

    // Midpoint slopes of the two most recent accepted steps, extrapolated
    // linearly to the midpoint of the step being predicted.
    const double th1 = 0.5 * (hist.t[2] + hist.t[1]); // t_{n-1/2}
    const double th2 = 0.5 * (hist.t[1] + hist.t[0]); // t_{n-3/2}
    const double s = 0.5 * (t_next + hist.t[2]);
    const double tau = t_next - hist.t[2];
    const double c1 = tau * (s - th2) / (th1 - th2);
    const double c2 = tau * (s - th1) / (th1 - th2);

    auto predict = [&](const std::array<Eigen::VectorXd, 3>& z) -> Eigen::VectorXd {
        return z[2] + c1 / tau_n * (z[2] - z[1]) - c2 / tau_nm1 * (z[1] - z[0]);
    };
    return {predict(hist.zp), predict(hist.zm)};
}

double compute_R(double rho_n, double rho_nm1) {
    if (rho_n <= 0.0 || rho_nm1 <= 0.0)
        throw std::invalid_argument("compute_R: step ratios must be positive");
    const double a = 3.0 / rho_n * (1.0 + 1.0 / (2.0 * rho_nm1)) * (1.0 + 1.0 / (2.0 * rho_n));
    const double b = 3.0 / (2.0 * rho_n) *
                     (1.0 + 1.0 / rho_n + 0.5 * (1.0 / rho_nm1) * (1.0 / rho_n));
    return (2.0 + a + b) / 12.0;
}

double estimate_lte(const Eigen::VectorXd& zp, const Eigen::VectorXd& zp_pred,
                    const Eigen::VectorXd& zm, const Eigen::VectorXd& zm_pred, double R,
                    const SpMat& M) {
    const double denom_R = std::abs(R - 1.0 / 24.0);
    if (denom_R < 1e-12)
        throw EstimatorSingular("estimate_lte: error-constant ratio degenerate");
    auto one = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& pred) {
        const Eigen::VectorXd d = z - pred;
        const double dn = weighted_norm(M, d);
        const double zn = weighted_norm(M, z);
        const double scale = zn > 1e-14 ? zn : 1.0;
        return dn / (24.0 * denom_R * scale);
    };
    return std::max(one(zp, zp_pred), one(zm, zm_pred));
}

double control_step(double tau, double lte, const ControllerConfig& cfg) {
    if (!(tau > 0.0)) throw std::invalid_argument("control_step: tau must be positive");
    if (cfg.kappa <= 0.0 || cfg.kappa > 1.0)
        throw std::invalid_argument("control_step: kappa must lie in (0, 1]");
    double factor;
    if (lte > 0.0) {
        factor = std::min(1.5, std::max(0.2, cfg.kappa * std::cbrt(cfg.tol / lte)));
    } else {
        factor = 1.5;
    }
    return std::clamp(tau * factor, cfg.tau_min, cfg.tau_max);
}

AdaptiveResult adaptive_loop(PimStepper& stepper, double t0, double t_end,
                             const ControllerConfig& cfg) {
    if (!(t_end > t0)) throw std::invalid_argument("adaptive_loop: empty time window");
    if (cfg.tau_min <= 0.0 || cfg.tau_max < cfg.tau_min)
        throw std::invalid_argument("adaptive_loop: invalid step bounds");

    AdaptiveResult out;
    out.state = stepper.initial_state(t0);

    StepHistory hist;
    hist.push(t0, out.state.zp.coeffs, out.state.zm.coeffs);

    const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));

    // Bootstrap: two accepted steps at tau_min seed the predictor history.
    for (int b = 0; b < 2 && t_end - out.state.t > t_tol; ++b) {
        const double tau = std::min(cfg.tau_min, t_end - out.state.t);
        auto [next, rep] = stepper.step(out.state, tau);
        out.state = std::move(next);
        out.dissipation_cum += rep.dissipation_increment;
        hist.push(out.state.t, out.state.zp.coeffs, out.state.zm.coeffs);
        out.records.push_back({out.state.step_index, out.state.t, tau,
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), true,
                               rep.iter.iterations, rep.energy, out.dissipation_cum});
        ++out.accepted;
    }

    double tau = cfg.tau_min;
    int consecutive_rejects = 0;
    while (t_end - out.state.t > t_tol) {
        tau = std::min(tau, t_end - out.state.t);

        auto [next, rep] = stepper.step(out.state, tau);
        const double rho_n = tau / hist.tau_last();
        const double rho_nm1 = hist.tau_last() / hist.tau_prev();
        const double R = compute_R(rho_n, rho_nm1);
        auto [pred_p, pred_m] = ab2_predict(hist, out.state.t + tau);
        const double lte =
            estimate_lte(next.zp.coeffs, pred_p, next.zm.coeffs, pred_m, R, stepper.ops().M);

        if (lte < cfg.tol) {
            out.state = std::move(next);
            out.dissipation_cum += rep.dissipation_increment;
            hist.push(out.state.t, out.state.zp.coeffs, out.state.zm.coeffs);
            out.records.push_back({out.state.step_index, out.state.t, tau, lte, R, true,
                                   rep.iter.iterations, rep.energy, out.dissipation_cum});
            ++out.accepted;
            consecutive_rejects = 0;
            tau = control_step(tau, lte, cfg);
        } else {
            out.records.push_back({out.state.step_index + 1, out.state.t + tau, tau, lte, R,
                                   false, rep.iter.iterations, rep.energy,
                                   out.dissipation_cum});
            ++out.rejected;
            if (++consecutive_rejects > cfg.max_rejects)
                throw AdaptivityFailure("adaptive_loop: exceeded max consecutive rejections");
            tau = control_step(tau, lte, cfg);
        }
    }
    return out;
}

} // namespace mhd
