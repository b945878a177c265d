#pragma once

#include <array>
#include <vector>

#include "mhd/stepper.hpp"

namespace mhd {

/// Rolling window of the three most recent accepted levels (oldest first);
/// rejected attempts never enter.
struct StepHistory {
    std::array<double, 3> t{};
    std::array<Eigen::VectorXd, 3> zp;
    std::array<Eigen::VectorXd, 3> zm;
    int count = 0;

    void push(double time, const Eigen::VectorXd& zp_new, const Eigen::VectorXd& zm_new);
    bool full() const { return count >= 3; }
    double tau_last() const { return t[2] - t[1]; }     ///< most recent accepted step
    double tau_prev() const { return t[1] - t[0]; }     ///< step before that
};

struct ControllerConfig {
    double tol = 1e-4;      ///< local-error target
    double kappa = 0.9;     ///< safety factor in (0, 1]
    double tau_min = 1e-6;
    double tau_max = 1e-4;
    int max_rejects = 30;   ///< consecutive rejections before giving up
};

/// Variable-step explicit predictor built from the two midpoint slopes of the
/// history; exact on fields quadratic in time.  Requires a full history.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ab2_predict(const StepHistory& hist, double t_next);

/// Error-constant ratio of the predictor/corrector pair as a function of the
/// step ratios rho_n = tau_n / tau_{n-1} and rho_{n-1} = tau_{n-1} / tau_{n-2};
/// equals 25/24 for uniform steps.
double compute_R(double rho_n, double rho_nm1);

/// Relative local-error estimate
///   max over fields of ||z - z_pred|| / (24 |R - 1/24| ||z||)
/// in the discrete L2 norm; falls back to the absolute difference when the
/// field norm is below 1e-14.  R within 1e-12 of 1/24 raises EstimatorSingular.
double estimate_lte(const Eigen::VectorXd& zp, const Eigen::VectorXd& zp_pred,
                    const Eigen::VectorXd& zm, const Eigen::VectorXd& zm_pred, double R,
                    const SpMat& M);

/// Dead-beat step update tau * clamp(kappa (tol/lte)^{1/3}, 0.2, 1.5), clamped
/// into [tau_min, tau_max]; a zero estimate maps to the growth cap.
double control_step(double tau, double lte, const ControllerConfig& cfg);

/// One attempted/accepted step of the adaptive driver.
struct AdaptStepRecord {
    long step = 0;
    double t = 0.0;   ///< time after the attempt
    double tau = 0.0;
    double lte = std::numeric_limits<double>::quiet_NaN();
    double R = std::numeric_limits<double>::quiet_NaN();
    bool accepted = true;
    int iterations = 0;
    double energy = 0.0;
    double dissipation_cum = 0.0; ///< accumulated over accepted steps
};

struct AdaptiveResult {
    ElsasserState state;
    std::vector<AdaptStepRecord> records;
    int accepted = 0;
    int rejected = 0;
    double dissipation_cum = 0.0;
};

/// March from t0 to t_end: two bootstrap steps at tau_min seed the history,
/// then predictor/controller-driven steps; the final step is trimmed to land
/// on t_end.  Throws AdaptivityFailure after max_rejects consecutive rejects.
AdaptiveResult adaptive_loop(PimStepper& stepper, double t0, double t_end,
                             const ControllerConfig& cfg);

} // namespace mhd
