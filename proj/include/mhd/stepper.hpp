#pragma once

#include <utility>
#include <vector>

#include "mhd/linsolve.hpp"
#include "mhd/problems.hpp"

namespace mhd {

/// Time-stepping state: the two Elsasser fields at the current level plus the
/// previous accepted level (used by the extrapolated sweep guess).
struct ElsasserState {
    FieldVec zp, zm;
    FieldVec zp_prev, zm_prev;
    bool has_prev = false;
    double t = 0.0;
    double tau_prev = 0.0;
    long step_index = 0;
};

/// Record of one partitioned sweep sequence.
struct IterationReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> rel_changes;        ///< max over the two fields, per sweep
    std::vector<double> contraction_ratios; ///< successive-difference ratios, H1 norm
    double gamma = 0.0;                     ///< max H1 seminorm of the half-step fields
    double tau_bound = 0.0;                 ///< contraction step bound at gamma
    bool tau_within_bound = false;
    double max_rel_residual = 0.0;          ///< worst linear-solve residual seen
};

/// Converged half-step fields and pressures.
struct HalfStep {
    Eigen::VectorXd zp, zm;
    Eigen::VectorXd pp, pm;
    double lambda_p = 0.0, lambda_m = 0.0;
    double t_half = 0.0;
    IterationReport iter;
};

struct StepReport {
    double tau = 0.0;
    IterationReport iter;
    double dissipation_increment = 0.0; ///< viscous increment from the half-step fields
    double energy = 0.0;                ///< Elsasser energy after the step
};

struct PimOptions {
    double picard_tol = 1e-6;
    int maxit = 50;
    double linear_tol = 1e-10;
    bool concurrent = false; ///< solve the two fields in separate threads
};

/// Sweep guess: a linear extrapolation 1.5 z_n - 0.5 z_{n-1} when a previous
/// level exists, z_n otherwise.
std::pair<Eigen::VectorXd, Eigen::VectorXd> initial_guess(const ElsasserState& state);

/// Midpoint reconstruction z_{n+1} = 2 z_{n+1/2} - z_n.
Eigen::VectorXd extrapolate(const Eigen::VectorXd& zn, const Eigen::VectorXd& z_half);

/// Step-size bound under which the partitioned sweeps are proven to contract,
/// as a function of the gradient scale gamma_n of the half-step fields.
/// gamma_n = 0 returns +infinity.  d must be 2 or 3.
double theoretical_tau_bound(const PhysicalParams& params, double gamma_n, int d = 2);

/// Proven contraction factor 1 - 2 nu nu_m / (nu^2 + nu nu_m + nu_m^2).
/// Throws std::invalid_argument for non-positive viscosities.
double theoretical_rate(const PhysicalParams& params);

/// Midpoint stepper in backward-Euler half-step form, with partitioned
/// Picard sweeps that decouple the two Elsasser solves.
class PimStepper {
public:
    PimStepper(const SpacePair& space, const ProblemSpec& prob, PimOptions opt = {});

    /// Interpolated initial fields at time t0.
    ElsasserState initial_state(double t0) const;

    /// Solve the implicit half-step system at t_n + tau/2.
    HalfStep be_half_step(const ElsasserState& state, double tau);

    /// Full step: half-step solve plus midpoint reconstruction.
    std::pair<ElsasserState, StepReport> step(const ElsasserState& state, double tau);

    const FemOperators& ops() const { return ops_; }
    const SpacePair& space() const { return space_; }
    const ProblemSpec& problem() const { return prob_; }

    /// Viscous energy increment of one step taken from half-step fields.
    double dissipation_increment(const Eigen::VectorXd& zp_half, const Eigen::VectorXd& zm_half,
                                 double tau) const;

private:
    Eigen::VectorXd boundary_trace(const VectorField& g, double t) const;

    const SpacePair& space_;
    ProblemSpec prob_;
    PimOptions opt_;
    FemOperators ops_;
    SpMat conv_b0_;
    SaddleSolver solver_p_, solver_m_;
};

} // namespace mhd
