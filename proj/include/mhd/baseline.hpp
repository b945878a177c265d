#pragma once

#include "mhd/stepper.hpp"

namespace mhd {

/// Constant-step comparison scheme: implicit two-level backward
/// differentiation for the time derivative with extrapolated coupling terms
/// (wind and cross-diffusion from 2 z_n - z_{n-1}); one linear solve per
/// field per step.  Needs two starting levels.
class Bdf2Stepper {
public:
    Bdf2Stepper(const SpacePair& space, const ProblemSpec& prob, PimOptions opt = {});

    /// Two starting levels from the exact/initial fields at t0 and t0 + tau.
    ElsasserState initial_state(double t0, double tau) const;

    std::pair<ElsasserState, StepReport> step(const ElsasserState& state, double tau);

    const FemOperators& ops() const { return ops_; }

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
