#pragma once

#include <iosfwd>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#ifdef MHD_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "mhd/forms.hpp"

namespace mhd {

/// Constrained saddle-point system for one Oseen-type velocity/pressure pair:
///   [ A   -D^T  0 ] [ z ]   [ F ]
///   [ D    0    m ] [ p ] = [ g ]
///   [ 0   m^T   0 ] [ l ]   [ 0 ]
/// Dirichlet velocity values are eliminated symmetrically (identity rows,
/// values moved to the right-hand side); m enforces a zero-mean pressure
/// through the scalar multiplier l.
struct SaddleSystem {
    SpMat K;
    Eigen::VectorXd rhs;
    Eigen::VectorXd p_int; ///< pressure-basis integrals, kept for the mean check
    int nv = 0;
    int np = 0;

    /// Coordinate-format (MatrixMarket) dump of the assembled operator.
    void dump_matrix_market(std::ostream& os) const;
};

/// Assemble the constrained system from a velocity block A, the divergence
/// coupling D, and pressure integrals m.  boundary_values must be sized to
/// the velocity space; only entries at boundary DOFs are read.
SaddleSystem build_saddle_system(const SpacePair& space, const SpMat& A, const SpMat& D,
                                 const Eigen::VectorXd& p_int,
                                 const Eigen::VectorXd& rhs_velocity,
                                 const Eigen::VectorXd& boundary_values);

/// Velocity block of a backward-Euler/Oseen step:
///   A = mass_coef * M + visc * K + C(wind) + b0_coef * C(B0).
/// Pass mass_coef = 0 for the steady (Stokes/Oseen) limit.
SaddleSystem build_oseen_system(const SpacePair& space, const FemOperators& ops,
                                double mass_coef, double visc,
                                const Eigen::VectorXd& wind, const SpMat& conv_b0,
                                double b0_coef, const Eigen::VectorXd& rhs_velocity,
                                const Eigen::VectorXd& boundary_values);

struct SaddleSolution {
    Eigen::VectorXd velocity;
    Eigen::VectorXd pressure;
    double lambda = 0.0;
    double rel_residual = 0.0;
};

/// Sparse direct solve of the bordered system.  The dense mean-value row and
/// column are eliminated by bordering: factor the core block once (with a
/// rank-one bump on the first pressure diagonal to fix the gauge), then
/// recover the multiplier from a 2x2 closure over two auxiliary solves.  The
/// core factorization reuses its symbolic analysis across calls that share a
/// sparsity pattern.  One step of iterative refinement backs the residual
/// guarantee on the full system; violations raise LinearSolveFailure.
class SaddleSolver {
public:
    explicit SaddleSolver(double residual_tol = 1e-10) : residual_tol_(residual_tol) {}
    SaddleSolution solve(const SaddleSystem& sys);

private:
#ifdef MHD_HAVE_UMFPACK
    Eigen::UmfPackLU<SpMat> lu_;
#else
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
#endif
    bool analyzed_ = false;
    Eigen::Index pattern_nnz_ = -1;
    Eigen::Index pattern_n_ = -1;
    double residual_tol_;
};

/// One-shot convenience around SaddleSolver.
SaddleSolution solve_saddle(const SaddleSystem& sys, double residual_tol = 1e-10);

} // namespace mhd
