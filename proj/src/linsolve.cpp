#include "mhd/linsolve.hpp"

#include <cmath>
#include <ostream>
#include <utility>

#include <Eigen/LU>

#include "mhd/errors.hpp"

namespace mhd {

void SaddleSystem::dump_matrix_market(std::ostream& os) const {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << K.rows() << " " << K.cols() << " " << K.nonZeros() << "\n";
    for (int k = 0; k < K.outerSize(); ++k)
        for (SpMat::InnerIterator it(K, k); it; ++it)
            os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

SaddleSystem build_saddle_system(const SpacePair& space, const SpMat& A, const SpMat& D,
                                 const Eigen::VectorXd& p_int,
                                 const Eigen::VectorXd& rhs_velocity,
                                 const Eigen::VectorXd& boundary_values) {
    const int nv = space.n_velocity_dofs;
    const int np = space.n_pressure_dofs;
    if (A.rows() != nv || A.cols() != nv || D.rows() != np || D.cols() != nv ||
        rhs_velocity.size() != nv || boundary_values.size() != nv)
        throw std::invalid_argument("build_saddle_system: dimension mismatch");

    std::vector<char> fixed(nv, 0);
    for (int n : space.boundary_p2_nodes) {
        fixed[2 * n] = 1;
        fixed[2 * n + 1] = 1;
    }

    SaddleSystem sys;
    sys.nv = nv;
    sys.np = np;
    sys.p_int = p_int;
    const int n = nv + np + 1;
    sys.rhs = Eigen::VectorXd::Zero(n);
    sys.rhs.head(nv) = rhs_velocity;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonZeros() + 2 * D.nonZeros() + 2 * np + nv);

    for (int k = 0; k < A.outerSize(); ++k) {
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (fixed[i]) continue;
            if (fixed[j]) {
                sys.rhs(i) -= it.value() * boundary_values(j);
            } else {
                trips.emplace_back(i, j, it.value());
            }
        }
    }
    for (int k = 0; k < D.outerSize(); ++k) {
        for (SpMat::InnerIterator it(D, k); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (fixed[j]) {
                sys.rhs(nv + r) -= it.value() * boundary_values(j);
            } else {
                trips.emplace_back(nv + r, j, it.value());
                trips.emplace_back(j, nv + r, -it.value());
            }
        }
    }
    for (int r = 0; r < np; ++r) {
        trips.emplace_back(nv + r, nv + np, p_int(r));
        trips.emplace_back(nv + np, nv + r, p_int(r));
    }
    for (int i = 0; i < nv; ++i) {
        if (fixed[i]) {
            trips.emplace_back(i, i, 1.0);
            sys.rhs(i) = boundary_values(i);
        }
    }

    sys.K.resize(n, n);
    sys.K.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

SaddleSystem build_oseen_system(const SpacePair& space, const FemOperators& ops,
                                double mass_coef, double visc,
                                const Eigen::VectorXd& wind, const SpMat& conv_b0,
                                double b0_coef, const Eigen::VectorXd& rhs_velocity,
                                const Eigen::VectorXd& boundary_values) {
    FieldVec windf{wind, FieldKind::Velocity};
    SpMat A = assemble_convection(space, windf);
    if (mass_coef != 0.0) A += mass_coef * ops.M;
    if (visc != 0.0) A += visc * ops.K;
    if (b0_coef != 0.0) A += b0_coef * conv_b0;
    return build_saddle_system(space, A, ops.D, ops.p_int, rhs_velocity, boundary_values);
}

SaddleSolution SaddleSolver::solve(const SaddleSystem& sys) {
    // Bordered elimination of the dense mean-value row/column: with the core
    // S = K(0:m,0:m), border c = K(0:m,m) and beta = x_k, the gauge-bumped
    // core St = S + e_k e_k^T is nonsingular and
    //   x = a - lambda*w + beta*v,  a = St\f,  w = St\c,  v = St\e_k,
    // where (lambda, beta) solve the 2x2 closure
    //   [c.w   -c.v  ] [lambda]   [c.a - g]
    //   [w_k  1 - v_k] [beta  ] = [a_k    ].
    const Eigen::Index n = sys.K.rows();
    const Eigen::Index m = n - 1;
    const Eigen::Index kpin = sys.nv;

    SpMat S = sys.K.topLeftCorner(m, m);
    S.coeffRef(kpin, kpin) += 1.0;
    S.makeCompressed();

    if (!analyzed_ || pattern_nnz_ != S.nonZeros() || pattern_n_ != m) {
        lu_.analyzePattern(S);
        analyzed_ = true;
        pattern_nnz_ = S.nonZeros();
        pattern_n_ = m;
    }
    lu_.factorize(S);
    if (lu_.info() != Eigen::Success)
        throw LinearSolveFailure("SaddleSolver: factorization failed");

    Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
    for (SpMat::InnerIterator it(sys.K, n - 1); it; ++it)
        if (it.row() < m) c(it.row()) = it.value();
    Eigen::VectorXd ek = Eigen::VectorXd::Zero(m);
    ek(kpin) = 1.0;
    const Eigen::VectorXd w = lu_.solve(c);
    const Eigen::VectorXd v = lu_.solve(ek);

    Eigen::Matrix2d closure;
    closure << c.dot(w), -c.dot(v),
               w(kpin), 1.0 - v(kpin);
    const Eigen::PartialPivLU<Eigen::Matrix2d> closure_lu(closure);

    auto bordered = [&](const Eigen::VectorXd& f, double g) {
        Eigen::VectorXd a = lu_.solve(f);
        const Eigen::Vector2d lb = closure_lu.solve(Eigen::Vector2d(c.dot(a) - g, a(kpin)));
        a += -lb(0) * w + lb(1) * v;
        return std::make_pair(std::move(a), lb(0));
    };

    Eigen::VectorXd x(n);
    {
        auto [xm, lam] = bordered(sys.rhs.head(m), sys.rhs(n - 1));
        x << xm, lam;
    }
    // One refinement pass keeps the residual near machine precision.
    Eigen::VectorXd r = sys.rhs - sys.K * x;
    {
        auto [dx, dl] = bordered(r.head(m), r(n - 1));
        x.head(m) += dx;
        x(n - 1) += dl;
    }
    r = sys.rhs - sys.K * x;

    const double rhs_norm = sys.rhs.norm();
    const double rel = r.norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
    if (!(rel <= residual_tol_))
        throw LinearSolveFailure("SaddleSolver: relative residual " + std::to_string(rel) +
                                 " above tolerance");

    SaddleSolution sol;
    sol.velocity = x.head(sys.nv);
    sol.pressure = x.segment(sys.nv, sys.np);
    sol.lambda = x(sys.nv + sys.np);
    sol.rel_residual = rel;

    const double pnorm = sol.pressure.norm();
    const double pmean = std::abs(sys.p_int.dot(sol.pressure));
    if (pmean > residual_tol_ * std::max(pnorm, 1e-30))
        throw LinearSolveFailure("SaddleSolver: pressure mean constraint violated");
    return sol;
}

SaddleSolution solve_saddle(const SaddleSystem& sys, double residual_tol) {
    SaddleSolver solver(residual_tol);
    return solver.solve(sys);
}

} // namespace mhd
