#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mhd {

/// Quadrature rule on the reference triangle {x>=0, y>=0, x+y<=1}.
/// Points are barycentric (l0,l1,l2); weights refer to the reference measure
/// and sum to 1/2.  A physical integral is sum_q w_q f(x_q) * |det J|.
struct QuadRule {
    Eigen::Matrix<double, Eigen::Dynamic, 3> bary;
    Eigen::VectorXd weights;
    int degree = 0;

    int size() const { return static_cast<int>(weights.size()); }

    /// Symmetric rule exact for polynomials of total degree <= degree.
    /// Supported: 1 (centroid), 2 (edge midpoints), 5 (7 points).
    static QuadRule triangle(int degree);

    /// Tensor Gauss rule collapsed onto the triangle (Duffy map
    /// x = u(1-v), y = v).  Exact for total degree <= 2*n1d - 2; used as an
    /// independent oracle against the symmetric rules.
    static QuadRule collapsed(int n1d);
};

/// Nodes/weights of n-point Gauss-Legendre on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace mhd
