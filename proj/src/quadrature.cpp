#include "mhd/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mhd {

QuadRule QuadRule::triangle(int degree) {
    QuadRule rule;
    if (degree <= 1) {
        rule.degree = 1;
        rule.bary.resize(1, 3);
        rule.bary << 1.0 / 3, 1.0 / 3, 1.0 / 3;
        rule.weights.resize(1);
        rule.weights << 0.5;
        return rule;
    }
    if (degree <= 2) {
        rule.degree = 2;
        rule.bary.resize(3, 3);
        rule.bary << 0.5, 0.5, 0.0,
                     0.0, 0.5, 0.5,
                     0.5, 0.0, 0.5;
        rule.weights.resize(3);
        rule.weights << 1.0 / 6, 1.0 / 6, 1.0 / 6;
        return rule;
    }
    if (degree <= 5) {
        // 7-point symmetric rule: centroid plus two 3-orbits.
        rule.degree = 5;
        const double s = std::sqrt(15.0);
        const double a1 = (6.0 + s) / 21.0, w1 = (155.0 + s) / 2400.0;
        const double a2 = (6.0 - s) / 21.0, w2 = (155.0 - s) / 2400.0;
        rule.bary.resize(7, 3);
        rule.weights.resize(7);
        rule.bary.row(0) << 1.0 / 3, 1.0 / 3, 1.0 / 3;
        rule.weights(0) = 9.0 / 80.0;
        const double b1 = 1.0 - 2.0 * a1;
        rule.bary.row(1) << a1, a1, b1;
        rule.bary.row(2) << a1, b1, a1;
        rule.bary.row(3) << b1, a1, a1;
        rule.weights.segment(1, 3).setConstant(w1);
        const double b2 = 1.0 - 2.0 * a2;
        rule.bary.row(4) << a2, a2, b2;
        rule.bary.row(5) << a2, b2, a2;
        rule.bary.row(6) << b2, a2, a2;
        rule.weights.segment(4, 3).setConstant(w2);
        return rule;
    }
    throw std::invalid_argument("QuadRule::triangle: unsupported degree (use collapsed for high order)");
}

QuadRule QuadRule::collapsed(int n1d) {
    if (n1d < 1) throw std::invalid_argument("QuadRule::collapsed: n1d must be positive");
    std::vector<double> x, w;
    gauss_legendre_01(n1d, x, w);
    QuadRule rule;
    rule.degree = 2 * n1d - 2;
    rule.bary.resize(n1d * n1d, 3);
    rule.weights.resize(n1d * n1d);
    int q = 0;
    for (int i = 0; i < n1d; ++i) {
        for (int j = 0; j < n1d; ++j, ++q) {
            const double u = x[i], v = x[j];
            const double px = u * (1.0 - v), py = v;
            rule.bary.row(q) << 1.0 - px - py, px, py;
            rule.weights(q) = w[i] * w[j] * (1.0 - v);
        }
    }
    return rule;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Newton iteration on Legendre polynomials over [-1,1], mapped to [0,1].
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            if (n == 1) { p1 = x; }
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? x : p1;
            const double pnm1 = (n == 1) ? 1.0 : p0;
            pp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 - x); // descending roots -> ascending nodes
        weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
}

} // namespace mhd
