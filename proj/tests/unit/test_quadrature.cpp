#include <cmath>
#include <vector>

#include "doctest.h"
#include "mhd/quadrature.hpp"

using namespace mhd;

namespace {

// Reference-triangle monomial integral: int xi^a eta^b = a! b! / (a+b+2)!.
double monomial_exact(int a, int b) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

double apply(const QuadRule& q, int a, int b) {
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i)
        s += q.weights[i] * std::pow(q.bary(i, 1), a) * std::pow(q.bary(i, 2), b);
    return s;
}

void check_exactness(const QuadRule& q, int degree, double tol) {
    for (int a = 0; a + 0 <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b)
            CHECK(apply(q, a, b) == doctest::Approx(monomial_exact(a, b)).epsilon(tol));
}

} // namespace

TEST_CASE("quadrature: symmetric triangle rules") {
    const QuadRule q1 = QuadRule::triangle(1);
    CHECK(q1.size() == 1);
    CHECK(q1.weights.sum() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q1.bary(0, 0) == doctest::Approx(1.0 / 3.0));
    check_exactness(q1, 1, 1e-14);

    const QuadRule q2 = QuadRule::triangle(2);
    CHECK(q2.size() == 3);
    CHECK(q2.weights.sum() == doctest::Approx(0.5).epsilon(1e-15));
    check_exactness(q2, 2, 1e-14);

    const QuadRule q5 = QuadRule::triangle(5);
    CHECK(q5.size() == 7);
    CHECK(q5.weights.sum() == doctest::Approx(0.5).epsilon(1e-15));
    check_exactness(q5, 5, 1e-14);
}

TEST_CASE("quadrature: unsupported symmetric degree rejected") {
    CHECK_THROWS_AS(QuadRule::triangle(9), std::invalid_argument);
}

TEST_CASE("quadrature: collapsed tensor rules") {
    // n1d-point collapsed rule integrates total degree <= 2 n1d - 2 exactly.
    for (int n : {2, 3, 4, 6}) {
        const QuadRule q = QuadRule::collapsed(n);
        CHECK(q.size() == n * n);
        CHECK(q.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
        check_exactness(q, 2 * n - 2, 1e-13);
    }

    const QuadRule q10 = QuadRule::collapsed(10);
    CHECK(q10.weights.sum() == doctest::Approx(0.5).epsilon(1e-13));
    check_exactness(q10, 14, 1e-12);
}

TEST_CASE("quadrature: all points inside the reference triangle") {
    for (const QuadRule& q : {QuadRule::triangle(5), QuadRule::collapsed(5)})
        for (int i = 0; i < q.size(); ++i) {
            for (int c = 0; c < 3; ++c) CHECK(q.bary(i, c) >= -1e-14);
            CHECK(q.bary.row(i).sum() == doctest::Approx(1.0).epsilon(1e-13));
        }
}

TEST_CASE("quadrature: Gauss-Legendre nodes on [0,1]") {
    std::vector<double> x, w;
    gauss_legendre_01(1, x, w);
    REQUIRE(x.size() == 1);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));

    gauss_legendre_01(2, x, w);
    REQUIRE(x.size() == 2);
    const double off = 0.5 / std::sqrt(3.0);
    CHECK(x[0] == doctest::Approx(0.5 - off).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(0.5 + off).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-14));

    gauss_legendre_01(5, x, w);
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= 9; ++k) { // 5-point rule exact through degree 9
        double s = 0.0;
        for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
        CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
}
