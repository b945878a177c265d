#include <cmath>
#include <random>

#include "doctest.h"
#include "mhd/problems.hpp"
#include "oracles.hpp"

using namespace mhd;

TEST_CASE("problems: Elsasser map round trip") {
    std::mt19937 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd uc(40), bc(40);
    for (int i = 0; i < 40; ++i) {
        uc[i] = gauss(rng);
        bc[i] = gauss(rng);
    }
    const FieldVec u{uc, FieldKind::Velocity}, b{bc, FieldKind::Velocity};
    const auto [zp, zm] = elsasser_from_primitive(u, b);
    const auto [u2, b2] = primitive_from_elsasser(zp, zm);
    CHECK((u2.coeffs - uc).lpNorm<Eigen::Infinity>() < 1e-15);
    CHECK((b2.coeffs - bc).lpNorm<Eigen::Infinity>() < 1e-15);

    // b = 0 collapses both characteristics onto u.
    const FieldVec zerob{Eigen::VectorXd::Zero(40), FieldKind::Velocity};
    const auto [zp0, zm0] = elsasser_from_primitive(u, zerob);
    CHECK(zp0.coeffs == uc);
    CHECK(zm0.coeffs == uc);

    FieldVec wrong{Eigen::VectorXd::Zero(3), FieldKind::Velocity};
    CHECK_THROWS_AS(elsasser_from_primitive(u, wrong), std::invalid_argument);
}

TEST_CASE("problems: travelling wave point values") {
    const PhysicalParams params(2.5e-4, 2.5e-4);
    const ProblemSpec prob = travelling_wave(params, Vec2(1.0, 1.0));
    CHECK(prob.manufactured());
    CHECK(prob.box[0] == doctest::Approx(0.5));
    CHECK(prob.box[1] == doctest::Approx(1.5));

    const Vec2 x(1.0, 1.0);
    CHECK(prob.exact_zp(x, 0.0).x() == doctest::Approx(1.15).epsilon(1e-12));
    CHECK(prob.exact_zp(x, 0.0).y() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(prob.exact_zm(x, 0.0).x() == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(prob.exact_zm(x, 0.0).y() == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(prob.exact_p(x, 0.0) == doctest::Approx(-1.0 / 32.0).epsilon(1e-12));

    // Initial data equals the exact solution at t = 0.
    const Vec2 y(0.73, 1.21);
    CHECK((prob.initial_zp(y, 0.0) - prob.exact_zp(y, 0.0)).norm() == 0.0);
    CHECK((prob.initial_zm(y, 0.0) - prob.exact_zm(y, 0.0)).norm() == 0.0);
}

TEST_CASE("problems: travelling wave fields are divergence-free") {
    const ProblemSpec prob = travelling_wave(PhysicalParams(2.5e-4, 2.5e-4), Vec2(0.0, 0.0));
    for (double t : {0.0, 0.4, 1.0})
        for (const Vec2& x : {Vec2(0.8, 0.7), Vec2(1.2, 1.3), Vec2(0.55, 1.45)}) {
            CHECK(std::abs(oracles::fd_divergence(prob.exact_zp, x, t, 1e-4)) < 1e-9);
            CHECK(std::abs(oracles::fd_divergence(prob.exact_zm, x, t, 1e-4)) < 1e-9);
        }
}

TEST_CASE("problems: travelling wave forcing closes the momentum equation") {
    for (const Vec2& b0 : {Vec2(0.0, 0.0), Vec2(1.0, 1.0), Vec2(10.0, 10.0)}) {
        const ProblemSpec prob = travelling_wave(PhysicalParams(2.5e-4, 2.5e-4), b0);
        for (double t : {0.0, 0.37, 1.0})
            CHECK(oracles::max_residual_rel(prob, t, 1e-3, 1e-3) < 1e-6);
    }
    // Unequal viscosities exercise the cross-diffusion term.
    const ProblemSpec prob = travelling_wave(PhysicalParams(1e-2, 1e-3), Vec2(2.0, -1.0));
    CHECK(oracles::max_residual_rel(prob, 0.3, 1e-3, 1e-3) < 1e-6);
}

TEST_CASE("problems: duct flow profile anchors") {
    HartmannParams hp; // L=6, G=S=1, Ha=5, M=10
    const PhysicalParams params(0.1, 0.1);
    const ProblemSpec prob = hartmann_channel(hp, params);
    CHECK(prob.b0.x() == doctest::Approx(0.0));
    CHECK(prob.b0.y() == doctest::Approx(10.0));
    CHECK(prob.box[1] == doctest::Approx(6.0));
    CHECK(prob.box[2] == doctest::Approx(-1.0));

    // Centerline speed and a profile sample, from independent evaluation of
    // G/(nu Ha tanh Ha) (1 - cosh(Ha y)/cosh(Ha)) and G/S (sinh(Ha y)/sinh(Ha) - y).
    const Vec2 c(2.0, 0.0);
    CHECK(prob.exact_zp(c, 0.0).x() == doctest::Approx(1.9732285963028606).epsilon(1e-12));
    CHECK(prob.exact_zp(c, 0.0).y() == doctest::Approx(0.0));
    const Vec2 s(2.0, 0.3);
    CHECK(prob.exact_zp(s, 0.0).x() == doctest::Approx(1.6654723311640587).epsilon(1e-10));
    CHECK(prob.exact_zm(s, 0.0).x() == doctest::Approx(2.2080818371809810).epsilon(1e-10));
    CHECK(prob.exact_p(s, 0.0) == doctest::Approx(-2.0368031345024911).epsilon(1e-10));

    // Magnetic fluctuation vanishes at the walls and the centerline: z+ = z-.
    const Vec2 wall(1.0, 1.0);
    CHECK(prob.exact_zp(wall, 0.0).x() == doctest::Approx(prob.exact_zm(wall, 0.0).x()));
    const Vec2 mid(4.0, 0.0);
    CHECK(prob.exact_zp(mid, 0.0).x() == doctest::Approx(prob.exact_zm(mid, 0.0).x()));

    // Steady: time plays no role.
    CHECK(prob.exact_zp(s, 3.7).x() == doctest::Approx(prob.exact_zp(s, 0.0).x()));

    for (double M : {1.0, 10.0, 100.0}) {
        hp.M = M;
        const ProblemSpec p = hartmann_channel(hp, params);
        CHECK(oracles::max_residual_rel(p, 0.5, 1e-3, 1e-3) < 1e-6);
    }

    HartmannParams bad;
    bad.Ha = -1.0;
    CHECK_THROWS_AS(hartmann_channel(bad, params), std::invalid_argument);
}

TEST_CASE("problems: impulsive amplitude and its derivative") {
    const double om = 3.1;
    CHECK(lindberg_G(0.0, om) == doctest::Approx(1.0).epsilon(1e-15));
    // G'(0) = 10^om (-(1) + (1 - e^{-1})) evaluated independently.
    CHECK(lindberg_G_dt(0.0, om) == doctest::Approx(-463.132776967366).epsilon(1e-12));

    // Burst shape near t = 1.6: quiet, then a large positive swing, then a
    // violent negative one.
    CHECK(std::abs(lindberg_G(1.59, om)) < 0.1);
    CHECK(lindberg_G(1.596, om) == doctest::Approx(8.31403677171).epsilon(1e-8));
    CHECK(lindberg_G(1.6015, om) == doctest::Approx(161.76742972).epsilon(1e-8));
    CHECK(lindberg_G(1.604, om) == doctest::Approx(-692.89351209).epsilon(1e-8));

    // Derivative consistent with a finite difference of G at a point where
    // both are well-scaled.
    for (double t : {0.1, 1.59, 1.602}) {
        const double h = 2e-6;
        const double fd = (-lindberg_G(t + 2 * h, om) + 8 * lindberg_G(t + h, om) -
                           8 * lindberg_G(t - h, om) + lindberg_G(t - 2 * h, om)) /
                          (12 * h);
        const double ref = lindberg_G_dt(t, om);
        CHECK(std::abs(fd - ref) <= 1e-6 * std::max(std::abs(ref), 1.0));
    }
}

TEST_CASE("problems: impulsively driven duct closes the momentum equation") {
    HartmannParams hp;
    hp.M = 100.0;
    const ProblemSpec prob = lindberg_hartmann(hp, PhysicalParams(0.1, 0.1), 3.1);
    CHECK(prob.name == "lindberg");
    CHECK(prob.b0.y() == doctest::Approx(100.0));
    // At t = 0 the amplitude is one: the fields equal the steady profile.
    const ProblemSpec steady = hartmann_channel(hp, PhysicalParams(0.1, 0.1));
    const Vec2 x(3.0, -0.4);
    CHECK(prob.exact_zp(x, 0.0).x() ==
          doctest::Approx(steady.exact_zp(x, 0.0).x()).epsilon(1e-12));

    // Time scales ~10^3.1, so the time difference step shrinks accordingly.
    for (double t : {0.0, 1.59, 1.602, 1.604})
        CHECK(oracles::max_residual_rel(prob, t, 1e-3, 2e-5) < 1e-6);
}

TEST_CASE("problems: decay fields are solenoidal with zero trace") {
    const ProblemSpec prob = decay_problem(PhysicalParams(0.0, 0.0, true), Vec2(0.0, 0.0));
    CHECK(prob.homogeneous_bc);
    CHECK(!prob.manufactured());

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uni(0.05, 0.95);
    for (int k = 0; k < 20; ++k) {
        const Vec2 x(uni(rng), uni(rng));
        CHECK(std::abs(oracles::fd_divergence(prob.initial_zp, x, 0.0, 1e-4)) < 1e-8);
        CHECK(std::abs(oracles::fd_divergence(prob.initial_zm, x, 0.0, 1e-4)) < 1e-8);
    }
    for (const Vec2& x : {Vec2(0.0, 0.3), Vec2(1.0, 0.7), Vec2(0.4, 0.0), Vec2(0.9, 1.0)}) {
        CHECK(prob.initial_zp(x, 0.0).norm() < 1e-12);
        CHECK(prob.initial_zm(x, 0.0).norm() < 1e-12);
    }
}
