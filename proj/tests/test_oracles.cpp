#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fkpp/fkpp.hpp"

using namespace fkpp;
namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}

TEST_SUITE_BEGIN("oracles");

TEST_CASE("Dirichlet series reproduces the initial data and its decay regimes") {
    const double a = 0.4;
    Grid g = build_grid(a, 400);
    Profile u0(g.size());
    for (int i = 0; i <= g.n; ++i) {
        const double x = g.x[i];
        u0[i] = std::sin(kPi * x / a) + 0.3 * std::sin(2.0 * kPi * x / a);
    }

    SUBCASE("t = 0 recovers u0") {
        Profile e0 = dirichlet_series(a, 0.01, g, u0, 0.0);
        for (int i = 0; i <= g.n; ++i) CHECK(std::abs(e0[i] - u0[i]) < 1e-6);
    }
    SUBCASE("supercritical: exponential decay at rate pi^2 D / a^2 - 1") {
        const double D = 2.0 * a * a / (kPi * kPi); // rate exactly 1
        DirichletSeries s(a, D, g, u0);
        const double r = inf_norm(s.eval(6.0)) / inf_norm(s.eval(7.0));
        CHECK(std::log(r) == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("subcritical: convergence to the closed-form steady state") {
        const double D = 0.01; // < a^2/pi^2 = 0.0162
        DirichletSeries s(a, D, g, u0);
        Profile lim = s.eval(40.0);
        Profile us = closed_form_dirichlet(Params{a, D, Bc::dirichlet}, g);
        for (int i = 0; i <= g.n; ++i) CHECK(std::abs(lim[i] - us[i]) < 1e-6);
    }
    SUBCASE("Bernoulli and mean identities") {
        DirichletSeries s(a, 0.01, g, u0);
        for (double t : {0.3, 1.0, 2.0}) {
            const double h = 1e-2;
            const double jp =
                (-s.J(t + 2 * h) + 8.0 * s.J(t + h) - 8.0 * s.J(t - h) + s.J(t - 2 * h)) /
                (12.0 * h);
            CHECK(std::abs(jp - s.J(t) + a * s.J(t) * s.J(t) * s.G(t)) < 1e-8);
            CHECK(std::abs(s.mean(t) - s.J(t) * s.G(t)) < 1e-8);
        }
        CHECK(s.J(0.0) == doctest::Approx(1.0));
        CHECK(s.M(0.0) == 0.0);
    }
    SUBCASE("domain of validity") {
        Grid gw = build_grid(0.7, 100);
        CHECK_THROWS_AS(dirichlet_series(0.7, 0.01, gw, Profile(gw.size(), 0.1), 1.0),
                        std::domain_error);
    }
}

TEST_CASE("Neumann series: initial data, logistic means, and the 1/a attractor") {
    const double a = 0.4, D = 0.005;
    Grid g = build_grid(a, 400);
    Profile u0(g.size());
    for (int i = 0; i <= g.n; ++i)
        u0[i] = 1.0 + 0.4 * std::cos(kPi * g.x[i] / a) + 0.2 * std::cos(3.0 * kPi * g.x[i] / a);
    NeumannSeries s(a, D, g, u0);

    Profile e0 = s.eval(0.0);
    for (int i = 0; i <= g.n; ++i) CHECK(std::abs(e0[i] - u0[i]) < 1e-6);

    Profile lim = s.eval(60.0);
    for (double v : lim) CHECK(v == doctest::Approx(1.0 / a).epsilon(1e-8));

    // uniform data follow the logistic solution with carrying value 1/a
    const double c = 0.7;
    NeumannSeries su(a, D, g, Profile(g.size(), c));
    for (double t : {0.5, 1.5, 4.0}) {
        const double e = std::exp(t);
        const double logistic = c * e / (1.0 + a * c * (e - 1.0));
        Profile ut = su.eval(t);
        for (double v : ut) CHECK(v == doctest::Approx(logistic).epsilon(1e-10));
    }
}

TEST_CASE("large-D composite midpoint value and its limits") {
    // direct formula evaluation
    const double v = large_d_midpoint(1.0, 1000.0);
    const double expect =
        1.0 / 0.75 + 1.0 / (8.0 * std::sqrt(1000.0) * std::sinh(1.0 / (2.0 * std::sqrt(1000.0)))) -
        0.25;
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
    // D -> infinity collapses the two correction terms: limit a/(a - 1/4)
    CHECK(large_d_midpoint(1.0, 1e14) == doctest::Approx(4.0 / 3.0).epsilon(1e-7));
    // solver cross-check at D = 1000, a = 3
    Params p{3.0, 1000.0, Bc::neumann};
    SteadyProblem sp = SteadyProblem::make(p, 600);
    NewtonOptions no;
    no.tol_residual = 1e-7; // the residual floor scales with D/dx^2 rounding noise
    Profile u = newton_solve(sp, Profile(sp.grid.size(), large_d_core_constant(p.a)), no);
    CHECK(u[sp.grid.n / 2] == doctest::Approx(large_d_midpoint(3.0, 1000.0)).epsilon(1e-2));
}

TEST_CASE("large-D interior level a / (a - 1/4)") {
    CHECK(large_d_core_constant(0.5 + 1e-12) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(large_d_core_constant(1.0) == doctest::Approx(4.0 / 3.0));
    CHECK(large_d_core_constant(1e9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(large_d_core_constant(0.4), std::domain_error);
}

TEST_CASE("small-D Dirichlet construction: peaks, gaps, and the r = 1 limit") {
    // r = 1 on a <= 1/2 coincides with the closed form as D -> 0
    {
        const double a = 0.4;
        Grid g = build_grid(a, 300);
        Profile one = small_d_profile(g, a, 1e-9, 1, Bc::dirichlet);
        Profile cf = closed_form_dirichlet(Params{a, 1e-9, Bc::dirichlet}, g);
        for (int i = 0; i <= g.n; ++i) CHECK(std::abs(one[i] - cf[i]) < 1e-6);
    }
    // r = 5 at a = 2.6: five arches of height pi/(2(lambda - 1/2))
    {
        const double a = 2.6;
        Grid g = build_grid(a, 1000);
        Profile five = small_d_profile(g, a, 1e-5, 5, Bc::dirichlet);
        CHECK(count_peaks(five, 0.1, Bc::dirichlet) == 5);
        const double lambda = small_d_wavelength(a, 5, Bc::dirichlet);
        CHECK(lambda == doctest::Approx((a + 0.5) / 5.0));
        CHECK(inf_norm(five) == doctest::Approx(kPi / (2.0 * (lambda - 0.5))).epsilon(1e-4));
        // leading-order area is one per arch
        CHECK(l1_norm(g, five) == doctest::Approx(5.0).epsilon(1e-4));
    }
    CHECK_THROWS_AS(small_d_profile(build_grid(1.9, 100), 1.9, 1e-5, 5, Bc::dirichlet),
                    std::domain_error); // a below the r = 5 window
    CHECK_THROWS_AS(small_d_profile(build_grid(4.6, 100), 4.6, 1e-5, 5, Bc::dirichlet),
                    std::domain_error); // ... and above it
}

TEST_CASE("small-D Neumann construction: boundary peaks scaled by sqrt(2)") {
    const double a = 2.75;
    Grid g = build_grid(a, 40000); // fine enough to sample interior maxima to 1e-7
    Profile four = small_d_profile(g, a, 1e-5, 4, Bc::neumann);
    CHECK(count_peaks(four, 0.1, Bc::neumann) == 4);
    double interior = 0.0; // interior arches live in (0.5, a - 0.5)
    for (int i = 0; i <= g.n; ++i)
        if (g.x[i] > 0.5 && g.x[i] < a - 0.5) interior = std::max(interior, four[i]);
    CHECK(four[0] / interior == doctest::Approx(kSqrt2).epsilon(1e-6));
    CHECK(four[g.n] == doctest::Approx(four[0]).epsilon(1e-12));
    CHECK_THROWS_AS(small_d_profile(g, a, 1e-5, 9, Bc::neumann), std::domain_error);
}

TEST_CASE("echelon branch curve r (1 - pi^2 D / (lambda - 1/2)^2)") {
    CHECK(small_d_branch_norm(2.6, 1e-12, 5, Bc::dirichlet) == doctest::Approx(5.0).epsilon(1e-9));
    const double lambda = (3.2 + 0.5) / 6.0;
    CHECK(small_d_branch_norm(3.2, 1e-5, 6, Bc::dirichlet) ==
          doctest::Approx(6.0 * (1.0 - kPi * kPi * 1e-5 / ((lambda - 0.5) * (lambda - 0.5)))));
    // against the full Newton solution
    Params p{3.2, 1e-5, Bc::dirichlet};
    SteadyProblem sp = SteadyProblem::make(p, 800);
    Profile u = newton_solve(sp, small_d_profile(sp.grid, p.a, p.D, 6, p.bc));
    CHECK(l1_norm(sp.grid, u) ==
          doctest::Approx(small_d_branch_norm(p.a, p.D, 6, p.bc)).epsilon(0.01));

    Params q{3.0, 1e-5, Bc::neumann};
    SteadyProblem sq = SteadyProblem::make(q, 800);
    Profile w = newton_solve(sq, small_d_profile(sq.grid, q.a, q.D, 5, q.bc));
    CHECK(l1_norm(sq.grid, w) ==
          doctest::Approx(small_d_branch_norm(q.a, q.D, 5, q.bc)).epsilon(0.01));
}

TEST_CASE("boundary-layer constants l, delta_m, and the quoted delta_1") {
    DeltaConstants dc = delta_constants();
    CHECK(std::abs(dc.l - 5.9694) < 1e-3);
    CHECK(std::abs(dc.delta_m - 0.0928) < 1e-3);
    CHECK(std::abs(6.0 * std::tanh(0.5 * dc.l) - dc.l) < 1e-10);
    CHECK(dc.delta_1 == doctest::Approx(0.00297));
}

TEST_CASE("decay envelope by regime") {
    const double a = 0.4;
    const double dcrit = a * a / (kPi * kPi);
    CHECK(decay_regime(a, dcrit) == DecayRegime::marginal);
    CHECK(decay_regime(a, 0.5 * dcrit) == DecayRegime::subcritical);
    CHECK(decay_regime(a, 2.0 * dcrit) == DecayRegime::supercritical);

    CHECK(decay_envelope(a, dcrit, 100.0) == doctest::Approx(kPi / 80.0));
    CHECK(decay_rate(a, 2.0 * dcrit) == doctest::Approx(1.0));
    CHECK(decay_envelope(a, 0.5 * dcrit, 1.0) ==
          doctest::Approx((kPi / (2.0 * a)) * (1.0 - 0.5)));
}

TEST_CASE("local Fisher limit: wall value, core level, weakly nonlinear amplitude") {
    auto wall = local_fisher_limit_profile(40.0, 0.0);
    CHECK(wall.nontrivial);
    CHECK(std::abs(wall.value) < 1e-6); // sech^2((1/2) ln(2 + sqrt 3)) = 2/3 kills the wall term
    CHECK(local_fisher_limit_profile(40.0, 20.0).value == doctest::Approx(1.0).epsilon(1e-6));
    auto weak = local_fisher_limit_profile(kPi + 0.01, 0.5 * (kPi + 0.01));
    CHECK(weak.value == doctest::Approx(0.0075).epsilon(1e-4));
    CHECK_FALSE(local_fisher_limit_profile(3.0, 1.0).nontrivial);
}

TEST_CASE("the rescaled full solver approaches the local Fisher limit as D grows") {
    // a = sqrt(D) abar, x = sqrt(D) xbar; at D = 1000 the steady state should
    // track the composite profile to a few percent
    const double abar = 8.0, D = 1000.0;
    const double a = std::sqrt(D) * abar;
    Params p{a, D, Bc::dirichlet};
    SteadyProblem sp = SteadyProblem::make(p, 4000);
    Profile seed(sp.grid.size());
    for (int i = 0; i <= sp.grid.n; ++i)
        seed[i] = local_fisher_limit_profile(abar, sp.grid.x[i] / std::sqrt(D)).value;
    for (double& v : seed) v = std::max(v, 0.0);
    Profile u = newton_solve(sp, seed);
    double worst = 0.0;
    for (int i = 0; i <= sp.grid.n; i += 40) {
        const double xbar = sp.grid.x[i] / std::sqrt(D);
        worst = std::max(worst, std::abs(u[i] - local_fisher_limit_profile(abar, xbar).value));
    }
    CHECK(worst < 0.05);
}

TEST_CASE("composite error shrinks monotonically as D grows (midpoint check)") {
    const double a = 3.0;
    double prev = 1e9;
    for (double D : {1.0, 10.0, 100.0, 1000.0}) {
        Params p{a, D, Bc::neumann};
        SteadyProblem sp = SteadyProblem::make(p, 500);
        NewtonOptions no;
        no.tol_residual = 1e-7 * std::max(1.0, D / 100.0);
        Profile u = newton_solve(sp, Profile(sp.grid.size(), large_d_core_constant(a)), no);
        const double err = std::abs(u[sp.grid.n / 2] - large_d_midpoint(a, D));
        CHECK(err < prev);
        prev = err;
    }
}

TEST_SUITE_END();
