#include <doctest.h>

#include <cmath>

#include "chemopp/model.hpp"
#include "chemopp/verify.hpp"

using namespace chemopp;

TEST_SUITE_BEGIN("model");

TEST_CASE("chemostat rhs matches hand-evaluated rationals") {
    // (C,D,a,b,m,A,B,M) = (2,1,1,0.1,1,1,0.1,2) at state (1,1,1):
    //   s' = 2 - 1 - 1/1.1      = 1/11
    //   x' = 1/1.1 - 1 - 1/1.1  = -1
    //   y' = 2/1.1 - 1          = 9/11
    const ChemostatParams p{2, 1, 1, 0.1, 1, 1, 0.1, 2};
    const auto d = chemostat_rhs(p, {1.0, 1.0, 1.0});
    CHECK(d[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(d[2] == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("reduced system axes are invariant") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const ReducedParams p = draw_reduced_params(rng);
        const double eta = rng.uniform(0.01, 3.0);
        const auto on_eta_axis = reduced_rhs(p, {0.0, eta});
        CHECK(on_eta_axis[0] == 0.0);
        CHECK(on_eta_axis[1] == -eta * p.mu * p.lambda);  // exact: (1+beta*0) = 1
        CHECK(on_eta_axis[1] < 0.0);
        const double xi = rng.uniform(0.01, 2.0);
        const auto on_xi_axis = reduced_rhs(p, {xi, 0.0});
        CHECK(on_xi_axis[1] == 0.0);
    }
}

TEST_CASE("(1,0) is an equilibrium of the reduced system") {
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        const ReducedParams p = draw_reduced_params(rng);
        const auto d = reduced_rhs(p, {1.0, 0.0});
        CHECK(d[0] == 0.0);
        CHECK(d[1] == 0.0);
    }
}

TEST_CASE("epsilon = 0 reduces to the classical system") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const ReducedParams base = draw_reduced_params(rng);
        const ReducedParams p{0.0, base.beta, base.mu, base.lambda};
        const double xi = rng.uniform(0.0, 1.5), eta = rng.uniform(0.0, 2.0);
        const auto d = reduced_rhs(p, {xi, eta});
        // Independent expression of the classical right-hand side.
        const double dxi = xi * (1.0 - xi) - xi * eta / (1.0 + p.beta * xi);
        const double deta = eta * p.mu * (xi - p.lambda) / (1.0 + p.beta * xi);
        CHECK(d[0] == doctest::Approx(dxi).epsilon(1e-15));
        CHECK(d[1] == doctest::Approx(deta).epsilon(1e-15));
    }
}

TEST_CASE("H function definition and surface zero") {
    const ChemostatParams p{2, 1, 1, 0.1, 1, 1, 0.1, 2};
    CHECK(H_function(p, {1, 1, 2}) == doctest::Approx(1.0).epsilon(1e-15));
    // Any state on s = C - x/m - y/(mM) gives H = 0.
    Rng rng(10);
    for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(0.0, 1.0), y = rng.uniform(0.0, 1.0);
        const double s = p.C - x / p.m - y / (p.m * p.M);
        CHECK(std::abs(H_function(p, {s, x, y})) < 1e-14);
    }
}

TEST_CASE("reparametrization produces the documented values") {
    const ChemostatParams p{2, 1, 1, 0.1, 1, 1, 0.1, 2};
    const Reduction red = reparametrize(p);
    CHECK(red.params.epsilon == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(red.params.beta == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(red.params.mu == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(red.params.lambda == doctest::Approx(10.0 / 19.0).epsilon(1e-15));
    CHECK(red.scales.xi_per_x == doctest::Approx(1.0));
    CHECK(red.scales.eta_per_y == doctest::Approx(1.0));
    CHECK(red.scales.tau_per_t == doctest::Approx(1.0));
}

TEST_CASE("reparametrization rejects degenerate margins") {
    // amC = D
    CHECK_THROWS_WITH_AS(reparametrize(ChemostatParams{1, 1, 1, 0.1, 1, 1, 0.1, 2}),
                         doctest::Contains("a*m*C - D"), InvalidParameter);
    // M = BD
    CHECK_THROWS_WITH_AS(reparametrize(ChemostatParams{2, 1, 1, 0.1, 1, 1, 0.5, 0.5}),
                         doctest::Contains("M - B*D"), InvalidParameter);
}

TEST_CASE("parameter validation is eager") {
    CHECK_THROWS_AS(ChemostatParams(0, 1, 1, 0, 1, 1, 1, 1), InvalidParameter);
    CHECK_THROWS_AS(ChemostatParams(1, 1, 1, -0.1, 1, 1, 1, 1), InvalidParameter);
    CHECK_NOTHROW(ChemostatParams(1, 1, 1, 0, 1, 1, 1, 1));  // b = 0 is legal
    CHECK_THROWS_AS(ReducedParams(-0.1, 1, 1, 1), InvalidParameter);
    CHECK_THROWS_AS(ReducedParams(0, 1, 0, 1), InvalidParameter);
    CHECK_THROWS_AS(ReducedParams(0, 1, 1, 0), InvalidParameter);
    CHECK_NOTHROW(ReducedParams(0, 0, 1, 1));  // epsilon = beta = 0 is legal
}

TEST_CASE("structural function anchors") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const ReducedParams p = draw_reduced_params(rng);
        const auto iso = isocline_form(p);
        CHECK(iso.F(1.0) == 0.0);
        CHECK(iso.F(0.0) == doctest::Approx(1.0 / (1.0 + p.epsilon)).epsilon(1e-15));
        CHECK(iso.f(0.0) == 0.0);
        CHECK(iso.psi(p.lambda) == 0.0);
        const double xi = rng.uniform(0.0, 2.0);
        if (xi > 0) CHECK(iso.f(xi) > 0.0);
        if (xi != p.lambda)
            CHECK(iso.psi(xi) * (xi - p.lambda) > 0.0);  // (A-IV)
    }
}

TEST_CASE("F' expanded and factored forms agree") {
    Rng rng(12);
    int checked = 0;
    while (checked < 1000) {
        ReducedParams p = draw_reduced_params(rng);
        if (!(p.epsilon > 0)) continue;
        const auto iso = isocline_form(p);
        const double xi = rng.uniform(0.0, 1.0);
        const double a = iso.F_prime(xi), b = iso.F_prime_factored(xi);
        CHECK(std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}));
        ++checked;
    }
}

TEST_CASE("F' at specific points") {
    const ReducedParams p{1, 4, 1, 0.5};
    CHECK(isocline_form(p).F_prime(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // epsilon = 0: F'(xi) = beta - 1 - 2 beta xi
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        const double beta = rng.uniform(0.1, 6.0), xi = rng.uniform(0.0, 1.0);
        const ReducedParams q{0.0, beta, 1.0, 0.5};
        CHECK(isocline_form(q).F_prime(xi) ==
              doctest::Approx(beta - 1.0 - 2.0 * beta * xi).epsilon(1e-14));
    }
}

TEST_CASE("xi_roots against a bisection oracle") {
    // Oracle: bisect the expanded F'-numerator quadratic on [0, 1].
    auto numerator = [](const ReducedParams& p, double xi) {
        return p.beta - 1.0 - p.epsilon - 2.0 * p.beta * xi - 2.0 * p.beta * p.epsilon * xi -
               p.beta * p.beta * p.epsilon * xi * xi;
    };
    const ReducedParams p{1, 4, 1, 0.5};
    double lo = 0.0, hi = 1.0;
    REQUIRE(numerator(p, lo) > 0);
    REQUIRE(numerator(p, hi) < 0);
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (numerator(p, mid) > 0 ? lo : hi) = mid;
    }
    const auto roots = xi_roots(p);
    REQUIRE(roots.plus.has_value());
    CHECK(*roots.plus == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-13));
    CHECK(*roots.plus == doctest::Approx((-2.0 + std::sqrt(6.0)) / 4.0).epsilon(1e-15));
    REQUIRE(roots.minus.has_value());
    CHECK(*roots.minus == doctest::Approx((-2.0 - std::sqrt(6.0)) / 4.0).epsilon(1e-15));
}

TEST_CASE("xi_roots properties over random draws") {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const ReducedParams p = draw_reduced_params(rng);
        const auto roots = xi_roots(p);
        if (p.beta == 0.0) {
            CHECK(!roots.plus);
            continue;
        }
        REQUIRE(roots.plus.has_value());
        // Sign predicate: xi_+ > 0 iff beta > 1 + epsilon.
        CHECK((*roots.plus > 0.0) == (p.beta > 1.0 + p.epsilon));
        if (p.epsilon > 0) {
            REQUIRE(roots.minus.has_value());
            CHECK(*roots.minus < 0.0);
            // Residuals of the numerator quadratic at both roots.
            auto quad = [&](double xi) {
                return p.beta * p.beta * p.epsilon * xi * xi +
                       2.0 * p.beta * (1.0 + p.epsilon) * xi + (1.0 + p.epsilon - p.beta);
            };
            CHECK(std::abs(quad(*roots.plus)) <= 1e-12);
            CHECK(std::abs(quad(*roots.minus)) <= 1e-12);
        }
    }
}

TEST_CASE("xi_plus boundary and classical limit") {
    CHECK(*xi_roots({1.0, 2.0, 1.0, 0.5}).plus == 0.0);  // beta = 1 + epsilon
    CHECK(*xi_roots({0.0, 2.0, 1.0, 0.5}).plus == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(*xi_roots({1e-6, 2.0, 1.0, 0.5}).plus == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("xi_plus decreases as the coupling strengthens") {
    // The coupling term stabilizes locally: destabilization needs a smaller
    // lambda as epsilon grows, and the classical value bounds from above.
    double prev = *xi_roots({0.0, 4.0, 1.0, 0.5}).plus;
    CHECK(prev == doctest::Approx(0.375).epsilon(1e-15));  // (beta-1)/(2 beta)
    for (double eps : {0.1, 0.3, 0.6, 1.0, 1.5, 2.0, 3.0}) {
        const double xp = *xi_roots({eps, 4.0, 1.0, 0.5}).plus;
        CHECK(xp < prev);
        prev = xp;
    }
}

TEST_CASE("growth h zeros, domain and argmax") {
    const ChemostatParams p{1, 0.5, 1, 1, 1, 1, 0.1, 1};
    CHECK(growth_h(p, 0.0) == 0.0);
    CHECK(growth_h(p, p.m * p.C) == 0.0);
    CHECK_THROWS_AS(growth_h(p, -0.1), std::domain_error);
    CHECK_THROWS_AS(growth_h(p, p.m * p.C + p.m / (p.a * p.b) + 0.1), std::domain_error);

    // (a,b,m,C) = (1,1,1,1): argmax = 2/(2+sqrt(2)) = 2 - sqrt(2).
    const double argmax = growth_h_argmax(p);
    CHECK(argmax == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-15));
    // Oracle: grid maximization confirms the closed form.
    double best_x = 0.0, best_h = -1.0;
    for (int i = 0; i <= 100000; ++i) {
        const double x = p.m * p.C * i / 100000.0;
        const double h = growth_h(p, x);
        if (h > best_h) { best_h = h; best_x = x; }
    }
    CHECK(std::abs(best_x - argmax) < 2e-5);
    CHECK(growth_h(p, argmax) >= growth_h(p, argmax - 1e-7));
    CHECK(growth_h(p, argmax) >= growth_h(p, argmax + 1e-7));

    // b = 0 limit: argmax -> mC/2, denominator is 1.
    const ChemostatParams q{3, 0.5, 1.2, 0, 0.8, 1, 0.1, 1};
    CHECK(growth_h_argmax(q) == doctest::Approx(q.m * q.C / 2.0).epsilon(1e-15));
    CHECK(growth_h(q, 1.0) == doctest::Approx(q.a * 1.0 * (q.m * q.C - 1.0)).epsilon(1e-15));
}

TEST_CASE("vector_field dispatch and dimension checks") {
    const ChemostatParams cp{2, 1, 1, 0.1, 1, 1, 0.1, 2};
    const ReducedParams rp{1, 4, 1, 0.5};
    double out3[3], out2[2];
    CHECK_NOTHROW(vector_field(SystemKind::Chemostat3D, cp, std::array{1.0, 1.0, 1.0}, out3));
    CHECK_THROWS_AS(vector_field(SystemKind::Chemostat3D, cp, std::array{1.0, 1.0}, out2),
                    std::invalid_argument);
    CHECK_THROWS_AS(vector_field(SystemKind::ReducedCoupled, cp, std::array{1.0, 1.0}, out2),
                    InvalidParameter);
    CHECK_THROWS_AS(vector_field(SystemKind::SurfaceExact, rp, std::array{1.0, 1.0}, out2),
                    InvalidParameter);
    CHECK_NOTHROW(vector_field(SystemKind::ReducedCoupled, rp, std::array{1.0, 1.0}, out2));
}

TEST_CASE("surface system equals chemostat restricted to H = 0") {
    // On the invariant surface the 3D field's (x,y) components must agree
    // with the planar reduction.
    Rng rng(15);
    for (int i = 0; i < 50; ++i) {
        const ChemostatParams p = draw_chemostat_params(rng);
        const double x = rng.uniform(0.01, 0.8) * p.m * p.C;
        const double y = rng.uniform(0.01, 0.5) * p.m * p.C * p.M;
        const double s = p.C - x / p.m - y / (p.m * p.M);
        if (s <= 0) continue;
        const auto full = chemostat_rhs(p, {s, x, y});
        const auto surf = surface_rhs(p, {x, y});
        CHECK(full[1] == doctest::Approx(surf[0]).epsilon(1e-12));
        CHECK(full[2] == doctest::Approx(surf[1]).epsilon(1e-12));
    }
}

TEST_SUITE_END();
