#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <spongedim/cycles.hpp>
#include <spongedim/measures.hpp>

#include "testutil.hpp"

using namespace spongedim;
using testutil::m1;

namespace {

Cycle random_knots(SplitMix64& rng, std::size_t size, int n) {
    std::vector<Vec> vals;
    for (int m = 0; m < n; ++m) vals.push_back(rng.dirichlet(size));
    return Cycle::knots(2.0, std::move(vals));
}

}  // namespace

TEST_CASE("circle source: pointwise identities") {
    SplitMix64 rng(3);
    for (int n = 0; n < 200; ++n) {
        const double t = rng.uniform(-30.0, 30.0);
        const Vec z = circle_z(t), Z = circle_Z(t), Zp = circle_Zp(t);
        double sz = 0.0, sZ = 0.0, nZ = 0.0;
        for (int a = 0; a < 3; ++a) {
            REQUIRE(z[a] >= 0.0);
            REQUIRE(z[a] <= 2.0 / 3.0 + 1e-15);
            sz += z[a];
            sZ += Z[a];
            nZ += Z[a] * Z[a];
        }
        REQUIRE(sz == Catch::Approx(1.0).margin(1e-14));
        REQUIRE(sZ == Catch::Approx(0.0).margin(1e-14));
        REQUIRE(nZ == Catch::Approx(1.0 / 6.0).margin(1e-14));
        // Z is the mean-free antiderivative of z, and Zp its derivative.
        const double h = 1e-6;
        for (int a = 0; a < 3; ++a) {
            const double dZ = (circle_Z(t + h)[a] - circle_Z(t - h)[a]) / (2 * h);
            REQUIRE(dZ == Catch::Approx(z[a] - 1.0 / 3.0).margin(1e-9));
            REQUIRE(Zp[a] == Catch::Approx(z[a] - 1.0 / 3.0).margin(1e-14));
        }
    }
}

TEST_CASE("cycle values are multiplicatively periodic") {
    SplitMix64 rng(4);
    const Cycle kn = random_knots(rng, 3, 4);
    const Cycle ci = Cycle::circular(0.2);
    for (int n = 0; n < 50; ++n) {
        const double b = std::exp(rng.uniform(-3.0, 3.0));
        for (int a = 0; a < 3; ++a) {
            REQUIRE(cycle_value(kn, b * kn.lambda)[a] ==
                    Catch::Approx(cycle_value(kn, b)[a]).margin(1e-12));
            REQUIRE(cycle_value(ci, b * ci.lambda)[a] ==
                    Catch::Approx(cycle_value(ci, b)[a]).margin(1e-12));
        }
    }
}

TEST_CASE("cycle values stay on the simplex") {
    SplitMix64 rng(5);
    const Cycle kn = random_knots(rng, 4, 3);
    for (int n = 0; n < 100; ++n) {
        const Vec v = cycle_value(kn, std::exp(rng.uniform(-5.0, 5.0)));
        REQUIRE(is_prob_vector(v, 1e-9));
    }
}

TEST_CASE("constant accumulation is linear in B") {
    const Cycle c = Cycle::constant({0.2, 0.3, 0.5});
    const Vec r = accumulate(c, 7.25);
    REQUIRE(r[0] == Catch::Approx(7.25 * 0.2).margin(1e-12));
    REQUIRE(r[1] == Catch::Approx(7.25 * 0.3).margin(1e-12));
    REQUIRE(r[2] == Catch::Approx(7.25 * 0.5).margin(1e-12));
}

TEST_CASE("accumulation scales by lambda across one period") {
    // R_{lambda B} = lambda R_B follows from periodicity by substitution.
    SplitMix64 rng(6);
    const Cycle kn = random_knots(rng, 3, 5);
    const Cycle ci = Cycle::circular(0.15);
    for (double B : {1.3, 2.9, 11.0}) {
        const Vec a1 = accumulate(kn, B), a2 = accumulate(kn, B * kn.lambda);
        const Vec b1 = accumulate(ci, B), b2 = accumulate(ci, B * ci.lambda);
        for (int a = 0; a < 3; ++a) {
            REQUIRE(a2[a] == Catch::Approx(kn.lambda * a1[a]).epsilon(1e-9));
            REQUIRE(b2[a] == Catch::Approx(ci.lambda * b1[a]).epsilon(1e-8));
        }
    }
}

TEST_CASE("circular accumulation matches brute-force quadrature") {
    const Cycle c = Cycle::circular(0.25);
    const double B = 5.0;
    const Vec r = accumulate(c, B, 1e-11);
    // Composite Simpson on [tiny, B] directly, no period collapse.
    for (int a = 0; a < 3; ++a) {
        auto f = [&](double b) { return cycle_value(c, b)[a]; };
        const int n = 200000;
        double s = 0.0;
        const double lo = 1e-9, h = (B - lo) / n;
        for (int k = 0; k < n; ++k) {
            const double x0 = lo + k * h;
            s += (f(x0) + 4.0 * f(x0 + h / 2) + f(x0 + h)) * h / 6.0;
        }
        REQUIRE(r[a] == Catch::Approx(s).margin(1e-6));
    }
}

TEST_CASE("scale equations solve to tolerance") {
    SplitMix64 rng(8);
    const DiagonalIFS carpet = m1();
    const ExplicitSpace sp(carpet);
    const Cycle kn = random_knots(rng, 3, 4);
    for (double B : {0.7, 3.0, 40.0}) {
        const ScaleSolution s = solve_scale(sp, kn, B, 1e-11);
        for (int i = 0; i < 2; ++i) {
            REQUIRE(s.residual[i] <= 1e-9 * B);
            REQUIRE(sp.chi(i, accumulate(kn, s.Bi[i])) ==
                    Catch::Approx(B).epsilon(1e-8));
        }
    }
}

TEST_CASE("constant cycles collapse to the Bernoulli dimension") {
    SplitMix64 rng(9);
    const DiagonalIFS f = m1();
    const ExplicitSpace sp(f);
    for (int n = 0; n < 10; ++n) {
        const Vec p = rng.dirichlet(3);
        const Cycle c = Cycle::constant(p);
        const double want = delta_p(f, p);
        for (double B : {0.9, 2.0, 17.0})
            REQUIRE(delta_rB(sp, c, B) == Catch::Approx(want).margin(1e-9));
        REQUIRE(delta_r(sp, c).value == Catch::Approx(want).margin(1e-9));
    }
}

TEST_CASE("integral and telescoped forms of delta(r,B) agree") {
    SplitMix64 rng(10);
    const DiagonalIFS carpet = m1();
    const ExplicitSpace sp(carpet);
    for (int n = 0; n < 5; ++n) {
        const Cycle c = random_knots(rng, 3, 3);
        for (double B : {1.1, 4.2}) {
            const double a = delta_rB(sp, c, B);
            const double b = delta_rB_telescoped(sp, c, B);
            REQUIRE(a == Catch::Approx(b).margin(1e-8));
        }
    }
}

TEST_CASE("delta(r,B) is multiplicatively periodic in B") {
    SplitMix64 rng(15);
    const DiagonalIFS carpet = m1();
    const ExplicitSpace sp(carpet);
    const Cycle c = random_knots(rng, 3, 4);
    for (double B : {1.2, 2.7}) {
        REQUIRE(delta_rB(sp, c, B, 1e-10) ==
                Catch::Approx(delta_rB(sp, c, B * c.lambda, 1e-10)).margin(2e-9));
    }
}

TEST_CASE("normalized-accumulation form upper-bounds delta(r,B)") {
    SplitMix64 rng(16);
    const DiagonalIFS carpet = m1();
    const ExplicitSpace sp(carpet);
    for (int n = 0; n < 5; ++n) {
        const Cycle c = random_knots(rng, 3, 3);
        for (double B : {1.5, 6.0})
            REQUIRE(delta_rB_upper(sp, c, B) >= delta_rB(sp, c, B) - 1e-8);
    }
}

TEST_CASE("the infimum over B is attained inside one period") {
    SplitMix64 rng(17);
    const DiagonalIFS carpet = m1();
    const ExplicitSpace sp(carpet);
    const Cycle c = random_knots(rng, 3, 4);
    const CycleDimResult res = delta_r(sp, c);
    REQUIRE(res.argmin_B >= 1.0);
    REQUIRE(res.argmin_B <= c.lambda * (1.0 + 1e-12));
    REQUIRE(res.value <= delta_rB(sp, c, res.argmin_B) + 1e-9);
    for (int n = 0; n < 8; ++n) {
        const double B = std::exp(rng.uniform(0.0, std::log(c.lambda)));
        REQUIRE(res.value <= delta_rB(sp, c, B) + 1e-8);
    }
    REQUIRE(res.grid_B.size() == res.grid_delta.size());
    REQUIRE_FALSE(res.grid_B.empty());
}

TEST_CASE("cycle validation catches structural problems") {
    REQUIRE(validate_cycle(Cycle::constant({0.5, 0.5}), 2).ok());
    REQUIRE_FALSE(validate_cycle(Cycle::constant({0.5, 0.5}), 3).ok());
    REQUIRE_FALSE(validate_cycle(Cycle::constant({0.7, 0.6}), 2).ok());
    REQUIRE_FALSE(
        validate_cycle(Cycle::knots(1.0, {{0.5, 0.5}, {0.4, 0.6}}), 2).ok());
    REQUIRE_FALSE(validate_cycle(Cycle::knots(2.0, {{1.0, 0.0}}), 2).ok());
    REQUIRE(validate_cycle(Cycle::circular(0.1), 3).ok());
    REQUIRE_FALSE(validate_cycle(Cycle::circular(0.1), 4).ok());
}

TEST_CASE("degenerate knot cycles are detected") {
    REQUIRE(is_nondegenerate(Cycle::constant({1.0, 0.0})));
    REQUIRE(is_nondegenerate(Cycle::circular(0.3)));
    // Symbol 1 vanishes on a full segment (two consecutive knots).
    REQUIRE_FALSE(is_nondegenerate(
        Cycle::knots(2.0, {{0.5, 0.0, 0.5}, {0.5, 0.0, 0.5}, {0.2, 0.4, 0.4}})));
    // An isolated zero knot is fine: the value is positive on the segment.
    REQUIRE(is_nondegenerate(
        Cycle::knots(2.0, {{0.5, 0.0, 0.5}, {0.3, 0.4, 0.3}, {0.2, 0.4, 0.4}})));
    // A symbol that is zero everywhere is outside the support, not degenerate.
    REQUIRE(is_nondegenerate(
        Cycle::knots(2.0, {{0.5, 0.0, 0.5}, {0.6, 0.0, 0.4}, {0.2, 0.0, 0.8}})));
}
