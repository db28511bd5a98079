#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <spongedim/measures.hpp>

#include "testutil.hpp"

using namespace spongedim;
using testutil::m1;
using testutil::moran3;
using testutil::square2;

namespace {

Vec uniform(std::size_t n) { return Vec(n, 1.0 / double(n)); }

}  // namespace

TEST_CASE("uniform Bernoulli dimension on the 3x2 carpet") {
    // Closed form: 1 + h_row * (1/log2 - 1/log3) with
    // h_row = H(2/3, 1/3) = log3 - (2/3) log2.
    const double h_row = std::log(3.0) - (2.0 / 3.0) * std::log(2.0);
    const double expect =
        1.0 + h_row * (1.0 / std::log(2.0) - 1.0 / std::log(3.0));
    REQUIRE(expect == Catch::Approx(1.33891566976879447).epsilon(1e-15));
    REQUIRE(delta_p(m1(), uniform(3)) == Catch::Approx(expect).margin(1e-13));
}

TEST_CASE("uniform Bernoulli dimension on the full square is 2") {
    REQUIRE(delta_p(square2(), uniform(4)) == Catch::Approx(2.0).margin(1e-13));
}

TEST_CASE("uniform Bernoulli dimension on the Moran sponge") {
    REQUIRE(delta_p(moran3(), uniform(3)) ==
            Catch::Approx(std::log(3.0) / std::log(4.0)).margin(1e-13));
}

TEST_CASE("sorted and integral forms agree") {
    SplitMix64 rng(11);
    for (int n = 0; n < 100; ++n) {
        const DiagonalIFS f = testutil::random_sponge(rng);
        const Vec p = rng.dirichlet(f.selected.size());
        const double a = delta_p(f, p);
        const double b = delta_p_integral(f, p);
        REQUIRE(std::abs(a - b) <= 1e-12);
    }
}

TEST_CASE("projected entropy is monotone and conditionally nonnegative") {
    SplitMix64 rng(12);
    for (int n = 0; n < 25; ++n) {
        const DiagonalIFS f = testutil::random_sponge(rng);
        const Vec p = rng.dirichlet(f.selected.size());
        REQUIRE(entropy(f, p, 0) == 0.0);
        for (CoordSet I = 0; I <= full_set(f.d); ++I) {
            for (CoordSet J = I; J <= full_set(f.d); ++J) {
                if ((I & J) != I) continue;
                REQUIRE(entropy(f, p, J) >= entropy(f, p, I) - 1e-12);
                REQUIRE(cond_entropy(f, p, I, J) >= 0.0);
            }
        }
        REQUIRE(entropy(f, p, full_set(f.d)) <= shannon(p) + 1e-12);
    }
}

TEST_CASE("Lyapunov exponents are linear in the weights") {
    SplitMix64 rng(13);
    const DiagonalIFS f = m1();
    for (int n = 0; n < 20; ++n) {
        const Vec p = rng.dirichlet(3), q = rng.dirichlet(3);
        const double a = rng.uniform();
        Vec mix(3);
        for (int i = 0; i < 3; ++i) mix[i] = a * p[i] + (1.0 - a) * q[i];
        for (int i = 0; i < 2; ++i) {
            const double lhs = lyapunov(f, mix, i);
            const double rhs =
                a * lyapunov(f, p, i) + (1.0 - a) * lyapunov(f, q, i);
            REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
        }
    }
}

TEST_CASE("point masses have zero dimension") {
    REQUIRE(delta_p(m1(), {1.0, 0.0, 0.0}) == 0.0);
    REQUIRE(delta_p(square2(), {0.0, 0.0, 1.0, 0.0}) == 0.0);
}

TEST_CASE("block representation matches the explicit one on a diagonal sponge") {
    // The Moran sponge is injective in every coordinate, so a one-symbol-
    // per-block encoding carries the same projected entropies.
    const DiagonalIFS f = moran3();
    BlockIFS b;
    b.d = 3;
    b.J = 3;
    b.logN.assign(3, Vec(3, 0.0));
    b.X.assign(3, Vec(3, std::log(4.0)));
    REQUIRE(validate(b).ok());
    SplitMix64 rng(14);
    for (int n = 0; n < 20; ++n) {
        const Vec q = rng.dirichlet(3);
        REQUIRE(delta_p(b, q) == Catch::Approx(delta_p(f, q)).margin(1e-12));
        REQUIRE(delta_p_integral(b, q) ==
                Catch::Approx(delta_p_integral(f, q)).margin(1e-12));
    }
}

TEST_CASE("block symbol counts expand to uniform weights") {
    BlockIFS b;
    b.d = 2;
    b.J = 2;
    b.logN = {{std::log(2.0), 0.0}, {0.0, std::log(3.0)}};
    b.X = {{std::log(4.0), std::log(4.0)}, {std::log(8.0), std::log(8.0)}};
    const Vec w = block_uniform_weights(b, {0.5, 0.5});
    REQUIRE(w.size() == 5);  // 2 symbols in block 0, 3 in block 1
    REQUIRE(w[0] == Catch::Approx(0.25));
    REQUIRE(w[2] == Catch::Approx(0.5 / 3.0));
    REQUIRE(sum(w) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("floor-corrected log is exact in both regimes") {
    REQUIRE(log_floor_exp(std::log(5.0)) == Catch::Approx(std::log(5.0)).margin(1e-15));
    REQUIRE(log_floor_exp(1.0) == Catch::Approx(std::log(2.0)).margin(1e-15));
    REQUIRE(log_floor_exp(0.0) == 0.0);
    REQUIRE(log_floor_exp(30.5) == 30.5);
    REQUIRE(log_floor_exp(1e6) == 1e6);
    REQUIRE_THROWS_AS(log_floor_exp(-0.5), std::domain_error);
}

TEST_CASE("weight vectors are checked") {
    REQUIRE_THROWS_AS(delta_p(m1(), {0.5, 0.5, 0.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(delta_p(m1(), {-0.5, 1.0, 0.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(delta_p(m1(), Vec{}), std::invalid_argument);
}

TEST_CASE("vanishing Lyapunov exponents are rejected") {
    BlockIFS b;
    b.d = 1;
    b.J = 2;
    b.logN = {{0.0, 0.0}};
    b.X = {{0.0, 0.0}};  // invalid on purpose; delta_p must not divide by 0
    REQUIRE_THROWS_AS(delta_p(b, {0.5, 0.5}), std::domain_error);
}
