#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "majorize/majorize.hpp"

using namespace majorize;

TEST_CASE("a permutation matrix decomposes into itself", "[birkhoff]") {
    PermutationMatrix p({2, 0, 1});
    auto terms = birkhoff_decompose(p.to_doubly_stochastic());
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].weight == Approx(1.0).margin(1e-12));
    for (std::size_t i = 0; i < 3; ++i) CHECK(terms[0].permutation(i) == p(i));
}

TEST_CASE("the half-sum of identity and 3-cycle splits into two terms", "[birkhoff]") {
    DoublyStochastic x(3, {0.5, 0.0, 0.5, 0.5, 0.5, 0.0, 0.0, 0.5, 0.5});
    auto terms = birkhoff_decompose(x);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].weight == Approx(0.5).margin(1e-12));
    CHECK(terms[1].weight == Approx(0.5).margin(1e-12));
    CHECK(birkhoff_reconstruction_error(terms, x) < 1e-12);
}

TEST_CASE("the flat matrix splits into n uniform permutations", "[birkhoff]") {
    for (std::size_t n : {2, 3, 4, 5}) {
        DoublyStochastic x = DoublyStochastic::flat(n);
        auto terms = birkhoff_decompose(x);
        CHECK(terms.size() == n);
        for (const auto& t : terms)
            CHECK(t.weight == Approx(1.0 / static_cast<double>(n)).margin(1e-12));
        CHECK(birkhoff_reconstruction_error(terms, x) < 1e-12);
    }
}

TEST_CASE("random doubly stochastic matrices decompose within the term bound",
          "[birkhoff]") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.index(5);
        DoublyStochastic x = testgen::random_doubly_stochastic(n, rng, 2 + rng.index(2 * n));
        auto terms = birkhoff_decompose(x);
        CHECK(birkhoff_reconstruction_error(terms, x) <= 1e-9);
        CHECK(terms.size() <= n * n - 2 * n + 2);
        ProbabilityVector w = birkhoff_weights(terms);
        CHECK(w.size() == terms.size());
    }
}

TEST_CASE("greedy extraction stays inside the positive support", "[birkhoff]") {
    // Replay the subtraction: every matched entry must be strictly positive in
    // the residual at its extraction step.  (Valid when the pruning pass did
    // not fire, so keep the term count small.)
    Rng rng(78);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.index(3);
        DoublyStochastic x = testgen::random_doubly_stochastic(n, rng, 3);
        auto terms = birkhoff_decompose(x);
        if (terms.size() > n * n - 2 * n + 2) continue;
        std::vector<double> resid(x.entries().begin(), x.entries().end());
        double extracted = 0.0;
        for (const auto& t : terms) {
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(resid[i * n + t.permutation(i)] > 1e-12);
                resid[i * n + t.permutation(i)] -= t.weight;
            }
            extracted += t.weight;
        }
        CHECK(extracted == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("chain-links unistochasticity for 3x3 matrices", "[unistochastic]") {
    SECTION("identity is unistochastic") {
        CHECK(unistochastic3_check(DoublyStochastic::identity(3)));
    }
    SECTION("flat is unistochastic") {
        CHECK(unistochastic3_check(DoublyStochastic::flat(3)));
    }
    SECTION("the half-sum of identity and 3-cycle is not") {
        DoublyStochastic x(3, {0.5, 0.0, 0.5, 0.5, 0.5, 0.0, 0.0, 0.5, 0.5});
        CHECK_FALSE(unistochastic3_check(x));
    }
    SECTION("the rotating field value at x = 0.5 is not") {
        const double s = std::sin(0.5) * std::sin(0.5), c = 1.0 - s;
        DoublyStochastic x(3, {s, c, 0.0, 0.0, s, c, c, 0.0, s});
        CHECK_FALSE(unistochastic3_check(x));
    }
    SECTION("wrong dimension is rejected") {
        CHECK_THROWS_AS(unistochastic3_check(DoublyStochastic::identity(2)), Error);
    }
}

TEST_CASE("unistochasticity verdict is invariant under row/column permutations",
          "[unistochastic]") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        DoublyStochastic x = testgen::random_doubly_stochastic(3, rng, 2 + rng.index(4));
        const bool base = unistochastic3_check(x);
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<std::size_t> rp{0, 1, 2}, cp{0, 1, 2};
            for (std::size_t i = 3; i-- > 1;) std::swap(rp[i], rp[rng.index(i + 1)]);
            for (std::size_t i = 3; i-- > 1;) std::swap(cp[i], cp[rng.index(i + 1)]);
            std::vector<double> e(9);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) e[i * 3 + j] = x(rp[i], cp[j]);
            CHECK(unistochastic3_check(DoublyStochastic(3, std::move(e))) == base);
        }
    }
}

TEST_CASE("the diagonal channel of a DS matrix is unital, trace-preserving, positive",
          "[channel]") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.index(4);
        DoublyStochastic x = testgen::random_doubly_stochastic(n, rng);
        std::vector<double> ones(n, 1.0);
        auto out = ds_as_diagonal_channel(x, ones);
        for (double v : out) CHECK(v == Approx(1.0).margin(1e-9));

        std::vector<double> d(n);
        for (auto& v : d) v = rng.uniform(-1.0, 1.0);
        auto xd = ds_as_diagonal_channel(x, d);
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s1 += d[i];
            s2 += xd[i];
        }
        CHECK(s2 == Approx(s1).margin(1e-9));

        for (auto& v : d) v = std::abs(v);
        for (double v : ds_as_diagonal_channel(x, d)) CHECK(v >= -1e-12);
    }
    SECTION("dimension mismatch is rejected") {
        std::vector<double> d{1.0, 2.0};
        CHECK_THROWS_AS(ds_as_diagonal_channel(DoublyStochastic::identity(3), d), Error);
    }
}
