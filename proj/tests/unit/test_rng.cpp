#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "modalshift/rng.hpp"

#include "support/stats.hpp"

using modalshift::Rng;
using modalshift::derive_seed;
using modalshift::mix64;

TEST_CASE("mix64 scrambles and derive_seed separates streams") {
    CHECK(mix64(0) != 0);
    CHECK(mix64(1) != mix64(2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 40; ++a)
        for (std::uint64_t b = 0; b < 40; ++b)
            seen.insert(derive_seed(12345, a, b));
    CHECK(seen.size() == 40u * 40u);
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2, 0));
}

TEST_CASE("identical seed gives identical sequence, different seed differs") {
    Rng a(987654321);
    Rng b(987654321);
    Rng c(987654322);
    bool any_difference = false;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        any_difference = any_difference || va != c.next_u64();
    }
    CHECK(any_difference);
}

TEST_CASE("generator output is pinned against accidental algorithm changes") {
    // First draws of Rng(42), recorded from this implementation; any change
    // here silently breaks every seeded result in the project.
    Rng rng(42);
    const std::uint64_t expected[4] = {
        6667968346354703667ULL,
        16249806489848801414ULL,
        11489548399102462488ULL,
        16627559554645684411ULL,
    };
    for (const std::uint64_t value : expected)
        CHECK(rng.next_u64() == value);
}

TEST_CASE("next_double lies in [0,1) with a balanced mean") {
    Rng rng(7);
    const int n = 100000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double value = rng.next_double();
        REQUIRE(value >= 0.0);
        REQUIRE(value < 1.0);
        total += value;
    }
    const double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(total / n - 0.5) < 4.0 * se);
}

TEST_CASE("uniform stays inside its interval") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double value = rng.uniform(-3.0, 2.5);
        REQUIRE(value >= -3.0);
        REQUIRE(value < 2.5);
    }
}

TEST_CASE("uniform_index covers exactly [0, n)") {
    Rng rng(13);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i)
        ++counts.at(rng.uniform_index(7));
    for (const int count : counts)
        CHECK(count > 0);
}

TEST_CASE("bernoulli saturates at 0 and 1") {
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("poisson at lambda zero always returns zero") {
    Rng rng(19);
    for (int i = 0; i < 1000; ++i)
        CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("poisson mean and variance match across both sampler regimes") {
    // lambda 1 and 10 exercise the product method, 100 the large-lambda
    // method; 29.5 and 30.5 straddle the switch point.
    for (const double lambda : {1.0, 10.0, 29.5, 30.5, 100.0}) {
        Rng rng(static_cast<std::uint64_t>(lambda * 1000) + 3);
        const int n = 10000;
        std::vector<double> draws;
        draws.reserve(n);
        for (int i = 0; i < n; ++i)
            draws.push_back(static_cast<double>(rng.poisson(lambda)));
        const double m = teststats::mean(draws);
        const double se_mean = std::sqrt(lambda / n);
        INFO("lambda " << lambda << " mean " << m);
        CHECK(std::abs(m - lambda) < 3.0 * se_mean);

        double var = 0.0;
        for (const double draw : draws)
            var += (draw - m) * (draw - m);
        var /= n - 1;
        // se(variance) for Poisson: sqrt((2*lambda^2 + lambda) / n)
        const double se_var = std::sqrt((2.0 * lambda * lambda + lambda) / n);
        INFO("lambda " << lambda << " variance " << var);
        CHECK(std::abs(var - lambda) < 4.0 * se_var);
    }
}

TEST_CASE("poisson sequence is reproducible for equal seeds") {
    Rng a(23);
    Rng b(23);
    for (int i = 0; i < 200; ++i)
        CHECK(a.poisson(100.0) == b.poisson(100.0));
}
