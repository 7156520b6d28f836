#include "psts/random.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using psts::SplitMix64;

TEST_CASE("splitmix64 reference outputs")
{
    // values of the published reference implementation
    SplitMix64 a(1234567);
    CHECK(a.next() == 6457827717110365317ULL);
    CHECK(a.next() == 3203168211198807973ULL);
    CHECK(a.next() == 9817491932198370423ULL);
    CHECK(a.next() == 4593380528125082431ULL);
    CHECK(a.next() == 16408922859458223821ULL);
    SplitMix64 z(0);
    CHECK(z.next() == 16294208416658607535ULL);
}

TEST_CASE("streams are reproducible and distinct")
{
    SplitMix64 a(99), b(99), c(psts::derive_seed(99, 1));
    for (int i = 0; i < 100; ++i)
        CHECK(a.next() == b.next());
    CHECK(psts::derive_seed(99, 1) != psts::derive_seed(99, 2));
    CHECK(psts::derive_seed(99, 1) != psts::derive_seed(98, 1));
    CHECK(c.next() != SplitMix64(99).next());
}

TEST_CASE("bounded draws stay in range and cover it")
{
    SplitMix64 r(5);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        auto v = r.uniform_int(-3, 3);
        REQUIRE(v >= -3);
        REQUIRE(v <= 3);
        ++seen[static_cast<std::size_t>(v + 3)];
    }
    for (int s : seen)
        CHECK(s > 800);
    CHECK(r.uniform_int(4, 4) == 4);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK_THROWS_AS(r.below(0), std::invalid_argument);
    CHECK_THROWS_AS(r.uniform_int(2, 1), std::invalid_argument);
}

TEST_CASE("distribution means")
{
    SplitMix64 r(7);
    const int n = 200'000;
    for (double mean : {0.5, 5.0, 29.0, 30.0, 50.0, 400.0}) {
        double sum = 0, sq = 0;
        for (int i = 0; i < n; ++i) {
            auto k = r.poisson(mean);
            REQUIRE(k >= 0);
            sum += double(k);
            sq += double(k) * double(k);
        }
        const double m = sum / n;
        const double var = sq / n - m * m;
        // five standard errors
        CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
        CHECK(std::abs(var - mean) / mean < 0.05);
    }
    double sum = 0;
    for (int i = 0; i < n; ++i)
        sum += r.exponential(4.0);
    CHECK(std::abs(sum / n - 0.25) < 5.0 * 0.25 / std::sqrt(double(n)));
    CHECK_THROWS_AS(r.poisson(0.0), std::invalid_argument);
    CHECK_THROWS_AS(r.exponential(-1.0), std::invalid_argument);
}
