#include <catch2/catch_amalgamated.hpp>

#include "coperm/euler.hpp"
#include "coperm/interval.hpp"
#include "coperm/primes.hpp"

using namespace coperm;

TEST_CASE("sieve matches the small examples") {
    CHECK(sieve_primes(10) == std::vector<std::int64_t>{2, 3, 5, 7});
    CHECK(sieve_primes(1).empty());
    CHECK(sieve_primes(0).empty());
    CHECK(sieve_primes(30) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK_THROWS_AS(sieve_primes(-1), std::invalid_argument);
}

TEST_CASE("sieve agrees with trial division up to 10^4") {
    const auto primes = sieve_primes(10000);
    std::size_t idx = 0;
    for (std::int64_t m = 0; m <= 10000; ++m) {
        if (is_prime(m)) {
            REQUIRE(idx < primes.size());
            REQUIRE(primes[idx] == m);
            ++idx;
        }
    }
    CHECK(idx == primes.size());
}

TEST_CASE("prime basis drops 2 only when asked") {
    const PrimeBasis full(13);
    CHECK(full.primes == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13});
    const PrimeBasis odd(13, true);
    CHECK(odd.primes == std::vector<std::int64_t>{3, 5, 7, 11, 13});
    CHECK(odd.contains(7));
    CHECK_FALSE(odd.contains(2));
}

TEST_CASE("scale parameters follow the displayed formulas") {
    const auto params = scale_params(1000000);
    const double ln = std::log(1e6), lln = std::log(ln);
    CHECK(params.w == Catch::Approx(std::exp(std::sqrt(ln * lln) / 1024.0)));
    CHECK(params.k == Catch::Approx(std::sqrt(ln / lln) / 32.0));
    CHECK(params.alpha == Catch::Approx(std::exp(-params.k * std::log(params.k))));

    const auto p16 = scale_params(16);
    const double l16 = std::log(16.0), ll16 = std::log(l16);
    CHECK(p16.k == Catch::Approx(std::sqrt(l16 / ll16) / 32.0));

    CHECK_THROWS_AS(scale_params(15), std::invalid_argument);
}

TEST_CASE("scale parameters are strictly monotone on the grid") {
    const std::int64_t grid[] = {16, 100, 10000, 1000000, 1000000000};
    double prev_w = 0.0, prev_k = 0.0;
    for (std::int64_t n : grid) {
        const auto params = scale_params(n);
        CHECK(params.w > prev_w);
        CHECK(params.k > prev_k);
        CHECK(std::isfinite(params.alpha));
        prev_w = params.w;
        prev_k = params.k;
    }
}

TEST_CASE("interval arithmetic encloses exact results") {
    const Interval a = Interval::exact(0.1) + Interval::exact(0.2);
    CHECK(a.contains(0.3));
    const Interval b = Interval::exact(1.0) / Interval::exact(3.0);
    CHECK(b.contains(1.0 / 3.0));
    CHECK(b.lo < b.hi);
    const Interval c = log_i(Interval::exact(1.0));
    CHECK(c.lo == 0.0);
    CHECK(c.hi == 0.0);
    CHECK(exp_i(Interval::exact(0.0)).contains(1.0));
    CHECK_THROWS_AS(Interval::exact(1.0) / Interval(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(log_i(Interval(-1.0, 2.0)), std::domain_error);
}

TEST_CASE("interval product respects signs") {
    const Interval m = Interval(-2.0, 3.0) * Interval(-1.0, 4.0);
    CHECK(m.contains(-8.0));
    CHECK(m.contains(12.0));
    CHECK(m.contains(2.0));
}

TEST_CASE("euler factor pins p = 2 and p = 3") {
    const Interval half = euler_factor(2);
    CHECK(half.lo == 0.5);
    CHECK(half.hi == 0.5);
    const Interval f3 = euler_factor(3);
    const double expected = std::pow(2.0, 4.0 / 3.0) / 3.0;  // 0.8399473665965821
    CHECK(f3.contains(expected));
    CHECK(f3.width() < 1e-12);
    CHECK_THROWS_AS(euler_factor(4), std::invalid_argument);
    CHECK_THROWS_AS(euler_factor_log(2), std::invalid_argument);
}

TEST_CASE("euler factor near 1 for a large prime") {
    REQUIRE(is_prime(100003));
    const Interval f = euler_factor(100003);
    const double p2 = 100003.0 * 100003.0;
    CHECK(f.lo > 1.0 - 3.0 / p2);
    CHECK(f.hi < 1.0);
}

TEST_CASE("limit constant encloses and nests") {
    const Interval c1e4 = limit_constant(10000);
    const Interval c1e5 = limit_constant(100000);
    const Interval c1e6 = limit_constant(1000000);
    CHECK(c1e4.contains(c1e5));
    CHECK(c1e5.contains(c1e6));
    CHECK(c1e6.width() <= 1e-5);
    CHECK(c1e6.mid() > 1.0 / 3.73);
    CHECK(c1e6.mid() < 1.0 / 2.5);
    // Small cutoff: wide but still contains the true value.
    const Interval c3 = limit_constant(3);
    CHECK(c3.contains(c1e6.mid()));
    CHECK(c3.contains(0.5 * std::pow(2.0, 4.0 / 3.0) / 3.0));
    CHECK_THROWS_AS(limit_constant(2), std::invalid_argument);
}
