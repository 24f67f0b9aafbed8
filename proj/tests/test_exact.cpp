#include <doctest.h>

#include <random>

#include <bhlab/exact.hpp>

#include "oracles.hpp"

using namespace bhlab;

TEST_CASE("rationals are canonical")
{
    CHECK(Rat(4, -6) == Rat(-2, 3));
    CHECK(Rat(4, -6).denominator() == 3);
    CHECK(Rat(0, 5).to_string() == "0");
    CHECK(Rat::parse("-691/2730").to_string() == "-691/2730");
    CHECK(Rat::parse("6/4") == Rat(3, 2));
    CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("x"), std::invalid_argument);
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
    CHECK(Rat(-7, 2).floor() == -4);
}

TEST_CASE("padic valuation")
{
    CHECK(padic_valuation(Rat(0), 7).is_infinite());
    CHECK(padic_valuation(Rat(9, 4), 3).value() == 2);
    CHECK(padic_valuation(Rat(-691, 2730), 7).value() == -1);
    CHECK(padic_valuation(Rat(5, 3), 2).value() == 0);
    CHECK_THROWS_AS(padic_valuation(Rat(5), 4), std::invalid_argument);
    CHECK(is_p_integral(Rat(1, 6), 5));
    CHECK_FALSE(is_p_integral(Rat(1, 6), 3));
}

TEST_CASE("valuation ordering")
{
    CHECK(Valuation(3) < Valuation::infinite());
    CHECK(Valuation::infinite() >= 100);
    CHECK((Valuation(2) + Valuation::infinite()).is_infinite());
    CHECK_THROWS(Valuation::infinite().value());
}

TEST_CASE("fractional part")
{
    CHECK(frac_mod_int(Rat(-5, 6)) == Rat(1, 6));
    CHECK(frac_mod_int(Rat(7, 3)) == Rat(1, 3));
    CHECK(frac_mod_int(Rat(4)) == Rat(0));
}

TEST_CASE("rational binomial")
{
    CHECK(rational_binomial(Rat(5, 7), 0) == Rat(1));
    CHECK(rational_binomial(Rat(4), 2) == Rat(6));
    CHECK(rational_binomial(Rat(-1, 2), 2) == Rat(3, 8));
}

TEST_CASE("primes")
{
    CHECK(primes_up_to(10).primes == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(primes_up_to(2).primes == std::vector<std::uint64_t>{2});
    CHECK(primes_up_to(1).primes.empty());
    const auto list = primes_up_to(2000);
    std::size_t k = 0;
    for (std::uint64_t n = 0; n <= 2000; ++n) {
        const bool listed = k < list.primes.size() && list.primes[k] == n;
        CHECK(listed == is_prime(n));
        k += listed ? 1 : 0;
    }
}

TEST_CASE("property: valuation is additive and matches factorization")
{
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
    for (int trial = 0; trial < 300; ++trial) {
        const long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
        if (a == 0 || c == 0) {
            continue;
        }
        const Rat x(a, b), y(c, d);
        for (std::uint64_t p : {2, 3, 5, 7, 11, 101}) {
            CHECK(padic_valuation(x * y, p) == padic_valuation(x, p) + padic_valuation(y, p));
            CHECK(padic_valuation(x, p).value() == oracle::valuation(oracle::frac(a, b), p));
        }
    }
}

TEST_CASE("property: floor plus fractional part reconstructs the value")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-5000, 5000), den(1, 300);
    for (int trial = 0; trial < 500; ++trial) {
        const Rat x(num(rng), den(rng));
        const Rat f = frac_mod_int(x);
        CHECK(f >= Rat(0));
        CHECK(f < Rat(1));
        CHECK(Rat(x.floor()) + f == x);
    }
}

TEST_CASE("property: rational binomial agrees with Pascal's triangle")
{
    std::vector<std::vector<mpz_class>> pascal(40);
    for (unsigned n = 0; n < 40; ++n) {
        pascal[n].assign(n + 1, 1);
        for (unsigned k = 1; k < n; ++k) {
            pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
        }
        for (unsigned k = 0; k <= n; ++k) {
            CHECK(rational_binomial(Rat(n), k) == Rat(pascal[n][k]));
            CHECK(binomial(n, k) == pascal[n][k]);
        }
    }
}
