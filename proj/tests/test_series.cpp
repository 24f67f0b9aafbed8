#include <doctest.h>

#include <random>
#include <sstream>

#include <bhlab/families.hpp>
#include <bhlab/series.hpp>

#include "oracles.hpp"

using namespace bhlab;

namespace
{

using S = Series<Rat>;

S poly(std::vector<Rat> c, std::size_t order)
{
    return S(std::move(c), order);
}

S random_revertible(std::mt19937_64 &rng, std::size_t order)
{
    std::uniform_int_distribution<int> d(-3, 3);
    std::vector<Rat> c(order, Rat(0));
    c[1] = Rat(1);
    for (std::size_t k = 2; k < order; ++k) {
        c[k] = Rat(d(rng));
    }
    return S(std::move(c));
}

oracle::Vec to_oracle(const S &s)
{
    oracle::Vec v;
    for (const auto &c : s.coefficients()) {
        v.push_back(c.get_mpq());
    }
    return v;
}

} // namespace

TEST_CASE("multiplication")
{
    const auto one_plus = poly({1, 1}, 4), one_minus = poly({1, -1}, 4);
    CHECK(one_plus * one_minus == poly({1, 0, -1}, 4));
    const auto f = poly({Rat(2), Rat(1, 3), Rat(-5)}, 6);
    CHECK(f * S::constant(Rat(1), 6) == f);
    CHECK(S(std::vector<Rat>(10, Rat(1))) * poly({1, -1}, 10) == S::constant(Rat(1), 10));
}

TEST_CASE("binary operations truncate to the smaller order")
{
    const auto a = poly({1, 2, 3}, 8), b = poly({1}, 5);
    CHECK((a + b).order() == 5);
    CHECK((a * b).order() == 5);
    CHECK_THROWS_AS((a * b)[5], precision_error);
    CHECK_NOTHROW((a * b)[4]);
}

TEST_CASE("composition")
{
    const auto t = S::identity(8);
    const auto f = poly({Rat(3), Rat(1, 2), Rat(0), Rat(7)}, 8);
    CHECK(compose(f, t) == f);
    CHECK(compose(poly({0, 0, 1}, 8), poly({0, 1, 1}, 8)) == poly({0, 0, 1, 2, 1}, 8));
    CHECK(compose(exp_series(20), log1p_series(20)) == poly({1, 1}, 20));
    CHECK_THROWS(compose(f, poly({1, 1}, 8)));
}

TEST_CASE("reversion examples")
{
    CHECK(revert(S::identity(10)) == S::identity(10));
    const auto g = revert(poly({0, 1, 1}, 16));
    for (unsigned n = 1; n < 16; ++n) {
        // Signed Catalan numbers: (-1)^(n-1) binom(2n-2, n-1) / n.
        const Rat catalan = Rat(binomial(2 * n - 2, n - 1)) / Rat(n);
        CHECK(g[n] == (n % 2 == 1 ? catalan : -catalan));
    }
    const auto e = revert(log1p_series(24));
    CHECK(e == exp_series(24) - S::constant(Rat(1), 24));
}

TEST_CASE("reversion preconditions name the offending coefficient")
{
    CHECK_THROWS_WITH(revert(poly({1, 1}, 5)), doctest::Contains("coefficient 0"));
    CHECK_THROWS_WITH(revert(poly({0, 2, 1}, 5)), doctest::Contains("coefficient 1"));
    CHECK_THROWS_AS(reciprocal(poly({0, 1}, 5)), std::invalid_argument);
}

TEST_CASE("binomial series")
{
    CHECK(binomial_series(Rat(1), 2, 8) == poly({1, 0, -1}, 8));
    CHECK(binomial_series(Rat(-1), 1, 4) == poly({1, 1, 1, 1}, 4));
    CHECK(binomial_series(Rat(-1, 2), 4, 12) == poly({1, 0, 0, 0, Rat(1, 2), 0, 0, 0, Rat(3, 8)}, 12));
}

TEST_CASE("integration and differentiation")
{
    CHECK(integrate(S::constant(Rat(1), 4)) == poly({0, 1}, 5));
    const auto f = poly({1, 0, 0, 0, Rat(1, 2)}, 8);
    const auto F = poly({0, 1, 0, 0, 0, Rat(1, 10)}, 9);
    CHECK(integrate(f) == F);
    CHECK(differentiate(poly({0, 1, 0, 0, 0, Rat(-1, 10)}, 9)) == poly({1, 0, 0, 0, Rat(-1, 2)}, 8));
}

TEST_CASE("Weierstrass tail")
{
    const auto zero = weierstrass_p_tail(Rat(0), Rat(0), 10);
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK(zero[k].is_zero());
    }
    const auto lem = weierstrass_p_tail(Rat(4), Rat(0), 10);
    CHECK(lem[2] == Rat(1, 5));
    CHECK(lem[6] == Rat(1, 75));
}

TEST_CASE("property: Weierstrass tail satisfies P'' = 6 P^2 - g2/2")
{
    const std::pair<Rat, Rat> invariants[] = {{Rat(4), Rat(0)}, {Rat(3), Rat(-2)}, {Rat(1, 3), Rat(5, 7)}};
    const std::size_t order = 30;
    for (const auto &[g2, g3] : invariants) {
        const auto tail = weierstrass_p_tail(g2, g3, order);
        const Laurent<Rat> p = Laurent<Rat>{2, S::constant(Rat(1), order + 2)} + Laurent<Rat>{0, tail};
        const auto lhs = differentiate(differentiate(p));
        const auto rhs = Rat(6) * (p * p) + Laurent<Rat>{0, S::constant(-g2 / Rat(2), order)};
        for (long e = -4; e < 20; ++e) {
            CHECK(lhs.coefficient(e) == rhs.coefficient(e));
        }
    }
}

TEST_CASE("property: 1/sin^2 from the circular curve")
{
    const auto pe = pe_analogue(circular_curve, 12);
    CHECK(pe.pole == 2);
    CHECK(pe.coefficient(-2) == Rat(1));
    CHECK(pe.coefficient(0) == Rat(1, 3));
    CHECK(pe.coefficient(2) == Rat(1, 15));
}

TEST_CASE("property: Newton and direct reversion agree and round-trip")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_revertible(rng, 24);
        const auto g = revert(f, ReversionMethod::direct);
        CHECK(revert(f, ReversionMethod::newton) == g);
        CHECK(compose(f, g) == S::identity(24));
        CHECK(compose(g, f) == S::identity(24));
        CHECK(to_oracle(g) == oracle::revert(to_oracle(f)));
    }
}

TEST_CASE("property: truncation commutes with the operations")
{
    std::mt19937_64 rng(5);
    const auto f = random_revertible(rng, 20), g = random_revertible(rng, 20);
    const auto u = S::constant(Rat(1), 20) + f;
    for (std::size_t n : {3, 8, 13}) {
        CHECK((f * g).truncated(n) == f.truncated(n) * g.truncated(n));
        CHECK(compose(u, g).truncated(n) == compose(u.truncated(n), g.truncated(n)));
        CHECK(reciprocal(u).truncated(n) == reciprocal(u.truncated(n)));
        CHECK(revert(f).truncated(n) == revert(f.truncated(n)));
    }
}

TEST_CASE("property: exp and log are mutually inverse")
{
    const auto e1 = exp_series(30) - S::constant(Rat(1), 30);
    CHECK(compose(log1p_series(30), e1) == S::identity(30));
    CHECK(compose(exp_series(30), log1p_series(30)) == poly({1, 1}, 30));
}

TEST_CASE("series over polynomial coefficients")
{
    using P = Series<MPoly>;
    const MPoly c1 = MPoly::variable(1);
    const P f(std::vector<MPoly>{MPoly(0), MPoly(1), c1}, 5);
    const auto g = revert(f);
    CHECK(g[2] == -c1);
    CHECK(g[3] == MPoly(2) * c1 * c1);
    CHECK(compose(f, g) == P::identity(5));
}

TEST_CASE("dump")
{
    std::ostringstream os;
    dump(os, poly({1, Rat(-1, 2)}, 3));
    CHECK(os.str().find("-1/2") != std::string::npos);
}
