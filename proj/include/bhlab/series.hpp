#ifndef BHLAB_SERIES_HPP
#define BHLAB_SERIES_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <bhlab/exact.hpp>
#include <bhlab/mpoly.hpp>

namespace bhlab
{

// Exact coefficient ring: a Q-algebra with integer constants, ring
// arithmetic, exact division by nonzero integers and an accumulate-product hook.
template <typename C>
concept CoefficientRing = std::regular<C> && std::constructible_from<C, int> && requires(C a, const C &b, long m) {
    { a + b } -> std::convertible_to<C>;
    { a - b } -> std::convertible_to<C>;
    { a * b } -> std::convertible_to<C>;
    { -a } -> std::convertible_to<C>;
    { is_zero(b) } -> std::convertible_to<bool>;
    { div_int(b, m) } -> std::convertible_to<C>;
    { to_string(b) } -> std::convertible_to<std::string>;
    add_mul(a, b, b);
};

// Raised when a coefficient beyond the known truncation order is requested.
class precision_error : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

// Truncated power series a_0 + a_1 t + ... + a_{N-1} t^{N-1} + O(t^N).
// Storage is dense: there is always exactly one coefficient per known power.
template <CoefficientRing C>
class Series
{
public:
    Series() = default;
    explicit Series(std::vector<C> coeffs) : m_coeffs(std::move(coeffs)) {}
    // Pads with zeros or truncates to exactly `order` coefficients.
    Series(std::vector<C> coeffs, std::size_t order) : m_coeffs(std::move(coeffs))
    {
        m_coeffs.resize(order, C(0));
    }

    static Series zero(std::size_t order)
    {
        return Series(std::vector<C>(order, C(0)));
    }
    static Series constant(const C &c, std::size_t order)
    {
        auto s = zero(order);
        if (order > 0) {
            s.m_coeffs[0] = c;
        }
        return s;
    }
    // The series t.
    static Series identity(std::size_t order)
    {
        auto s = zero(order);
        if (order > 1) {
            s.m_coeffs[1] = C(1);
        }
        return s;
    }

    std::size_t order() const
    {
        return m_coeffs.size();
    }

    // Coefficient of t^n. Throws precision_error when n >= order().
    const C &operator[](std::size_t n) const
    {
        if (n >= m_coeffs.size()) {
            throw precision_error("series coefficient " + std::to_string(n) + " requested but order is "
                                  + std::to_string(m_coeffs.size()));
        }
        return m_coeffs[n];
    }

    std::span<const C> coefficients() const
    {
        return m_coeffs;
    }

    // Drops precision to `order`. Throws precision_error when asked to extend.
    Series truncated(std::size_t order) const
    {
        if (order > m_coeffs.size()) {
            throw precision_error("cannot raise series order from " + std::to_string(m_coeffs.size()) + " to "
                                  + std::to_string(order));
        }
        return Series(std::vector<C>(m_coeffs.begin(), m_coeffs.begin() + static_cast<std::ptrdiff_t>(order)));
    }

    // Equality modulo t^min(order).
    friend bool operator==(const Series &f, const Series &g)
    {
        const auto n = std::min(f.order(), g.order());
        return std::equal(f.m_coeffs.begin(), f.m_coeffs.begin() + static_cast<std::ptrdiff_t>(n), g.m_coeffs.begin());
    }

    Series &operator+=(const Series &g)
    {
        m_coeffs.resize(std::min(order(), g.order()));
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            m_coeffs[i] = m_coeffs[i] + g.m_coeffs[i];
        }
        return *this;
    }
    Series &operator-=(const Series &g)
    {
        m_coeffs.resize(std::min(order(), g.order()));
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            m_coeffs[i] = m_coeffs[i] - g.m_coeffs[i];
        }
        return *this;
    }

    friend Series operator+(Series f, const Series &g)
    {
        return f += g;
    }
    friend Series operator-(Series f, const Series &g)
    {
        return f -= g;
    }
    friend Series operator-(const Series &f)
    {
        std::vector<C> out;
        out.reserve(f.order());
        for (const auto &c : f.m_coeffs) {
            out.push_back(-c);
        }
        return Series(std::move(out));
    }
    friend Series operator*(const Series &f, const Series &g)
    {
        const auto n = std::min(f.order(), g.order());
        std::vector<C> out(n, C(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (is_zero(f.m_coeffs[i])) {
                continue;
            }
            for (std::size_t j = 0; i + j < n; ++j) {
                if (!is_zero(g.m_coeffs[j])) {
                    add_mul(out[i + j], f.m_coeffs[i], g.m_coeffs[j]);
                }
            }
        }
        return Series(std::move(out));
    }
    friend Series operator*(const C &c, const Series &f)
    {
        std::vector<C> out;
        out.reserve(f.order());
        for (const auto &x : f.m_coeffs) {
            out.push_back(c * x);
        }
        return Series(std::move(out));
    }

private:
    std::vector<C> m_coeffs;
};

template <CoefficientRing C>
Series<C> series_add(const Series<C> &f, const Series<C> &g)
{
    return f + g;
}

template <CoefficientRing C>
Series<C> series_mul(const Series<C> &f, const Series<C> &g)
{
    return f * g;
}

// f * t^k; the order grows by k.
template <CoefficientRing C>
Series<C> shift_up(const Series<C> &f, std::size_t k)
{
    std::vector<C> out(k, C(0));
    out.insert(out.end(), f.coefficients().begin(), f.coefficients().end());
    return Series<C>(std::move(out));
}

// f / t^k; the first k coefficients must vanish. The order drops by k.
template <CoefficientRing C>
Series<C> shift_down(const Series<C> &f, std::size_t k)
{
    if (k > f.order()) {
        throw precision_error("shift_down by " + std::to_string(k) + " exceeds order " + std::to_string(f.order()));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!is_zero(f[i])) {
            throw std::invalid_argument("shift_down: coefficient " + std::to_string(i) + " is nonzero");
        }
    }
    const auto c = f.coefficients();
    return Series<C>(std::vector<C>(c.begin() + static_cast<std::ptrdiff_t>(k), c.end()));
}

// Termwise antiderivative with zero constant term; the order grows by one.
template <CoefficientRing C>
Series<C> integrate(const Series<C> &f)
{
    std::vector<C> out;
    out.reserve(f.order() + 1);
    out.push_back(C(0));
    for (std::size_t k = 0; k < f.order(); ++k) {
        out.push_back(div_int(f[k], static_cast<long>(k + 1)));
    }
    return Series<C>(std::move(out));
}

// Termwise derivative; the order drops by one.
template <CoefficientRing C>
Series<C> differentiate(const Series<C> &f)
{
    std::vector<C> out;
    for (std::size_t k = 1; k < f.order(); ++k) {
        out.push_back(C(static_cast<int>(k)) * f[k]);
    }
    return Series<C>(std::move(out));
}

// Multiplicative inverse of a series whose constant term is exactly 1.
template <CoefficientRing C>
Series<C> reciprocal(const Series<C> &f)
{
    if (f.order() == 0) {
        return f;
    }
    if (!(f[0] == C(1))) {
        throw std::invalid_argument("reciprocal: coefficient 0 must be 1, got " + to_string(f[0]));
    }
    std::vector<C> inv(f.order(), C(0));
    inv[0] = C(1);
    for (std::size_t n = 1; n < f.order(); ++n) {
        C acc(0);
        for (std::size_t k = 1; k <= n; ++k) {
            if (!is_zero(f[k])) {
                add_mul(acc, f[k], inv[n - k]);
            }
        }
        inv[n] = -acc;
    }
    return Series<C>(std::move(inv));
}

// f^k by repeated squaring.
template <CoefficientRing C>
Series<C> power(const Series<C> &f, unsigned long k)
{
    auto result = Series<C>::constant(C(1), f.order());
    auto base = f;
    while (k > 0) {
        if (k & 1u) {
            result = result * base;
        }
        k >>= 1;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

// f(g(t)) by Horner evaluation in the series ring. g(0) must vanish.
template <CoefficientRing C>
Series<C> compose(const Series<C> &f, const Series<C> &g)
{
    if (g.order() > 0 && !is_zero(g[0])) {
        throw std::invalid_argument("compose: inner series has nonzero constant term " + to_string(g[0]));
    }
    const auto n = std::min(f.order(), g.order());
    if (n == 0) {
        return Series<C>();
    }
    const auto inner = g.truncated(n);
    auto acc = Series<C>::constant(f[n - 1], n);
    for (std::size_t k = n - 1; k-- > 0;) {
        acc = acc * inner;
        acc = acc + Series<C>::constant(f[k], n);
    }
    return acc;
}

enum class ReversionMethod { direct, newton };

namespace detail
{

template <CoefficientRing C>
void check_revertible(const Series<C> &f)
{
    if (f.order() < 2) {
        throw precision_error("revert: series order " + std::to_string(f.order()) + " is below 2");
    }
    if (!is_zero(f[0])) {
        throw std::invalid_argument("revert: coefficient 0 must be 0, got " + to_string(f[0]));
    }
    if (!(f[1] == C(1))) {
        throw std::invalid_argument("revert: coefficient 1 must be 1, got " + to_string(f[1]));
    }
}

// Coefficient recursion with a table of powers g^j: since f_1 = 1,
// g_k = -sum_{j>=2} f_j [t^k] g^j, and [t^k] g^j only involves g_1..g_{k-1}.
template <CoefficientRing C>
Series<C> revert_direct(const Series<C> &f)
{
    const auto n = f.order();
    // powers[j][k] = [t^k] g^j for j >= 1.
    std::vector<std::vector<C>> powers(n, std::vector<C>(n, C(0)));
    std::vector<C> g(n, C(0));
    g[1] = C(1);
    powers[1][1] = C(1);
    for (std::size_t k = 2; k < n; ++k) {
        C acc(0);
        for (std::size_t j = k; j >= 2; --j) {
            C pw(0);
            for (std::size_t i = 1; i + j - 1 <= k; ++i) {
                const auto &prev = powers[j - 1][k - i];
                if (!is_zero(g[i]) && !is_zero(prev)) {
                    add_mul(pw, g[i], prev);
                }
            }
            if (!is_zero(f[j]) && !is_zero(pw)) {
                add_mul(acc, f[j], pw);
            }
            powers[j][k] = std::move(pw);
        }
        g[k] = -acc;
        powers[1][k] = g[k];
    }
    return Series<C>(std::move(g));
}

// Newton iteration g <- g - (f(g) - t) / f'(g), doubling precision each step.
template <CoefficientRing C>
Series<C> revert_newton(const Series<C> &f)
{
    const auto n = f.order();
    const auto df = differentiate(f);
    auto g = Series<C>::identity(2);
    std::size_t prec = 2;
    while (prec < n) {
        prec = std::min(2 * prec, n);
        const auto ge = Series<C>(std::vector<C>(g.coefficients().begin(), g.coefficients().end()), prec);
        const auto residual = compose(f.truncated(prec), ge) - Series<C>::identity(prec);
        // f' is only known to order n - 1. The residual vanishes below the old
        // precision (>= 2), so the zero padding never reaches the result.
        const auto slope = compose(
            Series<C>(std::vector<C>(df.coefficients().begin(), df.coefficients().end()), prec), ge);
        g = ge - residual * reciprocal(slope);
    }
    return g;
}

} // namespace detail

// Compositional inverse g with f(g(t)) = g(f(t)) = t. Requires f(0) = 0 and
// f'(0) = 1 exactly; callers rescale otherwise.
template <CoefficientRing C>
Series<C> revert(const Series<C> &f, ReversionMethod method = ReversionMethod::direct)
{
    detail::check_revertible(f);
    return method == ReversionMethod::direct ? detail::revert_direct(f) : detail::revert_newton(f);
}

// One coefficient per line, "n: <text>".
template <CoefficientRing C>
void dump(std::ostream &os, const Series<C> &f)
{
    for (std::size_t n = 0; n < f.order(); ++n) {
        os << n << ": " << to_string(f[n]) << '\n';
    }
}

// u^(-pole) * body, the shape of every principal part we need.
// Absolute precision is body.order() - pole: the expansion is known
// modulo u^(body.order() - pole).
template <CoefficientRing C>
struct Laurent {
    long pole = 0;
    Series<C> body;

    long absolute_order() const
    {
        return static_cast<long>(body.order()) - pole;
    }

    // Coefficient of u^e. Throws precision_error beyond the known range.
    const C &coefficient(long e) const
    {
        if (e < -pole) {
            static const C zero(0);
            return zero;
        }
        return body[static_cast<std::size_t>(e + pole)];
    }

    // The body product is known to min(order) and the pole orders add, which
    // is exactly the absolute precision of the product.
    friend Laurent operator*(const Laurent &x, const Laurent &y)
    {
        return Laurent{x.pole + y.pole, x.body * y.body};
    }

    friend Laurent operator+(const Laurent &x, const Laurent &y)
    {
        const long pole = std::max(x.pole, y.pole);
        const auto xs = shift_up(x.body, static_cast<std::size_t>(pole - x.pole));
        const auto ys = shift_up(y.body, static_cast<std::size_t>(pole - y.pole));
        return Laurent{pole, xs + ys};
    }
    friend Laurent operator-(const Laurent &x)
    {
        return Laurent{x.pole, -x.body};
    }
    friend Laurent operator-(const Laurent &x, const Laurent &y)
    {
        return x + (-y);
    }
    friend Laurent operator*(const C &c, const Laurent &x)
    {
        return Laurent{x.pole, c * x.body};
    }

};

// d/du (u^-m S) = u^-(m+1) (-m S + u S').
template <CoefficientRing C>
Laurent<C> differentiate(const Laurent<C> &x)
{
    const auto &s = x.body;
    std::vector<C> out(s.order(), C(0));
    for (std::size_t k = 0; k < s.order(); ++k) {
        const long factor = static_cast<long>(k) - x.pole;
        out[k] = C(static_cast<int>(factor)) * s[k];
    }
    return Laurent<C>{x.pole + 1, Series<C>(std::move(out))};
}

// ---- Rat-specific constructions -------------------------------------------

// (1 - t^b)^alpha = sum_k binom(alpha, k) (-1)^k t^(bk), modulo t^order.
Series<Rat> binomial_series(const Rat &alpha, unsigned b, std::size_t order);

// Q(u) = P(u) - u^-2 for the Weierstrass function with invariants (g2, g3):
// Q = sum_{k>=2} q_k u^(2k-2), q_2 = g2/20, q_3 = g3/28 and
// q_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} q_m q_{k-m} for k >= 4.
Series<Rat> weierstrass_p_tail(const Rat &g2, const Rat &g3, std::size_t order);

// exp(t) and log(1+t) modulo t^order.
Series<Rat> exp_series(std::size_t order);
Series<Rat> log1p_series(std::size_t order);

} // namespace bhlab

#endif
