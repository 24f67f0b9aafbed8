#ifndef BHLAB_EXACT_HPP
#define BHLAB_EXACT_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace bhlab
{

using Int = mpz_class;

// Exact rational number, always stored in lowest terms with a positive
// denominator. Zero is 0/1.
class Rat
{
public:
    Rat() = default;
    Rat(int n) : m_value(n) {}
    Rat(long n) : m_value(n) {}
    Rat(long long n) : m_value(Int(std::to_string(n))) {}
    Rat(unsigned n) : m_value(static_cast<unsigned long>(n)) {}
    Rat(unsigned long n) : m_value(n) {}
    explicit Rat(const Int &n) : m_value(n) {}
    Rat(const Int &num, const Int &den);
    Rat(long num, long den) : Rat(Int(num), Int(den)) {}

    // Parses "num" or "num/den" (optional leading '-', no whitespace).
    // Throws std::invalid_argument on malformed text or a zero denominator.
    static Rat parse(std::string_view text);

    Int numerator() const
    {
        return m_value.get_num();
    }
    Int denominator() const
    {
        return m_value.get_den();
    }
    const mpq_class &get_mpq() const
    {
        return m_value;
    }

    bool is_zero() const
    {
        return sgn(m_value) == 0;
    }
    bool is_integer() const
    {
        return m_value.get_den() == 1;
    }
    int sign() const
    {
        return sgn(m_value);
    }

    // Largest integer <= *this.
    Int floor() const;

    // Multiplicative inverse. Throws std::domain_error on zero.
    Rat inverse() const;

    // Canonical text: "num/den", den omitted when 1.
    std::string to_string() const;

    Rat &operator+=(const Rat &o)
    {
        m_value += o.m_value;
        return *this;
    }
    Rat &operator-=(const Rat &o)
    {
        m_value -= o.m_value;
        return *this;
    }
    Rat &operator*=(const Rat &o)
    {
        m_value *= o.m_value;
        return *this;
    }
    Rat &operator/=(const Rat &o);

    friend Rat operator+(Rat a, const Rat &b)
    {
        return a += b;
    }
    friend Rat operator-(Rat a, const Rat &b)
    {
        return a -= b;
    }
    friend Rat operator*(Rat a, const Rat &b)
    {
        return a *= b;
    }
    friend Rat operator/(Rat a, const Rat &b)
    {
        return a /= b;
    }
    friend Rat operator-(const Rat &a)
    {
        Rat r;
        r.m_value = -a.m_value;
        return r;
    }

    friend bool operator==(const Rat &a, const Rat &b)
    {
        return a.m_value == b.m_value;
    }
    friend std::strong_ordering operator<=>(const Rat &a, const Rat &b)
    {
        const int c = cmp(a.m_value, b.m_value);
        return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream &operator<<(std::ostream &os, const Rat &r)
    {
        return os << r.to_string();
    }

private:
    mpq_class m_value;
};

// Exact power with a non-negative exponent.
Rat pow(const Rat &base, unsigned long exponent);

// Coefficient-ring hooks shared with MPoly (see series.hpp).
inline bool is_zero(const Rat &r)
{
    return r.is_zero();
}
inline Rat div_int(const Rat &r, long m)
{
    return r / Rat(m);
}
inline void add_mul(Rat &acc, const Rat &a, const Rat &b)
{
    acc += a * b;
}
inline std::string to_string(const Rat &r)
{
    return r.to_string();
}

// p-adic valuation: either a finite integer or +infinity (the valuation of 0).
class Valuation
{
public:
    explicit Valuation(long v) : m_finite(true), m_value(v) {}

    static Valuation infinite()
    {
        return Valuation();
    }

    bool is_infinite() const
    {
        return !m_finite;
    }
    // Throws std::logic_error when infinite.
    long value() const;

    std::string to_string() const;

    friend Valuation operator+(const Valuation &a, const Valuation &b)
    {
        if (a.is_infinite() || b.is_infinite()) {
            return infinite();
        }
        return Valuation(a.m_value + b.m_value);
    }

    friend bool operator==(const Valuation &, const Valuation &) = default;
    friend std::strong_ordering operator<=>(const Valuation &a, const Valuation &b)
    {
        if (a.m_finite != b.m_finite) {
            return a.m_finite ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return a.m_finite ? a.m_value <=> b.m_value : std::strong_ordering::equal;
    }
    friend bool operator>=(const Valuation &a, long v)
    {
        return a.is_infinite() || a.m_value >= v;
    }
    friend bool operator<(const Valuation &a, long v)
    {
        return !(a >= v);
    }

private:
    Valuation() = default;

    bool m_finite = false;
    long m_value = 0;
};

// Deterministic trial-division primality test.
bool is_prime(std::uint64_t n);

// v_p(r). Throws std::invalid_argument when p is not prime.
Valuation padic_valuation(const Rat &r, std::uint64_t p);

// True when v_p(r) >= 0.
bool is_p_integral(const Rat &r, std::uint64_t p);

// The unique f in [0, 1) with r - f an integer.
Rat frac_mod_int(const Rat &r);

// alpha (alpha - 1) ... (alpha - k + 1) / k!
Rat rational_binomial(const Rat &alpha, unsigned long k);

Int factorial(unsigned long n);
Int binomial(unsigned long n, unsigned long k);

struct PrimeList {
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> primes;
};

// Sieve of Eratosthenes.
PrimeList primes_up_to(std::uint64_t bound);

} // namespace bhlab

#endif
