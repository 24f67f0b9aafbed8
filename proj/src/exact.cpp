#include <bhlab/exact.hpp>

#include <cctype>
#include <stdexcept>
#include <string>

namespace bhlab
{

Rat::Rat(const Int &num, const Int &den) : m_value(num, den)
{
    if (den == 0) {
        throw std::domain_error("Rat: zero denominator");
    }
    m_value.canonicalize();
}

Rat Rat::parse(std::string_view text)
{
    auto valid_integer = [](std::string_view s, bool allow_sign) {
        if (allow_sign && !s.empty() && s.front() == '-') {
            s.remove_prefix(1);
        }
        if (s.empty()) {
            return false;
        }
        for (const char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                return false;
            }
        }
        return true;
    };

    const auto slash = text.find('/');
    const auto num_text = text.substr(0, slash);
    const auto den_text = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_integer(num_text, true) || !valid_integer(den_text, false)) {
        throw std::invalid_argument("Rat::parse: malformed rational '" + std::string(text) + "'");
    }
    const Int den{std::string(den_text)};
    if (den == 0) {
        throw std::invalid_argument("Rat::parse: zero denominator in '" + std::string(text) + "'");
    }
    return Rat(Int(std::string(num_text)), den);
}

Int Rat::floor() const
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), m_value.get_num_mpz_t(), m_value.get_den_mpz_t());
    return q;
}

Rat Rat::inverse() const
{
    if (is_zero()) {
        throw std::domain_error("Rat: inverse of zero");
    }
    Rat r;
    r.m_value = 1 / m_value;
    return r;
}

Rat &Rat::operator/=(const Rat &o)
{
    if (o.is_zero()) {
        throw std::domain_error("Rat: division by zero");
    }
    m_value /= o.m_value;
    return *this;
}

std::string Rat::to_string() const
{
    return m_value.get_str();
}

Rat pow(const Rat &base, unsigned long exponent)
{
    Int num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_mpq().get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_mpq().get_den_mpz_t(), exponent);
    return Rat(num, den);
}

long Valuation::value() const
{
    if (!m_finite) {
        throw std::logic_error("Valuation: value() of infinite valuation");
    }
    return m_value;
}

std::string Valuation::to_string() const
{
    return m_finite ? std::to_string(m_value) : std::string("inf");
}

bool is_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d <= n / d; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

namespace
{

long remove_factor(const Int &n, std::uint64_t p)
{
    if (n == 0) {
        return 0;
    }
    Int rest;
    const Int prime(static_cast<unsigned long>(p));
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

} // namespace

Valuation padic_valuation(const Rat &r, std::uint64_t p)
{
    if (!is_prime(p)) {
        throw std::invalid_argument("padic_valuation: " + std::to_string(p) + " is not prime");
    }
    if (r.is_zero()) {
        return Valuation::infinite();
    }
    return Valuation(remove_factor(r.numerator(), p) - remove_factor(r.denominator(), p));
}

bool is_p_integral(const Rat &r, std::uint64_t p)
{
    return padic_valuation(r, p) >= 0;
}

Rat frac_mod_int(const Rat &r)
{
    return r - Rat(r.floor());
}

Rat rational_binomial(const Rat &alpha, unsigned long k)
{
    Rat result(1);
    for (unsigned long j = 0; j < k; ++j) {
        result *= (alpha - Rat(j)) / Rat(j + 1);
    }
    return result;
}

Int factorial(unsigned long n)
{
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Int binomial(unsigned long n, unsigned long k)
{
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

PrimeList primes_up_to(std::uint64_t bound)
{
    PrimeList out;
    out.bound = bound;
    if (bound < 2) {
        return out;
    }
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) {
            continue;
        }
        out.primes.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) {
            composite[j] = true;
        }
    }
    return out;
}

} // namespace bhlab
