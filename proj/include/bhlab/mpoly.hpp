#ifndef BHLAB_MPOLY_HPP
#define BHLAB_MPOLY_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <bhlab/exact.hpp>

namespace bhlab
{

// A monomial c_{i1}^{e1} c_{i2}^{e2} ... in the universal coefficients,
// stored as (index, exponent) pairs with strictly increasing index and
// positive exponent. Indices start at 1.
class Monomial
{
public:
    using Factor = std::pair<std::uint32_t, std::uint32_t>;

    Monomial() = default;
    // Zero exponents are dropped; repeated indices are merged.
    Monomial(std::initializer_list<Factor> factors);
    explicit Monomial(std::vector<Factor> factors);

    static Monomial variable(std::uint32_t index, std::uint32_t exponent = 1);

    const std::vector<Factor> &factors() const
    {
        return m_factors;
    }
    bool is_constant() const
    {
        return m_factors.empty();
    }

    // Exponent of c_index (0 when absent).
    std::uint32_t exponent(std::uint32_t index) const;

    friend Monomial operator*(const Monomial &, const Monomial &);
    friend bool operator==(const Monomial &, const Monomial &) = default;

    // "c1^2*c3"; the constant monomial prints as "1".
    std::string to_string() const;

private:
    std::vector<Factor> m_factors;
};

// Isobaric weight: sum of index * exponent.
std::uint64_t weight(const Monomial &m);

// Graded order: lower weight first; within a weight, the monomial with the
// larger exponent at the first differing variable index comes first.
struct MonomialOrder {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

// Sparse polynomial over Rat in c_1, c_2, ... Zero coefficients are never stored.
class MPoly
{
public:
    using TermMap = std::map<Monomial, Rat, MonomialOrder>;

    MPoly() = default;
    MPoly(int c) : MPoly(Rat(c)) {}
    MPoly(long c) : MPoly(Rat(c)) {}
    explicit MPoly(const Rat &c);
    MPoly(const Monomial &m, const Rat &c);

    // The polynomial c_index.
    static MPoly variable(std::uint32_t index);

    const TermMap &terms() const
    {
        return m_terms;
    }
    std::size_t size() const
    {
        return m_terms.size();
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }
    // Coefficient of m (zero when absent).
    Rat coefficient(const Monomial &m) const;

    // Adds c * m.
    void add_term(const Monomial &m, const Rat &c);
    // *this += a * b, without forming the intermediate product.
    void add_product(const MPoly &a, const MPoly &b);

    // True when every term has weight exactly w (the zero polynomial qualifies).
    bool is_isobaric(std::uint64_t w) const;
    // Largest term weight; 0 for the zero polynomial.
    std::uint64_t max_weight() const;

    MPoly &operator+=(const MPoly &o);
    MPoly &operator-=(const MPoly &o);
    MPoly &operator*=(const Rat &c);

    friend MPoly operator+(MPoly a, const MPoly &b)
    {
        return a += b;
    }
    friend MPoly operator-(MPoly a, const MPoly &b)
    {
        return a -= b;
    }
    friend MPoly operator-(const MPoly &a);
    friend MPoly operator*(const MPoly &a, const MPoly &b);
    friend MPoly operator*(MPoly a, const Rat &c)
    {
        return a *= c;
    }
    friend MPoly operator*(const Rat &c, MPoly a)
    {
        return a *= c;
    }

    friend bool operator==(const MPoly &, const MPoly &) = default;

    // Terms in graded order, e.g. "3/2*c1^3 - 3*c1*c2 + 3/2*c3"; "0" for zero.
    std::string to_string() const;

private:
    TermMap m_terms;
};

// Product with every term of weight > max_weight discarded.
MPoly mpoly_mul_truncated(const MPoly &p, const MPoly &q, std::uint64_t max_weight);

// Assignment of rational values to the variables c_i.
using Assignment = std::map<std::uint32_t, Rat>;

// Exact evaluation. Throws std::out_of_range naming the first variable
// index that occurs in p but is missing from the assignment.
Rat specialize(const MPoly &p, const Assignment &assign);

// Coefficientwise fractional part; zero results are dropped.
MPoly frac_mod_int_poly(const MPoly &p);

// True when every coefficient is an integer.
bool has_integer_coefficients(const MPoly &p);

// Coefficient-ring hooks (see series.hpp).
inline bool is_zero(const MPoly &p)
{
    return p.is_zero();
}
MPoly div_int(const MPoly &p, long m);
inline void add_mul(MPoly &acc, const MPoly &a, const MPoly &b)
{
    acc.add_product(a, b);
}
inline std::string to_string(const MPoly &p)
{
    return p.to_string();
}

} // namespace bhlab

#endif
