#include <bhlab/mpoly.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bhlab
{

Monomial::Monomial(std::initializer_list<Factor> factors) : Monomial(std::vector<Factor>(factors)) {}

Monomial::Monomial(std::vector<Factor> factors)
{
    std::sort(factors.begin(), factors.end());
    for (const auto &[index, exp] : factors) {
        if (index == 0) {
            throw std::invalid_argument("Monomial: variable indices start at 1");
        }
        if (exp == 0) {
            continue;
        }
        if (!m_factors.empty() && m_factors.back().first == index) {
            m_factors.back().second += exp;
        } else {
            m_factors.emplace_back(index, exp);
        }
    }
}

Monomial Monomial::variable(std::uint32_t index, std::uint32_t exponent)
{
    return Monomial{{index, exponent}};
}

std::uint32_t Monomial::exponent(std::uint32_t index) const
{
    const auto it = std::lower_bound(m_factors.begin(), m_factors.end(), Factor{index, 0});
    return (it != m_factors.end() && it->first == index) ? it->second : 0;
}

Monomial operator*(const Monomial &a, const Monomial &b)
{
    Monomial r;
    auto &out = r.m_factors;
    out.reserve(a.m_factors.size() + b.m_factors.size());
    auto i = a.m_factors.begin();
    auto j = b.m_factors.begin();
    while (i != a.m_factors.end() && j != b.m_factors.end()) {
        if (i->first < j->first) {
            out.push_back(*i++);
        } else if (j->first < i->first) {
            out.push_back(*j++);
        } else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), i, a.m_factors.end());
    out.insert(out.end(), j, b.m_factors.end());
    return r;
}

std::string Monomial::to_string() const
{
    if (m_factors.empty()) {
        return "1";
    }
    std::string s;
    for (const auto &[index, exp] : m_factors) {
        if (!s.empty()) {
            s += '*';
        }
        s += 'c' + std::to_string(index);
        if (exp != 1) {
            s += '^' + std::to_string(exp);
        }
    }
    return s;
}

std::uint64_t weight(const Monomial &m)
{
    std::uint64_t w = 0;
    for (const auto &[index, exp] : m.factors()) {
        w += static_cast<std::uint64_t>(index) * exp;
    }
    return w;
}

bool MonomialOrder::operator()(const Monomial &a, const Monomial &b) const
{
    const auto wa = weight(a);
    const auto wb = weight(b);
    if (wa != wb) {
        return wa < wb;
    }
    const auto &fa = a.factors();
    const auto &fb = b.factors();
    std::size_t i = 0;
    for (; i < fa.size() && i < fb.size(); ++i) {
        if (fa[i].first != fb[i].first) {
            // The one with the smaller index has a positive exponent where the other has zero.
            return fa[i].first < fb[i].first;
        }
        if (fa[i].second != fb[i].second) {
            return fa[i].second > fb[i].second;
        }
    }
    // Equal weights make a strict prefix impossible unless both are exhausted.
    return i < fa.size();
}

MPoly::MPoly(const Rat &c)
{
    if (!c.is_zero()) {
        m_terms.emplace(Monomial{}, c);
    }
}

MPoly::MPoly(const Monomial &m, const Rat &c)
{
    if (!c.is_zero()) {
        m_terms.emplace(m, c);
    }
}

MPoly MPoly::variable(std::uint32_t index)
{
    return MPoly(Monomial::variable(index), Rat(1));
}

Rat MPoly::coefficient(const Monomial &m) const
{
    const auto it = m_terms.find(m);
    return it == m_terms.end() ? Rat(0) : it->second;
}

void MPoly::add_term(const Monomial &m, const Rat &c)
{
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = m_terms.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            m_terms.erase(it);
        }
    }
}

void MPoly::add_product(const MPoly &a, const MPoly &b)
{
    for (const auto &[ma, ca] : a.m_terms) {
        for (const auto &[mb, cb] : b.m_terms) {
            add_term(ma * mb, ca * cb);
        }
    }
}

bool MPoly::is_isobaric(std::uint64_t w) const
{
    return std::all_of(m_terms.begin(), m_terms.end(), [w](const auto &t) { return weight(t.first) == w; });
}

std::uint64_t MPoly::max_weight() const
{
    // Graded order puts the heaviest terms last.
    return m_terms.empty() ? 0 : weight(m_terms.rbegin()->first);
}

MPoly &MPoly::operator+=(const MPoly &o)
{
    for (const auto &[m, c] : o.m_terms) {
        add_term(m, c);
    }
    return *this;
}

MPoly &MPoly::operator-=(const MPoly &o)
{
    for (const auto &[m, c] : o.m_terms) {
        add_term(m, -c);
    }
    return *this;
}

MPoly &MPoly::operator*=(const Rat &c)
{
    if (c.is_zero()) {
        m_terms.clear();
        return *this;
    }
    for (auto &[m, coeff] : m_terms) {
        coeff *= c;
    }
    return *this;
}

MPoly operator-(const MPoly &a)
{
    MPoly r = a;
    for (auto &[m, c] : r.m_terms) {
        c = -c;
    }
    return r;
}

MPoly operator*(const MPoly &a, const MPoly &b)
{
    MPoly r;
    r.add_product(a, b);
    return r;
}

std::string MPoly::to_string() const
{
    if (m_terms.empty()) {
        return "0";
    }
    std::string s;
    bool first = true;
    for (const auto &[m, c] : m_terms) {
        Rat magnitude = c;
        if (first) {
            if (c.sign() < 0) {
                s += '-';
                magnitude = -c;
            }
        } else {
            s += c.sign() < 0 ? " - " : " + ";
            if (c.sign() < 0) {
                magnitude = -c;
            }
        }
        first = false;
        if (m.is_constant()) {
            s += magnitude.to_string();
        } else if (magnitude == Rat(1)) {
            s += m.to_string();
        } else {
            s += magnitude.to_string() + '*' + m.to_string();
        }
    }
    return s;
}

MPoly mpoly_mul_truncated(const MPoly &p, const MPoly &q, std::uint64_t max_weight)
{
    MPoly r;
    for (const auto &[ma, ca] : p.terms()) {
        const auto wa = weight(ma);
        if (wa > max_weight) {
            break;
        }
        for (const auto &[mb, cb] : q.terms()) {
            if (wa + weight(mb) > max_weight) {
                break;
            }
            r.add_term(ma * mb, ca * cb);
        }
    }
    return r;
}

Rat specialize(const MPoly &p, const Assignment &assign)
{
    // Cache of computed powers per variable.
    std::map<std::pair<std::uint32_t, std::uint32_t>, Rat> powers;
    Rat total(0);
    for (const auto &[m, c] : p.terms()) {
        Rat term = c;
        for (const auto &[index, exp] : m.factors()) {
            const auto it = assign.find(index);
            if (it == assign.end()) {
                throw std::out_of_range("specialize: no value assigned to c" + std::to_string(index));
            }
            auto [pit, inserted] = powers.try_emplace({index, exp});
            if (inserted) {
                pit->second = pow(it->second, exp);
            }
            term *= pit->second;
        }
        total += term;
    }
    return total;
}

MPoly frac_mod_int_poly(const MPoly &p)
{
    MPoly r;
    for (const auto &[m, c] : p.terms()) {
        r.add_term(m, frac_mod_int(c));
    }
    return r;
}

bool has_integer_coefficients(const MPoly &p)
{
    return std::all_of(p.terms().begin(), p.terms().end(), [](const auto &t) { return t.second.is_integer(); });
}

MPoly div_int(const MPoly &p, long m)
{
    return p * Rat(1, m);
}

} // namespace bhlab
