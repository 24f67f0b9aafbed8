#ifndef BHLAB_FAMILIES_HPP
#define BHLAB_FAMILIES_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <bhlab/exact.hpp>
#include <bhlab/mpoly.hpp>
#include <bhlab/series.hpp>

namespace bhlab
{

inline constexpr std::string_view engine_version = "bhlab-1.0.0";

// The curve y^a = 1 - x^b, with a, b >= 2.
class CurveSpec
{
public:
    // Throws std::invalid_argument when a < 2 or b < 2.
    CurveSpec(int a, int b);

    int a() const
    {
        return m_a;
    }
    int b() const
    {
        return m_b;
    }
    // Exponent of the integrand (1 - x^b)^alpha, alpha = -(a - 1)/a.
    Rat alpha() const
    {
        return Rat(-(m_a - 1), m_a);
    }

    // "a,b"
    std::string to_string() const;
    // Parses "a,b".
    static CurveSpec parse(std::string_view text);

    friend bool operator==(const CurveSpec &, const CurveSpec &) = default;
    friend auto operator<=>(const CurveSpec &, const CurveSpec &) = default;

private:
    int m_a;
    int m_b;
};

inline const CurveSpec circular_curve{2, 2};
inline const CurveSpec lemniscatic_curve{2, 4};

// Named curves shipped with the tool.
const std::vector<std::pair<std::string, CurveSpec>> &curve_presets();

// c_i = [t^i] (1 - t^b)^alpha for i < count.
std::vector<Rat> c_sequence(const CurveSpec &curve, std::size_t count);

// u = F(x) = sum_i c_i x^(i+1) / (i+1), modulo x^order.
Series<Rat> cyclotomic_logarithm(const CurveSpec &curve, std::size_t order);

// x(u), the compositional inverse of the logarithm, modulo u^order.
Series<Rat> cyclotomic_inverse(const CurveSpec &curve, std::size_t order);

// sum_i c_i t^(i+1) / (i+1) modulo t^order, for any coefficient sequence
// with c_0 = 1. Needs at least order - 1 coefficients.
template <CoefficientRing C>
Series<C> universal_logarithm(std::span<const C> c, std::size_t order)
{
    if (order > 1 && c.size() < order - 1) {
        throw precision_error("universal_logarithm: " + std::to_string(order - 1) + " coefficients needed, "
                              + std::to_string(c.size()) + " given");
    }
    if (!c.empty() && !(c[0] == C(1))) {
        throw std::invalid_argument("universal_logarithm: c_0 must be 1");
    }
    std::vector<C> out(order, C(0));
    for (std::size_t i = 0; i + 1 < order; ++i) {
        out[i + 1] = div_int(c[i], static_cast<long>(i + 1));
    }
    return Series<C>(std::move(out));
}

// n! [t^n] t / G(t) for n <= max_n, where G reverts the logarithm built from c.
// With c_i the universal variables this gives the universal Bernoulli
// numbers; with concrete c_i it gives the corresponding specialisation.
template <CoefficientRing C>
std::vector<C> bernoulli_type_numbers(std::span<const C> c, std::size_t max_n)
{
    const auto log_series = universal_logarithm(c, max_n + 2);
    const auto inverse = revert(log_series);
    const auto ratio = reciprocal(shift_down(inverse, 1));
    std::vector<C> out;
    out.reserve(max_n + 1);
    C fact(1);
    for (std::size_t n = 0; n <= max_n; ++n) {
        if (n > 0) {
            fact = fact * C(static_cast<int>(n));
        }
        out.push_back(fact * ratio[n]);
    }
    return out;
}

// B^_n as a polynomial in c_1..c_n (memoized, thread-safe).
MPoly universal_bernoulli(std::size_t n);
std::vector<MPoly> universal_bernoulli_table(std::size_t max_n);

// c_i -> (-1)^i for 1 <= i <= n.
Assignment bernoulli_assignment(std::size_t n);
// c_i -> c_sequence(curve)_i for 1 <= i <= n.
Assignment curve_assignment(const CurveSpec &curve, std::size_t n);

enum class BernoulliRoute { recurrence, series_division, universal };

// B_n with B_1 = -1/2 (generator t / (e^t - 1)).
Rat bernoulli(std::size_t n, BernoulliRoute route = BernoulliRoute::recurrence);
std::vector<Rat> bernoulli_table(std::size_t max_n, BernoulliRoute route = BernoulliRoute::recurrence);

enum class HurwitzRoute { weierstrass, lemniscatic };

// Hurwitz number H_m, m a positive multiple of 4, normalized by
// P(u; 4, 0) = u^-2 + sum_{n>=1} 2^(4n) H_{4n} / (4n) * u^(4n-2) / (4n-2)!.
// Throws std::invalid_argument for other m.
Rat hurwitz(std::size_t m, HurwitzRoute route = HurwitzRoute::weierstrass);
// Pairs (m, H_m) for m = 4, 8, ... <= max_m.
std::vector<std::pair<std::size_t, Rat>> hurwitz_table(std::size_t max_m,
                                                       HurwitzRoute route = HurwitzRoute::weierstrass);

enum class GbhRoute { reversion, universal };

// GBH_n(curve) = n! [t^n] t / x(t) = specialize(B^_n, c_sequence(curve)).
Rat gbh(const CurveSpec &curve, std::size_t n, GbhRoute route = GbhRoute::reversion);
std::vector<Rat> gbh_table(const CurveSpec &curve, std::size_t max_n, GbhRoute route = GbhRoute::reversion);

// 1 / x(u)^a as (pole a, unit series modulo u^order).
Laurent<Rat> pe_analogue(const CurveSpec &curve, std::size_t order);

// Conventions under which GBH values can be reported.
enum class Normalization {
    // n! [t^n] t / x(t).
    canonical,
    // E_n with 1/x(u)^a = u^-a + ... + sum_{n>=a} E_n / n * u^(n-a) / (n-a)!.
    pe_laurent,
    // E_n / 2^n; defined for the lemniscatic curve only, where it gives H_n.
    hurwitz,
};

struct NormalizationInfo {
    Normalization tag;
    std::string_view name;
    std::string_view description;
};

const std::vector<NormalizationInfo> &normalization_registry();
std::string_view to_string(Normalization n);
// Throws std::invalid_argument for unknown names.
Normalization parse_normalization(std::string_view name);

// First index for which the convention is defined.
std::size_t first_index(Normalization n, const CurveSpec &curve);

// Values at first_index(norm, curve)..max_n. Throws std::invalid_argument
// when the convention does not apply to the curve.
std::vector<std::pair<std::size_t, Rat>> gbh_normalized_table(const CurveSpec &curve, Normalization norm,
                                                              std::size_t max_n);

enum class Family { bernoulli, hurwitz, gbh, universal };

std::string_view to_string(Family f);
// Throws std::invalid_argument for unknown names.
Family parse_family(std::string_view name);

// A fully qualified rational number family.
struct FamilyRef {
    Family family = Family::bernoulli;
    std::optional<CurveSpec> curve{};
    Normalization normalization = Normalization::canonical;

    // Throws std::invalid_argument on inconsistent combinations
    // (gbh without curve, curve on a family that takes none, ...).
    void validate() const;

    friend bool operator==(const FamilyRef &, const FamilyRef &) = default;
};

// Memoized rational family values; thread-safe. Throws std::domain_error
// when the family is undefined at n (e.g. H_m with 4 not dividing m) and
// std::invalid_argument for the polynomial family.
Rat family_value(const FamilyRef &ref, std::size_t n);

// The c_i attached to the family: (-1)^i for Bernoulli, the lemniscatic
// sequence for Hurwitz, the curve's sequence for GBH.
Rat family_c_value(const FamilyRef &ref, std::size_t i);

struct NumberTable {
    Family family = Family::bernoulli;
    std::optional<CurveSpec> curve;
    Normalization normalization = Normalization::canonical;
    std::string route;
    std::string engine_version{bhlab::engine_version};
    // (n, canonical text) in ascending n.
    std::vector<std::pair<std::size_t, std::string>> values;
};

NumberTable make_table(const FamilyRef &ref, std::size_t max_n);

} // namespace bhlab

#endif
