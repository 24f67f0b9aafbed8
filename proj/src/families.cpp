#include <bhlab/families.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bhlab
{

CurveSpec::CurveSpec(int a, int b) : m_a(a), m_b(b)
{
    if (a < 2 || b < 2) {
        throw std::invalid_argument("curve exponents must satisfy a, b >= 2 (got " + std::to_string(a) + ","
                                    + std::to_string(b) + ")");
    }
}

std::string CurveSpec::to_string() const
{
    return std::to_string(m_a) + "," + std::to_string(m_b);
}

CurveSpec CurveSpec::parse(std::string_view text)
{
    const auto comma = text.find(',');
    int a = 0;
    int b = 0;
    auto parse_int = [](std::string_view s, int &out) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
    };
    if (comma == std::string_view::npos || !parse_int(text.substr(0, comma), a)
        || !parse_int(text.substr(comma + 1), b)) {
        throw std::invalid_argument("malformed curve '" + std::string(text) + "', expected a,b");
    }
    return CurveSpec(a, b);
}

const std::vector<std::pair<std::string, CurveSpec>> &curve_presets()
{
    static const std::vector<std::pair<std::string, CurveSpec>> presets{
        {"bernoulli", CurveSpec(2, 2)}, {"hurwitz", CurveSpec(2, 4)}, {"c3", CurveSpec(3, 3)},
        {"c4", CurveSpec(4, 4)},        {"c5", CurveSpec(5, 5)},      {"c6", CurveSpec(2, 6)},
        {"c7", CurveSpec(7, 7)},        {"c8", CurveSpec(8, 8)},      {"c9", CurveSpec(9, 9)},
        {"c12", CurveSpec(3, 4)},
    };
    return presets;
}

std::vector<Rat> c_sequence(const CurveSpec &curve, std::size_t count)
{
    const auto s = binomial_series(curve.alpha(), static_cast<unsigned>(curve.b()), count);
    return {s.coefficients().begin(), s.coefficients().end()};
}

Series<Rat> cyclotomic_logarithm(const CurveSpec &curve, std::size_t order)
{
    const auto c = c_sequence(curve, order > 0 ? order - 1 : 0);
    return universal_logarithm<Rat>(c, order);
}

Series<Rat> cyclotomic_inverse(const CurveSpec &curve, std::size_t order)
{
    return revert(cyclotomic_logarithm(curve, order));
}

namespace
{

std::mutex universal_mutex;
std::vector<MPoly> universal_cache;

} // namespace

std::vector<MPoly> universal_bernoulli_table(std::size_t max_n)
{
    std::lock_guard lock(universal_mutex);
    if (universal_cache.size() <= max_n) {
        std::vector<MPoly> c;
        c.reserve(max_n + 1);
        c.emplace_back(1);
        for (std::size_t i = 1; i <= max_n; ++i) {
            c.push_back(MPoly::variable(static_cast<std::uint32_t>(i)));
        }
        universal_cache = bernoulli_type_numbers<MPoly>(c, max_n);
    }
    return {universal_cache.begin(), universal_cache.begin() + static_cast<std::ptrdiff_t>(max_n + 1)};
}

MPoly universal_bernoulli(std::size_t n)
{
    {
        std::lock_guard lock(universal_mutex);
        if (n < universal_cache.size()) {
            return universal_cache[n];
        }
    }
    return universal_bernoulli_table(n).back();
}

Assignment bernoulli_assignment(std::size_t n)
{
    Assignment out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.emplace(static_cast<std::uint32_t>(i), Rat(i % 2 == 0 ? 1 : -1));
    }
    return out;
}

Assignment curve_assignment(const CurveSpec &curve, std::size_t n)
{
    const auto c = c_sequence(curve, n + 1);
    Assignment out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.emplace(static_cast<std::uint32_t>(i), c[i]);
    }
    return out;
}

namespace
{

std::vector<Rat> bernoulli_recurrence(std::size_t max_n)
{
    std::vector<Rat> b;
    b.reserve(max_n + 1);
    b.emplace_back(1);
    for (std::size_t n = 1; n <= max_n; ++n) {
        Rat sum(0);
        for (std::size_t k = 0; k < n; ++k) {
            sum += Rat(binomial(n + 1, k)) * b[k];
        }
        b.push_back(-sum / Rat(static_cast<unsigned long>(n + 1)));
    }
    return b;
}

std::vector<Rat> bernoulli_series_division(std::size_t max_n)
{
    // (e^t - 1) / t = sum_k t^k / (k+1)!
    const auto e = exp_series(max_n + 2);
    const auto ratio = reciprocal(shift_down(e - Series<Rat>::constant(Rat(1), e.order()), 1));
    std::vector<Rat> out;
    out.reserve(max_n + 1);
    for (std::size_t n = 0; n <= max_n; ++n) {
        out.push_back(Rat(factorial(n)) * ratio[n]);
    }
    return out;
}

std::vector<Rat> bernoulli_universal(std::size_t max_n)
{
    std::vector<Rat> c;
    c.reserve(max_n + 1);
    for (std::size_t i = 0; i <= max_n; ++i) {
        c.emplace_back(i % 2 == 0 ? 1 : -1);
    }
    return bernoulli_type_numbers<Rat>(c, max_n);
}

// H_m from the coefficient of u^(m-2) in the Laurent expansion of P(u; 4, 0).
Rat hurwitz_from_coefficient(const Rat &coeff, std::size_t m)
{
    return coeff * Rat(factorial(m - 2)) * Rat(static_cast<unsigned long>(m)) / pow(Rat(2), m);
}

} // namespace

std::vector<Rat> bernoulli_table(std::size_t max_n, BernoulliRoute route)
{
    switch (route) {
        case BernoulliRoute::recurrence:
            return bernoulli_recurrence(max_n);
        case BernoulliRoute::series_division:
            return bernoulli_series_division(max_n);
        case BernoulliRoute::universal:
            return bernoulli_universal(max_n);
    }
    throw std::logic_error("unreachable");
}

Rat bernoulli(std::size_t n, BernoulliRoute route)
{
    return bernoulli_table(n, route).back();
}

std::vector<std::pair<std::size_t, Rat>> hurwitz_table(std::size_t max_m, HurwitzRoute route)
{
    std::vector<std::pair<std::size_t, Rat>> out;
    if (max_m < 4) {
        return out;
    }
    if (route == HurwitzRoute::weierstrass) {
        const auto tail = weierstrass_p_tail(Rat(4), Rat(0), max_m);
        for (std::size_t m = 4; m <= max_m; m += 4) {
            out.emplace_back(m, hurwitz_from_coefficient(tail[m - 2], m));
        }
    } else {
        const auto pe = pe_analogue(lemniscatic_curve, max_m + 1);
        for (std::size_t m = 4; m <= max_m; m += 4) {
            out.emplace_back(m, hurwitz_from_coefficient(pe.coefficient(static_cast<long>(m) - 2), m));
        }
    }
    return out;
}

Rat hurwitz(std::size_t m, HurwitzRoute route)
{
    if (m == 0 || m % 4 != 0) {
        throw std::invalid_argument("hurwitz: index must be a positive multiple of 4, got " + std::to_string(m));
    }
    return hurwitz_table(m, route).back().second;
}

std::vector<Rat> gbh_table(const CurveSpec &curve, std::size_t max_n, GbhRoute route)
{
    if (route == GbhRoute::reversion) {
        return bernoulli_type_numbers<Rat>(c_sequence(curve, max_n + 1), max_n);
    }
    const auto universal = universal_bernoulli_table(max_n);
    const auto assign = curve_assignment(curve, max_n);
    std::vector<Rat> out;
    out.reserve(max_n + 1);
    for (const auto &p : universal) {
        out.push_back(specialize(p, assign));
    }
    return out;
}

Rat gbh(const CurveSpec &curve, std::size_t n, GbhRoute route)
{
    if (route == GbhRoute::universal) {
        return specialize(universal_bernoulli(n), curve_assignment(curve, n));
    }
    return gbh_table(curve, n, route).back();
}

Laurent<Rat> pe_analogue(const CurveSpec &curve, std::size_t order)
{
    const auto x = cyclotomic_inverse(curve, order + 1);
    const auto unit = shift_down(x, 1);
    return Laurent<Rat>{curve.a(), reciprocal(power(unit, static_cast<unsigned long>(curve.a())))};
}

const std::vector<NormalizationInfo> &normalization_registry()
{
    static const std::vector<NormalizationInfo> registry{
        {Normalization::canonical, "canonical", "n! [t^n] t/x(t)"},
        {Normalization::pe_laurent, "pe-laurent",
         "E_n with 1/x(u)^a = u^-a + ... + sum_{n>=a} E_n/n * u^(n-a)/(n-a)!"},
        {Normalization::hurwitz, "hurwitz", "E_n / 2^n on the curve (2,4); equals the Hurwitz number H_n"},
    };
    return registry;
}

std::string_view to_string(Normalization n)
{
    for (const auto &info : normalization_registry()) {
        if (info.tag == n) {
            return info.name;
        }
    }
    throw std::logic_error("unregistered normalization");
}

Normalization parse_normalization(std::string_view name)
{
    for (const auto &info : normalization_registry()) {
        if (info.name == name) {
            return info.tag;
        }
    }
    throw std::invalid_argument("unknown normalization '" + std::string(name) + "'");
}

std::size_t first_index(Normalization n, const CurveSpec &curve)
{
    return n == Normalization::canonical ? 0 : static_cast<std::size_t>(curve.a());
}

std::vector<std::pair<std::size_t, Rat>> gbh_normalized_table(const CurveSpec &curve, Normalization norm,
                                                              std::size_t max_n)
{
    std::vector<std::pair<std::size_t, Rat>> out;
    if (norm == Normalization::canonical) {
        const auto values = gbh_table(curve, max_n);
        for (std::size_t n = 0; n < values.size(); ++n) {
            out.emplace_back(n, values[n]);
        }
        return out;
    }
    if (norm == Normalization::hurwitz && curve != lemniscatic_curve) {
        throw std::invalid_argument("normalization 'hurwitz' applies only to the curve 2,4");
    }
    const auto a = static_cast<std::size_t>(curve.a());
    if (max_n < a) {
        return out;
    }
    const auto pe = pe_analogue(curve, max_n + 1);
    for (std::size_t n = a; n <= max_n; ++n) {
        Rat e = Rat(static_cast<unsigned long>(n)) * Rat(factorial(n - a)) * pe.body[n];
        if (norm == Normalization::hurwitz) {
            e /= pow(Rat(2), n);
        }
        out.emplace_back(n, std::move(e));
    }
    return out;
}

std::string_view to_string(Family f)
{
    switch (f) {
        case Family::bernoulli:
            return "bernoulli";
        case Family::hurwitz:
            return "hurwitz";
        case Family::gbh:
            return "gbh";
        case Family::universal:
            return "universal";
    }
    throw std::logic_error("unreachable");
}

Family parse_family(std::string_view name)
{
    for (const auto f : {Family::bernoulli, Family::hurwitz, Family::gbh, Family::universal}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

void FamilyRef::validate() const
{
    if (family == Family::gbh) {
        if (!curve) {
            throw std::invalid_argument("family gbh requires a curve");
        }
        if (normalization == Normalization::hurwitz && *curve != lemniscatic_curve) {
            throw std::invalid_argument("normalization 'hurwitz' applies only to the curve 2,4");
        }
        return;
    }
    if (curve) {
        throw std::invalid_argument("family " + std::string(to_string(family)) + " takes no curve");
    }
    if (normalization != Normalization::canonical) {
        throw std::invalid_argument("family " + std::string(to_string(family)) + " supports only the canonical normalization");
    }
}

namespace
{

struct MemoKey {
    Family family;
    std::optional<CurveSpec> curve;
    Normalization normalization;

    friend auto operator<=>(const MemoKey &, const MemoKey &) = default;
};

// Prefix-extendable table: entries[n] is the value at n, or nullopt when undefined.
struct MemoTable {
    std::vector<std::optional<Rat>> entries;
};

std::mutex memo_mutex;
std::map<MemoKey, MemoTable> memo;

std::vector<std::optional<Rat>> compute_values(const FamilyRef &ref, std::size_t max_n)
{
    std::vector<std::optional<Rat>> out(max_n + 1);
    switch (ref.family) {
        case Family::bernoulli: {
            auto values = bernoulli_table(max_n);
            for (std::size_t n = 0; n <= max_n; ++n) {
                out[n] = std::move(values[n]);
            }
            break;
        }
        case Family::hurwitz:
            for (auto &[m, h] : hurwitz_table(max_n)) {
                out[m] = std::move(h);
            }
            break;
        case Family::gbh:
            for (auto &[n, v] : gbh_normalized_table(*ref.curve, ref.normalization, max_n)) {
                out[n] = std::move(v);
            }
            break;
        case Family::universal:
            throw std::invalid_argument("the universal family has polynomial values");
    }
    return out;
}

} // namespace

Rat family_value(const FamilyRef &ref, std::size_t n)
{
    ref.validate();
    if (ref.family == Family::universal) {
        throw std::invalid_argument("the universal family has polynomial values");
    }
    const MemoKey key{ref.family, ref.curve, ref.normalization};
    std::lock_guard lock(memo_mutex);
    auto &table = memo[key];
    if (table.entries.size() <= n) {
        const auto target = std::max<std::size_t>(n, 2 * table.entries.size());
        table.entries = compute_values(ref, target);
    }
    const auto &entry = table.entries[n];
    if (!entry) {
        throw std::domain_error(std::string(to_string(ref.family)) + " is undefined at index " + std::to_string(n));
    }
    return *entry;
}

Rat family_c_value(const FamilyRef &ref, std::size_t i)
{
    switch (ref.family) {
        case Family::bernoulli:
            return Rat(i % 2 == 0 ? 1 : -1);
        case Family::hurwitz:
            return c_sequence(lemniscatic_curve, i + 1)[i];
        case Family::gbh:
            ref.validate();
            return c_sequence(*ref.curve, i + 1)[i];
        case Family::universal:
            break;
    }
    throw std::invalid_argument("the universal family has no concrete c-values");
}

NumberTable make_table(const FamilyRef &ref, std::size_t max_n)
{
    ref.validate();
    NumberTable table;
    table.family = ref.family;
    table.curve = ref.curve;
    table.normalization = ref.normalization;
    switch (ref.family) {
        case Family::bernoulli:
            table.route = "convolution-recurrence";
            break;
        case Family::hurwitz:
            table.route = "weierstrass-recurrence";
            break;
        case Family::gbh:
            table.route = ref.normalization == Normalization::canonical ? "reversion" : "pe-analogue";
            break;
        case Family::universal: {
            table.route = "universal-reversion";
            const auto polys = universal_bernoulli_table(max_n);
            for (std::size_t n = 0; n < polys.size(); ++n) {
                table.values.emplace_back(n, polys[n].to_string());
            }
            return table;
        }
    }
    // Warm the memo once, then read the prefix.
    if (max_n > 0) {
        try {
            (void)family_value(ref, max_n);
        } catch (const std::domain_error &) {
        }
    }
    std::vector<std::optional<Rat>> entries;
    {
        std::lock_guard lock(memo_mutex);
        entries = memo[MemoKey{ref.family, ref.curve, ref.normalization}].entries;
    }
    if (entries.size() <= max_n) {
        entries = compute_values(ref, max_n);
    }
    for (std::size_t n = 0; n <= max_n; ++n) {
        if (entries[n]) {
            table.values.emplace_back(n, entries[n]->to_string());
        }
    }
    return table;
}

} // namespace bhlab
