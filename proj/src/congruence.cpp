#include <bhlab/congruence.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace bhlab
{

std::string_view to_string(Verdict v)
{
    switch (v) {
        case Verdict::pass:
            return "pass";
        case Verdict::fail:
            return "fail";
        case Verdict::skipped:
            return "skipped";
    }
    throw std::logic_error("unreachable");
}

long CheckResult::param(std::string_view name) const
{
    for (const auto &[k, v] : params) {
        if (k == name) {
            return v;
        }
    }
    throw std::out_of_range("CheckResult: no parameter '" + std::string(name) + "'");
}

Verdict verdict_from_witness(const CheckResult &r)
{
    if (r.verdict == Verdict::skipped) {
        return Verdict::skipped;
    }
    auto decide = [](bool ok) { return ok ? Verdict::pass : Verdict::fail; };
    switch (r.test) {
        case WitnessTest::p_adic:
            return decide(padic_valuation(r.witness.value(), r.prime) >= r.exponent);
        case WitnessTest::integral:
            return decide(r.witness.value().is_integer());
        case WitnessTest::zero_polynomial:
            return decide(r.polynomial_witness.value().is_zero());
        case WitnessTest::integral_polynomial:
            return decide(has_integer_coefficients(r.polynomial_witness.value()));
        case WitnessTest::hurwitz_denominator: {
            const auto support = denominator_support(r.witness.value());
            const auto expected = hurwitz_law_primes(static_cast<std::size_t>(r.param("m")));
            bool ok = support.size() == expected.size();
            for (const auto p : expected) {
                const auto it = support.find(p);
                ok = ok && it != support.end() && it->second == -1;
            }
            return decide(ok);
        }
    }
    throw std::logic_error("unreachable");
}

std::size_t SweepReport::count(Verdict v) const
{
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [v](const CheckResult &c) { return c.verdict == v; }));
}

nlohmann::ordered_json to_json(const SweepReport &report)
{
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto &cell : report.cells) {
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto &[k, v] : cell.params) {
            params[k] = v;
        }
        nlohmann::ordered_json j;
        j["params"] = std::move(params);
        j["verdict"] = std::string(to_string(cell.verdict));
        if (!cell.reason.empty()) {
            j["reason"] = cell.reason;
        }
        if (cell.witness) {
            j["witness"] = cell.witness->to_string();
        } else if (cell.polynomial_witness) {
            j["witness"] = cell.polynomial_witness->to_string();
        }
        cells.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["template_id"] = report.template_id;
    out["cells"] = std::move(cells);
    out["summary"] = {{"pass", report.count(Verdict::pass)},
                      {"fail", report.count(Verdict::fail)},
                      {"skip", report.count(Verdict::skipped)}};
    return out;
}

namespace
{

constexpr std::uint64_t trial_division_limit = 1u << 20;

const std::vector<std::uint64_t> &small_primes()
{
    static const auto primes = primes_up_to(trial_division_limit).primes;
    return primes;
}

// Divisors d of n with d + 1 prime, as the primes d + 1, ascending.
std::vector<std::uint64_t> primes_with_p_minus_1_dividing(std::size_t n)
{
    std::vector<std::uint64_t> out;
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d == 0 && is_prime(d + 1)) {
            out.push_back(d + 1);
        }
    }
    return out;
}

} // namespace

std::map<std::uint64_t, long> denominator_support(const Rat &value)
{
    std::map<std::uint64_t, long> out;
    Int rest = value.denominator();
    for (const auto p : small_primes()) {
        if (rest == 1) {
            break;
        }
        const Int prime(static_cast<unsigned long>(p));
        if (prime * prime > rest) {
            // What is left has no factor <= sqrt(rest), so it is prime.
            if (!rest.fits_ulong_p()) {
                break;
            }
            out[rest.get_ui()] -= 1;
            rest = 1;
            break;
        }
        const long k = static_cast<long>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), prime.get_mpz_t()));
        if (k > 0) {
            out[p] = -k;
        }
    }
    if (rest != 1) {
        throw std::runtime_error("denominator_support: cofactor " + rest.get_str() + " exceeds trial division range");
    }
    return out;
}

std::map<std::uint64_t, long> denominator_support(const FamilyRef &family, std::size_t n)
{
    return denominator_support(family_value(family, n));
}

CheckResult von_staudt_classical(std::size_t n)
{
    if (n == 0 || n % 2 != 0) {
        throw std::invalid_argument("von_staudt_classical: n must be even and >= 2, got " + std::to_string(n));
    }
    Rat sum = family_value(FamilyRef{.family = Family::bernoulli}, n);
    for (const auto p : primes_with_p_minus_1_dividing(n)) {
        sum += Rat(1L, static_cast<long>(p));
    }
    CheckResult r;
    r.checker = "von-staudt-classical";
    r.params = {{"n", static_cast<long>(n)}};
    r.test = WitnessTest::integral;
    r.verdict = sum.is_integer() ? Verdict::pass : Verdict::fail;
    r.witness = std::move(sum);
    return r;
}

std::vector<std::uint64_t> hurwitz_law_primes(std::size_t m)
{
    std::vector<std::uint64_t> out{2};
    for (const auto p : primes_with_p_minus_1_dividing(m)) {
        if (p % 4 == 1) {
            out.push_back(p);
        }
    }
    return out;
}

CheckResult hurwitz_denominator_law(std::size_t m)
{
    if (m == 0 || m % 4 != 0) {
        throw std::invalid_argument("hurwitz_denominator_law: m must be a positive multiple of 4");
    }
    CheckResult r;
    r.checker = "hurwitz-denominator-law";
    r.params = {{"m", static_cast<long>(m)}};
    r.test = WitnessTest::hurwitz_denominator;
    r.witness = family_value(FamilyRef{.family = Family::hurwitz}, m);
    r.verdict = Verdict::pass;
    r.verdict = verdict_from_witness(r);
    return r;
}

CheckResult universal_von_staudt_even(std::size_t n)
{
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("universal_von_staudt_even: n must be even and >= 2, got " + std::to_string(n));
    }
    MPoly predicted;
    for (const auto p : primes_with_p_minus_1_dividing(n)) {
        const auto index = static_cast<std::uint32_t>(p - 1);
        const auto exponent = static_cast<std::uint32_t>(n / (p - 1));
        predicted.add_term(Monomial::variable(index, exponent), Rat(-1L, static_cast<long>(p)));
    }
    CheckResult r;
    r.checker = "universal-von-staudt-even";
    r.params = {{"n", static_cast<long>(n)}};
    r.test = WitnessTest::zero_polynomial;
    r.polynomial_witness = frac_mod_int_poly(universal_bernoulli(n)) - frac_mod_int_poly(predicted);
    r.verdict = r.polynomial_witness->is_zero() ? Verdict::pass : Verdict::fail;
    return r;
}

UniversalOddResult universal_von_staudt_odd(std::size_t n)
{
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("universal_von_staudt_odd: n must be odd and >= 3, got " + std::to_string(n));
    }
    const auto value = universal_bernoulli(n);
    const auto k = static_cast<std::uint32_t>(n);
    MPoly predicted;
    predicted.add_term(Monomial::variable(1, k), Rat(1, 2));
    predicted.add_term(Monomial{{1, k - 3}, {3, 1}}, Rat(1, 2));

    UniversalOddResult out;
    auto &frac = out.fractional;
    frac.checker = "universal-von-staudt-odd";
    frac.params = {{"n", static_cast<long>(n)}};
    frac.test = WitnessTest::zero_polynomial;
    frac.polynomial_witness = frac_mod_int_poly(value) - frac_mod_int_poly(predicted);
    frac.verdict = frac.polynomial_witness->is_zero() ? Verdict::pass : Verdict::fail;

    auto &twice = out.doubled_integrality;
    twice.checker = "universal-odd-doubled-integrality";
    twice.params = {{"n", static_cast<long>(n)}};
    twice.test = WitnessTest::integral_polynomial;
    twice.polynomial_witness = value * Rat(2);
    twice.verdict = has_integer_coefficients(*twice.polynomial_witness) ? Verdict::pass : Verdict::fail;
    return out;
}

CheckResult kummer_classical(std::uint64_t p, std::size_t m, std::size_t n)
{
    if (p < 5 || !is_prime(p)) {
        throw std::invalid_argument("kummer_classical: p must be a prime >= 5, got " + std::to_string(p));
    }
    if (m == 0 || n == 0 || m % 2 != 0 || n % 2 != 0) {
        throw std::invalid_argument("kummer_classical: m and n must be positive and even");
    }
    CheckResult r;
    r.checker = "kummer-classical";
    r.params = {{"p", static_cast<long>(p)}, {"m", static_cast<long>(m)}, {"n", static_cast<long>(n)}};
    r.prime = p;
    r.exponent = 1;
    r.test = WitnessTest::p_adic;
    if (m >= n) {
        r.reason = "requires m < n";
        return r;
    }
    if ((n - m) % (p - 1) != 0) {
        r.reason = "m and n not congruent mod p-1";
        return r;
    }
    if (m % (p - 1) == 0) {
        r.reason = "(p-1) divides m";
        return r;
    }
    const FamilyRef bern{.family = Family::bernoulli};
    Rat witness = family_value(bern, m) / Rat(static_cast<unsigned long>(m))
                  - family_value(bern, n) / Rat(static_cast<unsigned long>(n));
    r.verdict = padic_valuation(witness, p) >= 1 ? Verdict::pass : Verdict::fail;
    r.witness = std::move(witness);
    return r;
}

SweepReport von_staudt_suite(std::size_t max_n)
{
    SweepReport report{"von-staudt-classical", {}};
    for (std::size_t n = 2; n <= max_n; n += 2) {
        report.cells.push_back(von_staudt_classical(n));
    }
    return report;
}

namespace
{

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn &&fn)
{
    jobs = std::max(1u, jobs);
    if (jobs == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace

SweepReport kummer_suite(std::uint64_t p_max, std::size_t n_max, unsigned jobs)
{
    struct Cell {
        std::uint64_t p;
        std::size_t m, n;
    };
    std::vector<Cell> cells;
    for (const auto p : primes_up_to(p_max).primes) {
        if (p < 5) {
            continue;
        }
        for (std::size_t m = 2; m <= n_max; m += 2) {
            for (std::size_t n = m + 2; n <= n_max; n += 2) {
                if ((n - m) % (p - 1) == 0) {
                    cells.push_back({p, m, n});
                }
            }
        }
    }
    // Fill the Bernoulli memo before fanning out.
    if (n_max >= 2) {
        (void)family_value(FamilyRef{.family = Family::bernoulli}, n_max);
    }
    SweepReport report{"kummer-classical", std::vector<CheckResult>(cells.size())};
    parallel_for(cells.size(), jobs,
                 [&](std::size_t i) { report.cells[i] = kummer_classical(cells[i].p, cells[i].m, cells[i].n); });
    return report;
}

SweepReport hurwitz_law_suite(std::size_t max_m)
{
    SweepReport report{"hurwitz-denominator-law", {}};
    for (std::size_t m = 4; m <= max_m; m += 4) {
        report.cells.push_back(hurwitz_denominator_law(m));
    }
    return report;
}

SweepReport universal_suite(std::size_t max_n)
{
    SweepReport report{"universal-von-staudt", {}};
    (void)universal_bernoulli_table(max_n);
    for (std::size_t n = 2; n <= max_n; ++n) {
        if (n % 2 == 0) {
            report.cells.push_back(universal_von_staudt_even(n));
        } else if (n >= 3) {
            auto odd = universal_von_staudt_odd(n);
            report.cells.push_back(std::move(odd.fractional));
            report.cells.push_back(std::move(odd.doubled_integrality));
        }
    }
    return report;
}

// ---- Templates --------------------------------------------------------------

namespace
{

struct KindName {
    Expr::Kind kind;
    std::string_view name;
};

constexpr KindName expr_kinds[] = {
    {Expr::Kind::constant, "const"}, {Expr::Kind::variable, "var"}, {Expr::Kind::value, "value"},
    {Expr::Kind::c_value, "c"},      {Expr::Kind::add, "add"},      {Expr::Kind::sub, "sub"},
    {Expr::Kind::mul, "mul"},        {Expr::Kind::div, "div"},      {Expr::Kind::neg, "neg"},
    {Expr::Kind::pow, "pow"},
};

struct ConstraintName {
    IndexConstraint::Kind kind;
    std::string_view name;
    std::size_t arity;
};

constexpr ConstraintName constraint_kinds[] = {
    {IndexConstraint::Kind::congruent, "congruent", 3}, {IndexConstraint::Kind::divides, "divides", 2},
    {IndexConstraint::Kind::not_divides, "not_divides", 2}, {IndexConstraint::Kind::even, "even", 1},
    {IndexConstraint::Kind::odd, "odd", 1},             {IndexConstraint::Kind::less, "less", 2},
    {IndexConstraint::Kind::at_least, "at_least", 2},
};

const nlohmann::json &single_entry(const nlohmann::json &j, std::string &key, std::string_view what)
{
    if (!j.is_object() || j.size() != 1) {
        throw template_error(std::string(what) + " must be an object with exactly one key: " + j.dump());
    }
    key = j.begin().key();
    return j.begin().value();
}

std::vector<Expr> parse_args(const nlohmann::json &j, std::string_view op, std::size_t min, std::size_t max)
{
    if (!j.is_array() || j.size() < min || j.size() > max) {
        throw template_error("operator '" + std::string(op) + "' has the wrong number of arguments: " + j.dump());
    }
    std::vector<Expr> out;
    for (const auto &a : j) {
        out.push_back(Expr::from_json(a));
    }
    return out;
}

} // namespace

Expr Expr::from_json(const nlohmann::json &j)
{
    Expr e;
    if (j.is_number_integer()) {
        e.kind = Kind::constant;
        e.constant = Rat(j.get<long>());
        return e;
    }
    if (j.is_string()) {
        e.kind = Kind::variable;
        e.name = j.get<std::string>();
        return e;
    }
    std::string key;
    const auto &body = single_entry(j, key, "expression");
    const auto it = std::find_if(std::begin(expr_kinds), std::end(expr_kinds),
                                 [&](const KindName &k) { return k.name == key; });
    if (it == std::end(expr_kinds)) {
        throw template_error("unknown expression operator '" + key + "'");
    }
    e.kind = it->kind;
    switch (e.kind) {
        case Kind::constant:
            if (body.is_number_integer()) {
                e.constant = Rat(body.get<long>());
            } else if (body.is_string()) {
                try {
                    e.constant = Rat::parse(body.get<std::string>());
                } catch (const std::invalid_argument &ex) {
                    throw template_error(ex.what());
                }
            } else {
                throw template_error("constant must be an integer or a \"num/den\" string: " + body.dump());
            }
            break;
        case Kind::variable:
            if (!body.is_string()) {
                throw template_error("variable name must be a string: " + body.dump());
            }
            e.name = body.get<std::string>();
            break;
        case Kind::value:
        case Kind::c_value:
        case Kind::neg:
            e.args.push_back(from_json(body));
            break;
        case Kind::add:
        case Kind::mul:
            e.args = parse_args(body, key, 2, 64);
            break;
        case Kind::sub:
        case Kind::div:
        case Kind::pow:
            e.args = parse_args(body, key, 2, 2);
            break;
    }
    return e;
}

nlohmann::json Expr::to_json() const
{
    const auto name_of = [this] {
        for (const auto &k : expr_kinds) {
            if (k.kind == kind) {
                return std::string(k.name);
            }
        }
        throw std::logic_error("unreachable");
    };
    switch (kind) {
        case Kind::constant:
            if (constant.is_integer() && constant.numerator().fits_slong_p()) {
                return constant.numerator().get_si();
            }
            return {{"const", constant.to_string()}};
        case Kind::variable:
            return name;
        case Kind::value:
        case Kind::c_value:
        case Kind::neg:
            return {{name_of(), args.front().to_json()}};
        default: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto &a : args) {
                arr.push_back(a.to_json());
            }
            return {{name_of(), std::move(arr)}};
        }
    }
}

std::string Expr::to_text() const
{
    auto join = [this](std::string_view op) {
        std::string s = "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i > 0) {
                s += ' ';
                s += op;
                s += ' ';
            }
            s += args[i].to_text();
        }
        return s + ")";
    };
    switch (kind) {
        case Kind::constant:
            return constant.to_string();
        case Kind::variable:
            return name;
        case Kind::value:
            return "F[" + args[0].to_text() + "]";
        case Kind::c_value:
            return "c[" + args[0].to_text() + "]";
        case Kind::add:
            return join("+");
        case Kind::sub:
            return join("-");
        case Kind::mul:
            return join("*");
        case Kind::div:
            return join("/");
        case Kind::neg:
            return "-" + args[0].to_text();
        case Kind::pow:
            return join("^");
    }
    throw std::logic_error("unreachable");
}

IndexConstraint IndexConstraint::from_json(const nlohmann::json &j)
{
    std::string key;
    const auto &body = single_entry(j, key, "index constraint");
    const auto it = std::find_if(std::begin(constraint_kinds), std::end(constraint_kinds),
                                 [&](const ConstraintName &k) { return k.name == key; });
    if (it == std::end(constraint_kinds)) {
        throw template_error("unknown index constraint '" + key + "'");
    }
    IndexConstraint c;
    c.kind = it->kind;
    if (it->arity == 1) {
        c.args.push_back(Expr::from_json(body));
    } else {
        c.args = parse_args(body, key, it->arity, it->arity);
    }
    return c;
}

nlohmann::json IndexConstraint::to_json() const
{
    for (const auto &k : constraint_kinds) {
        if (k.kind == kind) {
            if (k.arity == 1) {
                return {{std::string(k.name), args[0].to_json()}};
            }
            nlohmann::json arr = nlohmann::json::array();
            for (const auto &a : args) {
                arr.push_back(a.to_json());
            }
            return {{std::string(k.name), std::move(arr)}};
        }
    }
    throw std::logic_error("unreachable");
}

std::string IndexConstraint::to_text() const
{
    switch (kind) {
        case Kind::congruent:
            return args[0].to_text() + " == " + args[1].to_text() + " mod " + args[2].to_text();
        case Kind::divides:
            return args[0].to_text() + " | " + args[1].to_text();
        case Kind::not_divides:
            return args[0].to_text() + " !| " + args[1].to_text();
        case Kind::even:
            return "even " + args[0].to_text();
        case Kind::odd:
            return "odd " + args[0].to_text();
        case Kind::less:
            return args[0].to_text() + " < " + args[1].to_text();
        case Kind::at_least:
            return args[0].to_text() + " >= " + args[1].to_text();
    }
    throw std::logic_error("unreachable");
}

bool PrimeFilter::accepts(std::uint64_t p) const
{
    if (p < min || std::find(exclude.begin(), exclude.end(), p) != exclude.end()) {
        return false;
    }
    if (residues.empty()) {
        return true;
    }
    return std::any_of(residues.begin(), residues.end(), [p](const auto &rm) { return p % rm.second == rm.first; });
}

namespace
{

void check_variables(const Expr &e, const std::set<std::string> &allowed)
{
    if (e.kind == Expr::Kind::variable && !allowed.count(e.name)) {
        throw template_error("unknown variable '" + e.name + "'");
    }
    for (const auto &a : e.args) {
        check_variables(a, allowed);
    }
}

template <typename T>
T required(const nlohmann::json &j, const char *key)
{
    if (!j.contains(key)) {
        throw template_error(std::string("template is missing '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &ex) {
        throw template_error(std::string("template field '") + key + "': " + ex.what());
    }
}

// Evaluation failures turn into skips.
struct cell_skip {
    std::string reason;
};

struct EvalContext {
    const FamilyRef &family;
    std::vector<std::pair<std::string, long>> vars;

    Rat eval(const Expr &e) const
    {
        switch (e.kind) {
            case Expr::Kind::constant:
                return e.constant;
            case Expr::Kind::variable:
                for (const auto &[k, v] : vars) {
                    if (k == e.name) {
                        return Rat(v);
                    }
                }
                throw std::logic_error("unbound variable " + e.name);
            case Expr::Kind::value: {
                const auto i = index(e.args[0]);
                try {
                    return family_value(family, i);
                } catch (const std::domain_error &ex) {
                    throw cell_skip{ex.what()};
                }
            }
            case Expr::Kind::c_value:
                return family_c_value(family, index(e.args[0]));
            case Expr::Kind::add: {
                Rat s(0);
                for (const auto &a : e.args) {
                    s += eval(a);
                }
                return s;
            }
            case Expr::Kind::mul: {
                Rat s(1);
                for (const auto &a : e.args) {
                    s *= eval(a);
                }
                return s;
            }
            case Expr::Kind::sub:
                return eval(e.args[0]) - eval(e.args[1]);
            case Expr::Kind::div: {
                const auto den = eval(e.args[1]);
                if (den.is_zero()) {
                    throw cell_skip{"division by zero in " + e.to_text()};
                }
                return eval(e.args[0]) / den;
            }
            case Expr::Kind::neg:
                return -eval(e.args[0]);
            case Expr::Kind::pow: {
                const auto base = eval(e.args[0]);
                const auto exp = eval(e.args[1]);
                if (!exp.is_integer() || !exp.numerator().fits_slong_p()) {
                    throw cell_skip{"non-integral exponent in " + e.to_text()};
                }
                const long k = exp.numerator().get_si();
                if (k < 0 && base.is_zero()) {
                    throw cell_skip{"zero to a negative power in " + e.to_text()};
                }
                const auto r = pow(base, static_cast<unsigned long>(k < 0 ? -k : k));
                return k < 0 ? r.inverse() : r;
            }
        }
        throw std::logic_error("unreachable");
    }

    std::size_t index(const Expr &e) const
    {
        const auto v = eval(e);
        if (!v.is_integer() || v.sign() < 0 || !v.numerator().fits_ulong_p()) {
            throw cell_skip{"index " + e.to_text() + " = " + v.to_string() + " is not a non-negative integer"};
        }
        return v.numerator().get_ui();
    }

    Int integer(const Expr &e) const
    {
        const auto v = eval(e);
        if (!v.is_integer()) {
            throw cell_skip{"index expression " + e.to_text() + " is not an integer"};
        }
        return v.numerator();
    }

    bool holds(const IndexConstraint &c) const
    {
        auto divides = [](const Int &d, const Int &x) { return d == 0 ? x == 0 : mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0; };
        switch (c.kind) {
            case IndexConstraint::Kind::congruent:
                return divides(integer(c.args[2]), integer(c.args[0]) - integer(c.args[1]));
            case IndexConstraint::Kind::divides:
                return divides(integer(c.args[0]), integer(c.args[1]));
            case IndexConstraint::Kind::not_divides:
                return !divides(integer(c.args[0]), integer(c.args[1]));
            case IndexConstraint::Kind::even:
                return mpz_even_p(integer(c.args[0]).get_mpz_t()) != 0;
            case IndexConstraint::Kind::odd:
                return mpz_odd_p(integer(c.args[0]).get_mpz_t()) != 0;
            case IndexConstraint::Kind::less:
                return eval(c.args[0]) < eval(c.args[1]);
            case IndexConstraint::Kind::at_least:
                return eval(c.args[0]) >= eval(c.args[1]);
        }
        throw std::logic_error("unreachable");
    }
};

} // namespace

CongruenceTemplate CongruenceTemplate::from_json(const nlohmann::json &j)
{
    static const std::set<std::string> known_keys{"id",          "description",        "family",
                                                  "curve",       "normalization",      "indices",
                                                  "index_constraints", "prime_filter", "require_p_integral",
                                                  "modulus_exponent",  "lhs",          "rhs"};
    if (!j.is_object()) {
        throw template_error("template must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (!known_keys.count(key)) {
            throw template_error("unknown template field '" + key + "'");
        }
    }
    CongruenceTemplate t;
    t.id = required<std::string>(j, "id");
    if (t.id.empty()) {
        throw template_error("template id must not be empty");
    }
    t.description = j.value("description", std::string());
    try {
        t.family.family = parse_family(required<std::string>(j, "family"));
        if (j.contains("curve")) {
            const auto curve = j.at("curve").get<std::vector<int>>();
            if (curve.size() != 2) {
                throw template_error("curve must be [a, b]");
            }
            t.family.curve = CurveSpec(curve[0], curve[1]);
        }
        if (j.contains("normalization")) {
            t.family.normalization = parse_normalization(j.at("normalization").get<std::string>());
        }
        t.family.validate();
    } catch (const std::invalid_argument &ex) {
        throw template_error(ex.what());
    } catch (const nlohmann::json::exception &ex) {
        throw template_error(std::string("template family: ") + ex.what());
    }
    if (t.family.family == Family::universal) {
        throw template_error("templates require a rational family");
    }

    t.indices = required<std::vector<std::string>>(j, "indices");
    if (t.indices.empty() || t.indices.size() > 2) {
        throw template_error("templates take one or two indices");
    }
    std::set<std::string> allowed{"p"};
    for (const auto &name : t.indices) {
        if (name.empty() || !allowed.insert(name).second) {
            throw template_error("index names must be distinct, non-empty and not 'p'");
        }
    }

    if (j.contains("index_constraints")) {
        if (!j.at("index_constraints").is_array()) {
            throw template_error("index_constraints must be an array");
        }
        for (const auto &c : j.at("index_constraints")) {
            t.constraints.push_back(IndexConstraint::from_json(c));
        }
    }
    if (j.contains("prime_filter")) {
        const auto &pf = j.at("prime_filter");
        if (!pf.is_object()) {
            throw template_error("prime_filter must be an object");
        }
        try {
            for (const auto &[key, value] : pf.items()) {
                if (key == "min") {
                    t.prime_filter.min = value.get<std::uint64_t>();
                } else if (key == "residues") {
                    for (const auto &rm : value) {
                        const auto pair = rm.get<std::vector<std::uint64_t>>();
                        if (pair.size() != 2 || pair[1] == 0) {
                            throw template_error("prime_filter residues are [residue, modulus] pairs");
                        }
                        t.prime_filter.residues.emplace_back(pair[0], pair[1]);
                    }
                } else if (key == "exclude") {
                    t.prime_filter.exclude = value.get<std::vector<std::uint64_t>>();
                } else if (key == "include_p2") {
                    t.prime_filter.include_p2 = value.get<bool>();
                } else {
                    throw template_error("unknown prime_filter field '" + key + "'");
                }
            }
        } catch (const nlohmann::json::exception &ex) {
            throw template_error(std::string("prime_filter: ") + ex.what());
        }
    }
    if (j.contains("require_p_integral")) {
        if (!j.at("require_p_integral").is_array()) {
            throw template_error("require_p_integral must be an array");
        }
        for (const auto &e : j.at("require_p_integral")) {
            t.require_p_integral.push_back(Expr::from_json(e));
        }
    }
    if (j.contains("modulus_exponent")) {
        const auto &e = j.at("modulus_exponent");
        if (!e.is_number_integer() || e.get<long>() < 1) {
            throw template_error("modulus_exponent must be an integer >= 1");
        }
        t.modulus_exponent = e.get<long>();
    }
    if (!j.contains("lhs") || !j.contains("rhs")) {
        throw template_error("template needs both 'lhs' and 'rhs'");
    }
    t.lhs = Expr::from_json(j.at("lhs"));
    t.rhs = Expr::from_json(j.at("rhs"));

    check_variables(t.lhs, allowed);
    check_variables(t.rhs, allowed);
    for (const auto &e : t.require_p_integral) {
        check_variables(e, allowed);
    }
    for (const auto &c : t.constraints) {
        for (const auto &a : c.args) {
            check_variables(a, allowed);
        }
    }
    return t;
}

CongruenceTemplate CongruenceTemplate::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read template file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &ex) {
        throw template_error("template file '" + path + "' is not valid JSON: " + ex.what());
    }
    return from_json(j);
}

nlohmann::json CongruenceTemplate::to_json() const
{
    nlohmann::json j;
    j["id"] = id;
    if (!description.empty()) {
        j["description"] = description;
    }
    j["family"] = std::string(bhlab::to_string(family.family));
    if (family.curve) {
        j["curve"] = {family.curve->a(), family.curve->b()};
    }
    j["normalization"] = std::string(bhlab::to_string(family.normalization));
    j["indices"] = indices;
    nlohmann::json cs = nlohmann::json::array();
    for (const auto &c : constraints) {
        cs.push_back(c.to_json());
    }
    j["index_constraints"] = std::move(cs);
    nlohmann::json pf;
    pf["min"] = prime_filter.min;
    nlohmann::json res = nlohmann::json::array();
    for (const auto &[r, m] : prime_filter.residues) {
        res.push_back({r, m});
    }
    pf["residues"] = std::move(res);
    pf["exclude"] = prime_filter.exclude;
    pf["include_p2"] = prime_filter.include_p2;
    j["prime_filter"] = std::move(pf);
    nlohmann::json req = nlohmann::json::array();
    for (const auto &e : require_p_integral) {
        req.push_back(e.to_json());
    }
    j["require_p_integral"] = std::move(req);
    j["modulus_exponent"] = modulus_exponent;
    j["lhs"] = lhs.to_json();
    j["rhs"] = rhs.to_json();
    return j;
}

CheckResult CongruenceTemplate::evaluate(std::uint64_t p, const std::vector<long> &index_values) const
{
    CheckResult r;
    r.checker = id;
    r.prime = p;
    r.exponent = modulus_exponent;
    r.test = WitnessTest::p_adic;
    r.params.emplace_back("p", static_cast<long>(p));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        r.params.emplace_back(indices[i], index_values.at(i));
    }
    if (p == 2 && family.family == Family::gbh && !prime_filter.include_p2) {
        r.reason = "p = 2 excluded for GBH templates";
        return r;
    }
    const EvalContext ctx{family, r.params};
    try {
        for (const auto &c : constraints) {
            if (!ctx.holds(c)) {
                r.reason = "index constraint: " + c.to_text();
                return r;
            }
        }
        for (const auto &e : require_p_integral) {
            if (!is_p_integral(ctx.eval(e), p)) {
                r.reason = "not p-integral: " + e.to_text();
                return r;
            }
        }
        const auto left = ctx.eval(lhs);
        if (!is_p_integral(left, p)) {
            r.reason = "not p-integral: lhs";
            return r;
        }
        const auto right = ctx.eval(rhs);
        if (!is_p_integral(right, p)) {
            r.reason = "not p-integral: rhs";
            return r;
        }
        Rat witness = left - right;
        r.verdict = padic_valuation(witness, p) >= modulus_exponent ? Verdict::pass : Verdict::fail;
        r.witness = std::move(witness);
    } catch (const cell_skip &s) {
        r.reason = s.reason;
    }
    return r;
}

SweepReport template_sweep(const CongruenceTemplate &tmpl, const SweepRange &range, unsigned jobs)
{
    struct Cell {
        std::uint64_t p;
        std::vector<long> indices;
    };
    std::vector<Cell> cells;
    for (const auto p : primes_up_to(range.p_max).primes) {
        if (!tmpl.prime_filter.accepts(p)) {
            continue;
        }
        if (tmpl.indices.size() == 1) {
            for (long n = range.n_min; n <= range.n_max; ++n) {
                cells.push_back({p, {n}});
            }
        } else {
            for (long m = range.n_min; m <= range.n_max; ++m) {
                for (long n = m + 1; n <= range.n_max; ++n) {
                    cells.push_back({p, {m, n}});
                }
            }
        }
    }
    SweepReport report{tmpl.id, std::vector<CheckResult>(cells.size())};
    parallel_for(cells.size(), jobs,
                 [&](std::size_t i) { report.cells[i] = tmpl.evaluate(cells[i].p, cells[i].indices); });
    return report;
}

namespace
{

// Kept in sync with templates/*.json (checked by the test suite).
constexpr std::string_view builtin_template_sources[] = {
    R"json({
  "id": "kummer-classical",
  "description": "B_m/m == B_n/n mod p for m == n mod p-1, (p-1) not dividing m",
  "family": "bernoulli",
  "indices": ["m", "n"],
  "index_constraints": [
    {"even": "m"},
    {"even": "n"},
    {"less": ["m", "n"]},
    {"congruent": ["m", "n", {"sub": ["p", 1]}]},
    {"not_divides": [{"sub": ["p", 1]}, "m"]}
  ],
  "prime_filter": {"min": 5},
  "modulus_exponent": 1,
  "lhs": {"div": [{"value": "m"}, "m"]},
  "rhs": {"div": [{"value": "n"}, "n"]}
})json",
    R"json({
  "id": "hurwitz-sanity",
  "description": "Trivial congruence 0 == 0 over primes p = 3 mod 4",
  "family": "hurwitz",
  "indices": ["n"],
  "prime_filter": {"residues": [[3, 4]]},
  "lhs": 0,
  "rhs": 0
})json",
    R"json({
  "id": "gbh-2-4-kummer",
  "description": "Kummer-type shape G_{n+p-1}/(n+p-1) == c_{p-1} G_n/n mod p on the curve (2,4)",
  "family": "gbh",
  "curve": [2, 4],
  "normalization": "canonical",
  "indices": ["n"],
  "index_constraints": [
    {"divides": [4, "n"]}
  ],
  "prime_filter": {"residues": [[1, 4]]},
  "require_p_integral": [{"c": {"sub": ["p", 1]}}],
  "modulus_exponent": 1,
  "lhs": {"div": [{"value": {"add": ["n", "p", -1]}}, {"add": ["n", "p", -1]}]},
  "rhs": {"mul": [{"c": {"sub": ["p", 1]}}, {"div": [{"value": "n"}, "n"]}]}
})json",
};

} // namespace

const std::vector<CongruenceTemplate> &builtin_templates()
{
    static const std::vector<CongruenceTemplate> templates = [] {
        std::vector<CongruenceTemplate> out;
        for (const auto src : builtin_template_sources) {
            out.push_back(CongruenceTemplate::from_json(nlohmann::json::parse(src)));
        }
        return out;
    }();
    return templates;
}

const CongruenceTemplate &builtin_template(std::string_view id)
{
    for (const auto &t : builtin_templates()) {
        if (t.id == id) {
            return t;
        }
    }
    throw std::invalid_argument("unknown built-in template '" + std::string(id) + "'");
}

} // namespace bhlab
