#ifndef BHLAB_CONGRUENCE_HPP
#define BHLAB_CONGRUENCE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include <bhlab/exact.hpp>
#include <bhlab/families.hpp>
#include <bhlab/mpoly.hpp>

namespace bhlab
{

enum class Verdict { pass, fail, skipped };

std::string_view to_string(Verdict v);

// How a witness decides pass/fail.
enum class WitnessTest {
    // v_p(witness) >= exponent
    p_adic,
    // witness is an integer
    integral,
    // polynomial witness is zero
    zero_polynomial,
    // polynomial witness has integer coefficients
    integral_polynomial,
    // witness is H_m and its denominator matches the Hurwitz law for m
    hurwitz_denominator,
};

struct CheckResult {
    std::string checker;
    std::vector<std::pair<std::string, long>> params;
    Verdict verdict = Verdict::skipped;
    std::string reason;
    WitnessTest test = WitnessTest::p_adic;
    std::optional<Rat> witness;
    std::optional<MPoly> polynomial_witness;
    std::uint64_t prime = 0;
    long exponent = 1;

    long param(std::string_view name) const;
};

// Re-derives pass/fail from the stored witness alone. Skipped results stay skipped.
Verdict verdict_from_witness(const CheckResult &r);

struct SweepReport {
    std::string template_id;
    std::vector<CheckResult> cells;

    std::size_t count(Verdict v) const;
    bool no_failures() const
    {
        return count(Verdict::fail) == 0;
    }
};

// {template_id, cells: [{params, verdict, reason?, witness?}], summary: {pass, fail, skip}}
nlohmann::ordered_json to_json(const SweepReport &report);

// Primes dividing the denominator, with their (negative) valuations.
std::map<std::uint64_t, long> denominator_support(const Rat &value);
std::map<std::uint64_t, long> denominator_support(const FamilyRef &family, std::size_t n);

// B_n + sum_{(p-1) | n} 1/p is an integer. Throws std::invalid_argument for odd or zero n.
CheckResult von_staudt_classical(std::size_t n);

// support(H_m) = {2} u {p = 1 mod 4 : (p-1) | m}, every valuation -1.
// Throws std::invalid_argument unless m is a positive multiple of 4.
CheckResult hurwitz_denominator_law(std::size_t m);
// The prime set the law predicts for H_m.
std::vector<std::uint64_t> hurwitz_law_primes(std::size_t m);

// frac(B^_n) = frac(-sum_{(p-1) | n} c_{p-1}^{n/(p-1)} / p). Throws for odd n or n < 2.
CheckResult universal_von_staudt_even(std::size_t n);

struct UniversalOddResult {
    // frac(B^_n) = frac(c_1^(n-3) (c_1^3 + c_3) / 2)
    CheckResult fractional;
    // 2 B^_n has integer coefficients
    CheckResult doubled_integrality;
};
// Throws std::invalid_argument for even n or n < 3.
UniversalOddResult universal_von_staudt_odd(std::size_t n);

// B_m/m = B_n/n mod p when m = n mod (p-1) and (p-1) does not divide m.
// p must be a prime >= 5 and m, n positive and even (std::invalid_argument
// otherwise); unmet congruence side conditions give a skip.
CheckResult kummer_classical(std::uint64_t p, std::size_t m, std::size_t n);

// Dedicated checker suites, used by the CLI `verify` command.
SweepReport von_staudt_suite(std::size_t max_n);
SweepReport kummer_suite(std::uint64_t p_max, std::size_t n_max, unsigned jobs = 1);
SweepReport hurwitz_law_suite(std::size_t max_m);
SweepReport universal_suite(std::size_t max_n);

// ---- Congruence templates -------------------------------------------------

// Raised for malformed templates.
class template_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Expression tree over constants, the sweep variables (p and the indices),
// family values F[i], c-values c[i] and the four field operations.
struct Expr {
    enum class Kind { constant, variable, value, c_value, add, sub, mul, div, neg, pow };

    Kind kind = Kind::constant;
    Rat constant;
    std::string name;
    std::vector<Expr> args;

    static Expr from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
    std::string to_text() const;
};

struct IndexConstraint {
    enum class Kind { congruent, divides, not_divides, even, odd, less, at_least };

    Kind kind = Kind::even;
    std::vector<Expr> args;

    static IndexConstraint from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
    std::string to_text() const;
};

struct PrimeFilter {
    std::uint64_t min = 2;
    // Accept p when p mod m == r for any (r, m); empty means no restriction.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> residues;
    std::vector<std::uint64_t> exclude;
    // GBH templates skip p = 2 unless this is set.
    bool include_p2 = false;

    bool accepts(std::uint64_t p) const;
};

class CongruenceTemplate
{
public:
    // Validates the whole template; throws template_error on any defect.
    static CongruenceTemplate from_json(const nlohmann::json &j);
    // Reads and parses a template file. Throws std::runtime_error when the
    // file cannot be read and template_error when it is malformed.
    static CongruenceTemplate load(const std::string &path);
    nlohmann::json to_json() const;

    std::string id;
    std::string description;
    FamilyRef family;
    std::vector<std::string> indices;
    std::vector<IndexConstraint> constraints;
    PrimeFilter prime_filter;
    std::vector<Expr> require_p_integral;
    long modulus_exponent = 1;
    Expr lhs;
    Expr rhs;

    // Evaluates one cell. `index_values` follow `indices`.
    CheckResult evaluate(std::uint64_t p, const std::vector<long> &index_values) const;
};

struct SweepRange {
    std::uint64_t p_max = 13;
    long n_min = 1;
    long n_max = 30;
};

// Exhaustive evaluation over primes <= p_max passing the filter and indices
// in [n_min, n_max] (pairs m < n for two-index templates). Cells are sorted
// by (p, indices) regardless of `jobs`.
SweepReport template_sweep(const CongruenceTemplate &tmpl, const SweepRange &range, unsigned jobs = 1);

// Templates shipped with the tool: kummer-classical, hurwitz-sanity, gbh-2-4-kummer.
const std::vector<CongruenceTemplate> &builtin_templates();
// Throws std::invalid_argument for unknown ids.
const CongruenceTemplate &builtin_template(std::string_view id);

} // namespace bhlab

#endif
