#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include <bhlab/congruence.hpp>

#include "oracles.hpp"

using namespace bhlab;

#ifndef BHLAB_TEMPLATE_DIR
#error "BHLAB_TEMPLATE_DIR must be defined"
#endif

TEST_CASE("von Staudt-Clausen")
{
    CHECK(von_staudt_classical(2).verdict == Verdict::pass);
    CHECK(von_staudt_classical(12).verdict == Verdict::pass);
    CHECK_THROWS_AS(von_staudt_classical(1), std::invalid_argument);
    CHECK(von_staudt_suite(60).no_failures());
    CHECK(von_staudt_suite(60).count(Verdict::pass) == 30);
}

TEST_CASE("denominator support")
{
    CHECK(denominator_support(Rat(1, 6)) == std::map<std::uint64_t, long>{{2, -1}, {3, -1}});
    CHECK(denominator_support(Rat(-691, 2730)).size() == 5);
    CHECK(denominator_support(FamilyRef{.family = Family::hurwitz}, 4) == std::map<std::uint64_t, long>{{2, -1}, {5, -1}});
    CHECK(denominator_support(FamilyRef{.family = Family::hurwitz}, 8) == std::map<std::uint64_t, long>{{2, -1}, {5, -1}});
    CHECK(denominator_support(Rat(7)).empty());
}

TEST_CASE("Hurwitz denominator law against the factorization oracle")
{
    const auto reference = oracle::hurwitz(40);
    for (std::size_t m = 4; m <= 40; m += 4) {
        const auto r = hurwitz_denominator_law(m);
        CHECK(r.verdict == Verdict::pass);
        std::set<std::uint64_t> expected;
        for (auto [p, e] : oracle::factor(reference.at(static_cast<unsigned>(m)).get_den())) {
            CHECK(e == 1);
            expected.insert(p);
        }
        const auto law = hurwitz_law_primes(m);
        CHECK(std::set<std::uint64_t>(law.begin(), law.end()) == expected);
    }
}

TEST_CASE("universal von Staudt")
{
    CHECK(universal_von_staudt_even(2).verdict == Verdict::pass);
    CHECK(universal_von_staudt_even(4).verdict == Verdict::pass);
    CHECK_THROWS_AS(universal_von_staudt_even(1), std::invalid_argument);
    const auto odd3 = universal_von_staudt_odd(3);
    CHECK(odd3.fractional.verdict == Verdict::pass);
    const MPoly c1 = MPoly::variable(1), c3 = MPoly::variable(3);
    CHECK(frac_mod_int_poly(universal_bernoulli(3)) == Rat(1, 2) * (c1 * c1 * c1 + c3));
    CHECK(odd3.doubled_integrality.verdict == Verdict::pass);
    CHECK_THROWS_AS(universal_von_staudt_odd(1), std::invalid_argument);
}

TEST_CASE("classical Kummer")
{
    CHECK(kummer_classical(5, 2, 6).verdict == Verdict::pass);
    CHECK(*kummer_classical(5, 2, 6).witness == Rat(5, 63));
    CHECK(kummer_classical(7, 2, 8).verdict == Verdict::pass);
    CHECK(*kummer_classical(7, 2, 8).witness == Rat(7, 80));
    const auto skipped = kummer_classical(5, 4, 8);
    CHECK(skipped.verdict == Verdict::skipped);
    CHECK_FALSE(skipped.reason.empty());
    CHECK(kummer_classical(5, 2, 8).verdict == Verdict::skipped);
    CHECK_THROWS_AS(kummer_classical(3, 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(kummer_classical(9, 2, 10), std::invalid_argument);
}

TEST_CASE("verdicts are reproducible from witnesses")
{
    auto report = kummer_suite(23, 40);
    for (const auto &sub : {von_staudt_suite(30), hurwitz_law_suite(24), universal_suite(10)}) {
        report.cells.insert(report.cells.end(), sub.cells.begin(), sub.cells.end());
    }
    for (const auto &cell : report.cells) {
        CAPTURE(cell.checker);
        CHECK(verdict_from_witness(cell) == cell.verdict);
    }
}

TEST_CASE("classical Kummer template reproduces the dedicated checker")
{
    const auto &tmpl = builtin_template("kummer-classical");
    const auto report = template_sweep(tmpl, SweepRange{13, 1, 30});
    std::size_t compared = 0;
    for (const auto &cell : report.cells) {
        const auto p = static_cast<std::uint64_t>(cell.param("p"));
        const auto m = cell.param("m"), n = cell.param("n");
        CHECK(p >= 5);
        if (m % 2 != 0 || n % 2 != 0) {
            CHECK(cell.verdict == Verdict::skipped);
            continue;
        }
        const auto direct = kummer_classical(p, static_cast<std::size_t>(m), static_cast<std::size_t>(n));
        CHECK(cell.verdict == direct.verdict);
        if (direct.witness) {
            CHECK(cell.witness == direct.witness);
        }
        compared += direct.verdict == Verdict::pass ? 1 : 0;
    }
    CHECK(compared > 20);
}

TEST_CASE("Hurwitz sanity template passes everywhere")
{
    const auto report = template_sweep(builtin_template("hurwitz-sanity"), SweepRange{});
    CHECK(report.count(Verdict::pass) == report.cells.size());
    for (const auto &cell : report.cells) {
        CHECK(cell.param("p") % 4 == 3);
    }
}

TEST_CASE("GBH Kummer template snapshot")
{
    const auto report = template_sweep(builtin_template("gbh-2-4-kummer"), SweepRange{13, 1, 24});
    const std::set<std::pair<long, long>> passes{{13, 4}, {13, 8}, {13, 16}, {13, 20}};
    CHECK(report.count(Verdict::fail) == 0);
    CHECK(report.count(Verdict::pass) == passes.size());
    CHECK(report.cells.size() == 48);
    for (const auto &cell : report.cells) {
        const auto p = cell.param("p"), n = cell.param("n");
        CHECK((p == 5 || p == 13));
        CHECK((cell.verdict == Verdict::pass) == passes.contains({p, n}));
        if (cell.verdict == Verdict::skipped) {
            CHECK((n % 4 == 0 ? cell.reason.find("p-integral") : cell.reason.find("index")) != std::string::npos);
        }
    }
    const auto first = std::find_if(report.cells.begin(), report.cells.end(),
                                    [](const CheckResult &c) { return c.verdict == Verdict::pass; });
    REQUIRE(first != report.cells.end());
    CHECK(*first->witness == Rat(Int("1419441153"), Int(1360)));
}

TEST_CASE("template files match the built-in templates")
{
    for (const auto &tmpl : builtin_templates()) {
        const auto loaded = CongruenceTemplate::load(std::string(BHLAB_TEMPLATE_DIR) + "/" + tmpl.id + ".json");
        CHECK(loaded.to_json() == tmpl.to_json());
    }
}

TEST_CASE("templates round-trip through JSON")
{
    for (const auto &tmpl : builtin_templates()) {
        CHECK(CongruenceTemplate::from_json(tmpl.to_json()).to_json() == tmpl.to_json());
    }
}

TEST_CASE("malformed templates are rejected")
{
    const auto good = builtin_template("kummer-classical").to_json();
    auto broken = [&](auto edit) {
        auto j = good;
        edit(j);
        return j;
    };
    CHECK_THROWS_AS(CongruenceTemplate::from_json(broken([](auto &j) { j.erase("lhs"); })), template_error);
    CHECK_THROWS_AS(CongruenceTemplate::from_json(broken([](auto &j) { j["surprise"] = 1; })), template_error);
    CHECK_THROWS_AS(CongruenceTemplate::from_json(broken([](auto &j) { j["lhs"] = "q"; })), template_error);
    CHECK_THROWS_AS(CongruenceTemplate::from_json(broken([](auto &j) { j["family"] = "universal"; })),
                    template_error);
    CHECK_THROWS_AS(CongruenceTemplate::from_json(broken([](auto &j) { j["lhs"] = {{"frobnicate", 1}}; })),
                    template_error);
    CHECK_THROWS_AS(CongruenceTemplate::from_json(broken([](auto &j) { j["family"] = "gbh"; })), template_error);
    CHECK_THROWS_AS(CongruenceTemplate::from_json(nlohmann::json::array()), template_error);
    CHECK_THROWS_AS(CongruenceTemplate::load("/nonexistent/template.json"), std::runtime_error);
}

TEST_CASE("sweep reports serialize deterministically")
{
    const auto a = to_json(template_sweep(builtin_template("kummer-classical"), SweepRange{11, 1, 20}, 1));
    const auto b = to_json(template_sweep(builtin_template("kummer-classical"), SweepRange{11, 1, 20}, 4));
    CHECK(a.dump() == b.dump());
    CHECK(a.at("summary").at("fail") == 0);
}
