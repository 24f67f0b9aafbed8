#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <bhlab/cli.hpp>

#include "temp_dir.hpp"

using namespace bhlab;

namespace
{

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string> &args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

// Points the result cache at a private directory for the lifetime of a test.
struct CacheScope {
    TempDir dir;
    CacheScope()
    {
        setenv("BHLAB_CACHE_DIR", dir.path().c_str(), 1);
    }
    ~CacheScope()
    {
        unsetenv("BHLAB_CACHE_DIR");
    }
};

} // namespace

TEST_CASE("compute tables")
{
    CacheScope scope;
    const auto csv = run({"compute", "--family", "bernoulli", "--max-n", "12", "--format", "csv"});
    CHECK(csv.code == exit_ok);
    CHECK(csv.out.find("\n12,-691/2730\n") != std::string::npos);

    const auto h = run({"compute", "--family", "hurwitz", "--max-n", "8"});
    CHECK(h.code == exit_ok);
    CHECK(h.out.find("\"1/10\"") != std::string::npos);
    CHECK(h.out.find("\"3/10\"") != std::string::npos);

    const auto g = run({"compute", "--family", "gbh", "--curve", "2,4", "--max-n", "4", "--format", "text"});
    CHECK(g.out.find("4: 12/5") != std::string::npos);
}

TEST_CASE("usage errors exit 2")
{
    CacheScope scope;
    CHECK(run({"compute", "--family", "nonsense"}).code == exit_usage);
    CHECK(run({"compute", "--family", "gbh"}).code == exit_usage);
    CHECK(run({"compute", "--family", "bernoulli", "--curve", "2,x"}).code == exit_usage);
    CHECK(run({"verify", "template", "missing.json"}).code == exit_usage);
    CHECK(run({"verify", "frobnicate"}).code == exit_usage);
    CHECK(run({"export", "--family", "bernoulli"}).code == exit_usage);
    CHECK(run({"sweep", "no-such-template"}).code == exit_usage);
    CHECK(run({}).code == exit_usage);
    CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("verify checkers")
{
    CacheScope scope;
    const auto vs = run({"verify", "von-staudt", "--max-n", "60"});
    CHECK(vs.code == exit_ok);
    CHECK(vs.err.find("fail=0") != std::string::npos);
    CHECK(run({"verify", "kummer", "--p-max", "50", "--n-max", "60", "--jobs", "2"}).code == exit_ok);
    CHECK(run({"verify", "hurwitz-law", "--max-n", "40"}).code == exit_ok);
    CHECK(run({"verify", "universal", "--max-n", "10"}).code == exit_ok);
}

TEST_CASE("template sweeps")
{
    CacheScope scope;
    const auto s = run({"sweep", "gbh-2-4-kummer", "--p-max", "13", "--max-n", "24"});
    CHECK(s.code == exit_ok);
    const auto report = nlohmann::json::parse(s.out);
    CHECK(report.at("summary").at("pass") == 4);
    CHECK(report.at("cells").size() == 48);

    TempDir files;
    const auto bad = files.path() / "bad.json";
    std::ofstream(bad) << R"({"id": "x"})";
    CHECK(run({"verify", "template", bad.string()}).code == exit_usage);
    CHECK(run({"sweep", bad.string()}).code == exit_usage);
}

TEST_CASE("cache on and off give identical output")
{
    CacheScope scope;
    const std::vector<std::string> args{"compute", "--family", "universal", "--max-n", "6"};
    const auto cold = run(args);
    const auto warm = run(args);
    auto uncached = args;
    uncached.push_back("--no-cache");
    const auto off = run(uncached);
    CHECK(cold.out == warm.out);
    CHECK(cold.out == off.out);

    const auto ls = run({"cache", "ls"});
    CHECK(ls.out.find("1 entries") != std::string::npos);
    CHECK(run({"cache", "clear"}).out.find("removed 1") != std::string::npos);
}

TEST_CASE("corrupt cache entries are recomputed")
{
    CacheScope scope;
    const std::vector<std::string> args{"verify", "von-staudt", "--max-n", "20"};
    const auto first = run(args);
    for (const auto &f : std::filesystem::directory_iterator(scope.dir.path())) {
        std::ofstream(f.path(), std::ios::trunc) << "not json";
    }
    const auto second = run(args);
    CHECK(second.code == exit_ok);
    CHECK(second.out == first.out);
    CHECK(second.err.find("corrupt") != std::string::npos);
    CHECK(run(args).err.find("corrupt") == std::string::npos);
}

TEST_CASE("export writes files")
{
    CacheScope scope;
    TempDir files;
    const auto csv = files.path() / "b.csv";
    CHECK(run({"export", "--family", "bernoulli", "--max-n", "12", "--out", csv.string()}).code == exit_ok);
    std::ifstream in(csv);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().rfind("n,value\n", 0) == 0);
    CHECK(text.str().find("12,-691/2730") != std::string::npos);
}
