#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <bhlab/store.hpp>

#include "temp_dir.hpp"

using namespace bhlab;

namespace
{

RequestDescriptor descriptor(long max_n = 12)
{
    RequestDescriptor d;
    d.command = "compute";
    d.family = "bernoulli";
    d.normalization = "canonical";
    d.ranges = {{"max_n", max_n}};
    return d;
}

nlohmann::ordered_json payload()
{
    return to_json(make_table(FamilyRef{.family = Family::bernoulli}, 12));
}

} // namespace

TEST_CASE("sha256")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("descriptor keys")
{
    CHECK(descriptor().key() == descriptor().key());
    CHECK(descriptor(12).key() != descriptor(13).key());
    auto d = descriptor();
    d.curve = lemniscatic_curve;
    CHECK(d.key() != descriptor().key());
    CHECK(descriptor().canonical().find("\"max_n\":12") != std::string::npos);
}

TEST_CASE("put then get is byte identical")
{
    TempDir dir;
    ResultCache cache(dir.path());
    CHECK_FALSE(cache.get(descriptor()).has_value());
    cache.put(descriptor(), payload());
    const auto hit = cache.get(descriptor());
    REQUIRE(hit.has_value());
    CHECK(hit->dump() == payload().dump());
    CHECK(cache.list().size() == 1);
    CHECK(cache.clear() == 1);
    CHECK(cache.list().empty());
}

TEST_CASE("engine version bump is a miss")
{
    TempDir dir;
    ResultCache cache(dir.path());
    cache.put(descriptor(), payload());
    auto bumped = descriptor();
    bumped.engine_version = "bhlab-999";
    CHECK_FALSE(cache.get(bumped).has_value());

    // Same key but a stale version inside the entry.
    std::ifstream in(cache.path_for(descriptor().key()));
    auto entry = nlohmann::ordered_json::parse(in);
    in.close();
    entry["engine_version"] = "bhlab-0.0.1";
    std::ofstream(cache.path_for(descriptor().key())) << entry.dump();
    CHECK_FALSE(cache.get(descriptor()).has_value());
}

TEST_CASE("corrupt entries warn and behave as a miss")
{
    TempDir dir;
    std::ostringstream warnings;
    ResultCache cache(dir.path(), &warnings);
    cache.put(descriptor(), payload());
    std::ofstream(cache.path_for(descriptor().key()), std::ios::trunc) << "{\"key\": trunc";
    CHECK_FALSE(cache.get(descriptor()).has_value());
    CHECK(warnings.str().find("corrupt") != std::string::npos);
    cache.put(descriptor(), payload());
    CHECK(cache.get(descriptor())->dump() == payload().dump());
}

TEST_CASE("concurrent puts of one key leave one valid file")
{
    TempDir dir;
    ResultCache cache(dir.path());
    const auto p = payload();
    std::vector<std::thread> workers;
    for (int i = 0; i < 8; ++i) {
        workers.emplace_back([&] {
            for (int k = 0; k < 20; ++k) {
                cache.put(descriptor(), p);
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    std::size_t files = 0;
    for (const auto &f : std::filesystem::directory_iterator(dir.path())) {
        (void)f;
        ++files;
    }
    CHECK(files == 1);
    CHECK(cache.get(descriptor())->dump() == p.dump());
}

TEST_CASE("table rendering")
{
    const auto p = payload();
    const auto csv = table_json_to_csv(p);
    CHECK(csv.rfind("n,value\n", 0) == 0);
    CHECK(csv.find("12,-691/2730\n") != std::string::npos);
    CHECK(table_json_to_text(p).find("12: -691/2730\n") != std::string::npos);
    CHECK(p.at("route") == "convolution-recurrence");
}
