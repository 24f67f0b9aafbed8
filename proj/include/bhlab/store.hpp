#ifndef BHLAB_STORE_HPP
#define BHLAB_STORE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <bhlab/families.hpp>

namespace bhlab
{

std::string sha256_hex(std::string_view data);

// Everything that determines a computation's output.
struct RequestDescriptor {
    std::string command;
    std::string family;
    std::optional<CurveSpec> curve;
    std::string normalization;
    // Named integer ranges, e.g. max_n, p_max.
    std::map<std::string, long> ranges;
    // Anything else that affects the result (template content, ...).
    std::string extra;
    std::string engine_version{bhlab::engine_version};

    // Sorted keys, no whitespace.
    std::string canonical() const;
    // SHA-256 of canonical().
    std::string key() const;
};

struct CacheEntry {
    std::string key;
    std::string engine_version;
    std::string created_at;
    std::uintmax_t size_bytes = 0;
};

// On-disk cache of JSON payloads keyed by request descriptor. One file per
// key, written to a temporary name and renamed into place.
class ResultCache
{
public:
    explicit ResultCache(std::filesystem::path directory, std::ostream *warnings = nullptr);

    // $BHLAB_CACHE_DIR, else $XDG_CACHE_HOME/bhlab, else $HOME/.cache/bhlab,
    // else <tmp>/bhlab-cache.
    static std::filesystem::path default_directory();

    const std::filesystem::path &directory() const
    {
        return m_dir;
    }
    std::filesystem::path path_for(const std::string &key) const;

    // Missing, corrupt or version-mismatched entries are misses; corrupt
    // ones also produce a warning.
    std::optional<nlohmann::ordered_json> get(const RequestDescriptor &desc) const;
    void put(const RequestDescriptor &desc, const nlohmann::ordered_json &payload) const;

    std::vector<CacheEntry> list() const;
    // Returns the number of entries removed.
    std::size_t clear() const;

private:
    std::filesystem::path m_dir;
    std::ostream *m_warnings;
};

// {family, curve, normalization, engine_version, route, values: {n: text}}
nlohmann::ordered_json to_json(const NumberTable &table);
// "n,value" header plus one row per entry, derived from the JSON form.
std::string table_json_to_csv(const nlohmann::ordered_json &table);
// One "n: value" line per entry.
std::string table_json_to_text(const nlohmann::ordered_json &table);

} // namespace bhlab

#endif
