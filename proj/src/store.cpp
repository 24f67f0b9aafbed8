#include <bhlab/store.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <openssl/evp.h>
#include <unistd.h>

namespace bhlab
{

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) {
        os << std::setw(2) << static_cast<int>(digest[i]);
    }
    return os.str();
}

std::string RequestDescriptor::canonical() const
{
    // nlohmann::json keeps object keys sorted.
    nlohmann::json j;
    j["command"] = command;
    j["family"] = family;
    j["curve"] = curve ? nlohmann::json::array({curve->a(), curve->b()}) : nlohmann::json(nullptr);
    j["normalization"] = normalization;
    j["ranges"] = ranges;
    j["extra"] = extra;
    j["engine_version"] = engine_version;
    return j.dump();
}

std::string RequestDescriptor::key() const
{
    return sha256_hex(canonical());
}

ResultCache::ResultCache(std::filesystem::path directory, std::ostream *warnings)
    : m_dir(std::move(directory)), m_warnings(warnings)
{
}

std::filesystem::path ResultCache::default_directory()
{
    if (const char *dir = std::getenv("BHLAB_CACHE_DIR"); dir && *dir) {
        return dir;
    }
    if (const char *xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return std::filesystem::path(xdg) / "bhlab";
    }
    if (const char *home = std::getenv("HOME"); home && *home) {
        return std::filesystem::path(home) / ".cache" / "bhlab";
    }
    return std::filesystem::temp_directory_path() / "bhlab-cache";
}

std::filesystem::path ResultCache::path_for(const std::string &key) const
{
    return m_dir / (key + ".json");
}

std::optional<nlohmann::ordered_json> ResultCache::get(const RequestDescriptor &desc) const
{
    const auto key = desc.key();
    const auto path = path_for(key);
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    try {
        nlohmann::ordered_json entry;
        in >> entry;
        if (entry.at("key").get<std::string>() != key || !entry.at("payload").is_object()) {
            throw std::runtime_error("entry does not match its key");
        }
        if (entry.at("engine_version").get<std::string>() != desc.engine_version) {
            return std::nullopt;
        }
        return entry.at("payload");
    } catch (const std::exception &ex) {
        if (m_warnings) {
            *m_warnings << "warning: ignoring corrupt cache entry " << path.string() << ": " << ex.what() << '\n';
        }
        return std::nullopt;
    }
}

namespace
{

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::atomic<unsigned long> temp_counter{0};

} // namespace

void ResultCache::put(const RequestDescriptor &desc, const nlohmann::ordered_json &payload) const
{
    std::filesystem::create_directories(m_dir);
    const auto key = desc.key();
    nlohmann::ordered_json entry;
    entry["key"] = key;
    entry["engine_version"] = desc.engine_version;
    entry["created_at"] = utc_timestamp();
    entry["descriptor"] = desc.canonical();
    entry["payload"] = payload;

    std::ostringstream name;
    name << '.' << key << ".tmp." << ::getpid() << '.' << std::hash<std::thread::id>{}(std::this_thread::get_id())
         << '.' << temp_counter++;
    const auto tmp = m_dir / name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << entry.dump() << '\n';
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("cache: cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path_for(key));
}

std::vector<CacheEntry> ResultCache::list() const
{
    std::vector<CacheEntry> out;
    std::error_code ec;
    if (!std::filesystem::is_directory(m_dir, ec)) {
        return out;
    }
    for (const auto &file : std::filesystem::directory_iterator(m_dir)) {
        if (!file.is_regular_file() || file.path().extension() != ".json") {
            continue;
        }
        CacheEntry e;
        e.key = file.path().stem().string();
        e.size_bytes = file.file_size();
        try {
            std::ifstream in(file.path());
            nlohmann::json j;
            in >> j;
            e.engine_version = j.at("engine_version").get<std::string>();
            e.created_at = j.at("created_at").get<std::string>();
        } catch (const std::exception &) {
            e.engine_version = "corrupt";
        }
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const CacheEntry &a, const CacheEntry &b) { return a.key < b.key; });
    return out;
}

std::size_t ResultCache::clear() const
{
    std::size_t removed = 0;
    std::error_code ec;
    if (!std::filesystem::is_directory(m_dir, ec)) {
        return 0;
    }
    for (const auto &file : std::filesystem::directory_iterator(m_dir)) {
        const auto name = file.path().filename().string();
        const bool entry = file.path().extension() == ".json";
        const bool temp = name.find(".tmp.") != std::string::npos;
        if (file.is_regular_file() && (entry || temp)) {
            std::filesystem::remove(file.path());
            removed += entry ? 1 : 0;
        }
    }
    return removed;
}

nlohmann::ordered_json to_json(const NumberTable &table)
{
    nlohmann::ordered_json j;
    j["family"] = std::string(to_string(table.family));
    j["curve"] = table.curve ? nlohmann::ordered_json::array({table.curve->a(), table.curve->b()})
                             : nlohmann::ordered_json(nullptr);
    j["normalization"] = std::string(to_string(table.normalization));
    j["engine_version"] = table.engine_version;
    j["route"] = table.route;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const auto &[n, text] : table.values) {
        values[std::to_string(n)] = text;
    }
    j["values"] = std::move(values);
    return j;
}

std::string table_json_to_csv(const nlohmann::ordered_json &table)
{
    std::string out = "n,value\n";
    for (const auto &[n, value] : table.at("values").items()) {
        out += n + "," + value.get<std::string>() + "\n";
    }
    return out;
}

std::string table_json_to_text(const nlohmann::ordered_json &table)
{
    std::string out;
    for (const auto &[n, value] : table.at("values").items()) {
        out += n + ": " + value.get<std::string>() + "\n";
    }
    return out;
}

} // namespace bhlab
