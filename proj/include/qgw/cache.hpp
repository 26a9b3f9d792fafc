#pragma once

// Persistent result cache: JSON {version, theory, entries: {keytext: "p/q"}}.
// Writes are atomic (temp file + rename) and hold an advisory lock for their
// duration. Merging rejects conflicting values for the same key outright:
// a mismatch means nondeterminism somewhere and must not be papered over.

#include "qgw/rational.hpp"

#include <json.hpp>

#include <cstdio>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <sys/file.h>
#include <unistd.h>

namespace qgw {

struct cache_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct cache_conflict : cache_error {
    using cache_error::cache_error;
};

struct CacheFile {
    static constexpr int current_version = 1;

    int version = current_version;
    std::string theory;
    std::map<std::string, Rational> entries;

    // Insert or cross-check; conflicting exact values are a hard error.
    void put(const std::string& key, const Rational& value) {
        auto [it, inserted] = entries.emplace(key, value);
        if (!inserted && it->second != value)
            throw cache_conflict("cache conflict for key '" + key + "': stored " +
                                 qgw::to_string(it->second) + ", computed " + qgw::to_string(value));
    }

    void merge(const CacheFile& other) {
        if (!theory.empty() && !other.theory.empty() && theory != other.theory)
            throw cache_error("cache merge across theories ('" + theory + "' vs '" + other.theory + "')");
        for (const auto& [k, v] : other.entries) put(k, v);
    }
};

inline CacheFile cache_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cache_error("cannot open cache file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw cache_error("corrupt cache file '" + path + "': " + e.what());
    }
    CacheFile out;
    if (!j.is_object() || !j.contains("version") || !j.contains("theory") || !j.contains("entries"))
        throw cache_error("corrupt cache file '" + path + "': missing fields");
    out.version = j.at("version").get<int>();
    if (out.version != CacheFile::current_version)
        throw cache_error("cache file '" + path + "' has unsupported version");
    out.theory = j.at("theory").get<std::string>();
    if (!j.at("entries").is_object()) throw cache_error("corrupt cache file '" + path + "': bad entries");
    for (const auto& [k, v] : j.at("entries").items()) {
        if (!v.is_string()) throw cache_error("corrupt cache file '" + path + "': non-string value");
        auto r = parse_rational(v.get<std::string>());
        if (!r) throw cache_error("corrupt cache file '" + path + "': bad rational '" + v.get<std::string>() + "'");
        out.entries.emplace(k, *r);
    }
    return out;
}

inline void cache_store(const CacheFile& cache, const std::string& path) {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [k, v] : cache.entries) entries[k] = qgw::to_string(v);
    nlohmann::json j{{"version", cache.version}, {"theory", cache.theory}, {"entries", entries}};

    std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());

    int lock_fd = ::open((path + ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (lock_fd >= 0) ::flock(lock_fd, LOCK_EX);

    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            if (lock_fd >= 0) ::close(lock_fd);
            throw cache_error("cannot write cache file '" + tmp + "'");
        }
        out << j.dump(2) << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (lock_fd >= 0) {
        ::flock(lock_fd, LOCK_UN);
        ::close(lock_fd);
    }
    if (ec) throw cache_error("cannot move cache file into place: " + ec.message());
}

// Resolves the cache path: explicit flag first, then QGW_CACHE.
inline std::string cache_default_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QGW_CACHE")) return env;
    return {};
}

} // namespace qgw
