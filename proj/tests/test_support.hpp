#pragma once

// Shared helpers for the lmfdb, cli and acceptance tests.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sha_predict/errors.hpp"
#include "sha_predict/lmfdb.hpp"

namespace test_support {

inline std::filesystem::path fixture_dir()
{
    return std::filesystem::path(SHA_PREDICT_FIXTURE_DIR) / "lmfdb";
}

inline std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// A scratch directory removed on destruction.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("sha-predict-test-" + std::to_string(rd()) + "-" +
                                                          std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Serves API fixtures keyed by the cm= parameter; counts calls.
class FixtureTransport : public sha_predict::lmfdb::Transport {
public:
    std::string get(const std::string& url) override
    {
        ++calls;
        urls.push_back(url);
        if (fail) {
            throw sha_predict::FetchError("connection refused: " + url);
        }
        if (override_body) {
            return *override_body;
        }
        const auto pos = url.find("cm=i");
        const auto file = fixture_dir() / "api" / ("cm" + url.substr(pos + 4) + ".json");
        if (!std::filesystem::exists(file)) {
            return "{\"data\": []}";
        }
        return read_text(file);
    }

    int calls = 0;
    bool fail = false;
    std::optional<std::string> override_body;
    std::vector<std::string> urls;
};

inline std::chrono::system_clock::time_point at(int year, int month, int day)
{
    using namespace std::chrono;
    return sys_days{std::chrono::year{year} / month / day} + hours{12};
}

// Snapshot of every file (name -> contents) under a directory.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        out[e.path().filename().string()] = read_text(e.path());
    }
    return out;
}

inline void copy_cache_fixtures(const std::filesystem::path& to)
{
    for (const auto& e : std::filesystem::directory_iterator(fixture_dir() / "cache")) {
        std::filesystem::copy_file(e.path(), to / e.path().filename());
    }
}

} // namespace test_support
