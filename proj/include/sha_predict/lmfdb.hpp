#pragma once

// Client for the LMFDB elliptic-curve API with a per-query JSON cache, and
// an informational comparison of predicted |Sha| against the database's
// analytic Sha orders. Mismatches are reported, never treated as failures.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sha_predict/sha.hpp"

namespace sha_predict::lmfdb {

struct CurveRecord {
    std::string label;
    std::int64_t cm_discriminant = 0;
    std::optional<std::int64_t> analytic_sha;
    std::string source_url;
    std::string fetched_at; // ISO 8601, UTC

    bool operator==(const CurveRecord&) const = default;
};

nlohmann::json to_json(const CurveRecord& r);
CurveRecord curve_record_from_json(const nlohmann::json& j);

struct CurveQuery {
    std::int64_t cm_discriminant = 0; // negative
    int limit = 100;

    // Sorted "key=value" pairs, e.g.
    // "ec_curvedata/?_fields=cm,lmfdb_label,sha&_format=json&_limit=100&cm=i-7".
    std::string canonical() const;
};

// GET url -> body. Implementations throw FetchError on failure.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string get(const std::string& url) = 0;
};

// Real HTTP(S) transport.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(30));
    std::string get(const std::string& url) override;

private:
    std::chrono::seconds timeout_;
};

struct Config {
    std::string base_url = "https://www.lmfdb.org/api";
    double requests_per_second = 1.0;
    std::filesystem::path cache_dir;

    // Defaults, then the JSON config file (SHA_PREDICT_CONFIG or
    // $XDG_CONFIG_HOME/sha-predict/config.json), then LMFDB_BASE_URL and
    // SHA_PREDICT_CACHE_DIR.
    static Config from_environment();
};

std::filesystem::path default_cache_dir();

enum class CachePolicy { prefer_cache, refresh, offline };

using Clock = std::function<std::chrono::system_clock::time_point()>;

std::string iso8601(std::chrono::system_clock::time_point t);

class Client {
public:
    Client(Config config, std::shared_ptr<Transport> transport, Clock clock = std::chrono::system_clock::now);

    std::vector<CurveRecord> fetch_cm_curves(const CurveQuery& query, CachePolicy policy);

    std::filesystem::path cache_path(const CurveQuery& query) const;

    // Parses an API response body ({"data": [...]}) into records.
    std::vector<CurveRecord> parse_response(const std::string& body, const std::string& source_url,
                                            const std::string& fetched_at) const;

private:
    std::optional<std::vector<CurveRecord>> read_cache(const CurveQuery& query) const;
    void write_cache(const CurveQuery& query, const std::vector<CurveRecord>& records);
    void throttle();

    Config config_;
    std::shared_ptr<Transport> transport_;
    Clock clock_;
    std::mutex write_mutex_;
    std::mutex fetch_mutex_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

// Byte-stable serialization of a cache document.
std::string serialize_records(const std::vector<CurveRecord>& records);
std::vector<CurveRecord> parse_records(const std::string& text);

enum class Match { yes, no, unknown };
std::string to_string(Match m);

struct ComparisonRow {
    std::string label; // empty when no record joined
    std::int64_t D = 0;
    std::int64_t f = 1;
    std::int64_t cm_discriminant = 0;
    std::int64_t predicted_order = 1;
    std::optional<std::int64_t> analytic_order;
    Match match = Match::unknown;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::size_t yes = 0;
    std::size_t no = 0;
    std::size_t unknown = 0;
};

// Joins on the CM discriminant of R = Z + f O_K; rows sorted by (|D|, f, label).
ComparisonReport compare_report(const std::vector<CMCurveReport>& predictions,
                                const std::vector<CurveRecord>& records);

} // namespace sha_predict::lmfdb
