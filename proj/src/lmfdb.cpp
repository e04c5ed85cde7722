#include "sha_predict/lmfdb.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "sha_predict/errors.hpp"

namespace sha_predict::lmfdb {

using nlohmann::json;

namespace {

std::string excerpt(const std::string& s)
{
    constexpr std::size_t max_len = 200;
    return s.size() <= max_len ? s : s.substr(0, max_len) + "...";
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* env(const char* name)
{
    const char* v = std::getenv(name);
    return (v && *v) ? v : nullptr;
}

} // namespace

json to_json(const CurveRecord& r)
{
    json j;
    j["label"] = r.label;
    j["cm_discriminant"] = r.cm_discriminant;
    j["analytic_sha"] = r.analytic_sha ? json(*r.analytic_sha) : json(nullptr);
    j["source_url"] = r.source_url;
    j["fetched_at"] = r.fetched_at;
    return j;
}

CurveRecord curve_record_from_json(const json& j)
{
    try {
        CurveRecord r;
        r.label = j.at("label").get<std::string>();
        r.cm_discriminant = j.at("cm_discriminant").get<std::int64_t>();
        if (!j.at("analytic_sha").is_null()) {
            r.analytic_sha = j.at("analytic_sha").get<std::int64_t>();
            if (*r.analytic_sha <= 0) {
                throw ParseError("analytic_sha must be positive in " + excerpt(j.dump()));
            }
        }
        r.source_url = j.at("source_url").get<std::string>();
        r.fetched_at = j.at("fetched_at").get<std::string>();
        if (r.cm_discriminant >= 0) {
            throw ParseError("cm_discriminant must be negative in " + excerpt(j.dump()));
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad curve record: ") + e.what() + " in " + excerpt(j.dump()));
    }
}

std::string CurveQuery::canonical() const
{
    std::map<std::string, std::string> params{
        {"_fields", "cm,lmfdb_label,sha"},
        {"_format", "json"},
        {"_limit", std::to_string(limit)},
        {"cm", "i" + std::to_string(cm_discriminant)},
    };
    std::ostringstream os;
    os << "ec_curvedata/?";
    bool first = true;
    for (const auto& [k, v] : params) {
        os << (first ? "" : "&") << k << "=" << v;
        first = false;
    }
    return os.str();
}

std::filesystem::path default_cache_dir()
{
    if (const char* xdg = env("XDG_CACHE_HOME")) {
        return std::filesystem::path(xdg) / "sha-predict";
    }
    if (const char* home = env("HOME")) {
        return std::filesystem::path(home) / ".cache" / "sha-predict";
    }
    return std::filesystem::temp_directory_path() / "sha-predict-cache";
}

Config Config::from_environment()
{
    Config c;
    c.cache_dir = default_cache_dir();

    std::filesystem::path config_file;
    if (const char* p = env("SHA_PREDICT_CONFIG")) {
        config_file = p;
    } else if (const char* xdg = env("XDG_CONFIG_HOME")) {
        config_file = std::filesystem::path(xdg) / "sha-predict" / "config.json";
    } else if (const char* home = env("HOME")) {
        config_file = std::filesystem::path(home) / ".config" / "sha-predict" / "config.json";
    }
    if (!config_file.empty() && std::filesystem::exists(config_file)) {
        const auto text = read_file(config_file);
        try {
            const auto j = json::parse(text);
            if (j.contains("base_url")) {
                c.base_url = j.at("base_url").get<std::string>();
            }
            if (j.contains("requests_per_second")) {
                c.requests_per_second = j.at("requests_per_second").get<double>();
            }
            if (j.contains("cache_dir")) {
                c.cache_dir = j.at("cache_dir").get<std::string>();
            }
        } catch (const json::exception& e) {
            throw ParseError("config file " + config_file.string() + ": " + e.what());
        }
    }
    if (const char* url = env("LMFDB_BASE_URL")) {
        c.base_url = url;
    }
    if (const char* dir = env("SHA_PREDICT_CACHE_DIR")) {
        c.cache_dir = dir;
    }
    return c;
}

std::string iso8601(std::chrono::system_clock::time_point t)
{
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string serialize_records(const std::vector<CurveRecord>& records)
{
    json arr = json::array();
    for (const auto& r : records) {
        arr.push_back(to_json(r));
    }
    return arr.dump(2) + "\n";
}

std::vector<CurveRecord> parse_records(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed cache document: ") + e.what() + " in " + excerpt(text));
    }
    if (!j.is_array()) {
        throw ParseError("cache document is not an array: " + excerpt(text));
    }
    std::vector<CurveRecord> out;
    for (const auto& item : j) {
        out.push_back(curve_record_from_json(item));
    }
    return out;
}

Client::Client(Config config, std::shared_ptr<Transport> transport, Clock clock)
    : config_(std::move(config)), transport_(std::move(transport)), clock_(std::move(clock))
{
}

std::filesystem::path Client::cache_path(const CurveQuery& query) const
{
    std::string name;
    for (char ch : query.canonical()) {
        const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == ',';
        name += keep ? ch : '_';
    }
    return config_.cache_dir / (name + ".json");
}

std::optional<std::vector<CurveRecord>> Client::read_cache(const CurveQuery& query) const
{
    const auto path = cache_path(query);
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    return parse_records(read_file(path));
}

void Client::write_cache(const CurveQuery& query, const std::vector<CurveRecord>& records)
{
    std::lock_guard lock(write_mutex_);
    const auto path = cache_path(query);
    std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << serialize_records(records);
        if (!out) {
            throw FetchError("cannot write cache file " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

void Client::throttle()
{
    if (config_.requests_per_second <= 0) {
        return;
    }
    const auto gap = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / config_.requests_per_second));
    if (last_request_) {
        const auto next = *last_request_ + gap;
        std::this_thread::sleep_until(next);
    }
    last_request_ = std::chrono::steady_clock::now();
}

std::vector<CurveRecord> Client::parse_response(const std::string& body, const std::string& source_url,
                                                const std::string& fetched_at) const
{
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON from ") + source_url + ": " + e.what() + "; payload: " +
                         excerpt(body));
    }
    if (!j.is_object() || !j.contains("data") || !j.at("data").is_array()) {
        throw ParseError("response from " + source_url + " has no data array; payload: " + excerpt(body));
    }
    std::vector<CurveRecord> out;
    for (const auto& item : j.at("data")) {
        try {
            CurveRecord r;
            r.label = item.at("lmfdb_label").get<std::string>();
            r.cm_discriminant = item.at("cm").get<std::int64_t>();
            if (item.contains("sha") && !item.at("sha").is_null()) {
                r.analytic_sha = item.at("sha").get<std::int64_t>();
            }
            r.source_url = source_url;
            r.fetched_at = fetched_at;
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ParseError(std::string("unexpected record shape: ") + e.what() + "; payload: " +
                             excerpt(item.dump()));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.label < y.label; });
    return out;
}

std::vector<CurveRecord> Client::fetch_cm_curves(const CurveQuery& query, CachePolicy policy)
{
    if (query.cm_discriminant >= 0) {
        throw InputError("CM discriminant must be negative");
    }
    if (policy != CachePolicy::refresh) {
        if (auto cached = read_cache(query)) {
            return *cached;
        }
        if (policy == CachePolicy::offline) {
            throw FetchError("offline: no cached entry for " + query.canonical() + " in " +
                             config_.cache_dir.string());
        }
    }
    if (!transport_) {
        throw FetchError("no transport configured");
    }
    const std::string url = config_.base_url + "/" + query.canonical();
    std::string body;
    {
        std::lock_guard lock(fetch_mutex_);
        throttle();
        body = transport_->get(url);
    }
    auto records = parse_response(body, url, iso8601(clock_()));
    write_cache(query, records);
    return records;
}

std::string to_string(Match m)
{
    switch (m) {
    case Match::yes:
        return "yes";
    case Match::no:
        return "no";
    case Match::unknown:
        break;
    }
    return "unknown";
}

ComparisonReport compare_report(const std::vector<CMCurveReport>& predictions,
                                const std::vector<CurveRecord>& records)
{
    std::multimap<std::int64_t, const CurveRecord*> by_disc;
    for (const auto& r : records) {
        by_disc.emplace(r.cm_discriminant, &r);
    }
    ComparisonReport report;
    for (const auto& p : predictions) {
        ComparisonRow base;
        base.D = p.D;
        base.f = p.f;
        base.cm_discriminant = p.R.disc;
        base.predicted_order = p.sha.order;
        auto [lo, hi] = by_disc.equal_range(p.R.disc);
        if (lo == hi) {
            report.rows.push_back(base);
            continue;
        }
        for (auto it = lo; it != hi; ++it) {
            ComparisonRow row = base;
            row.label = it->second->label;
            row.analytic_order = it->second->analytic_sha;
            if (row.analytic_order) {
                row.match = *row.analytic_order == row.predicted_order ? Match::yes : Match::no;
            }
            report.rows.push_back(row);
        }
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const auto& x, const auto& y) {
        return std::tie(x.D, x.f, x.label) < std::tie(y.D, y.f, y.label);
    });
    for (const auto& row : report.rows) {
        switch (row.match) {
        case Match::yes:
            ++report.yes;
            break;
        case Match::no:
            ++report.no;
            break;
        case Match::unknown:
            ++report.unknown;
            break;
        }
    }
    return report;
}

} // namespace sha_predict::lmfdb
