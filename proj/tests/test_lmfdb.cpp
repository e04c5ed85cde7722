#include <doctest.h>

#include "sha_predict/errors.hpp"
#include "sha_predict/lmfdb.hpp"
#include "sha_predict/sha.hpp"
#include "test_support.hpp"

using namespace sha_predict;
using namespace sha_predict::lmfdb;
using test_support::FixtureTransport;
using test_support::TempDir;

namespace {

Config config_for(const std::filesystem::path& cache)
{
    Config c;
    c.cache_dir = cache;
    c.requests_per_second = 0; // no throttling in tests
    return c;
}

Clock fixed(std::chrono::system_clock::time_point t)
{
    return [t] { return t; };
}

CMCurveReport prediction(std::int64_t D)
{
    CMOptions opts;
    opts.allow_missing_lambda = true;
    return sha_cm_curve(D, 1, opts);
}

CurveRecord record(const std::string& label, std::int64_t disc, std::optional<std::int64_t> sha)
{
    return {label, disc, sha, "fixture", "2026-01-15T12:00:00Z"};
}

} // namespace

TEST_CASE("canonical query and cache path")
{
    const CurveQuery q{-7, 100};
    CHECK(q.canonical() == "ec_curvedata/?_fields=cm,lmfdb_label,sha&_format=json&_limit=100&cm=i-7");
    TempDir dir;
    Client client(config_for(dir.path()), nullptr);
    CHECK(client.cache_path(q).filename() ==
          "ec_curvedata___fields_cm,lmfdb_label,sha__format_json__limit_100_cm_i-7.json");
    CHECK(client.cache_path(q).parent_path() == dir.path());
}

TEST_CASE("fetch writes the cache and the -7 fixture round-trips")
{
    TempDir dir;
    auto transport = std::make_shared<FixtureTransport>();
    Client client(config_for(dir.path()), transport, fixed(test_support::at(2026, 1, 15)));
    const CurveQuery q{-7, 100};
    const auto fetched = client.fetch_cm_curves(q, CachePolicy::prefer_cache);
    CHECK(transport->calls == 1);
    REQUIRE(fetched.size() == 4);
    CHECK(fetched[0].label == "49.a1");
    CHECK(fetched[0].cm_discriminant == -7);
    CHECK(fetched[0].analytic_sha == 1);
    CHECK(fetched[0].fetched_at == "2026-01-15T12:00:00Z");
    CHECK(fetched[0].source_url == "https://www.lmfdb.org/api/" + q.canonical());

    // the file written equals the committed fixture byte for byte
    const auto written = test_support::read_text(client.cache_path(q));
    const auto committed = test_support::read_text(test_support::fixture_dir() / "cache" /
                                                   client.cache_path(q).filename());
    CHECK(written == committed);

    // second fetch is served from the cache
    const auto again = client.fetch_cm_curves(q, CachePolicy::prefer_cache);
    CHECK(transport->calls == 1);
    CHECK(again == fetched);

    // record-level identity through JSON
    for (const auto& r : fetched) {
        CHECK(curve_record_from_json(to_json(r)) == r);
    }
}

TEST_CASE("cache round trip is byte-stable")
{
    for (const auto& e : std::filesystem::directory_iterator(test_support::fixture_dir() / "cache")) {
        const auto text = test_support::read_text(e.path());
        const auto once = serialize_records(parse_records(text));
        CHECK(once == text);
        CHECK(serialize_records(parse_records(once)) == once);
    }
    const std::vector<CurveRecord> empty;
    CHECK(serialize_records(parse_records(serialize_records(empty))) == serialize_records(empty));
}

TEST_CASE("query for -3 returns records with CM field -3")
{
    TempDir dir;
    auto transport = std::make_shared<FixtureTransport>();
    Client client(config_for(dir.path()), transport, fixed(test_support::at(2026, 1, 15)));
    const auto rs = client.fetch_cm_curves({-3, 100}, CachePolicy::prefer_cache);
    REQUIRE_FALSE(rs.empty());
    for (const auto& r : rs) {
        CHECK(r.cm_discriminant == -3);
    }
    REQUIRE(transport->urls.size() == 1);
    CHECK(transport->urls[0].find("cm=i-3") != std::string::npos);
}

TEST_CASE("refresh overwrites a stale entry and bumps fetched_at")
{
    TempDir dir;
    auto transport = std::make_shared<FixtureTransport>();
    auto now = test_support::at(2025, 6, 1);
    Client client(config_for(dir.path()), transport, [&now] { return now; });
    const CurveQuery q{-7, 100};
    const auto old = client.fetch_cm_curves(q, CachePolicy::prefer_cache);
    CHECK(old[0].fetched_at == "2025-06-01T12:00:00Z");

    now = test_support::at(2026, 2, 1);
    CHECK(client.fetch_cm_curves(q, CachePolicy::prefer_cache)[0].fetched_at == "2025-06-01T12:00:00Z");
    const auto fresh = client.fetch_cm_curves(q, CachePolicy::refresh);
    CHECK(transport->calls == 2);
    CHECK(fresh[0].fetched_at == "2026-02-01T12:00:00Z");
    const auto on_disk = parse_records(test_support::read_text(client.cache_path(q)));
    CHECK(on_disk == fresh);
}

TEST_CASE("offline mode never touches the transport")
{
    TempDir dir;
    test_support::copy_cache_fixtures(dir.path());
    auto transport = std::make_shared<FixtureTransport>();
    Client client(config_for(dir.path()), transport);
    CHECK(client.fetch_cm_curves({-7, 100}, CachePolicy::offline).size() == 4);
    CHECK_THROWS_AS(client.fetch_cm_curves({-23, 100}, CachePolicy::offline), FetchError);
    CHECK(transport->calls == 0);
}

TEST_CASE("network failure without cache is a fetch error")
{
    TempDir dir;
    auto transport = std::make_shared<FixtureTransport>();
    transport->fail = true;
    Client client(config_for(dir.path()), transport);
    CHECK_THROWS_AS(client.fetch_cm_curves({-7, 100}, CachePolicy::prefer_cache), FetchError);
    CHECK_FALSE(std::filesystem::exists(client.cache_path({-7, 100})));
    Client no_transport(config_for(dir.path()), nullptr);
    CHECK_THROWS_AS(no_transport.fetch_cm_curves({-7, 100}, CachePolicy::refresh), FetchError);
}

TEST_CASE("malformed JSON is a parse error with an excerpt")
{
    TempDir dir;
    auto transport = std::make_shared<FixtureTransport>();
    transport->override_body = test_support::read_text(test_support::fixture_dir() / "api" / "malformed.json");
    Client client(config_for(dir.path()), transport);
    try {
        client.fetch_cm_curves({-7, 100}, CachePolicy::refresh);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("\"lmfdb_label\": \"49.a1\"") != std::string::npos);
    }
    transport->override_body = test_support::read_text(test_support::fixture_dir() / "api" / "wrong_shape.json");
    CHECK_THROWS_AS(client.fetch_cm_curves({-7, 100}, CachePolicy::refresh), ParseError);
    transport->override_body = "[1, 2, 3]";
    CHECK_THROWS_AS(client.fetch_cm_curves({-7, 100}, CachePolicy::refresh), ParseError);
    transport->override_body = std::string(5000, '{');
    try {
        client.fetch_cm_curves({-7, 100}, CachePolicy::refresh);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).size() < 1000);
    }
    CHECK_THROWS_AS(parse_records("{not json"), ParseError);
    CHECK_THROWS_AS(parse_records("{\"a\": 1}"), ParseError);
    CHECK_THROWS_AS(parse_records(R"([{"label": "x", "cm_discriminant": 7, "analytic_sha": 1,
        "source_url": "", "fetched_at": ""}])"),
                    ParseError);
    CHECK_THROWS_AS(parse_records(R"([{"label": "x", "cm_discriminant": -7, "analytic_sha": 0,
        "source_url": "", "fetched_at": ""}])"),
                    ParseError);
}

TEST_CASE("configuration from the environment")
{
    TempDir dir;
    const auto cfg_file = dir.path() / "config.json";
    {
        std::ofstream out(cfg_file);
        out << R"({"base_url": "http://example.invalid/api", "requests_per_second": 0.5, "cache_dir": "/tmp/x"})";
    }
    setenv("SHA_PREDICT_CONFIG", cfg_file.c_str(), 1);
    unsetenv("LMFDB_BASE_URL");
    unsetenv("SHA_PREDICT_CACHE_DIR");
    auto c = Config::from_environment();
    CHECK(c.base_url == "http://example.invalid/api");
    CHECK(c.requests_per_second == doctest::Approx(0.5));
    CHECK(c.cache_dir == "/tmp/x");

    setenv("LMFDB_BASE_URL", "http://mirror.invalid/api", 1);
    setenv("SHA_PREDICT_CACHE_DIR", dir.path().c_str(), 1);
    c = Config::from_environment();
    CHECK(c.base_url == "http://mirror.invalid/api");
    CHECK(c.cache_dir == dir.path());

    {
        std::ofstream out(cfg_file);
        out << "{broken";
    }
    CHECK_THROWS_AS(Config::from_environment(), ParseError);
    unsetenv("SHA_PREDICT_CONFIG");
    unsetenv("LMFDB_BASE_URL");
    unsetenv("SHA_PREDICT_CACHE_DIR");
    CHECK(Config{}.base_url == "https://www.lmfdb.org/api");
    CHECK(Config{}.requests_per_second == doctest::Approx(1.0));
}

TEST_CASE("rate limiting spaces requests")
{
    TempDir dir;
    auto transport = std::make_shared<FixtureTransport>();
    auto cfg = config_for(dir.path());
    cfg.requests_per_second = 20.0;
    Client client(cfg, transport);
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 3; ++i) {
        client.fetch_cm_curves({-7, 100}, CachePolicy::refresh);
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(elapsed >= std::chrono::milliseconds(95));
}

TEST_CASE("compare_report")
{
    const std::vector<CMCurveReport> preds{prediction(7), prediction(3), prediction(23)};

    SUBCASE("empty records give unknown rows")
    {
        const auto rep = compare_report(preds, {});
        REQUIRE(rep.rows.size() == 3);
        for (const auto& r : rep.rows) {
            CHECK(r.match == Match::unknown);
            CHECK(r.label.empty());
        }
        CHECK(rep.unknown == 3);
        CHECK(rep.rows[0].D == 3);
        CHECK(rep.rows[1].D == 7);
        CHECK(rep.rows[2].D == 23);
        CHECK(rep.rows[2].predicted_order == 9);
    }
    SUBCASE("equal orders match, unequal ones are kept as mismatches")
    {
        const std::vector<CurveRecord> recs{record("49.a1", -7, 1), record("9999.z1", -23, 1),
                                            record("27.a1", -3, std::nullopt)};
        const auto rep = compare_report(preds, recs);
        REQUIRE(rep.rows.size() == 3);
        CHECK(rep.rows[0].label == "27.a1");
        CHECK(rep.rows[0].match == Match::unknown);
        CHECK(rep.rows[1].match == Match::yes);
        CHECK(rep.rows[2].match == Match::no);
        CHECK(rep.rows[2].predicted_order == 9);
        CHECK(rep.rows[2].analytic_order == 1);
        CHECK(rep.yes == 1);
        CHECK(rep.no == 1);
        CHECK(rep.unknown == 1);
        // deterministic
        const auto again = compare_report(preds, recs);
        CHECK(again.rows.size() == rep.rows.size());
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            CHECK(again.rows[i].label == rep.rows[i].label);
            CHECK(again.rows[i].match == rep.rows[i].match);
        }
    }
    SUBCASE("predicted order is |Cl(R)|^2")
    {
        for (const auto& r : compare_report(preds, {}).rows) {
            const auto& p = r.D == 3 ? preds[1] : r.D == 7 ? preds[0] : preds[2];
            CHECK(r.predicted_order == p.cl_R.order() * p.cl_R.order());
        }
    }
}
