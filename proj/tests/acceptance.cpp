// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sha_predict/abelian.hpp"
#include "sha_predict/cli.hpp"
#include "sha_predict/latmac.hpp"
#include "sha_predict/minkowski.hpp"
#include "sha_predict/orders.hpp"
#include "sha_predict/sha.hpp"
#include "test_support.hpp"

using namespace sha_predict;
using nlohmann::json;

namespace {

// A failed check carries its message out of the criterion body.
struct Failure {
    std::string what;
};

void expect(bool ok, const std::string& what)
{
    if (!ok) {
        throw Failure{what};
    }
}

struct CliRun {
    int code = 0;
    std::string out;
};

CliRun cli_run(const std::vector<std::string>& args, const cli::Context& ctx = {})
{
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = cli::run(args, out, err, ctx);
    r.out = out.str();
    return r;
}

std::int64_t v2(std::int64_t n)
{
    std::int64_t k = 0;
    for (; n % 2 == 0; n /= 2) {
        ++k;
    }
    return k;
}

Rational pow2_inv(unsigned e)
{
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, e);
    return Rational(1, den);
}

// ---------------------------------------------------------------------------

std::string sha_cm_examples()
{
    std::ostringstream detail;
    for (const char* D : {"3", "7"}) {
        const auto start = std::chrono::steady_clock::now();
        const auto r = cli_run({"--json", "sha-cm", "--D", D, "--f", "1"});
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        expect(r.code == 0, std::string("sha-cm --D ") + D + " exited " + std::to_string(r.code));
        const auto j = json::parse(r.out);
        expect(j.at("result").at("sha").at("order") == "1", std::string("D=") + D + " order is not 1");
        expect(j.at("result").at("sha").at("result").at("divisors").empty(), "Sha not trivial");
        expect(took.count() < 1.0, std::string("D=") + D + " took over 1 s");
        detail << "D=" << D << " order 1; ";
    }
    return detail.str();
}

std::string assembly_all_groups()
{
    std::size_t groups = 0;
    std::vector<std::int64_t> chain;
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t last, std::int64_t prod) {
        std::size_t even = 0;
        for (auto d : chain) {
            even += d % 2 == 0;
        }
        if (even <= 1) {
            const auto s = sha_from_class_group(AbelianGroupStructure::from_divisors(chain));
            const auto k = v2(prod);
            const std::int64_t odd = prod >> k;
            const std::int64_t expected = k % 2 == 0 ? prod * prod : (std::int64_t{1} << k) * odd * odd;
            expect(s.order == expected && s.result.order() == expected, "order formula fails for |Cl|=" +
                                                                            std::to_string(prod));
            expect(oracle::is_square(s.order) == (k % 2 == 0), "square iff even fails");
            ++groups;
        }
        for (std::int64_t d = chain.empty() ? 2 : last; prod * d <= 10'000; d += chain.empty() ? 1 : last) {
            chain.push_back(d);
            rec(d, prod * d);
            chain.pop_back();
        }
    };
    rec(1, 1);
    return std::to_string(groups) + " groups";
}

std::string class_number_oracle()
{
    ClassNumberOptions opts;
    opts.cross_check = false;
    std::size_t negative = 0;
    std::size_t positive = 0;
    for (std::int64_t d = -3; d >= -100'000; --d) {
        if (!is_fundamental_discriminant(d)) {
            continue;
        }
        for (std::int64_t f = 1; f * f * -d <= 100'000; ++f) {
            const auto o = make_order(d, f);
            const auto want = static_cast<std::int64_t>(oracle::reduced_definite(o.disc).size());
            expect(class_number_order(o, opts) == want, "mismatch at disc " + std::to_string(o.disc));
            ++negative;
        }
    }
    for (std::int64_t d = 5; d <= 10'000; ++d) {
        if (!is_fundamental_discriminant(d)) {
            continue;
        }
        for (std::int64_t f = 1; f * f * d <= 10'000; ++f) {
            const auto o = make_order(d, f);
            expect(class_number_order(o, opts) == oracle::indefinite_class_counts(o.disc).wide,
                   "mismatch at disc " + std::to_string(o.disc));
            ++positive;
        }
    }
    return std::to_string(negative) + " negative, " + std::to_string(positive) + " positive discriminants";
}

std::string latmac_partition()
{
    std::ostringstream detail;
    const std::vector<std::pair<std::int64_t, MonicQuadratic>> cases{
        {5, {-1, -1}}, {12, {0, -3}}, {13, {-1, -3}}, {40, {0, -10}}};
    for (const auto& [disc, poly] : cases) {
        expect(poly.discriminant() == disc, "bad test polynomial");
        const auto ms = oracle::matrices_with_char_poly(-poly.c1, poly.c0, 6);
        const auto cells = oracle::similarity_cells(ms, 10);
        const auto reps = ideal_class_matrices(poly);
        expect(cells == reps.size(), "disc " + std::to_string(disc) + ": " + std::to_string(cells) +
                                         " cells vs " + std::to_string(reps.size()) + " classes");
        for (const auto& m : reps) {
            const auto cp = oracle::char_poly(m.rows());
            expect(cp == std::vector<std::int64_t>{1, poly.c1, poly.c0}, "char poly mismatch");
            expect(m.characteristic_polynomial() == cp, "library char poly mismatch");
        }
        detail << disc << ":" << cells << " ";
    }
    return detail.str();
}

std::string minkowski_properties()
{
    const QuadNumber s(-1, 1, 1, 2);
    const QuadNumber g(-1, 1, 2, 5);
    expect(question_mark_quad(s).value() == Rational(2, 5), "?(sqrt2-1) != 2/5");
    expect(question_mark_quad(g).value() == Rational(2, 3), "?((sqrt5-1)/2) != 2/3");

    std::vector<QuadNumber> points;
    // Farey sequence of order 64
    for (long den = 1; den <= 64; ++den) {
        for (long num = 0; num <= den; ++num) {
            if (std::gcd(num, den) == 1) {
                points.push_back(QuadNumber::rational(Rational(num, den), 2));
                const auto img = question_mark(Rational(num, den));
                expect(img.is_dyadic(), "rational image not dyadic");
            }
        }
    }
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> small(-30, 30);
    std::uniform_int_distribution<long> rad(2, 97);
    std::size_t quads = 0;
    points.push_back(s);
    points.push_back(g);
    const auto tol = pow2_inv(60);
    while (quads < 200) {
        const long d = rad(rng);
        const long b = small(rng);
        if (!oracle::is_squarefree(d) || b == 0) {
            continue;
        }
        const QuadNumber x(small(rng), b, std::labs(small(rng)) + 1, d);
        if (x.sign() <= 0 || x.floor() != 0) {
            continue;
        }
        const auto img = question_mark_quad(x);
        expect(!img.is_dyadic(), "quadratic image is dyadic: " + x.to_string());
        const auto partial = oracle::minkowski_partial_sum(oracle::cf_terms(x.a(), x.b(), x.c(), d, 65));
        expect(abs(img.value() - partial) < tol, "partial sum off for " + x.to_string());
        points.push_back(x);
        ++quads;
    }
    std::sort(points.begin(), points.end());
    auto image = [](const QuadNumber& x) {
        return x.is_rational() ? question_mark(x.to_rational()).value() : question_mark_quad(x).value();
    };
    Rational prev = image(points.front());
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] == points[i - 1]) {
            continue;
        }
        const auto cur = image(points[i]);
        expect(prev < cur, "not increasing at " + points[i].to_string());
        prev = cur;
    }
    return std::to_string(points.size()) + " points ordered";
}

std::string companion_oracle()
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> coef(-100, 100);
    const std::vector<std::int64_t> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 97, 101, 997};
    std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
    for (int i = 0; i < 50; ++i) {
        const std::size_t len = i % 2 == 0 ? 1 : 3; // 2n = 2 or 4
        std::vector<std::int64_t> a(len);
        for (auto& v : a) {
            v = coef(rng);
        }
        const auto p = primes[pick(rng)];
        const auto l = companion_L(a, p);
        const auto fr = companion_Fr(a, p);
        const auto cl = oracle::char_poly(l.rows());
        const auto cf = oracle::char_poly(fr.rows());
        expect(l.characteristic_polynomial() == cl && fr.characteristic_polynomial() == cf, "char poly mismatch");
        expect(cl[0] == 1 && cf[0] == 1, "not monic");
        for (std::size_t j = 0; j < len; ++j) {
            expect(cl[j + 1] == -a[j], "L coefficient pattern");
            expect(cf[j + 1] == (j % 2 == 0 ? -a[j] : a[j]), "Fr coefficient pattern");
        }
        expect(cl.back() == -p && cf.back() == p, "constant term pattern");
        expect(functor_map(fr) == l && functor_map_inverse(l) == fr, "functor_map round trip");
    }
    return "50 pairs";
}

std::string scale_embedding_props()
{
    const QuadNumber theta(-1, 1, 1, 2);
    std::size_t total = 0;
    for (std::int64_t n = 1; n <= 5; ++n) {
        const auto ps = scale_embedding(theta, n);
        expect(ps.front().image.value() == 0 && ps.back().image.value() == 1, "endpoints");
        for (std::size_t i = 1; i < ps.size(); ++i) {
            expect(ps[i - 1].value < ps[i].value, "values not increasing");
            expect(ps[i - 1].image.value() < ps[i].image.value(), "images not increasing");
            if (i + 1 < ps.size()) {
                expect(!ps[i].image.is_dyadic(), "interior image is dyadic");
            }
        }
        total = ps.size();
    }
    return std::to_string(total) + " points at N=5";
}

std::string lmfdb_offline()
{
    test_support::TempDir dir;
    test_support::copy_cache_fixtures(dir.path());
    const auto before = test_support::snapshot(dir.path());
    const auto committed = test_support::snapshot(test_support::fixture_dir() / "cache");
    auto transport = std::make_shared<test_support::FixtureTransport>();
    cli::Context ctx;
    lmfdb::Config cfg;
    cfg.cache_dir = dir.path();
    ctx.config = cfg;
    ctx.transport = transport;
    ctx.clock = [] { return test_support::at(2026, 1, 15); };
    const std::vector<std::string> args{"--json", "lmfdb-compare", "--D-list", "2,3,7,11,19,23", "--offline"};
    const auto first = cli_run(args, ctx);
    const auto second = cli_run(args, ctx);
    expect(first.code == 0, "exit " + std::to_string(first.code));
    expect(first.out == second.out, "report not deterministic");
    expect(transport->calls == 0, "transport was used");
    expect(test_support::snapshot(dir.path()) == before, "cache modified");
    expect(test_support::snapshot(test_support::fixture_dir() / "cache") == committed, "fixtures modified");
    const auto j = json::parse(first.out);
    const auto& summary = j.at("result").at("summary");
    expect(summary.at("no") == "1", "mismatch not surfaced");
    return "yes=" + summary.at("yes").get<std::string>() + " no=" + summary.at("no").get<std::string>() +
           " unknown=" + summary.at("unknown").get<std::string>();
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<std::string()> body;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "sha-cm worked examples D=3, D=7", 2.0, sha_cm_examples},
        {2, "Sha assembly over all groups of order <= 1e4", 10.0, assembly_all_groups},
        {3, "conductor formula vs reduced-form counts", 300.0, class_number_oracle},
        {4, "Latimer-MacDuffee bounded similarity partition", 120.0, latmac_partition},
        {5, "Minkowski question mark properties", 30.0, minkowski_properties},
        {6, "companion matrices vs cofactor oracle", 10.0, companion_oracle},
        {7, "scale embedding for sqrt2-1, N <= 5", 5.0, scale_embedding_props},
        {8, "offline LMFDB comparison", 5.0, lmfdb_offline},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = c.body();
        } catch (const Failure& f) {
            ok = false;
            detail = f.what;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        if (ok && took.count() >= c.limit_seconds) {
            ok = false;
            detail += " (over time limit)";
        }
        failed += !ok;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.3fs / limit %.0fs", took.count(), c.limit_seconds);
        std::cout << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << detail << " (" << timing
                  << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
