#include "sha_predict/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sha_predict/arith.hpp"
#include "sha_predict/errors.hpp"
#include "sha_predict/latmac.hpp"
#include "sha_predict/literal.hpp"
#include "sha_predict/minkowski.hpp"
#include "sha_predict/orders.hpp"
#include "sha_predict/qforms.hpp"
#include "sha_predict/sha.hpp"

namespace sha_predict::cli {

using nlohmann::json;

namespace {

// Every number goes out as a decimal string.
template <class T>
std::string num(const T& v)
{
    if constexpr (std::is_same_v<T, BigInt> || std::is_same_v<T, Rational>) {
        return v.get_str();
    } else {
        return std::to_string(v);
    }
}

json num_list(const std::vector<std::int64_t>& xs)
{
    json arr = json::array();
    for (auto x : xs) {
        arr.push_back(num(x));
    }
    return arr;
}

json group_json(const AbelianGroupStructure& g)
{
    return json{{"divisors", num_list(g.divisors())}, {"order", num(g.order())}};
}

json order_json(const QuadOrder& o)
{
    return json{{"d_K", num(o.fundamental_disc)}, {"f", num(o.conductor)}, {"disc", num(o.disc)}};
}

json matrix_json(const IntMatrix& m)
{
    json rows = json::array();
    for (const auto& r : m.rows()) {
        rows.push_back(num_list(r));
    }
    return rows;
}

json prediction_json(const ShaPrediction& s)
{
    return json{{"class_group", group_json(s.input_class_group)},
                {"k", num(s.k)},
                {"parity", to_string(s.parity)},
                {"assembly", to_string(s.assembly)},
                {"result", group_json(s.result)},
                {"order", num(s.order)}};
}

std::string group_text(const AbelianGroupStructure& g)
{
    std::ostringstream os;
    os << g.to_string() << " (order " << g.order() << ")";
    return os.str();
}

std::string decimal(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << std::fixed << v;
    return os.str();
}

// One command's rendered result.
struct Outcome {
    json inputs = json::object();
    json result = json::object();
    std::vector<std::string> text;
    std::vector<std::string> warnings;
};

Outcome cmd_classgroup(std::int64_t disc)
{
    Outcome o;
    o.inputs["disc"] = num(disc);
    if (!is_quadratic_discriminant(disc)) {
        throw InputError("not a quadratic discriminant (nonzero, non-square, 0 or 1 mod 4): " + std::to_string(disc));
    }
    if (disc < 0) {
        const auto g = class_group_definite(disc);
        o.result = json{{"type", "definite"}, {"class_number", num(g.order())}, {"structure", group_json(g)}};
        o.text.push_back("discriminant " + num(disc) + " (definite)");
        o.text.push_back("class group: " + group_text(g));
    } else {
        const auto h = class_numbers_indefinite(disc);
        const auto eps = fundamental_pell(disc);
        o.result = json{{"type", "indefinite"},
                        {"h_narrow", num(h.h_narrow)},
                        {"h_wide", num(h.h_wide)},
                        {"fundamental_unit", json{{"x", num(eps.x)}, {"y", num(eps.y)}, {"norm", eps.sign < 0 ? "-1" : "1"}}}};
        o.text.push_back("discriminant " + num(disc) + " (indefinite)");
        o.text.push_back("h_narrow: " + num(h.h_narrow));
        o.text.push_back("h_wide: " + num(h.h_wide));
        o.text.push_back("fundamental unit: (" + num(eps.x) + " + " + num(eps.y) + "*sqrt" + num(disc) +
                         ")/2, norm " + (eps.sign < 0 ? "-1" : "+1"));
    }
    return o;
}

Outcome cmd_order_h(std::int64_t d_k, std::int64_t f, bool narrow)
{
    Outcome o;
    o.inputs = json{{"dk", num(d_k)}, {"f", num(f)}, {"narrow", narrow}};
    const auto order = make_order(d_k, f);
    const auto h = class_number_order(order);
    const auto u = unit_index(order);
    o.result = json{{"order", order_json(order)}, {"class_number", num(h)}, {"unit_index", num(u)}};
    o.text.push_back("order: " + order.to_string());
    o.text.push_back("class number (wide): " + num(h));
    o.text.push_back("unit index: " + num(u));
    if (narrow) {
        if (order.disc < 0) {
            o.warnings.push_back("narrow and wide class numbers coincide for imaginary orders");
            o.result["h_narrow"] = num(h);
        } else {
            const auto hn = class_numbers_indefinite(order.disc).h_narrow;
            o.result["h_narrow"] = num(hn);
            o.text.push_back("class number (narrow): " + num(hn));
        }
    }
    return o;
}

Outcome cmd_latmac(const std::string& poly_text, std::int64_t bound)
{
    Outcome o;
    o.inputs = json{{"poly", poly_text}, {"bound", num(bound)}};
    const auto poly = MonicQuadratic::parse(poly_text);
    const auto mats = ideal_class_matrices(poly);
    const auto disc = poly.discriminant();
    const auto h = class_number_by_forms(disc);

    json arr = json::array();
    o.text.push_back("polynomial: " + poly.to_string() + ", discriminant " + num(disc));
    o.text.push_back("class number of Z[lambda]: " + num(h));
    for (const auto& m : mats) {
        const auto cp = m.characteristic_polynomial();
        arr.push_back(json{{"matrix", matrix_json(m)}, {"char_poly", num_list(cp)}});
        o.text.push_back("  " + m.to_string() + "  char poly " + polynomial_to_string(cp));
    }
    json pairs = json::array();
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            const auto u = similar_over_Z(mats[i], mats[j], bound);
            json p{{"i", num(i)}, {"j", num(j)}};
            if (u) {
                p["status"] = "similar";
                p["conjugator"] = matrix_json(*u);
                o.warnings.push_back("representatives " + num(i) + " and " + num(j) + " are similar");
            } else {
                p["status"] = "not found within bound";
            }
            o.text.push_back("  pair (" + num(i) + "," + num(j) + "): " + p["status"].get<std::string>());
            pairs.push_back(p);
        }
    }
    o.result = json{{"polynomial", poly.to_string()},
                    {"discriminant", num(disc)},
                    {"class_number", num(h)},
                    {"matrices", arr},
                    {"pairwise_similarity", pairs}};
    return o;
}

json image_json(const DyadicOrRational& img)
{
    return json{{"value", img.to_string()},
                {"numerator", num(img.numerator)},
                {"denominator", num(img.denominator)},
                {"dyadic", img.is_dyadic()}};
}

Outcome cmd_minkowski(const std::string& literal)
{
    Outcome o;
    o.inputs["value"] = literal;
    const auto x = parse_quad_literal(literal);
    const auto img = x.is_rational() ? question_mark(x.to_rational()) : question_mark_quad(x);
    const auto cf = x.is_rational() ? cf_expand(x.to_rational()) : cf_expand(x);
    o.result = json{{"x", x.to_string()}, {"continued_fraction", to_string(cf)}, {"image", image_json(img)}};
    o.text.push_back("x = " + x.to_string() + " = " + to_string(cf));
    o.text.push_back("?(x) = " + img.to_string() + (img.is_dyadic() ? " (dyadic)" : " (non-dyadic)"));
    return o;
}

Outcome cmd_scale(const std::string& literal, std::int64_t bound)
{
    Outcome o;
    o.inputs = json{{"theta", literal}, {"bound", num(bound)}};
    const auto theta = parse_quad_literal(literal);
    const auto points = scale_embedding(theta, bound);
    json arr = json::array();
    o.text.push_back("theta = " + theta.to_string() + ", |m|,|n| <= " + num(bound));
    for (const auto& p : points) {
        arr.push_back(json{{"m", num(p.m)},
                           {"n", num(p.n)},
                           {"value", p.value.to_string()},
                           {"approx", decimal(p.value.to_double())},
                           {"image", image_json(p.image)}});
        o.text.push_back("  " + num(p.m) + " + " + num(p.n) + "*theta = " + p.value.to_string() + " ~ " +
                         decimal(p.value.to_double()) + "  ->  " + p.image.to_string());
    }
    o.result = json{{"theta", theta.to_string()}, {"points", arr}};
    return o;
}

json cm_report_json(const CMCurveReport& r)
{
    json j{{"D", num(r.D)},
           {"f", num(r.f)},
           {"R", order_json(r.R)},
           {"cl_R", group_json(r.cl_R)},
           {"sha", prediction_json(r.sha)}};
    if (r.lambda) {
        j["f_prime"] = num(r.lambda->f_prime);
        j["lambda"] = json{{"order", order_json(r.lambda->order)},
                           {"h_wide", num(r.lambda->h_wide)},
                           {"h_narrow", num(r.lambda->h_narrow)}};
    } else {
        j["f_prime"] = nullptr;
        j["lambda"] = nullptr;
    }
    j["parity_split"] = r.parity_split ? prediction_json(*r.parity_split) : json(nullptr);
    return j;
}

Outcome cmd_sha_cm(std::int64_t D, std::int64_t f, std::int64_t conductor_bound, bool allow_missing_lambda)
{
    Outcome o;
    o.inputs = json{{"D", num(D)},
                    {"f", num(f)},
                    {"conductor_bound", num(conductor_bound)},
                    {"allow_missing_lambda", allow_missing_lambda}};
    CMOptions opts;
    opts.conductor_bound = conductor_bound;
    opts.allow_missing_lambda = allow_missing_lambda;
    const auto r = sha_cm_curve(D, f, opts);
    o.result = cm_report_json(r);
    o.warnings = r.warnings;
    o.text.push_back("R = Z + " + num(f) + "*O_K, K = Q(sqrt(-" + num(D) + ")), disc " + num(r.R.disc));
    o.text.push_back("Cl(R): " + group_text(r.cl_R));
    if (r.lambda) {
        o.text.push_back("f' = " + num(r.lambda->f_prime) + ", Lambda disc " + num(r.lambda->order.disc) +
                         ", h(Lambda) = " + num(r.lambda->h_wide) + " (narrow " + num(r.lambda->h_narrow) + ")");
    } else {
        o.text.push_back("f' = none within " + num(conductor_bound));
    }
    o.text.push_back("Sha = Cl(R) + Cl(R): " + group_text(r.sha.result));
    return o;
}

Outcome cmd_sha_from_cl(const std::vector<std::int64_t>& divisors)
{
    Outcome o;
    o.inputs["divisors"] = num_list(divisors);
    const auto g = AbelianGroupStructure::from_divisors(divisors);
    const auto s = sha_from_class_group(g);
    o.result = prediction_json(s);
    o.text.push_back("Cl: " + group_text(g));
    o.text.push_back("k = " + num(s.k) + " (" + to_string(s.parity) + ")");
    o.text.push_back("Sha: " + group_text(s.result));
    return o;
}

Outcome cmd_companion(const std::vector<std::int64_t>& coeffs, std::int64_t p, const std::string& kind, bool hasse)
{
    Outcome o;
    o.inputs = json{{"coeffs", num_list(coeffs)}, {"p", num(p)}, {"kind", kind}, {"hasse", hasse}};
    IntMatrix m;
    IntMatrix image;
    if (kind == "L") {
        m = companion_L(coeffs, p);
        image = functor_map_inverse(m);
    } else if (kind == "Fr") {
        m = companion_Fr(coeffs, p);
        image = functor_map(m);
    } else {
        throw InputError("--kind must be L or Fr");
    }
    const auto cp = m.characteristic_polynomial();
    o.result = json{{"kind", kind},
                    {"matrix", matrix_json(m)},
                    {"char_poly", num_list(cp)},
                    {"determinant", num(m.determinant())},
                    {kind == "Fr" ? "functor_image" : "functor_preimage", matrix_json(image)}};
    o.text.push_back(kind + " = " + m.to_string());
    o.text.push_back("char poly: " + polynomial_to_string(cp));
    o.text.push_back("det: " + num(m.determinant()));
    o.text.push_back(std::string(kind == "Fr" ? "L = F(Fr): " : "Fr with F(Fr) = L: ") + image.to_string());
    if (hasse) {
        if (coeffs.size() != 1) {
            throw InputError("--hasse applies to 2x2 matrices only");
        }
        const bool okay = satisfies_hasse_bound(coeffs.front(), p);
        o.result["hasse_bound"] = okay;
        o.text.push_back(std::string("Hasse bound |a1| <= 2 sqrt(p): ") + (okay ? "holds" : "violated"));
        if (!okay) {
            o.warnings.push_back("a1 violates the Hasse bound for p = " + num(p));
        }
    }
    return o;
}

Outcome cmd_lmfdb_compare(const std::vector<std::int64_t>& d_list, std::int64_t f, bool offline, bool refresh,
                          int limit, const Context& ctx)
{
    Outcome o;
    o.inputs = json{{"D_list", num_list(d_list)}, {"f", num(f)}, {"offline", offline}, {"refresh", refresh},
                    {"limit", num(limit)}};
    if (offline && refresh) {
        throw InputError("--offline and --refresh are mutually exclusive");
    }
    const auto config = ctx.config ? *ctx.config : lmfdb::Config::from_environment();
    std::shared_ptr<lmfdb::Transport> transport = ctx.transport;
    if (!transport && !offline) {
        transport = std::make_shared<lmfdb::HttpTransport>();
    }
    lmfdb::Client client(config, transport, ctx.clock ? ctx.clock : lmfdb::Clock(std::chrono::system_clock::now));
    const auto policy = offline ? lmfdb::CachePolicy::offline
                                : refresh ? lmfdb::CachePolicy::refresh : lmfdb::CachePolicy::prefer_cache;

    std::vector<CMCurveReport> predictions;
    std::vector<lmfdb::CurveRecord> records;
    for (auto D : d_list) {
        CMOptions opts;
        opts.allow_missing_lambda = true;
        predictions.push_back(sha_cm_curve(D, f, opts));
        for (const auto& w : predictions.back().warnings) {
            if (w.rfind("Lambda", 0) == 0) {
                o.warnings.push_back("D = " + num(D) + ": " + w);
            }
        }
        const lmfdb::CurveQuery q{predictions.back().R.disc, limit};
        try {
            auto rs = client.fetch_cm_curves(q, policy);
            records.insert(records.end(), rs.begin(), rs.end());
        } catch (const FetchError& e) {
            if (!offline) {
                throw;
            }
            o.warnings.push_back(e.what());
        }
    }
    const auto report = lmfdb::compare_report(predictions, records);
    json rows = json::array();
    o.text.push_back("label            D     f  cm_disc  predicted  analytic  match");
    for (const auto& r : report.rows) {
        rows.push_back(json{{"label", r.label},
                            {"D", num(r.D)},
                            {"f", num(r.f)},
                            {"cm_discriminant", num(r.cm_discriminant)},
                            {"predicted_order", num(r.predicted_order)},
                            {"analytic_order", r.analytic_order ? json(num(*r.analytic_order)) : json(nullptr)},
                            {"match", lmfdb::to_string(r.match)}});
        std::ostringstream line;
        line << std::left << std::setw(16) << (r.label.empty() ? "-" : r.label) << std::right << std::setw(2) << r.D
             << std::setw(6) << r.f << std::setw(9) << r.cm_discriminant << std::setw(11) << r.predicted_order
             << std::setw(10) << (r.analytic_order ? std::to_string(*r.analytic_order) : "-") << "  "
             << lmfdb::to_string(r.match);
        o.text.push_back(line.str());
    }
    o.text.push_back("summary: yes " + num(report.yes) + ", no " + num(report.no) + ", unknown " +
                     num(report.unknown));
    if (report.no > 0) {
        o.warnings.push_back(num(report.no) +
                             " row(s) disagree with the database; the relation between the prediction and the "
                             "analytic values is not established, so mismatches are informational");
    }
    o.result = json{{"rows", rows},
                    {"summary", json{{"yes", num(report.yes)}, {"no", num(report.no)}, {"unknown", num(report.unknown)}}},
                    {"analytic_field", "sha"}};
    return o;
}

void render(const std::string& command, const Outcome& o, bool as_json, bool quiet, std::ostream& out,
            std::ostream& err)
{
    if (as_json) {
        json env{{"command", command},
                 {"version", output_version},
                 {"inputs", o.inputs},
                 {"result", o.result},
                 {"warnings", o.warnings}};
        out << env.dump(2) << "\n";
        return;
    }
    for (const auto& line : o.text) {
        out << line << "\n";
    }
    if (!quiet) {
        for (const auto& w : o.warnings) {
            err << "warning: " << w << "\n";
        }
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Context& ctx)
{
    CLI::App app{"Predicted Shafarevich-Tate groups of CM elliptic curves from quadratic class groups", "sha-predict"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    bool as_json = false;
    bool quiet = false;
    app.add_flag("--json", as_json, "Emit a JSON envelope");
    app.add_flag("--quiet", quiet, "Suppress warnings on stderr");

    std::int64_t disc = 0;
    auto* classgroup = app.add_subcommand("classgroup", "Class group (definite) or narrow/wide class numbers");
    classgroup->add_option("--disc", disc, "Discriminant")->required();

    std::int64_t d_k = 0;
    std::int64_t f = 1;
    bool narrow = false;
    auto* order_h = app.add_subcommand("order-h", "Class number of the order of conductor f");
    order_h->add_option("--dk", d_k, "Fundamental discriminant")->required();
    order_h->add_option("--f", f, "Conductor")->required();
    order_h->add_flag("--narrow", narrow, "Also report the narrow class number");

    std::string poly;
    std::int64_t sim_bound = 25;
    auto* latmac = app.add_subcommand("latmac", "Matrix representatives of the ideal classes of Z[lambda]");
    latmac->add_option("--poly", poly, "Monic quadratic, e.g. \"x^2-10\"")->required();
    latmac->add_option("--bound", sim_bound, "Entry bound for the similarity search");

    std::string value;
    auto* minkowski = app.add_subcommand("minkowski", "Exact Minkowski question-mark value");
    minkowski->add_option("--value", value, "Rational or quadratic irrational literal")->required();

    std::string theta;
    std::int64_t scale_bound = 1;
    auto* scale = app.add_subcommand("scale", "Question-mark images of [0,1] cap (Z + Z theta)");
    scale->add_option("--theta", theta, "Quadratic irrational in (0,1)")->required();
    scale->add_option("--bound", scale_bound, "Bound on |m|, |n|")->required();

    std::int64_t D = 0;
    std::int64_t cm_f = 1;
    std::int64_t conductor_bound = default_conductor_bound;
    auto* sha_cm = app.add_subcommand("sha-cm", "Sha prediction for a CM elliptic curve");
    sha_cm->add_option("--D", D, "Square-free D > 1, K = Q(sqrt(-D))")->required();
    sha_cm->add_option("--f", cm_f, "Conductor of the CM order")->required();
    sha_cm->add_option("--conductor-bound", conductor_bound, "Search bound for f'");
    bool allow_missing_lambda = false;
    sha_cm->add_flag("--allow-missing-lambda", allow_missing_lambda,
                     "Report Sha even when no f' exists within the bound");

    std::vector<std::int64_t> divisors;
    auto* sha_cl = app.add_subcommand("sha-from-cl", "Sha assembled from a class group structure");
    sha_cl->add_option("--divisors", divisors, "Elementary divisors d1|d2|..., comma separated")
        ->required()
        ->delimiter(',');

    std::vector<std::int64_t> coeffs;
    std::int64_t p = 0;
    std::string kind;
    bool hasse = false;
    auto* companion = app.add_subcommand("companion", "Companion matrices L_v and Fr_v");
    companion->add_option("--coeffs", coeffs, "a1,...,a_{2n-1}")->required()->delimiter(',');
    companion->add_option("--p", p, "Prime")->required();
    companion->add_option("--kind", kind, "L or Fr")->required()->check(CLI::IsMember({"L", "Fr"}));
    companion->add_flag("--hasse", hasse, "Check |a1| <= 2 sqrt(p)");

    std::vector<std::int64_t> d_list;
    std::int64_t cmp_f = 1;
    bool offline = false;
    bool refresh = false;
    int limit = 100;
    auto* lmfdb_cmd = app.add_subcommand("lmfdb-compare", "Compare predictions with LMFDB analytic Sha");
    lmfdb_cmd->add_option("--D-list", d_list, "Comma separated D values")->required()->delimiter(',');
    lmfdb_cmd->add_option("--f", cmp_f, "Conductor");
    lmfdb_cmd->add_flag("--offline", offline, "Serve from the cache only");
    lmfdb_cmd->add_flag("--refresh", refresh, "Ignore cached entries");
    lmfdb_cmd->add_option("--limit", limit, "Records per query");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return input_error;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        Outcome o;
        if (sub == classgroup) {
            o = cmd_classgroup(disc);
        } else if (sub == order_h) {
            o = cmd_order_h(d_k, f, narrow);
        } else if (sub == latmac) {
            o = cmd_latmac(poly, sim_bound);
        } else if (sub == minkowski) {
            o = cmd_minkowski(value);
        } else if (sub == scale) {
            o = cmd_scale(theta, scale_bound);
        } else if (sub == sha_cm) {
            o = cmd_sha_cm(D, cm_f, conductor_bound, allow_missing_lambda);
        } else if (sub == sha_cl) {
            o = cmd_sha_from_cl(divisors);
        } else if (sub == companion) {
            o = cmd_companion(coeffs, p, kind, hasse);
        } else {
            o = cmd_lmfdb_compare(d_list, cmp_f, offline, refresh, limit, ctx);
        }
        render(command, o, as_json, quiet, out, err);
        return ok;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const SearchExhausted& e) {
        err << "error: " << e.what() << "\n";
        return bound_exhausted;
    } catch (const FetchError& e) {
        err << "error: " << e.what() << "\n";
        return network_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return network_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }
}

} // namespace sha_predict::cli
