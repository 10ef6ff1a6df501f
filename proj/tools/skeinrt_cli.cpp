#include "skeinrt/analysis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace skeinrt;
using json = nlohmann::ordered_json;

namespace {

constexpr const char *kVersion = "skeinrt 1.0";

struct RunConfig {
    std::string format = "json";
    int threads = 0;
    std::uint64_t seed = 20240611;
    int degree_bound = 4;
    std::size_t samples = 0;  // 0: automatic
    double tolerance = kTol;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string cplx_str(cplx z)
{
    auto clean = [](double x) { return std::abs(x) < 1e-10 ? 0.0 : x; };
    const double re = clean(z.real()), im = clean(z.imag());
    char buf[96];
    if (im == 0)
        std::snprintf(buf, sizeof buf, "%.10g", re);
    else if (re == 0)
        std::snprintf(buf, sizeof buf, "%.10gi", im);
    else
        std::snprintf(buf, sizeof buf, "%.10g%+.10gi", re, im);
    return buf;
}

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}, {"str", cplx_str(z)}}; }

json document(const std::string &command, json inputs, const std::string &method)
{
    json d;
    d["command"] = command;
    d["inputs"] = std::move(inputs);
    d["method"] = method;
    d["values"] = json::object();
    d["cross-check"] = "n/a";
    d["verdict"] = "n/a";
    return d;
}

json rank_json(const RankReport &r)
{
    json j{{"estimated", r.estimated_dimension},
           {"expected", r.expected_dimension},
           {"expected_source", r.expected_source},
           {"generators", r.generator_count},
           {"degree_bound", r.degree_bound},
           {"samples", r.sample_count},
           {"rank_at_D", r.rank_at_D},
           {"rank_at_D1", r.rank_at_D1},
           {"spectral_gap", std::isfinite(r.spectral_gap) ? json(r.spectral_gap) : json(nullptr)},
           {"upper_bound", r.upper_bound},
           {"predicted_nullity", r.predicted_nullity},
           {"numeric_nullity", r.numeric_nullity},
           {"relations_verified", r.relations_verified},
           {"exact_checks", r.exact_checks}};
    j["parts"] = r.parts;
    j["excluded_points"] = r.excluded_points;
    j["notes"] = r.notes;
    return j;
}

json image_json(const ImageReport &r)
{
    json classes = json::array();
    for (auto &c : r.classes) {
        json kept = json::array(), dropped = json::array();
        for (auto &l : c.kept)
            kept.push_back(l.str());
        for (auto &[l, why] : c.dropped)
            dropped.push_back({{"label", l.str()}, {"reason", why}});
        classes.push_back({{"grade", c.grade.str()}, {"kept", kept}, {"dropped", dropped}, {"upper", c.upper}, {"lower", c.lower}});
    }
    return {{"lower", r.lower},        {"upper", r.upper},
            {"expected", r.expected},  {"expected_is_sharp", r.sharp_expected},
            {"degree_bound", r.degree_bound}, {"samples", r.sample_count},
            {"reductions_verified", r.reductions_verified}, {"classes", classes},
            {"excluded_points", r.excluded_points}, {"notes", r.notes}};
}

// ---------------------------------------------------------------------------
// output

void print_pretty(const json &j, const std::string &indent, std::ostream &os)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = j.is_object() ? it.key() : "-";
        const json &v = *it;
        if (v.is_object() && v.contains("str") && v.size() == 3)
            os << indent << key << ": " << v["str"].get<std::string>() << "\n";
        else if (v.is_structured() && !v.empty()) {
            os << indent << key << ":\n";
            print_pretty(v, indent + "  ", os);
        } else if (v.is_string())
            os << indent << key << ": " << v.get<std::string>() << "\n";
        else
            os << indent << key << ": " << v.dump() << "\n";
    }
}

void flatten(const json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &out)
{
    if (j.is_object() && j.contains("str") && j.size() == 3) {
        out.emplace_back(prefix, j["str"].get<std::string>());
        return;
    }
    if (j.is_structured()) {
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i)
            flatten(*it, prefix.empty() ? (j.is_object() ? it.key() : std::to_string(i))
                                        : prefix + "." + (j.is_object() ? it.key() : std::to_string(i)),
                    out);
        return;
    }
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

void emit(const json &doc, const RunConfig &cfg)
{
    if (cfg.format == "pretty") {
        print_pretty(doc, "", std::cout);
    } else if (cfg.format == "csv") {
        // tables become rows; everything else is key,value
        std::vector<std::pair<std::string, std::string>> kv;
        flatten(doc, "", kv);
        std::cout << "key,value\n";
        for (auto &[k, v] : kv)
            std::cout << csv_field(k) << "," << csv_field(v) << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
}

// ---------------------------------------------------------------------------
// cache

std::optional<std::filesystem::path> cache_path(const std::string &key)
{
    const char *dir = std::getenv("SKEINRT_CACHE_DIR");
    if (!dir || !*dir)
        return std::nullopt;
    const std::size_t h = std::hash<std::string>{}(std::string(kVersion) + "|" + key);
    return std::filesystem::path(dir) / ("skeinrt-" + std::to_string(h) + ".json");
}

template <class Fn>
json cached(const std::string &key, Fn &&compute)
{
    auto path = cache_path(key);
    if (path && std::filesystem::exists(*path)) {
        std::ifstream in(*path);
        json j = json::parse(in, nullptr, false);
        if (!j.is_discarded() && j.value("cache_key", "") == key) {
            j.erase("cache_key");
            return j;
        }
    }
    json j = compute();
    if (path) {
        std::filesystem::create_directories(path->parent_path());
        json stored = j;
        stored["cache_key"] = key;
        std::ofstream(*path) << stored.dump();
    }
    return j;
}

// ---------------------------------------------------------------------------
// helpers

RootOfUnity make_root(i64 order, i64 s)
{
    if (order < 1)
        throw std::domain_error("--order must be positive");
    if (std::gcd(s, order) != 1)
        throw std::domain_error("--s must be coprime to --order (gcd(" + std::to_string(s) + "," + std::to_string(order) +
                                ") = " + std::to_string(std::gcd(s, order)) + ")");
    return RootOfUnity(order, s);
}

std::array<i64, 4> parse_matrix(const std::string &s)
{
    std::array<i64, 4> m{};
    std::stringstream ss(s);
    std::string tok;
    std::size_t i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 4)
            throw UsageError("--matrix expects a,b,c,d");
        try {
            m[i++] = std::stoll(tok);
        } catch (const std::exception &) {
            throw UsageError("--matrix: bad entry '" + tok + "'");
        }
    }
    if (i != 4)
        throw UsageError("--matrix expects a,b,c,d");
    return m;
}

AnalysisOptions options_from(const RunConfig &cfg)
{
    AnalysisOptions opt;
    opt.threads = cfg.threads;
    if (cfg.samples)
        opt.extra_points = cfg.samples;
    return opt;
}

json group_ring_json(const GroupRingElement &x)
{
    return {{"order", x.order()}, {"coefficients", x.coefficients()}, {"value", cplx_json(x.embed())}};
}

// ---------------------------------------------------------------------------
// subcommands

json gauss_compute(const RunConfig &cfg, i64 a, i64 b, i64 order, i64 s)
{
    const RootOfUnity xi = make_root(order, s);
    json doc = document("gauss compute", {{"a", a}, {"b", b}, {"order", order}, {"s", s}}, "brute force over Z[zeta]");
    const auto brute = gauss_brute(a, b, xi);
    doc["values"]["exact"] = group_ring_json(brute);
    doc["values"]["value"] = cplx_json(brute.embed());
    if (b % 2 == 0 && a != 0) {
        const auto cf = gauss_closed(a, b, xi);
        json closed{{"kind", to_string(cf.kind)}, {"item", cf.item}, {"q", cf.q}, {"r", cf.r}};
        if (cf.kind == ClosedKind::Uncovered) {
            doc["cross-check"] = "n/a";
        } else {
            const bool ok = cf.to_group_ring(xi).equals(brute) && std::abs(cf.value(xi) - brute.embed()) < cfg.tolerance;
            closed["value"] = cplx_json(cf.value(xi));
            closed["phase_exponent"] = cf.phase_exponent;
            closed["base_a"] = cf.base_a;
            doc["cross-check"] = ok ? "pass" : "fail";
        }
        doc["values"]["closed_form"] = closed;
    }
    doc["verdict"] = cplx_str(brute.embed());
    return doc;
}

json gauss_verify(const RunConfig &, i64 max_order, i64 max_a, i64 max_two_b, std::size_t per_order)
{
    json doc = document("gauss verify",
                        {{"max_order", max_order}, {"max_a", max_a}, {"max_2b", max_two_b}, {"exponents_per_order", per_order}},
                        "closed form vs brute force, exact in Z[zeta]");
    std::map<std::string, std::array<std::size_t, 2>> per_case;  // pass, fail
    std::size_t fails = 0;
    json failures = json::array();
    for (i64 n = 1; n <= max_order; ++n)
        for (i64 s : n == 1 ? std::vector<i64>{0} : spread_units(n, per_order)) {
            RootOfUnity xi(n, s);
            for (i64 a = 1; a <= max_a; ++a)
                for (i64 tb = -max_two_b; tb <= max_two_b; tb += 2) {
                    const auto cf = gauss_closed(a, tb, xi);
                    const std::string key = cf.kind == ClosedKind::Uncovered ? "uncovered" : "item " + std::to_string(cf.item);
                    if (cf.kind == ClosedKind::Uncovered) {
                        per_case[key][0]++;
                        continue;
                    }
                    const bool ok = cf.to_group_ring(xi).equals(gauss_brute(a, tb, xi));
                    per_case[key][ok ? 0 : 1]++;
                    if (!ok) {
                        ++fails;
                        if (failures.size() < 20)
                            failures.push_back({{"a", a}, {"2b", tb}, {"order", n}, {"s", s}});
                    }
                }
        }
    for (auto &[k, v] : per_case)
        doc["values"]["cases"][k] = {{"pass", v[0]}, {"fail", v[1]}};
    doc["values"]["failures"] = failures;
    doc["cross-check"] = fails ? "fail" : "pass";
    doc["verdict"] = fails ? "mismatch" : "all cases pass";
    return doc;
}

json gauss_relations(const RunConfig &cfg, i64 k)
{
    if (k < 2)
        throw std::domain_error("--k must be at least 2");
    const AnalysisOptions opt = options_from(cfg);
    json doc = document("gauss relations", {{"k", k}}, "square-class relations checked exactly at small orders");
    const SampleGrid grid = make_grid(k, opt.exact_points_per_group, 2, 2);
    const auto vc = verify_gauss_classes(k, grid.points, opt.merge_mod4);
    json classes = json::array();
    for (auto &c : vc.classes) {
        json members = json::array();
        for (std::size_t i = 0; i < c.ls.size(); ++i)
            members.push_back({{"l", c.ls[i]}, {"relation", "G(k," + std::to_string(2 * c.ls[i]) + ") = A^" +
                                                                std::to_string(c.phase[i]) + " G(k," +
                                                                std::to_string(2 * c.ls[0]) + ")"}});
        classes.push_back({{"d", c.d}, {"key", c.key}, {"members", members}});
    }
    doc["values"]["classes"] = classes;
    doc["values"]["class_count"] = vc.classes.size();
    doc["values"]["divisor_sum"] = sum_squares_over_divisors(k);
    doc["values"]["exact_checks"] = vc.checks;
    doc["values"]["failures"] = vc.failures;
    doc["cross-check"] = vc.failures.empty() ? "pass" : "fail";
    doc["verdict"] = std::to_string(vc.classes.size()) + " classes";
    return doc;
}

json skein_reduce(const RunConfig &cfg, const std::string &monodromy, i64 k, const std::string &label)
{
    const SkeinVector v = parse_skein(label);
    json doc = document("skein reduce", {{"monodromy", monodromy}, {"k", k}, {"label", label}}, "rewriting to the horizontal basis");
    const bool is_S = monodromy == "S";
    const ReductionResult res = is_S ? reduce_horizontal_S(v) : reduce_horizontal_k(v, k);
    json steps = json::array();
    for (auto &st : res.trace)
        steps.push_back({{"rule", st.rule}, {"lhs", st.lhs.str()}, {"rhs", st.rhs.str()}});
    doc["values"]["reduced"] = res.value.str();
    doc["values"]["steps"] = steps;
    // evaluation at a few roots, before and after
    bool ok = replay(v, res.trace) == res.value;
    json evals = json::array();
    for (i64 r : {7, 9, 11, 13}) {
        RootOfUnity xi(2 * r, 1);
        const cplx a = is_S ? rt_invariant_S(v, xi) : rt_invariant_trace(k, v, xi);
        const cplx b = is_S ? rt_invariant_S(res.value, xi) : rt_invariant_trace(k, res.value, xi);
        ok = ok && std::abs(a - b) <= cfg.tolerance * std::max(1.0, std::abs(a));
        evals.push_back({{"root", xi.str()}, {"input", cplx_json(a)}, {"reduced", cplx_json(b)}});
    }
    doc["values"]["evaluations"] = evals;
    doc["cross-check"] = ok ? "pass" : "fail";
    doc["verdict"] = res.value.str();
    return doc;
}

json skein_product(const RunConfig &, const std::string &left, const std::string &right)
{
    json doc = document("skein product", {{"left", left}, {"right", right}}, "product-to-sum");
    const SkeinVector prod = product_to_sum(parse_skein(left), parse_skein(right));
    doc["values"]["product"] = prod.str();
    doc["verdict"] = prod.str();
    return doc;
}

json rt_eval(const RunConfig &cfg, i64 k, std::optional<i64> l, std::optional<std::string> label, i64 order, i64 s,
             const std::string &method)
{
    const RootOfUnity xi = make_root(order, s);
    if (order % 2)
        throw std::domain_error("--order must be even (xi of order 2r)");
    SkeinVector v;
    json inputs{{"k", k}, {"order", order}, {"s", s}};
    if (l) {
        v = SkeinVector(CurveLabel(*l, 0));
        inputs["l"] = *l;
    } else if (label) {
        v = parse_skein(*label);
        inputs["label"] = *label;
    } else {
        throw UsageError("rt eval needs --l or --label");
    }
    json doc = document("rt eval", inputs, method);
    std::optional<cplx> trace, closed;
    if (method == "trace" || method == "both")
        trace = rt_invariant_trace(k, v, xi);
    if (method == "closed" || method == "both") {
        cplx acc = 0;
        for (auto &[lab, c] : v.terms()) {
            if (lab.q() == 0)
                acc += c.evaluate(xi) * rt_closed_Tl(k, lab.p(), xi);
            else
                acc += c.evaluate(xi) * ev_closed_pq(k, lab.p(), lab.q(), xi);
        }
        closed = acc;
    }
    if (trace)
        doc["values"]["trace"] = cplx_json(*trace);
    if (closed)
        doc["values"]["closed"] = cplx_json(*closed);
    if (trace && closed)
        doc["cross-check"] = std::abs(*trace - *closed) <= cfg.tolerance ? "pass" : "fail";
    doc["verdict"] = cplx_str(trace ? *trace : *closed);
    return doc;
}

json dim_gk(const RunConfig &cfg, i64 k)
{
    const std::string key = "dim gk k=" + std::to_string(k) + " D=" + std::to_string(cfg.degree_bound) +
                            " samples=" + std::to_string(cfg.samples);
    return cached(key, [&] {
        json doc = document("dim gk", {{"k", k}, {"degree_bound", cfg.degree_bound}},
                            "rank growth over sampled roots, exact relation checks");
        const RankReport r = dim_Gk(k, cfg.degree_bound, options_from(cfg));
        doc["values"] = rank_json(r);
        doc["cross-check"] = r.relations_verified ? "pass" : "fail";
        doc["verdict"] = r.verdict;
        return doc;
    });
}

json dim_image(const RunConfig &cfg, i64 k)
{
    const std::string key = "dim image k=" + std::to_string(k) + " D=" + std::to_string(cfg.degree_bound) +
                            " samples=" + std::to_string(cfg.samples);
    return cached(key, [&] {
        json doc = document("dim image", {{"k", k}, {"degree_bound", cfg.degree_bound}},
                            "per-grading rank of ev on the horizontal basis");
        const ImageReport r = image_dimension(k, cfg.degree_bound, options_from(cfg));
        doc["values"] = image_json(r);
        doc["values"]["kinnear_dimension"] = kinnear_dimension(k);
        doc["cross-check"] = r.reductions_verified ? "pass" : "fail";
        doc["verdict"] = r.lower == r.upper ? std::to_string(r.lower)
                                            : std::to_string(r.lower) + ".." + std::to_string(r.upper);
        return doc;
    });
}

json report_main(const RunConfig &cfg, const std::vector<i64> &ks)
{
    json inputs{{"k", ks}, {"degree_bound", cfg.degree_bound}};
    json doc = document("report main-theorem", inputs, "image dimension vs Kinnear dimension");
    json table = json::array();
    bool agree = true;
    std::string last;
    for (i64 k : ks) {
        const std::string key = "report k=" + std::to_string(k) + " D=" + std::to_string(cfg.degree_bound) +
                                " samples=" + std::to_string(cfg.samples);
        json row = cached(key, [&] {
            const auto rep = injectivity_verdict(k, cfg.degree_bound, options_from(cfg));
            json r{{"k", k},
                   {"expected", to_string(rep.expected)},
                   {"computed", to_string(rep.verdict)},
                   {"image_lower", rep.image.lower},
                   {"image_upper", rep.image.upper},
                   {"kinnear", rep.kinnear}};
            if (rep.mod4_colinear)
                r["mod4_colinear"] = *rep.mod4_colinear;
            r["notes"] = rep.notes;
            return r;
        });
        row["agrees"] = row["expected"] == row["computed"];
        agree = agree && row["agrees"].get<bool>();
        last = row["computed"].get<std::string>();
        table.push_back(row);
    }
    doc["values"]["table"] = table;
    doc["cross-check"] = agree ? "pass" : "fail";
    doc["verdict"] = ks.size() == 1 ? last : (agree ? "all agree" : "disagreement");
    return doc;
}

json monodromy_rho(const RunConfig &cfg, const std::string &matrix, i64 order, i64 s, std::size_t pairs)
{
    const auto m = parse_matrix(matrix);
    const RootOfUnity xi = make_root(order, s);
    BasisSpec spec(xi);
    json doc = document("monodromy rho", {{"matrix", m}, {"order", order}, {"s", s}, {"pairs", pairs}, {"seed", cfg.seed}},
                        "folded Weil representation, defined up to phase");
    const CMatrix R = rho_general(m[0], m[1], m[2], m[3], spec).mat;
    json rows = json::array();
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < R.cols(); ++j)
            row.push_back(cplx_str(R(i, j)));
        rows.push_back(row);
    }
    doc["values"]["matrix"] = rows;
    doc["values"]["unitarity_defect"] = (R * R.adjoint() - CMatrix::Identity(R.rows(), R.cols())).norm();
    if (pairs) {
        // ρ(x)ρ(y) vs ρ(xy) on random words
        std::mt19937_64 rng(cfg.seed);
        const std::array<std::array<i64, 4>, 4> gens{{{1, 1, 0, 1}, {0, -1, 1, 0}, {1, -1, 0, 1}, {0, 1, -1, 0}}};
        auto word = [&] {
            std::array<i64, 4> w{1, 0, 0, 1};
            for (int i = 0; i < 6; ++i) {
                const auto &g = gens[rng() % 4];
                w = {w[0] * g[0] + w[1] * g[2], w[0] * g[1] + w[1] * g[3], w[2] * g[0] + w[3] * g[2], w[2] * g[1] + w[3] * g[3]};
            }
            return w;
        };
        double worst = 0;
        for (std::size_t t = 0; t < pairs; ++t) {
            auto x = word(), y = word();
            std::array<i64, 4> xy{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
                                  x[2] * y[1] + x[3] * y[3]};
            const CMatrix lhs = rho_general(x[0], x[1], x[2], x[3], spec).mat * rho_general(y[0], y[1], y[2], y[3], spec).mat;
            const CMatrix rhs = rho_general(xy[0], xy[1], xy[2], xy[3], spec).mat;
            Eigen::Index i, j;
            rhs.cwiseAbs().maxCoeff(&i, &j);
            const cplx c = lhs(i, j) / rhs(i, j);
            worst = std::max({worst, std::abs(std::abs(c) - 1.0), (lhs - c * rhs).cwiseAbs().maxCoeff()});
        }
        doc["values"]["homomorphism_max_deviation"] = worst;
        doc["cross-check"] = worst <= cfg.tolerance ? "pass" : "fail";
    }
    doc["verdict"] = "dimension " + std::to_string(spec.dim);
    return doc;
}

json monodromy_s_colinearity(const RunConfig &cfg, std::size_t count, i64 min_r, int r_mod4)
{
    const AnalysisOptions opt = options_from(cfg);
    if (!count)
        count = 2 * points_needed(2, cfg.degree_bound, opt) + 16;
    const auto pts = make_odd_r_points(count, min_r, opt.s_per_order, r_mod4);
    json doc = document("monodromy s-colinearity",
                        {{"points", count}, {"min_r", min_r}, {"r_mod4", r_mod4}, {"degree_bound", cfg.degree_bound}},
                        "rank of ev_S((1,0)) and ev_S((1,2)) over sampled odd-r roots");
    const auto rep = s_colinearity(pts, cfg.degree_bound, opt);
    doc["values"]["colinear"] = rep.colinear;
    doc["values"]["rank"] = rank_json(rep.rank);
    for (auto [res, ok] : rep.by_residue)
        doc["values"]["by_residue"]["r=" + std::to_string(res) + " mod 4"] = ok;
    doc["values"]["excluded"] = rep.excluded;
    doc["verdict"] = rep.colinear ? "colinear" : "not colinear";
    return doc;
}

}  // namespace

int main(int argc, char **argv)
{
    RunConfig cfg;
    CLI::App app{"skein modules of torus mapping tori: Gauss sums, TQFT traces and dimension analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_version_flag("--version", kVersion);
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", cfg.seed, "seed for randomized checks");
    app.add_option("--degree-bound", cfg.degree_bound, "degree bound D for rank estimates")->check(CLI::Range(0, 16));
    app.add_option("--samples", cfg.samples, "extra sample points beyond the minimum (0 = default)");
    app.add_option("--tolerance", cfg.tolerance, "numeric tolerance for cross-checks")->check(CLI::PositiveNumber);

    // gauss
    auto *gauss = app.add_subcommand("gauss", "generalized quadratic Gauss sums")->require_subcommand(1);
    i64 ga = 0, gb = 0, gorder = 0, gs = 1, gk = 0, gmax_order = 200, gmax_a = 12, gmax_2b = 24;
    std::size_t gper = 5;
    auto *g_compute = gauss->add_subcommand("compute", "G(a,b,xi) for xi = e^{2 i pi s/order}");
    g_compute->add_option("--a", ga, "quadratic coefficient")->required();
    g_compute->add_option("--b", gb, "linear coefficient");
    g_compute->add_option("--order", gorder, "order of xi")->required();
    g_compute->add_option("--s", gs, "exponent of xi, coprime to the order");
    auto *g_verify = gauss->add_subcommand("verify", "closed form vs brute force sweep");
    g_verify->add_option("--max-order", gmax_order)->check(CLI::PositiveNumber);
    g_verify->add_option("--max-a", gmax_a)->check(CLI::PositiveNumber);
    g_verify->add_option("--max-2b", gmax_2b)->check(CLI::NonNegativeNumber);
    g_verify->add_option("--exponents", gper, "exponents s per order")->check(CLI::PositiveNumber);
    auto *g_rel = gauss->add_subcommand("relations", "square-class relations among G(k,2l)");
    g_rel->add_option("--k", gk)->required();

    // skein
    auto *skein = app.add_subcommand("skein", "skein algebra of the torus")->require_subcommand(1);
    i64 sk = 0;
    std::string slabel, smono = "k", sleft, sright;
    auto *s_reduce = skein->add_subcommand("reduce", "reduce to the horizontal basis");
    s_reduce->add_option("--k", sk, "twist count (monodromy B^k)");
    s_reduce->add_option("--monodromy", smono, "k for the twist family, S for the rotation")->check(CLI::IsMember({"k", "S"}));
    s_reduce->add_option("--label", slabel, "skein element, e.g. \"(0,4)\" or \"[A^2]*(1,1) + (2,0)\"")->required();
    auto *s_product = skein->add_subcommand("product", "product-to-sum");
    s_product->add_option("--left", sleft)->required();
    s_product->add_option("--right", sright)->required();

    // rt
    auto *rt = app.add_subcommand("rt", "torus TQFT trace invariants")->require_subcommand(1);
    i64 rk = 0, rorder = 0, rs = 1, rr = 0;
    std::optional<i64> rl;
    std::optional<std::string> rlabel;
    std::string rmethod = "both";
    auto *r_eval = rt->add_subcommand("eval", "RT invariant of M_k with a curve");
    r_eval->add_option("--k", rk)->required();
    r_eval->add_option("--l", rl, "use (l,0)");
    r_eval->add_option("--label", rlabel, "skein element");
    r_eval->add_option("--order", rorder, "order 2r of xi");
    r_eval->add_option("--r", rr, "shorthand for --order 2r");
    r_eval->add_option("--s", rs);
    r_eval->add_option("--method", rmethod)->check(CLI::IsMember({"trace", "closed", "both"}));

    // dim
    auto *dim = app.add_subcommand("dim", "Q(A)-dimension estimates")->require_subcommand(1);
    i64 dk = 0;
    auto *d_gk = dim->add_subcommand("gk", "span of the Gauss sums G(k,2l)");
    d_gk->add_option("--k", dk)->required();
    auto *d_img = dim->add_subcommand("image", "image of the evaluation map");
    d_img->add_option("--k", dk)->required();

    // report
    auto *report = app.add_subcommand("report", "verdict tables")->require_subcommand(1);
    std::vector<i64> rep_ks;
    auto *r_main = report->add_subcommand("main-theorem", "injectivity verdicts, expected vs computed");
    r_main->add_option("--k", rep_ks, "one or more k")->required()->delimiter(',');

    // monodromy
    auto *mono = app.add_subcommand("monodromy", "general monodromy, r odd")->require_subcommand(1);
    std::string mmatrix = "0,-1,1,0";
    i64 morder = 14, ms = 1, mmin_r = 5;
    std::size_t mpairs = 0, mpoints = 0;
    int mmod4 = 0;
    auto *m_rho = mono->add_subcommand("rho", "matrix of rho(a b; c d)");
    m_rho->add_option("--matrix", mmatrix, "a,b,c,d with ad - bc = 1");
    m_rho->add_option("--order", morder, "order 2r of xi, r odd");
    m_rho->add_option("--s", ms);
    m_rho->add_option("--pairs", mpairs, "random pairs for the homomorphism check");
    auto *m_col = mono->add_subcommand("s-colinearity", "ev_S((1,2)) against ev_S((1,0))");
    m_col->add_option("--points", mpoints, "number of sample roots (0 = automatic)");
    m_col->add_option("--min-r", mmin_r);
    m_col->add_option("--r-mod4", mmod4, "restrict to r = 1 or 3 mod 4 (0 = both)")->check(CLI::IsMember({0, 1, 3}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        json doc;
        if (*g_compute)
            doc = gauss_compute(cfg, ga, gb, gorder, gs);
        else if (*g_verify)
            doc = gauss_verify(cfg, gmax_order, gmax_a, gmax_2b, gper);
        else if (*g_rel)
            doc = gauss_relations(cfg, gk);
        else if (*s_reduce) {
            if (smono == "k" && sk < 2)
                throw UsageError("skein reduce needs --k >= 2 (or --monodromy S)");
            doc = skein_reduce(cfg, smono, sk, slabel);
        } else if (*s_product)
            doc = skein_product(cfg, sleft, sright);
        else if (*r_eval) {
            if (rr && rorder)
                throw UsageError("give either --order or --r");
            if (rr)
                rorder = 2 * rr;
            if (!rorder)
                throw UsageError("rt eval needs --order or --r");
            doc = rt_eval(cfg, rk, rl, rlabel, rorder, rs, rmethod);
        } else if (*d_gk)
            doc = dim_gk(cfg, dk);
        else if (*d_img)
            doc = dim_image(cfg, dk);
        else if (*r_main)
            doc = report_main(cfg, rep_ks);
        else if (*m_rho)
            doc = monodromy_rho(cfg, mmatrix, morder, ms, mpairs);
        else if (*m_col)
            doc = monodromy_s_colinearity(cfg, mpoints, mmin_r, mmod4);
        doc["config"] = {{"threads", cfg.threads}, {"seed", cfg.seed}, {"version", kVersion}};
        emit(doc, cfg);
        return doc["cross-check"] == "fail" ? 1 : 0;
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
