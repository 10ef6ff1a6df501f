#pragma once

#include "tqft.hpp"

#include <Eigen/SVD>

#include <atomic>
#include <limits>
#include <thread>

namespace skeinrt {

// ---------------------------------------------------------------------------
// threading

inline unsigned resolve_threads(int threads)
{
    if (threads > 0)
        return static_cast<unsigned>(threads);
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers; fn must only write slot i.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn)
{
    const unsigned w = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lk(err_mu);
                    if (!err)
                        err = std::current_exception();
                }
            }
        });
    for (auto &th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// grids and samples

struct AnalysisOptions {
    int threads = 0;
    double rel_threshold = 1e-6;
    std::size_t s_per_order = 6;
    std::size_t extra_points = 16;
    i64 exact_max_order = 240;
    std::size_t exact_points_per_group = 4;
    bool escalate = true;
    int escalated_degree = 8;
    bool merge_mod4 = false;  // treat G(k,k) as a multiple of G(k,0) when 4 | k
};

/// u in U: order > 2 and not 2 mod 4.
inline bool in_U(const RootOfUnity &u) { return u.order() > 2 && u.order() % 4 != 2; }

/// r with -u of order 2r.
inline i64 r_of_U(i64 order) { return order % 2 ? order : order / 2; }

/// -u for any root, returned in lowest terms.
inline RootOfUnity negate_any(const RootOfUnity &u)
{
    return RootOfUnity::reduced(2 * u.exponent() + u.order(), 2 * u.order());
}

struct SampleGrid {
    std::vector<RootOfUnity> points;  // elements of U
    std::vector<i64> group;           // gcd(order, k) for each point
    std::vector<std::string> excluded;
};

inline std::vector<i64> spread_units(i64 n, std::size_t count)
{
    std::vector<i64> units;
    for (i64 s = 1; s < n; ++s)
        if (std::gcd(s, n) == 1)
            units.push_back(s);
    if (units.size() <= count)
        return units;
    std::vector<i64> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(units[i * units.size() / count]);
    return out;
}

/// Points of U grouped by d = gcd(order, k), per_group points for each divisor d.
inline SampleGrid make_grid(i64 k, std::size_t per_group, i64 min_r, std::size_t s_per_order)
{
    SampleGrid g;
    for (i64 d : divisors(k)) {
        if (d % 4 == 2 && k % 4 == 0) {
            // every order with gcd(order, k) = d is 2 mod 4
            g.excluded.push_back("group d=" + std::to_string(d) + " (empty in U)");
            continue;
        }
        std::size_t taken = 0;
        for (i64 m = 1; taken < per_group; ++m) {
            if (m > 64 * static_cast<i64>(per_group) + 64)
                throw std::logic_error("make_grid: cannot fill group d=" + std::to_string(d));
            const i64 n = d * m;
            if (n <= 2 || n % 4 == 2 || std::gcd(n, k) != d)
                continue;
            if (r_of_U(n) < min_r) {
                g.excluded.push_back("order " + std::to_string(n) + " (r=" + std::to_string(r_of_U(n)) + " < " +
                                     std::to_string(min_r) + ")");
                continue;
            }
            for (i64 s : spread_units(n, s_per_order)) {
                if (taken >= per_group)
                    break;
                g.points.emplace_back(n, s);
                g.group.push_back(d);
                ++taken;
            }
        }
    }
    return g;
}

/// Roots ξ of order 2r, r odd, r >= min_r.
inline std::vector<RootOfUnity> make_odd_r_points(std::size_t count, i64 min_r, std::size_t s_per_order,
                                                  int r_mod4 = 0)
{
    std::vector<RootOfUnity> out;
    for (i64 r = min_r | 1; out.size() < count; r += 2) {
        if (r_mod4 && r % 4 != r_mod4)
            continue;
        for (i64 s : spread_units(2 * r, s_per_order)) {
            if (out.size() >= count)
                break;
            out.emplace_back(2 * r, s);
        }
    }
    return out;
}

struct FunctionSample {
    std::vector<std::string> ids;
    std::vector<RootOfUnity> points;
    std::vector<cplx> variable;  // value of A at each point
    CMatrix values;              // ids x points
    std::vector<std::string> excluded;

    std::size_t generators() const { return ids.size(); }
    std::size_t samples() const { return points.size(); }
};

inline FunctionSample stack_rows(const FunctionSample &a, const FunctionSample &b)
{
    if (a.points != b.points)
        throw std::invalid_argument("stack_rows: samples use different points");
    FunctionSample out = a;
    out.ids.insert(out.ids.end(), b.ids.begin(), b.ids.end());
    out.values.resize(static_cast<Eigen::Index>(a.ids.size() + b.ids.size()), static_cast<Eigen::Index>(a.samples()));
    if (!a.ids.empty())
        out.values.topRows(static_cast<Eigen::Index>(a.ids.size())) = a.values;
    if (!b.ids.empty())
        out.values.bottomRows(static_cast<Eigen::Index>(b.ids.size())) = b.values;
    return out;
}

inline FunctionSample select_rows(const FunctionSample &a, const std::vector<std::size_t> &rows)
{
    FunctionSample out = a;
    out.ids.clear();
    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(a.samples()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.ids.push_back(a.ids[rows[i]]);
        out.values.row(static_cast<Eigen::Index>(i)) = a.values.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

/// Rows G(k, 2l, u) over the grid, with A = u.
inline FunctionSample sample_gauss(i64 k, const std::vector<i64> &ls, const SampleGrid &grid, int threads = 0)
{
    FunctionSample fs;
    for (i64 l : ls)
        fs.ids.push_back("G(" + std::to_string(k) + "," + std::to_string(2 * l) + ")");
    fs.points = grid.points;
    fs.excluded = grid.excluded;
    fs.variable.resize(grid.points.size());
    fs.values.resize(static_cast<Eigen::Index>(ls.size()), static_cast<Eigen::Index>(grid.points.size()));
    parallel_for(grid.points.size(), threads, [&](std::size_t i) {
        GaussEvaluator G(grid.points[i]);
        fs.variable[i] = grid.points[i].value();
        for (std::size_t j = 0; j < ls.size(); ++j)
            fs.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = G(k, 2 * ls[j]);
    });
    return fs;
}

/// ξ ↦ RT_ξ(M_k, label) at ξ = -u for each grid point u, with A = ξ.
inline FunctionSample sample_ev(i64 k, const std::vector<CurveLabel> &basis, const SampleGrid &grid, int threads = 0)
{
    FunctionSample fs;
    for (auto &l : basis)
        fs.ids.push_back(l.str());
    fs.points = grid.points;
    fs.excluded = grid.excluded;
    fs.variable.resize(grid.points.size());
    fs.values.resize(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(grid.points.size()));
    parallel_for(grid.points.size(), threads, [&](std::size_t i) {
        const RootOfUnity xi = negate_any(grid.points[i]);
        BasisSpec spec(xi);
        fs.variable[i] = xi.value();
        for (std::size_t j = 0; j < basis.size(); ++j)
            fs.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rt_trace_label(k, basis[j], spec);
    });
    return fs;
}

/// The function ν (1 when r is odd, 2 when r is even) on the grid, with A = ξ = -u.
inline FunctionSample sample_nu(const SampleGrid &grid)
{
    FunctionSample fs;
    fs.ids = {"nu"};
    fs.points = grid.points;
    fs.excluded = grid.excluded;
    fs.values.resize(1, static_cast<Eigen::Index>(grid.points.size()));
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const RootOfUnity xi = negate_any(grid.points[i]);
        fs.variable.push_back(xi.value());
        fs.values(0, static_cast<Eigen::Index>(i)) = static_cast<double>(nu_of(xi));
    }
    return fs;
}

/// Same grid, but with A = u instead of A = -u (the two differ by monomial signs only).
inline FunctionSample with_variable_u(FunctionSample fs)
{
    for (std::size_t i = 0; i < fs.points.size(); ++i)
        fs.variable[i] = fs.points[i].value();
    return fs;
}

// ---------------------------------------------------------------------------
// rank over Q(A)

struct RelationTerm {
    std::size_t generator = 0;
    i64 exponent = 0;
    cplx coeff;
};

using NumericRelation = std::vector<RelationTerm>;

struct NumericRank {
    std::size_t rank = 0;
    std::size_t columns = 0;
    double gap = std::numeric_limits<double>::infinity();
    double sigma_max = 0;
    std::vector<NumericRelation> null_vectors;
};

/// Rank of the matrix with columns f_j(ξ_i) ξ_i^e, e in [-D, D], columns normalized.
inline NumericRank numeric_rank(const FunctionSample &fs, int D, double rel_threshold, std::size_t want_null = 0)
{
    NumericRank out;
    const auto n = static_cast<Eigen::Index>(fs.generators());
    const auto m = static_cast<Eigen::Index>(fs.samples());
    const Eigen::Index W = 2 * D + 1;
    out.columns = static_cast<std::size_t>(n * W);
    if (n == 0)
        return out;
    CMatrix M(m, n * W);
    std::vector<double> scale(static_cast<std::size_t>(n * W), 1.0);
    for (Eigen::Index i = 0; i < m; ++i) {
        const cplx x = fs.variable[static_cast<std::size_t>(i)];
        std::vector<cplx> pw(static_cast<std::size_t>(W));
        for (Eigen::Index e = -D; e <= D; ++e)
            pw[static_cast<std::size_t>(e + D)] = std::pow(x, static_cast<int>(e));
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index e = 0; e < W; ++e)
                M(i, j * W + e) = fs.values(j, i) * pw[static_cast<std::size_t>(e)];
    }
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
        const double nm = M.col(c).norm();
        if (nm > 0) {
            M.col(c) /= nm;
            scale[static_cast<std::size_t>(c)] = nm;
        }
    }
    const unsigned flags = want_null ? Eigen::ComputeFullV : 0u;
    Eigen::JacobiSVD<CMatrix> svd(M, flags);
    const auto &sv = svd.singularValues();
    out.sigma_max = sv.size() ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_threshold * out.sigma_max)
            ++out.rank;
    if (out.rank > 0 && out.rank < static_cast<std::size_t>(sv.size()))
        out.gap = sv(static_cast<Eigen::Index>(out.rank) - 1) / std::max(sv(static_cast<Eigen::Index>(out.rank)), 1e-300);
    if (want_null) {
        const CMatrix &V = svd.matrixV();
        for (Eigen::Index c = static_cast<Eigen::Index>(out.rank); c < V.cols() && out.null_vectors.size() < want_null;
             ++c) {
            Eigen::VectorXcd v = V.col(c);
            for (Eigen::Index r = 0; r < v.size(); ++r)
                v(r) /= scale[static_cast<std::size_t>(r)];
            Eigen::Index best = 0;
            v.cwiseAbs().maxCoeff(&best);
            v /= v(best);
            NumericRelation rel;
            for (Eigen::Index r = 0; r < v.size(); ++r)
                if (std::abs(v(r)) > 1e-6)
                    rel.push_back({static_cast<std::size_t>(r / W), static_cast<i64>(r % W) - D, v(r)});
            out.null_vectors.push_back(std::move(rel));
        }
    }
    return out;
}

/// max_i |Σ c f_j(ξ_i) ξ_i^e| relative to the largest row magnitude.
inline double relation_residual(const FunctionSample &fs, const NumericRelation &rel)
{
    double worst = 0, ref = 0;
    for (std::size_t i = 0; i < fs.samples(); ++i) {
        cplx acc = 0;
        for (auto &t : rel) {
            const cplx f = fs.values(static_cast<Eigen::Index>(t.generator), static_cast<Eigen::Index>(i));
            acc += t.coeff * f * std::pow(fs.variable[i], static_cast<int>(t.exponent));
            ref = std::max(ref, std::abs(f));
        }
        worst = std::max(worst, std::abs(acc));
    }
    return ref > 0 ? worst / ref : worst;
}

struct RankReport {
    i64 k = 0;
    std::size_t generator_count = 0;
    int degree_bound = 0;
    std::size_t sample_count = 0;
    std::size_t rank_at_D = 0;
    std::size_t rank_at_D1 = 0;
    std::size_t nullity_at_D = 0;
    i64 estimated_dimension = 0;
    i64 expected_dimension = -1;
    std::string expected_source;
    std::string verdict;
    std::vector<NumericRelation> relations;
    int relation_degree = -1;  // smallest window carrying a relation
    double spectral_gap = std::numeric_limits<double>::infinity();
    bool well_conditioned = true;
    // filled by the callers that know exact relations
    i64 upper_bound = -1;
    i64 predicted_nullity = -1;
    i64 numeric_nullity = -1;
    bool relations_verified = false;
    std::size_t exact_checks = 0;
    std::map<std::string, i64> parts;
    std::vector<std::string> excluded_points;
    std::vector<std::string> notes;
};

/// Q(A)-dimension of the span of the sampled functions from the rank growth between D and D+1.
inline RankReport qa_rank(const FunctionSample &fs, int D, const AnalysisOptions &opt = {})
{
    RankReport rep;
    rep.generator_count = fs.generators();
    rep.degree_bound = D;
    rep.sample_count = fs.samples();
    rep.excluded_points = fs.excluded;
    if (fs.generators() == 0) {
        rep.verdict = "empty";
        return rep;
    }
    const std::size_t need = (2 * static_cast<std::size_t>(D) + 3) * fs.generators() + opt.extra_points;
    if (fs.samples() < need)
        throw std::invalid_argument("qa_rank: need at least " + std::to_string(need) + " samples, got " +
                                    std::to_string(fs.samples()));
    NumericRank a = numeric_rank(fs, D, opt.rel_threshold);
    NumericRank b = numeric_rank(fs, D + 1, opt.rel_threshold);
    rep.rank_at_D = a.rank;
    rep.rank_at_D1 = b.rank;
    rep.nullity_at_D = a.columns - a.rank;
    rep.spectral_gap = std::min(a.gap, b.gap);
    rep.well_conditioned = rep.spectral_gap > 1e3;
    if (!rep.well_conditioned)
        rep.notes.push_back("small spectral gap " + std::to_string(rep.spectral_gap));
    const std::size_t growth = b.rank - a.rank;
    if (growth % 2)
        rep.notes.push_back("odd rank growth; estimate rounded up");
    rep.estimated_dimension = static_cast<i64>((growth + 1) / 2);
    if (rep.nullity_at_D > 0) {
        for (int d = 0; d <= D; ++d) {
            NumericRank c = numeric_rank(fs, d, opt.rel_threshold, 4);
            if (!c.null_vectors.empty()) {
                rep.relation_degree = d;
                rep.relations = std::move(c.null_vectors);
                break;
            }
        }
    }
    rep.verdict = "numeric evidence at degree <= " + std::to_string(D);
    return rep;
}

// ---------------------------------------------------------------------------
// the span of Gauss sums

struct GaussClass {
    i64 d = 1;
    i64 key = 0;
    std::vector<i64> ls;
    std::vector<i64> phase;  // G(k,2l) = ξ^{phase} G(k,2 ls[0])
};

/// Classes of G(k,2l), l in [0,k), under the square-class relations (and the k = 0 mod 4 colinearity).
inline std::vector<GaussClass> gauss_classes(i64 k, bool merge_mod4 = false)
{
    std::map<std::pair<i64, i64>, std::size_t> index;
    std::vector<GaussClass> out;
    for (i64 l = 0; l < k; ++l) {
        const i64 d = std::gcd(l, k);
        const i64 kd = k / d;
        const i64 a = l / d;
        const i64 key = kd == 1 ? 0 : a * a % kd;
        auto [it, fresh] = index.emplace(std::make_pair(d, key), out.size());
        if (fresh) {
            out.push_back({d, key, {l}, {0}});
            continue;
        }
        GaussClass &c = out[it->second];
        const i64 b = c.ls.front() / d;
        c.ls.push_back(l);
        c.phase.push_back(-square_class_shift(k, d, a, b) * d);
    }
    if (merge_mod4 && k % 4 == 0) {
        auto top = index.find({k, 0});
        auto half = index.find({k / 2, 1});
        if (top != index.end() && half != index.end()) {
            GaussClass &dst = out[top->second];
            GaussClass &src = out[half->second];
            // G(k,k) = ξ^{-4k} G(k,0)
            for (std::size_t i = 0; i < src.ls.size(); ++i) {
                dst.ls.push_back(src.ls[i]);
                dst.phase.push_back(src.phase[i] - 4 * k);
            }
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(half->second));
        }
    }
    return out;
}

/// G(k,2l,u) = u^e G(k,2l',u), checked exactly.
inline bool gauss_phase_relation(i64 k, i64 l, i64 lp, i64 e, const RootOfUnity &u)
{
    auto lhs = gauss_brute(k, 2 * l, u);
    auto rhs = gauss_brute(k, 2 * lp, u).scale_by_power(e * u.exponent());
    return lhs.equals(rhs);
}

/// ξ^{4k} G(k,k,ξ) = G(k,0,ξ) at every point, exactly.
inline bool colinearity_mod4(i64 k, const std::vector<RootOfUnity> &points)
{
    if (k % 4)
        throw std::domain_error("colinearity_mod4: k must be a multiple of 4");
    for (auto &xi : points)
        if (!gauss_phase_relation(k, k / 2, 0, -4 * k, xi))
            return false;
    return true;
}

inline std::vector<RootOfUnity> exact_subset(const SampleGrid &g, const AnalysisOptions &opt)
{
    std::map<i64, std::size_t> used;
    std::vector<RootOfUnity> out;
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        if (g.points[i].order() > opt.exact_max_order)
            continue;
        if (used[g.group[i]]++ >= opt.exact_points_per_group)
            continue;
        out.push_back(g.points[i]);
    }
    return out;
}

/// |∪_i (e_i + [-D, D])|.
inline i64 window_union(const std::vector<i64> &phases, int D)
{
    std::set<i64> s;
    for (i64 e : phases)
        for (i64 x = e - D; x <= e + D; ++x)
            s.insert(x);
    return static_cast<i64>(s.size());
}

inline std::size_t points_needed(std::size_t rows, int D, const AnalysisOptions &opt)
{
    return (2 * static_cast<std::size_t>(D) + 3) * rows + opt.extra_points;
}

struct VerifiedClasses {
    std::vector<GaussClass> classes;
    std::size_t checks = 0;
    std::vector<std::string> failures;
};

/// Classes whose member relations hold exactly at every point; failing members become singletons.
inline VerifiedClasses verify_gauss_classes(i64 k, const std::vector<RootOfUnity> &pts, bool merge_mod4)
{
    VerifiedClasses out;
    for (auto c : gauss_classes(k, merge_mod4)) {
        GaussClass kept{c.d, c.key, {c.ls[0]}, {0}};
        for (std::size_t i = 1; i < c.ls.size(); ++i) {
            bool ok = true;
            for (auto &pt : pts) {
                ++out.checks;
                if (!gauss_phase_relation(k, c.ls[i], c.ls[0], c.phase[i], pt)) {
                    out.failures.push_back("G(k," + std::to_string(2 * c.ls[i]) + ") != A^" + std::to_string(c.phase[i]) +
                                           " G(k," + std::to_string(2 * c.ls[0]) + ") at " + pt.str());
                    ok = false;
                    break;
                }
            }
            if (ok) {
                kept.ls.push_back(c.ls[i]);
                kept.phase.push_back(c.phase[i]);
            } else {
                out.classes.push_back({std::gcd(c.ls[i], k), c.key, {c.ls[i]}, {0}});
            }
        }
        out.classes.push_back(std::move(kept));
    }
    return out;
}

/// dim_{Q(A)} of the span of ξ ↦ G(k,2l,ξ), l in [0,k).
inline RankReport dim_Gk(i64 k, int D = 4, const AnalysisOptions &opt = {})
{
    if (k < 2)
        throw std::domain_error("dim_Gk: k must be at least 2");
    std::vector<i64> all(static_cast<std::size_t>(k));
    std::iota(all.begin(), all.end(), i64{0});
    const i64 expected = square_count_closed_form(k);
    const bool sqfree = is_square_free(k);

    int deg = D;
    for (;;) {
        const std::size_t per_group = points_needed(static_cast<std::size_t>(k), deg, opt);
        const SampleGrid grid = make_grid(k, per_group, 2, opt.s_per_order);

        RankReport rep;
        const VerifiedClasses vc = verify_gauss_classes(k, exact_subset(grid, opt), opt.merge_mod4);
        const auto &classes = vc.classes;
        const std::size_t checks = vc.checks;
        const bool exact_ok = vc.failures.empty();
        std::vector<i64> reps;
        for (auto &c : classes)
            reps.push_back(c.ls.front());

        const FunctionSample full = sample_gauss(k, all, grid, opt.threads);
        const NumericRank nr = numeric_rank(full, deg, opt.rel_threshold);
        i64 predicted = 0;
        for (auto &c : classes)
            predicted += static_cast<i64>(c.ls.size()) * (2 * deg + 1) - window_union(c.phase, deg);

        std::vector<std::size_t> rep_rows;
        for (i64 l : reps)
            rep_rows.push_back(static_cast<std::size_t>(l));
        rep = qa_rank(select_rows(full, rep_rows), deg, opt);
        rep.k = k;
        rep.generator_count = static_cast<std::size_t>(k);
        rep.upper_bound = static_cast<i64>(classes.size());
        rep.numeric_nullity = static_cast<i64>(nr.columns - nr.rank);
        rep.predicted_nullity = predicted;
        rep.exact_checks = checks;
        rep.relations_verified = rep.numeric_nullity == predicted;
        rep.estimated_dimension = std::min(rep.estimated_dimension, rep.upper_bound);
        rep.expected_dimension = expected;
        rep.expected_source = sqfree ? "sum of invertible-square counts over divisors (sharp, square-free k)"
                                     : "sum of invertible-square counts over divisors (upper bound)";

        // direct sum over d
        std::map<i64, std::vector<std::size_t>> by_d;
        for (auto &c : classes)
            by_d[c.d].push_back(static_cast<std::size_t>(c.ls.front()));
        i64 sum_parts = 0;
        for (auto &[d, rows] : by_d) {
            auto part = qa_rank(select_rows(full, rows), deg, opt);
            rep.parts["d=" + std::to_string(d)] = part.estimated_dimension;
            sum_parts += part.estimated_dimension;
        }
        if (sum_parts != rep.estimated_dimension)
            rep.notes.push_back("direct-sum parts add to " + std::to_string(sum_parts));

        if (opt.escalate && deg < opt.escalated_degree && std::abs(rep.estimated_dimension - expected) == 1) {
            deg = opt.escalated_degree;
            continue;
        }
        for (auto &f : vc.failures)
            rep.notes.push_back("relation dropped: " + f);
        if (rep.numeric_nullity != predicted)
            rep.notes.push_back("numeric nullity " + std::to_string(rep.numeric_nullity) + " vs predicted " +
                                std::to_string(predicted));
        if (sqfree)
            rep.verdict = exact_ok && rep.estimated_dimension == expected && rep.relations_verified ? "match" : "mismatch";
        else
            rep.verdict = rep.estimated_dimension <= expected ? "bound" : "mismatch";
        return rep;
    }
}

/// Adjoining ν to the reduced Gauss-sum generators raises the dimension by exactly one.
inline bool nu_independence(i64 k, int D = 4, const AnalysisOptions &opt = {}, RankReport *with_nu = nullptr)
{
    const SampleGrid grid = make_grid(k, points_needed(static_cast<std::size_t>(k) + 1, D, opt), 2, opt.s_per_order);
    std::vector<i64> reps;
    for (auto &c : verify_gauss_classes(k, exact_subset(grid, opt), opt.merge_mod4).classes)
        reps.push_back(c.ls.front());
    FunctionSample g = sample_gauss(k, reps, grid, opt.threads);
    FunctionSample nu = with_variable_u(sample_nu(grid));
    RankReport base = qa_rank(g, D, opt);
    RankReport ext = qa_rank(stack_rows(g, nu), D, opt);
    if (with_nu)
        *with_nu = ext;
    return ext.estimated_dimension == base.estimated_dimension + 1;
}

// ---------------------------------------------------------------------------
// images and verdicts

inline i64 kinnear_dimension(i64 k) { return k % 2 ? (k - 1) / 2 + 4 : k / 2 + 5; }

inline i64 image_dimension_bound(i64 k) { return square_count_closed_form(k) + (k % 2 ? 2 : 4); }

struct ImageClass {
    Hom2Class grade;
    std::vector<CurveLabel> labels;
    std::vector<CurveLabel> kept;
    std::vector<std::pair<CurveLabel, std::string>> dropped;
    i64 upper = 0;
    i64 lower = 0;
    RankReport rank;
};

struct ImageReport {
    i64 k = 0;
    int degree_bound = 0;
    std::vector<ImageClass> classes;
    i64 upper = 0;
    i64 lower = 0;
    i64 expected = 0;
    bool sharp_expected = false;
    bool reductions_verified = true;
    std::size_t sample_count = 0;
    std::vector<std::string> excluded_points;
    std::vector<std::string> notes;
};

/// Per-grading dimensions of ev on the horizontal basis.
inline ImageReport image_dimension(i64 k, int D = 4, const AnalysisOptions &opt = {})
{
    if (k < 2)
        throw std::domain_error("image_dimension: k must be at least 2");
    const auto gclasses = gauss_classes(k, opt.merge_mod4);
    std::map<i64, std::pair<std::size_t, i64>> gclass_of;  // l -> (class, phase)
    for (std::size_t c = 0; c < gclasses.size(); ++c)
        for (std::size_t i = 0; i < gclasses[c].ls.size(); ++i)
            gclass_of[gclasses[c].ls[i]] = {c, gclasses[c].phase[i]};

    std::map<Hom2Class, ImageClass> by_grade;
    for (auto &l : basis_k(k)) {
        auto &ic = by_grade[grading(l, k)];
        ic.grade = grading(l, k);
        ic.labels.push_back(l);
    }

    int deg = D;
    for (;;) {
        ImageReport rep;
        rep.k = k;
        rep.degree_bound = deg;
        rep.expected = image_dimension_bound(k);
        rep.sharp_expected = is_square_free(k);
        std::size_t max_rows = 0;
        for (auto &[g, ic] : by_grade)
            max_rows = std::max(max_rows, ic.labels.size());
        const SampleGrid grid = make_grid(k, points_needed(max_rows, deg, opt), 5, opt.s_per_order);
        const auto exact_pts = exact_subset(grid, opt);
        rep.excluded_points = grid.excluded;
        rep.sample_count = grid.points.size();

        const FunctionSample all = sample_ev(k, basis_k(k), grid, opt.threads);
        const auto basis = basis_k(k);
        auto row_of = [&](const CurveLabel &l) {
            return static_cast<std::size_t>(std::find(basis.begin(), basis.end(), l) - basis.begin());
        };

        for (auto &[g, proto] : by_grade) {
            ImageClass ic;
            ic.grade = proto.grade;
            ic.labels = proto.labels;
            const bool has_nu = std::any_of(ic.labels.begin(), ic.labels.end(),
                                            [](const CurveLabel &l) { return l.q() != 0 && l.q() % 2 == 0; });
            std::map<std::size_t, i64> seen_gauss;  // gauss class -> kept l
            bool nu_kept = false;
            for (auto &l : ic.labels) {
                if (l.q() == 0 && has_nu) {
                    auto [cls, ph] = gclass_of.at(l.p());
                    auto it = seen_gauss.find(cls);
                    if (it != seen_gauss.end()) {
                        const i64 lp = it->second;
                        const i64 e = ph - gclass_of.at(lp).second;
                        bool ok = true;
                        for (auto &pt : exact_pts)
                            ok = ok && gauss_phase_relation(k, l.p(), lp, e, pt);
                        if (ok) {
                            ic.dropped.emplace_back(l, "G(k," + std::to_string(2 * l.p()) + ") = A^" + std::to_string(e) +
                                                           " G(k," + std::to_string(2 * lp) + ")");
                            continue;
                        }
                        rep.reductions_verified = false;
                    } else {
                        seen_gauss[cls] = l.p();
                    }
                } else if (l.q() != 0 && l.q() % 2 == 0) {
                    // constant multiple of ν; checked against the trace at every point
                    bool ok = true;
                    const std::size_t row = row_of(l);
                    for (std::size_t i = 0; i < grid.points.size(); ++i) {
                        const RootOfUnity xi = negate_any(grid.points[i]);
                        const cplx cf = ev_closed_pq(k, l.p(), l.q(), xi);
                        ok = ok && std::abs(cf - all.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i))) < kTol;
                    }
                    if (!ok)
                        rep.reductions_verified = false;
                    if (nu_kept && ok) {
                        ic.dropped.emplace_back(l, "constant multiple of nu");
                        continue;
                    }
                    nu_kept = true;
                }
                ic.kept.push_back(l);
            }
            ic.upper = static_cast<i64>(ic.kept.size());
            std::vector<std::size_t> rows;
            for (auto &l : ic.kept)
                rows.push_back(row_of(l));
            ic.rank = qa_rank(select_rows(all, rows), deg, opt);
            ic.rank.k = k;
            ic.lower = std::min(ic.rank.estimated_dimension, ic.upper);
            rep.upper += ic.upper;
            rep.lower += ic.lower;
            rep.classes.push_back(std::move(ic));
        }
        if (opt.escalate && deg < opt.escalated_degree && std::abs(rep.lower - rep.expected) == 1) {
            deg = opt.escalated_degree;
            continue;
        }
        if (!rep.reductions_verified)
            rep.notes.push_back("an exact reduction failed; affected rows kept");
        return rep;
    }
}

enum class Verdict { Injective, NonInjective, Unknown };

inline const char *to_string(Verdict v)
{
    switch (v) {
    case Verdict::Injective: return "injective";
    case Verdict::NonInjective: return "non-injective";
    case Verdict::Unknown: return "unknown";
    }
    return "?";
}

/// k = 2 p^a with p an odd prime and a > 1.
inline bool is_open_case(i64 k)
{
    if (k % 4 != 2)
        return false;
    auto f = factorize(k / 2);
    return f.size() == 1 && f[0].second > 1;
}

/// Expected verdict; k = 2p^a with a > 1 is left open.
inline Verdict expected_injectivity(i64 k)
{
    if (k == 0 || k == 2)
        return Verdict::Injective;
    if (k % 4 == 2) {
        auto f = factorize(k / 2);
        if (f.size() == 1)
            return f[0].second == 1 ? Verdict::Injective : Verdict::Unknown;
    }
    return Verdict::NonInjective;
}

struct InjectivityReport {
    i64 k = 0;
    ImageReport image;
    i64 kinnear = 0;
    std::optional<bool> mod4_colinear;
    Verdict verdict = Verdict::Unknown;
    Verdict expected = Verdict::Unknown;
    std::vector<std::string> notes;
};

inline InjectivityReport injectivity_verdict(i64 k, int D = 4, const AnalysisOptions &opt = {})
{
    InjectivityReport rep;
    rep.k = k;
    rep.kinnear = kinnear_dimension(k);
    rep.expected = expected_injectivity(k);
    rep.image = image_dimension(k, D, opt);
    if (k % 4 == 0) {
        const SampleGrid g = make_grid(k, opt.exact_points_per_group, 2, 2);
        std::vector<RootOfUnity> pts;
        for (auto &p : g.points)
            if (p.order() <= opt.exact_max_order)
                pts.push_back(p);
        rep.mod4_colinear = colinearity_mod4(k, pts);
        rep.notes.push_back(std::string("ev((0,0)) and ev((k/2,0)) colinear: ") +
                            (*rep.mod4_colinear ? "yes" : "no"));
    }
    Verdict computed = Verdict::Unknown;
    if (rep.image.upper < rep.kinnear)
        computed = Verdict::NonInjective;
    else if (rep.image.lower == rep.kinnear)
        computed = Verdict::Injective;
    if (is_open_case(k)) {
        rep.notes.push_back(std::string("open regime k = 2p^a, a > 1; numeric evidence says ") + to_string(computed));
        computed = Verdict::Unknown;
    }
    rep.verdict = computed;
    return rep;
}

// ---------------------------------------------------------------------------
// S monodromy

struct SColinearityReport {
    bool colinear = false;
    RankReport rank;
    std::vector<std::string> excluded;
    std::map<int, bool> by_residue;  // r mod 4 -> colinear within that residue class
};

inline FunctionSample sample_ev_S(const std::vector<CurveLabel> &labels, const std::vector<RootOfUnity> &pts,
                                  int threads = 0)
{
    FunctionSample fs;
    for (auto &l : labels)
        fs.ids.push_back(l.str());
    fs.points = pts;
    fs.variable.resize(pts.size());
    fs.values.resize(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(pts.size()));
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        BasisSpec spec(pts[i]);
        const CMatrix S = rho_general(0, -1, 1, 0, spec).mat;
        fs.variable[i] = pts[i].value();
        for (std::size_t j = 0; j < labels.size(); ++j) {
            const CMatrix Z = z_curve(labels[j], spec).mat;
            fs.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = S.cwiseProduct(Z.transpose()).sum();
        }
    });
    return fs;
}

inline FunctionSample drop_vanishing(const FunctionSample &fs, std::size_t row)
{
    FunctionSample out;
    out.ids = fs.ids;
    out.excluded = fs.excluded;
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < fs.samples(); ++i) {
        if (std::abs(fs.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i))) < 1e-9) {
            out.excluded.push_back(fs.points[i].str() + " (vanishing denominator)");
            continue;
        }
        keep.push_back(static_cast<Eigen::Index>(i));
        out.points.push_back(fs.points[i]);
        out.variable.push_back(fs.variable[i]);
    }
    out.values.resize(fs.values.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        out.values.col(static_cast<Eigen::Index>(c)) = fs.values.col(keep[c]);
    return out;
}

/// Whether ev_S((1,2)) / ev_S((1,0)) is one Q(A)-function across the given odd-r points.
inline SColinearityReport s_colinearity(const std::vector<RootOfUnity> &pts, int D = 4, const AnalysisOptions &opt = {})
{
    for (auto &p : pts)
        if (p.order() % 2 || (p.order() / 2) % 2 == 0)
            throw std::domain_error("s_colinearity: points must have order 2r with r odd");
    SColinearityReport rep;
    FunctionSample fs = drop_vanishing(sample_ev_S({{1, 0}, {1, 2}}, pts, opt.threads), 0);
    rep.excluded = fs.excluded;
    if (fs.samples() <= 1) {
        rep.colinear = true;
        rep.rank.estimated_dimension = fs.samples() ? 1 : 0;
        rep.rank.verdict = "trivial";
        return rep;
    }
    rep.rank = qa_rank(fs, D, opt);
    rep.colinear = rep.rank.estimated_dimension <= 1;
    for (int res : {1, 3}) {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < fs.samples(); ++i)
            if ((fs.points[i].order() / 2) % 4 == res)
                cols.push_back(i);
        if (cols.size() < points_needed(2, D, opt))
            continue;
        FunctionSample sub;
        sub.ids = fs.ids;
        sub.values.resize(2, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            sub.points.push_back(fs.points[cols[c]]);
            sub.variable.push_back(fs.variable[cols[c]]);
            sub.values.col(static_cast<Eigen::Index>(c)) = fs.values.col(static_cast<Eigen::Index>(cols[c]));
        }
        rep.by_residue[res] = qa_rank(sub, D, opt).estimated_dimension <= 1;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// arithmetic inequality

struct InequalityResult {
    i64 lhs = 0;
    i64 rhs = 0;
    bool holds = false;
    bool sharp = false;
    bool sharp_predicted = false;  // at most one odd prime divisor
};

/// 2 Π (p^a + 1)/2 <= k/2 + 1 for k = 2 · odd.
inline InequalityResult inequality_check(i64 k)
{
    if (k < 2 || k % 4 != 2)
        throw std::domain_error("inequality_check: k must be twice an odd number");
    InequalityResult res;
    auto f = factorize(k / 2);
    i64 prod = 1;
    for (auto [p, e] : f) {
        i64 pe = 1;
        for (int i = 0; i < e; ++i)
            pe *= p;
        prod *= (pe + 1) / 2;
    }
    res.lhs = 2 * prod;
    res.rhs = k / 2 + 1;
    res.holds = res.lhs <= res.rhs;
    res.sharp = res.lhs == res.rhs;
    res.sharp_predicted = f.size() <= 1;
    return res;
}

}  // namespace skeinrt
