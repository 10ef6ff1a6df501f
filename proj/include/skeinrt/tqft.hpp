#pragma once

#include "gauss.hpp"
#include "skein.hpp"

#include <Eigen/Dense>

#include <set>

namespace skeinrt {

using CMatrix = Eigen::MatrixXcd;

/// Folded basis {e_j} of the torus space at ξ of order 2r.
struct BasisSpec {
    RootOfUnity xi;
    i64 r = 0;
    i64 dim = 0;

    explicit BasisSpec(const RootOfUnity &x) : xi(x)
    {
        if (x.order() % 2)
            throw std::domain_error("BasisSpec: root must have even order");
        r = x.order() / 2;
        dim = r % 2 ? (r - 1) / 2 : r - 1;
    }

    bool odd() const { return r % 2 == 1; }
    bool in_range(i64 j) const { return j >= 1 && j <= dim; }
};

struct FoldResult {
    std::optional<i64> index;
    int sign = 0;
    bool operator==(const FoldResult &) const = default;
};

/// Bring e_j into the basis range.
inline FoldResult fold_index(i64 j, const BasisSpec &spec)
{
    const i64 r = spec.r;
    int sign = 1;
    if (spec.odd()) {
        j = mod(j, r);  // e_{j+r} = e_j
        if (j == 0)
            return {};
        if (j > (r - 1) / 2) {
            j = r - j;
            sign = -sign;
        }
        return {j, sign};
    }
    j = mod(j, 2 * r);
    if (j == 0 || j == r)
        return {};
    if (j > r) {
        j = 2 * r - j;
        sign = -sign;
    }
    return {j, sign};
}

/// One-step rewrites of e_j applicable outside the basis range; annihilation is sign 0.
inline std::vector<FoldResult> fold_rules(i64 j, const BasisSpec &spec)
{
    std::vector<FoldResult> out;
    const i64 r = spec.r;
    if (spec.in_range(j))
        return out;
    if (j == 0 || j == r) {
        out.push_back({});
        return out;
    }
    if (j < 0)
        out.push_back({-j, -1});
    if (j > r)
        out.push_back({2 * r - j, -1});
    if (j >= 2 * r)
        out.push_back({j - 2 * r, 1});
    if (j <= -2 * r)
        out.push_back({j + 2 * r, 1});
    if (spec.odd()) {
        if (j > (r - 1) / 2 && j < r)
            out.push_back({r - j, -1});
        if (j > r)
            out.push_back({j - r, 1});
    }
    return out;
}

/// Every terminal result reachable through fold_rules, for confluence checks.
inline std::set<std::pair<i64, int>> fold_all_paths(i64 j, const BasisSpec &spec)
{
    std::set<std::pair<i64, int>> terminal, seen;
    std::vector<std::pair<i64, int>> stack{{j, 1}};
    while (!stack.empty()) {
        auto [x, s] = stack.back();
        stack.pop_back();
        if (!seen.insert({x, s}).second)
            continue;
        if (spec.in_range(x)) {
            terminal.insert({x, s});
            continue;
        }
        for (auto &f : fold_rules(x, spec)) {
            if (!f.index)
                terminal.insert({0, 0});
            else
                stack.push_back({*f.index, s * f.sign});
        }
    }
    return terminal;
}

/// Dense operator on the folded basis; diagonal twists also carry exact exponents of -ξ.
struct TQFTOperator {
    CMatrix mat;
    std::optional<std::vector<i64>> diagonal_exponents;  // powers of u = -ξ
    std::optional<RootOfUnity> exponent_base;
};

/// ρ(B_k) e_j = (-ξ)^{k(j^2-1)} e_j.
inline TQFTOperator rho_Bk(i64 k, const BasisSpec &spec)
{
    const RootOfUnity u = negate_root(spec.xi);
    TQFTOperator op;
    op.mat = CMatrix::Zero(spec.dim, spec.dim);
    std::vector<i64> ex(static_cast<std::size_t>(spec.dim));
    for (i64 j = 1; j <= spec.dim; ++j) {
        const i64 e = mod(k * (j * j - 1), u.order());
        ex[static_cast<std::size_t>(j - 1)] = e;
        op.mat(j - 1, j - 1) = u.pow(e);
    }
    op.diagonal_exponents = std::move(ex);
    op.exponent_base = u;
    return op;
}

/// Z((p,q)_T) e_j = (-1)^p (ξ^{2pj+pq} e_{j+q} + ξ^{-2pj+pq} e_{j-q}).
inline TQFTOperator z_curve(i64 p, i64 q, const BasisSpec &spec)
{
    TQFTOperator op;
    op.mat = CMatrix::Zero(spec.dim, spec.dim);
    const double sg = mod(p, 2) ? -1.0 : 1.0;
    for (i64 j = 1; j <= spec.dim; ++j) {
        const std::pair<i64, i64> parts[2] = {{j + q, 2 * p * j + p * q}, {j - q, -2 * p * j + p * q}};
        for (auto [target, e] : parts) {
            FoldResult f = fold_index(target, spec);
            if (f.index)
                op.mat(*f.index - 1, j - 1) += sg * f.sign * spec.xi.pow(e);
        }
    }
    return op;
}

inline TQFTOperator z_curve(const CurveLabel &l, const BasisSpec &spec) { return z_curve(l.p(), l.q(), spec); }

/// Σ c(ξ) Z(label) with coefficients evaluated at A = ξ.
inline TQFTOperator z_curve(const SkeinVector &v, const BasisSpec &spec)
{
    TQFTOperator op;
    op.mat = CMatrix::Zero(spec.dim, spec.dim);
    for (auto &[l, c] : v.terms())
        op.mat += c.evaluate(spec.xi) * z_curve(l, spec).mat;
    return op;
}

/// Diagonal of Z((p,q)_T) without assembling the matrix.
inline std::vector<cplx> z_curve_diagonal(i64 p, i64 q, const BasisSpec &spec)
{
    std::vector<cplx> d(static_cast<std::size_t>(spec.dim), 0.0);
    const double sg = mod(p, 2) ? -1.0 : 1.0;
    for (i64 j = 1; j <= spec.dim; ++j) {
        const std::pair<i64, i64> parts[2] = {{j + q, 2 * p * j + p * q}, {j - q, -2 * p * j + p * q}};
        for (auto [target, e] : parts) {
            FoldResult f = fold_index(target, spec);
            if (f.index && *f.index == j)
                d[static_cast<std::size_t>(j - 1)] += sg * f.sign * spec.xi.pow(e);
        }
    }
    return d;
}

/// RT_ξ(M_k, label) = Tr(ρ(B_k) Z(label)), in O(r).
inline cplx rt_trace_label(i64 k, const CurveLabel &l, const BasisSpec &spec)
{
    const RootOfUnity u = negate_root(spec.xi);
    auto d = z_curve_diagonal(l.p(), l.q(), spec);
    cplx acc = 0;
    for (i64 j = 1; j <= spec.dim; ++j)
        acc += u.pow(k * (j * j - 1)) * d[static_cast<std::size_t>(j - 1)];
    return acc;
}

inline cplx rt_invariant_trace(i64 k, const SkeinVector &v, const RootOfUnity &xi)
{
    BasisSpec spec(xi);
    cplx acc = 0;
    for (auto &[l, c] : v.terms())
        acc += c.evaluate(xi) * rt_trace_label(k, l, spec);
    return acc;
}

/// ν = 1 for r odd, 2 for r even (ξ of order 2r).
inline int nu_of(const RootOfUnity &xi) { return (xi.order() / 2) % 2 ? 1 : 2; }

/// (-1)^l u^{-k} (G(k,2l,u) - ν), u = -ξ.
inline cplx rt_closed_Tl(i64 k, i64 l, const RootOfUnity &xi)
{
    if (l < 0 || l > k / 2)
        throw std::domain_error("rt_closed_Tl: l must lie in [0, k/2]");
    const RootOfUnity u = negate_root(xi);
    const cplx G = gauss_value(k, 2 * l, u);
    return (l % 2 ? -1.0 : 1.0) * u.pow(-k) * (G - static_cast<double>(nu_of(xi)));
}

/// Closed value of RT_ξ(M_k, (p,q)_T) for q != 0 and r > 2|q|.
inline cplx ev_closed_pq(i64 k, i64 p, i64 q, const RootOfUnity &xi)
{
    if (q == 0)
        throw std::domain_error("ev_closed_pq: q must be nonzero");
    if (xi.order() % 2)
        throw std::domain_error("ev_closed_pq: root must have even order");
    const i64 r = xi.order() / 2;
    if (r <= 2 * std::abs(q))
        throw std::domain_error("ev_closed_pq: requires r > 2|q|");
    const CurveLabel L(p, q);
    const RootOfUnity u = negate_root(xi);
    if (L.q() % 2 == 0) {
        const i64 h = L.q() / 2;
        const double sg = mod(L.p(), 2) ? 1.0 : -1.0;  // (-1)^{p+1}
        return sg * static_cast<double>(nu_of(xi)) * u.pow(k * (h * h - 1));
    }
    if (r % 2 == 0)
        return 0;
    const i64 h = (r + L.q()) / 2;
    return -u.pow(k * (h * h - 1));
}

// ---------------------------------------------------------------------------
// general monodromy, r odd

/// ρ(a b; c d) on the folded basis, defined up to a global phase.
inline TQFTOperator rho_general(i64 a, i64 b, i64 c, i64 d, const BasisSpec &spec)
{
    if (a * d - b * c != 1)
        throw std::domain_error("rho_general: matrix must have determinant 1");
    if (!spec.odd())
        throw std::domain_error("rho_general: only odd r is supported");
    const i64 r = spec.r;
    const RootOfUnity u = negate_root(spec.xi);
    const i64 g = c == 0 ? r : std::gcd(r, c);
    const i64 rp = r / g;
    const i64 ci = rp > 1 ? mod_inverse(mod(c / g, rp), rp) : 0;
    const double norm = 1.0 / std::sqrt(static_cast<double>(rp));
    TQFTOperator op;
    op.mat = CMatrix::Zero(spec.dim, spec.dim);
    for (i64 j = 1; j <= spec.dim; ++j) {
        for (i64 t = 0; t < rp; ++t) {
            const i64 e = a * ci * g * t * t + b * d * j * j + 2 * b * g * j * t;
            FoldResult f = fold_index(d * j + g * t, spec);
            if (f.index)
                op.mat(*f.index - 1, j - 1) += norm * f.sign * u.pow(e);
        }
    }
    return op;
}

/// Tr(ρ(S) Z(v)) with S = (0 -1; 1 0), a phase class.
inline cplx rt_invariant_S(const SkeinVector &v, const RootOfUnity &xi)
{
    BasisSpec spec(xi);
    const CMatrix S = rho_general(0, -1, 1, 0, spec).mat;
    return (S * z_curve(v, spec).mat).trace();
}

/// Trace value of ev_S((1,0)_T): (G(2,2,u) - G(-2,2,u))/√r.
inline cplx ev_S_closed_10(const RootOfUnity &xi)
{
    BasisSpec spec(xi);
    if (!spec.odd())
        throw std::domain_error("ev_S_closed_10: r must be odd");
    const RootOfUnity u = negate_root(xi);
    GaussEvaluator G(u);
    return (G(2, 2) - G(-2, 2)) / std::sqrt(static_cast<double>(spec.r));
}

/// Trace value of ev_S((1,2)_T): ξ^2 (G(2,6,u) - G(-2,2,u))/√r.
inline cplx ev_S_closed_12(const RootOfUnity &xi)
{
    BasisSpec spec(xi);
    if (!spec.odd())
        throw std::domain_error("ev_S_closed_12: r must be odd");
    const RootOfUnity u = negate_root(xi);
    GaussEvaluator G(u);
    return xi.pow(2) * (G(2, 6) - G(-2, 2)) / std::sqrt(static_cast<double>(spec.r));
}

}  // namespace skeinrt
