#pragma once

#include "numth.hpp"

#include <optional>

namespace skeinrt {

struct GaussParams {
    i64 a = 0;
    i64 b = 0;
    RootOfUnity xi;
};

/// Σ_{j<c} ξ^{a j^2 + b j} in Z[ζ_c], c the order of ξ.
inline GroupRingElement gauss_brute(i64 a, i64 b, const RootOfUnity &xi)
{
    const i64 c = xi.order(), s = xi.exponent();
    GroupRingElement g(c);
    const i64 am = mod(a, c), bm = mod(b, c);
    for (i64 j = 0; j < c; ++j) {
        i64 e = (am * (j * j % c) + bm * j) % c;
        g.add_term(e * s, 1);
    }
    return g;
}

inline GroupRingElement gauss_brute(const GaussParams &p) { return gauss_brute(p.a, p.b, p.xi); }

/// Complex value of the sum, via a precomputed table of powers.
class GaussEvaluator {
public:
    explicit GaussEvaluator(const RootOfUnity &xi) : xi_(xi), table_(static_cast<std::size_t>(xi.order()))
    {
        const i64 c = xi.order();
        for (i64 e = 0; e < c; ++e)
            table_[static_cast<std::size_t>(e)] = unit_phase(e * xi.exponent() % c, c);
    }

    cplx operator()(i64 a, i64 b) const
    {
        const i64 c = xi_.order();
        const i64 am = mod(a, c), bm = mod(b, c);
        cplx acc = 0;
        for (i64 j = 0; j < c; ++j)
            acc += table_[static_cast<std::size_t>((am * (j * j % c) + bm * j) % c)];
        return acc;
    }

    /// ξ^e.
    cplx power(i64 e) const { return table_[static_cast<std::size_t>(mod(e, xi_.order()))]; }

    const RootOfUnity &root() const { return xi_; }

private:
    RootOfUnity xi_;
    std::vector<cplx> table_;
};

inline cplx gauss_value(i64 a, i64 b, const RootOfUnity &xi) { return GaussEvaluator(xi)(a, b); }

// ---------------------------------------------------------------------------
// closed forms

enum class ClosedKind { Zero, MultipleOfBase, MultipleOfQuadrupledBase, Uncovered };

inline const char *to_string(ClosedKind k)
{
    switch (k) {
    case ClosedKind::Zero: return "zero";
    case ClosedKind::MultipleOfBase: return "multiple_of_base";
    case ClosedKind::MultipleOfQuadrupledBase: return "multiple_of_quadrupled_base";
    case ClosedKind::Uncovered: return "uncovered";
    }
    return "?";
}

struct ClosedFormResult {
    ClosedKind kind = ClosedKind::Zero;
    int item = 0;            // which closed-form case fired (2..5), 0 if uncovered
    i64 phase_exponent = 0;  // applied to ξ itself
    i64 base_a = 0;          // base sum is G(base_a, 0, ξ)
    i64 q = 1;
    i64 r = 1;

    /// Exact value; throws for an uncovered case.
    GroupRingElement to_group_ring(const RootOfUnity &xi) const
    {
        switch (kind) {
        case ClosedKind::Zero: return GroupRingElement(xi.order());
        case ClosedKind::Uncovered: throw std::logic_error("gauss_closed: uncovered case has no closed form");
        default: break;
        }
        return gauss_brute(base_a, 0, xi).scale_by_power(phase_exponent * xi.exponent());
    }

    cplx value(const RootOfUnity &xi) const
    {
        if (kind == ClosedKind::Zero)
            return 0;
        if (kind == ClosedKind::Uncovered)
            throw std::logic_error("gauss_closed: uncovered case has no closed form");
        return xi.pow(phase_exponent) * gauss_value(base_a, 0, xi);
    }
};

inline ClosedFormResult gauss_closed(i64 a, i64 two_b, const RootOfUnity &xi)
{
    if (mod(two_b, 2))
        throw std::invalid_argument("gauss_closed: second argument must be even");
    const i64 n = xi.order();
    const i64 b = two_b / 2;
    ClosedFormResult res;
    const i64 q = std::gcd(a, n);
    const i64 r = n / q;
    res.q = q;
    res.r = r;
    if (mod(two_b, q)) {
        res.kind = ClosedKind::Zero;
        res.item = 2;
        return res;
    }
    const i64 aq = a / q;
    if (mod(b, q) == 0) {
        const i64 bq = b / q;
        res.kind = ClosedKind::MultipleOfBase;
        res.item = 2;
        res.base_a = a;
        res.phase_exponent = -q * (mod(bq * bq, r) * mod_inverse(aq, r) % r);
        return res;
    }
    const i64 tq = two_b / q;
    if (r % 4 == 0) {
        res.kind = ClosedKind::Zero;
        res.item = 5;
        return res;
    }
    if (mod(aq, 2) == 0) {
        // no formula stated for even a/q here
        res.kind = ClosedKind::Uncovered;
        return res;
    }
    if (r % 4 == 2) {
        const i64 rh = r / 2;
        const i64 e = mod(tq * tq, rh) * mod_inverse(2 * aq, rh) % rh * mod_inverse(4, rh);
        res.kind = ClosedKind::MultipleOfQuadrupledBase;
        res.item = 3;
        res.base_a = 4 * a;
        res.phase_exponent = -2 * q * e;
        return res;
    }
    const i64 e = mod_inverse(aq, r) * mod(tq * tq, r) % r * mod_inverse(4, r);
    res.kind = ClosedKind::MultipleOfBase;
    res.item = 4;
    res.base_a = a;
    res.phase_exponent = -q * e;
    return res;
}

/// G(a,0,ξ)/√c for gcd(a, c) = 1.
inline cplx epsilon_ratio(i64 a, const RootOfUnity &xi)
{
    if (std::gcd(a, xi.order()) != 1)
        throw std::domain_error("epsilon_ratio: a must be coprime to the order");
    return gauss_brute(a, 0, xi).embed() / std::sqrt(static_cast<double>(xi.order()));
}

/// G(a,b,ζ_{r1 r2}^s) = G(a r1, b, ζ_{r2}^s) G(a r2, b, ζ_{r1}^s), checked exactly.
inline bool verify_multiplicativity(i64 a, i64 b, i64 r1, i64 r2, i64 s)
{
    if (r1 < 1 || r2 < 1 || std::gcd(r1, r2) != 1)
        throw std::domain_error("verify_multiplicativity: orders must be coprime");
    const i64 n = r1 * r2;
    if (std::gcd(s, n) != 1)
        throw std::domain_error("verify_multiplicativity: exponent not coprime to the order");
    auto lhs = gauss_brute(a, b, RootOfUnity(n, s));
    auto g2 = gauss_brute(a * r1, b, RootOfUnity(r2, s)).promote(n);
    auto g1 = gauss_brute(a * r2, b, RootOfUnity(r1, s)).promote(n);
    return lhs.equals(g2 * g1);
}

/// m with l^2 = l'^2 + m k/d; throws if not integral.
inline i64 square_class_shift(i64 k, i64 d, i64 l, i64 lp)
{
    if (d < 1 || k % d)
        throw std::domain_error("square_class: d must divide k");
    const i64 kd = k / d;
    const i64 diff = l * l - lp * lp;
    if (diff % kd)
        throw std::domain_error("square_class: l and l' are not in the same square class");
    return diff / kd;
}

/// G(k,2dl,ξ) = ξ^{-md} G(k,2dl',ξ), checked exactly.
inline bool square_class_relation(i64 k, i64 d, i64 l, i64 lp, const RootOfUnity &xi)
{
    const i64 m = square_class_shift(k, d, l, lp);
    const i64 kd = k / d;
    if (std::gcd(l, kd) != 1 || std::gcd(lp, kd) != 1)
        throw std::domain_error("square_class: l and l' must be units mod k/d");
    auto lhs = gauss_brute(k, 2 * d * l, xi);
    auto rhs = gauss_brute(k, 2 * d * lp, xi).scale_by_power(-m * d * xi.exponent());
    return lhs.equals(rhs);
}

struct AsymptoticSample {
    cplx measured;
    cplx predicted;
    i64 order = 0;
    double error() const { return std::abs(measured - predicted); }
};

/// Ratio G(k,2dl,ξ_m)/G(k,0,ξ_m) at ξ_m = e^{2isπ/(d(r + m k/d))} and its limit.
inline AsymptoticSample asymptotic_ratio(i64 k, i64 d, i64 l, i64 r, i64 s, i64 m)
{
    if (d < 1 || k % d)
        throw std::domain_error("asymptotic_ratio: d must divide k");
    const i64 kd = k / d;
    if (std::gcd(r, kd) != 1)
        throw std::domain_error("asymptotic_ratio: r must be coprime to k/d");
    const i64 n = d * (r + m * kd);
    RootOfUnity xi(n, s);
    GaussEvaluator G(xi);
    const cplx base = G(k, 0);
    if (std::abs(base) < 1e-9)
        throw std::domain_error("asymptotic_ratio: base sum vanishes at this order");
    AsymptoticSample out;
    out.order = n;
    out.measured = G(k, 2 * d * l) / base;
    const i64 I = inverse_witness(kd, r);
    out.predicted = kd == 1 ? cplx(1.0) : unit_phase(-s * I % kd * mod(l * l, kd), kd);
    return out;
}

/// Whether G(k,2dl,ξ) = 0 exactly.
inline bool vanishing_pattern(i64 k, i64 d, i64 l, const RootOfUnity &xi)
{
    if (d < 1 || k % d)
        throw std::domain_error("vanishing_pattern: d must divide k");
    return gauss_brute(k, 2 * d * l, xi).is_zero();
}

/// Vanishing predicted by the divisibility criteria alone.
inline bool vanishing_predicted(i64 k, i64 d, i64 l, const RootOfUnity &xi)
{
    auto cf = gauss_closed(k, 2 * d * l, xi);
    if (cf.kind == ClosedKind::Zero)
        return true;
    if (cf.kind == ClosedKind::Uncovered)
        return false;
    // base sum G(a,0) with a/q a unit vanishes iff r = 2 mod 4
    const i64 rr = xi.order() / std::gcd(cf.base_a, xi.order());
    return rr % 4 == 2;
}

}  // namespace skeinrt
