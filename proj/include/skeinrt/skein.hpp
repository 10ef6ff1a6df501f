#pragma once

#include "laurent.hpp"

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace skeinrt {

/// Torus curve label (p,q)_T stored with q > 0, or q = 0 and p >= 0.
class CurveLabel {
public:
    CurveLabel() = default;
    CurveLabel(i64 p, i64 q) : p_(p), q_(q)
    {
        if (q_ < 0 || (q_ == 0 && p_ < 0)) {
            p_ = -p_;
            q_ = -q_;
        }
    }

    i64 p() const { return p_; }
    i64 q() const { return q_; }

    auto operator<=>(const CurveLabel &) const = default;

    std::string str() const { return "(" + std::to_string(p_) + "," + std::to_string(q_) + ")"; }

private:
    i64 p_ = 0;
    i64 q_ = 0;
};

/// Finitely supported map label -> Laurent coefficient.
class SkeinVector {
public:
    using map_type = std::map<CurveLabel, Laurent>;

    SkeinVector() = default;
    SkeinVector(const CurveLabel &l, Laurent c = Laurent(1)) { add(l, std::move(c)); }  // NOLINT(implicit)

    const map_type &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    Laurent coeff(const CurveLabel &l) const
    {
        auto it = t_.find(l);
        return it == t_.end() ? Laurent() : it->second;
    }

    void add(const CurveLabel &l, const Laurent &c)
    {
        if (c.is_zero())
            return;
        auto [it, fresh] = t_.emplace(l, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                t_.erase(it);
        }
    }

    void erase(const CurveLabel &l) { t_.erase(l); }

    SkeinVector &operator+=(const SkeinVector &o)
    {
        for (auto &[l, c] : o.t_)
            add(l, c);
        return *this;
    }
    SkeinVector &operator-=(const SkeinVector &o)
    {
        for (auto &[l, c] : o.t_)
            add(l, -c);
        return *this;
    }
    friend SkeinVector operator+(SkeinVector a, const SkeinVector &b) { return a += b; }
    friend SkeinVector operator-(SkeinVector a, const SkeinVector &b) { return a -= b; }

    friend SkeinVector operator*(const Laurent &s, const SkeinVector &v)
    {
        SkeinVector out;
        if (s.is_zero())
            return out;
        for (auto &[l, c] : v.t_)
            out.add(l, s * c);
        return out;
    }

    bool operator==(const SkeinVector &o) const { return t_ == o.t_; }
    bool operator!=(const SkeinVector &o) const { return !(*this == o); }

    /// "[c]*(p,q)" terms joined by '+'.
    std::string str() const
    {
        if (t_.empty())
            return "0";
        std::string out;
        for (auto &[l, c] : t_) {
            if (!out.empty())
                out += "+";
            out += "[" + c.str() + "]*" + l.str();
        }
        return out;
    }

private:
    map_type t_;
};

namespace detail {

inline CurveLabel parse_label(const std::string &s)
{
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            t += ch;
    if (t.size() < 5 || t.front() != '(' || t.back() != ')')
        throw std::invalid_argument("bad curve label: " + s);
    auto comma = t.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("bad curve label: " + s);
    try {
        std::size_t used = 0;
        i64 p = std::stoll(t.substr(1, comma - 1), &used);
        if (used != comma - 1)
            throw std::invalid_argument("p");
        std::string qs = t.substr(comma + 1, t.size() - comma - 2);
        i64 q = std::stoll(qs, &used);
        if (used != qs.size())
            throw std::invalid_argument("q");
        return CurveLabel(p, q);
    } catch (const std::logic_error &) {
        throw std::invalid_argument("bad curve label: " + s);
    }
}

}  // namespace detail

/// Inverse of SkeinVector::str; also accepts bare labels and unbracketed coefficients.
inline SkeinVector parse_skein(const std::string &s)
{
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == '[')
            ++depth;
        if (ch == ')' || ch == ']')
            --depth;
        if (ch == '+' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
            continue;
        }
        cur += ch;
    }
    parts.push_back(cur);
    SkeinVector v;
    for (auto &part : parts) {
        std::string t;
        for (char ch : part)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                t += ch;
        if (t.empty())
            throw std::invalid_argument("empty term in skein expression");
        if (t == "0" && parts.size() == 1)
            return v;
        auto star = t.rfind("*(");
        if (star == std::string::npos) {
            v.add(detail::parse_label(t), Laurent(1));
            continue;
        }
        std::string cs = t.substr(0, star);
        if (!cs.empty() && cs.front() == '[' && cs.back() == ']')
            cs = cs.substr(1, cs.size() - 2);
        v.add(detail::parse_label(t.substr(star + 1)), parse_laurent(cs));
    }
    return v;
}

// ---------------------------------------------------------------------------
// product-to-sum

/// (p,q)*(r,s) = A^{ps-qr}(p+r,q+s) + A^{qr-ps}(p-r,q-s).
inline SkeinVector product_to_sum(const CurveLabel &a, const CurveLabel &b)
{
    const i64 e = a.p() * b.q() - a.q() * b.p();
    SkeinVector out;
    out.add(CurveLabel(a.p() + b.p(), a.q() + b.q()), A_pow(e));
    out.add(CurveLabel(a.p() - b.p(), a.q() - b.q()), A_pow(-e));
    return out;
}

inline SkeinVector product_to_sum(const SkeinVector &x, const SkeinVector &y)
{
    SkeinVector out;
    for (auto &[la, ca] : x.terms())
        for (auto &[lb, cb] : y.terms())
            out += (ca * cb) * product_to_sum(la, lb);
    return out;
}

// ---------------------------------------------------------------------------
// mod-2 homology grading

struct Hom2Class {
    int ex = 0;
    int ey = 0;
    auto operator<=>(const Hom2Class &) const = default;
    std::string str() const { return "(" + std::to_string(ex) + "," + std::to_string(ey) + ")"; }
};

inline Hom2Class grading(const CurveLabel &l, i64 k)
{
    Hom2Class h{static_cast<int>(mod(l.p(), 2)), static_cast<int>(mod(l.q(), 2))};
    if (mod(k, 2) == 1)
        h.ex = 0;
    return h;
}

/// p + q mod 2, the grading used for the S monodromy.
inline int grading_S(const CurveLabel &l) { return static_cast<int>(mod(l.p() + l.q(), 2)); }

// ---------------------------------------------------------------------------
// rewriting

struct RewriteStep {
    std::string rule;
    CurveLabel lhs;
    SkeinVector rhs;  // lhs = rhs in the skein module
};

struct ReductionResult {
    SkeinVector value;
    std::vector<RewriteStep> trace;
};

/// Substitute each recorded step in order, starting from v.
inline SkeinVector replay(const SkeinVector &v, const std::vector<RewriteStep> &trace)
{
    SkeinVector cur = v;
    for (auto &st : trace) {
        Laurent c = cur.coeff(st.lhs);
        if (c.is_zero())
            throw std::logic_error("replay: step rewrites an absent label " + st.lhs.str());
        cur.erase(st.lhs);
        cur += c * st.rhs;
    }
    return cur;
}

/// Twist used when sliding a curve once around M_k, (p,q) ~ (p + tq, q).
inline i64 slide_twist(i64 k) { return -k; }

inline std::vector<CurveLabel> basis_k(i64 k)
{
    std::vector<CurveLabel> out;
    for (i64 p = 0; p <= k / 2; ++p)
        out.emplace_back(p, 0);
    out.emplace_back(0, 1);
    out.emplace_back(0, 2);
    out.emplace_back(1, 2);
    if (mod(k, 2) == 0)
        out.emplace_back(1, 1);
    return out;
}

inline bool in_basis_k(const CurveLabel &l, i64 k)
{
    if (l.q() == 0)
        return l.p() <= k / 2;
    if (l.q() > 2 || (l.p() != 0 && l.p() != 1))
        return false;
    return !(l.q() == 1 && l.p() == 1 && mod(k, 2) == 1);
}

namespace detail {

inline void check_grading_k(const RewriteStep &st, i64 k)
{
    const Hom2Class h = grading(st.lhs, k);
    for (auto &[l, c] : st.rhs.terms())
        if (grading(l, k) != h)
            throw std::logic_error("rewrite " + st.rule + " mixes gradings at " + st.lhs.str());
}

/// num / den as an exact Laurent quotient, guarding the divisor.
inline Laurent guarded_ratio(const Laurent &num, const Laurent &den, const CurveLabel &at)
{
    if (den.is_zero())
        throw std::logic_error("reduction: vanishing divisor at " + at.str());
    return num.exact_div(den);
}

inline RewriteStep rewrite_k(const CurveLabel &L, i64 k)
{
    const i64 t = slide_twist(k);
    const i64 P = L.p(), Q = L.q();
    RewriteStep st{"", L, {}};
    if (Q == 0) {
        // (p - t, 0) = A^{t-p}[A^p (p,2) + A^{-p} (p,0) - A^{t-p} (p+t,2)]
        const i64 p = P + t;
        st.rule = "b:raise";
        st.rhs.add(CurveLabel(p, 2), A_pow(t));
        st.rhs.add(CurveLabel(p, 0), A_pow(t - 2 * p));
        st.rhs.add(CurveLabel(p + t, 2), -A_pow(2 * t - 2 * p));
        return st;
    }
    if (P != 0 && P != 1) {
        st.rule = "a";
        st.rhs.add(CurveLabel(mod(P, 2), Q), Laurent(1));
        return st;
    }
    if (Q == 1) {
        // odd k: (1,1) slides to (1+t,1), and 1+t is even
        st.rule = "slide";
        st.rhs.add(CurveLabel(0, 1), Laurent(1));
        return st;
    }
    const i64 p = P, q = Q - 1;
    if (mod(k, 2) == 0) {
        // (A^p - A^{tq-p}) (p,q+1) = (A^{p-tq} - A^{-p}) (p,q-1)
        Laurent num = A_pow(p - t * q) - A_pow(-p);
        Laurent den = A_pow(p) - A_pow(t * q - p);
        st.rule = "b:descend-even";
        st.rhs.add(CurveLabel(p, q - 1), guarded_ratio(num, den, L));
        return st;
    }
    // (A^p - A^{2tq-p-2p'}) (p,q+1) = (A^{p-tq} - A^{tq-p-2p'}) (p',q-1), p' = 1 - p
    const i64 pp = 1 - p;
    Laurent num = A_pow(p - t * q) - A_pow(t * q - p - 2 * pp);
    Laurent den = A_pow(p) - A_pow(2 * t * q - p - 2 * pp);
    st.rule = "b:descend-odd";
    st.rhs.add(CurveLabel(pp, q - 1), guarded_ratio(num, den, L));
    return st;
}

}  // namespace detail

inline ReductionResult reduce_horizontal_k(const SkeinVector &v, i64 k)
{
    if (k < 2)
        throw std::domain_error("reduce_horizontal_k: k must be at least 2");
    ReductionResult res;
    SkeinVector cur = v;
    for (;;) {
        std::optional<CurveLabel> pick;
        for (auto &[l, c] : cur.terms()) {
            if (in_basis_k(l, k))
                continue;
            if (!pick || std::make_tuple(l.q(), l.p()) > std::make_tuple(pick->q(), pick->p()))
                pick = l;
        }
        if (!pick)
            break;
        RewriteStep st = detail::rewrite_k(*pick, k);
        detail::check_grading_k(st, k);
        Laurent c = cur.coeff(*pick);
        cur.erase(*pick);
        cur += c * st.rhs;
        res.trace.push_back(std::move(st));
    }
    res.value = std::move(cur);
    return res;
}

// ---------------------------------------------------------------------------
// S monodromy

inline std::vector<CurveLabel> basis_S() { return {{0, 0}, {1, 0}, {1, 1}, {1, 2}}; }

inline bool in_basis_S(const CurveLabel &l)
{
    auto b = basis_S();
    return std::find(b.begin(), b.end(), l) != b.end();
}

/// (p,q) = (-1)^{p+q} (-q,p) in the S mapping torus.
inline std::pair<int, CurveLabel> rotate_S(const CurveLabel &l)
{
    int sign = mod(l.p() + l.q(), 2) ? -1 : 1;
    return {sign, CurveLabel(-l.q(), l.p())};
}

namespace detail {

inline std::pair<i64, int> measure_S(const CurveLabel &l)
{
    const i64 a = std::abs(l.p()), b = std::abs(l.q());
    const i64 m = std::min(a, b);
    return {a + b, m >= 2 ? 0 : (m == 1 ? 1 : 2)};
}

inline void check_grading_S(const RewriteStep &st)
{
    const int h = grading_S(st.lhs);
    for (auto &[l, c] : st.rhs.terms())
        if (grading_S(l) != h)
            throw std::logic_error("rewrite " + st.rule + " mixes gradings at " + st.lhs.str());
}

inline RewriteStep rewrite_S(const CurveLabel &L)
{
    RewriteStep st{"", L, {}};
    auto [sign, R] = rotate_S(L);
    const i64 P = L.p(), Q = L.q();
    const i64 m = std::min(std::abs(P), std::abs(Q));
    if (in_basis_S(R) || (m == 1 && std::abs(P) != 1) || (m == 0 && P == 0)) {
        st.rule = "slide";
        st.rhs.add(R, Laurent(sign));
        return st;
    }
    if (m >= 2) {
        st.rule = "d";
        if (P > 0) {
            // solve for (p+1,q+1), center (p,q) = (P-1,Q-1)
            const i64 p = P - 1, q = Q - 1;
            st.rhs.add(CurveLabel(p - 1, q + 1), A_pow(q - p - p - q));
            st.rhs.add(CurveLabel(p + 1, q - 1), A_pow(q - p + p + q));
            st.rhs.add(CurveLabel(p - 1, q - 1), -A_pow(2 * (q - p)));
        } else {
            // solve for (p-1,q+1), center (p,q) = (P+1,Q-1)
            const i64 p = P + 1, q = Q - 1;
            st.rhs.add(CurveLabel(p + 1, q + 1), A_pow(p + q + p - q));
            st.rhs.add(CurveLabel(p - 1, q - 1), A_pow(p + q + q - p));
            st.rhs.add(CurveLabel(p + 1, q - 1), -A_pow(2 * (p + q)));
        }
        return st;
    }
    if (m == 1) {
        // |P| = 1, Q >= 2; solve (c) for (p,q+1) with (p,q) = (P,Q-1)
        const i64 p = P, q = Q - 1;
        st.rule = "c";
        st.rhs.add(CurveLabel(p, q - 1), -A_pow(-2 * p));
        st.rhs.add(CurveLabel(p + 1, q), -A_pow(q - p));
        st.rhs.add(CurveLabel(p - 1, q), -A_pow(-q - p));
        return st;
    }
    // (P,0) = -(P-2,0) - A^{P-1}(P-1,1) - A^{1-P}(P-1,-1)
    st.rule = "c:axis";
    st.rhs.add(CurveLabel(P - 2, 0), Laurent(-1));
    st.rhs.add(CurveLabel(P - 1, 1), -A_pow(P - 1));
    st.rhs.add(CurveLabel(P - 1, -1), -A_pow(1 - P));
    return st;
}

}  // namespace detail

inline ReductionResult reduce_horizontal_S(const SkeinVector &v)
{
    ReductionResult res;
    SkeinVector cur = v;
    for (;;) {
        std::optional<CurveLabel> pick;
        for (auto &[l, c] : cur.terms()) {
            if (in_basis_S(l))
                continue;
            if (!pick || detail::measure_S(l) > detail::measure_S(*pick) ||
                (detail::measure_S(l) == detail::measure_S(*pick) && l > *pick))
                pick = l;
        }
        if (!pick)
            break;
        RewriteStep st = detail::rewrite_S(*pick);
        detail::check_grading_S(st);
        Laurent c = cur.coeff(*pick);
        cur.erase(*pick);
        cur += c * st.rhs;
        res.trace.push_back(std::move(st));
    }
    res.value = std::move(cur);
    return res;
}

}  // namespace skeinrt
