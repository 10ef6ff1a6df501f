#pragma once

#include "numth.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <map>
#include <sstream>
#include <string>

namespace skeinrt {

using Rational = boost::multiprecision::cpp_rational;

/// Sparse Laurent polynomial Σ c_e X^e; zero coefficients are never stored.
template <class Coeff = Rational>
class LaurentPolynomial {
public:
    using map_type = std::map<i64, Coeff>;

    LaurentPolynomial() = default;
    LaurentPolynomial(const Coeff &c) { set(0, c); }  // NOLINT(implicit)
    LaurentPolynomial(int c) { set(0, Coeff(c)); }    // NOLINT(implicit)

    static LaurentPolynomial monomial(i64 e, const Coeff &c = Coeff(1))
    {
        LaurentPolynomial p;
        p.set(e, c);
        return p;
    }

    const map_type &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }
    i64 min_degree() const { return t_.empty() ? 0 : t_.begin()->first; }
    i64 max_degree() const { return t_.empty() ? 0 : t_.rbegin()->first; }

    Coeff coeff(i64 e) const
    {
        auto it = t_.find(e);
        return it == t_.end() ? Coeff(0) : it->second;
    }

    void set(i64 e, const Coeff &c)
    {
        if (c == 0)
            t_.erase(e);
        else
            t_[e] = c;
    }

    void add(i64 e, const Coeff &c)
    {
        if (c == 0)
            return;
        auto [it, fresh] = t_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0)
                t_.erase(it);
        }
    }

    LaurentPolynomial &operator+=(const LaurentPolynomial &o)
    {
        for (auto &[e, c] : o.t_)
            add(e, c);
        return *this;
    }
    LaurentPolynomial &operator-=(const LaurentPolynomial &o)
    {
        for (auto &[e, c] : o.t_)
            add(e, -c);
        return *this;
    }
    LaurentPolynomial operator-() const
    {
        LaurentPolynomial out;
        for (auto &[e, c] : t_)
            out.t_[e] = -c;
        return out;
    }
    friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial &b) { return a += b; }
    friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial &b) { return a -= b; }

    friend LaurentPolynomial operator*(const LaurentPolynomial &a, const LaurentPolynomial &b)
    {
        LaurentPolynomial out;
        for (auto &[ea, ca] : a.t_)
            for (auto &[eb, cb] : b.t_)
                out.add(ea + eb, ca * cb);
        return out;
    }
    LaurentPolynomial &operator*=(const LaurentPolynomial &o) { return *this = *this * o; }

    /// X^e · p.
    LaurentPolynomial shifted(i64 e) const
    {
        LaurentPolynomial out;
        for (auto &[d, c] : t_)
            out.t_.emplace_hint(out.t_.end(), d + e, c);
        return out;
    }

    bool operator==(const LaurentPolynomial &o) const { return t_ == o.t_; }
    bool operator!=(const LaurentPolynomial &o) const { return !(*this == o); }

    /// Quotient and remainder by a nonzero divisor (top-degree long division).
    std::pair<LaurentPolynomial, LaurentPolynomial> divmod(const LaurentPolynomial &den) const
    {
        if (den.is_zero())
            throw std::domain_error("LaurentPolynomial: division by zero");
        const auto top = *den.t_.rbegin();
        const i64 span = den.max_degree() - den.min_degree();
        const i64 floor_e = min_degree() - den.min_degree();
        LaurentPolynomial rem = *this, quo;
        while (!rem.is_zero() && rem.max_degree() - rem.min_degree() >= span) {
            auto lead = *rem.t_.rbegin();
            i64 e = lead.first - top.first;
            if (e < floor_e)
                break;
            Coeff c = lead.second / top.second;
            quo.add(e, c);
            rem -= den.shifted(e) * LaurentPolynomial(c);
        }
        return {quo, rem};
    }

    /// Exact quotient; throws if the division leaves a remainder.
    LaurentPolynomial exact_div(const LaurentPolynomial &den) const
    {
        auto [q, r] = divmod(den);
        if (!r.is_zero())
            throw std::domain_error("LaurentPolynomial: inexact division");
        return q;
    }

    cplx evaluate(cplx x) const
    {
        cplx acc = 0;
        for (auto &[e, c] : t_)
            acc += to_double(c) * std::pow(x, static_cast<int>(e));
        return acc;
    }

    /// Value at a root of unity, using exact exponent reduction.
    cplx evaluate(const RootOfUnity &xi) const
    {
        cplx acc = 0;
        for (auto &[e, c] : t_)
            acc += to_double(c) * xi.pow(e);
        return acc;
    }

    double evaluate_real(double x) const
    {
        double acc = 0;
        for (auto &[e, c] : t_)
            acc += to_double(c) * std::pow(x, static_cast<double>(e));
        return acc;
    }

    /// "c_e*A^e" terms joined by '+'; constant terms print without the variable.
    std::string str(const std::string &var = "A") const
    {
        if (t_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (auto &[e, c] : t_) {
            if (!first)
                os << "+";
            first = false;
            os << coeff_str(c);
            if (e != 0)
                os << "*" << var << "^" << e;
        }
        return os.str();
    }

    static double to_double(const Coeff &c)
    {
        if constexpr (std::is_arithmetic_v<Coeff>)
            return static_cast<double>(c);
        else
            return c.template convert_to<double>();
    }

private:
    static std::string coeff_str(const Coeff &c)
    {
        std::ostringstream os;
        os << c;
        std::string s = os.str();
        if (s.find('/') != std::string::npos || s.front() == '-')
            return "(" + s + ")";
        return s;
    }

    map_type t_;
};

using Laurent = LaurentPolynomial<Rational>;

inline Laurent A_pow(i64 e) { return Laurent::monomial(e); }

namespace detail {

struct LaurentParser {
    const std::string &s;
    std::size_t i = 0;
    std::string var;

    void ws()
    {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    }
    bool eat(char c)
    {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string &what) const
    {
        throw std::invalid_argument("parse error at " + std::to_string(i) + ": " + what);
    }
    i64 integer()
    {
        ws();
        std::size_t st = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+'))
            ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        if (st == i || (i == st + 1 && !std::isdigit(static_cast<unsigned char>(s[st]))))
            fail("integer expected");
        return std::stoll(s.substr(st, i - st));
    }
    Rational rational()
    {
        if (eat('(')) {
            Rational r = rational();
            if (!eat(')'))
                fail("')' expected");
            return r;
        }
        i64 num = integer();
        if (eat('/')) {
            i64 den = integer();
            if (den == 0)
                fail("zero denominator");
            return Rational(num, den);
        }
        return Rational(num);
    }
    bool at_var()
    {
        ws();
        return s.compare(i, var.size(), var) == 0;
    }
    // term := [coeff ['*']] [var ['^' int]]
    Laurent term()
    {
        Rational c = 1;
        ws();
        if (!at_var()) {
            c = rational();
            if (!eat('*'))
                return Laurent(c);
        }
        if (!at_var())
            fail("variable expected");
        i += var.size();
        i64 e = 1;
        if (eat('^'))
            e = eat('(') ? [&] { i64 v = integer(); if (!eat(')')) fail("')' expected"); return v; }() : integer();
        return Laurent::monomial(e, c);
    }
    Laurent poly()
    {
        Laurent p;
        bool neg = false;
        ws();
        if (eat('-'))
            neg = true;
        Laurent t = term();
        p += neg ? -t : t;
        for (;;) {
            if (eat('+'))
                p += term();
            else if (eat('-'))
                p -= term();
            else
                break;
        }
        return p;
    }
};

}  // namespace detail

/// Inverse of LaurentPolynomial::str.
inline Laurent parse_laurent(const std::string &s, const std::string &var = "A")
{
    detail::LaurentParser ps{s, 0, var};
    Laurent p = ps.poly();
    ps.ws();
    if (ps.i != s.size())
        ps.fail("trailing input");
    return p;
}

// ---------------------------------------------------------------------------
// Chebyshev polynomials in X

/// T_0 = 2, T_1 = X, T_n = X T_{n-1} - T_{n-2}.
inline Laurent chebyshev_T(i64 n)
{
    if (n < 0)
        throw std::domain_error("chebyshev_T: n must be non-negative");
    Laurent a = Laurent(2), b = Laurent::monomial(1);
    if (n == 0)
        return a;
    for (i64 i = 1; i < n; ++i) {
        Laurent c = Laurent::monomial(1) * b - a;
        a = std::move(b);
        b = std::move(c);
    }
    return b;
}

/// S_0 = 0, S_1 = 1, S_{n+2} = X S_{n+1} - S_n, run backwards for n < 0.
inline Laurent chebyshev_S(i64 n)
{
    const Laurent X = Laurent::monomial(1);
    Laurent a, b = Laurent(1);  // S_0, S_1
    if (n >= 0) {
        if (n == 0)
            return a;
        for (i64 i = 1; i < n; ++i) {
            Laurent c = X * b - a;
            a = std::move(b);
            b = std::move(c);
        }
        return b;
    }
    // S_{m} = X S_{m+1} - S_{m+2}
    Laurent hi = b, lo = a;  // S_{m+1}, S_m with m = 0
    for (i64 m = 0; m > n; --m) {
        Laurent next = X * lo - hi;
        hi = std::move(lo);
        lo = std::move(next);
    }
    return lo;
}

}  // namespace skeinrt
