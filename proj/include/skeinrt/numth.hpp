#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skeinrt {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTol = 1e-8;

inline i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 mod_inverse(i64 a, i64 r)
{
    if (r < 1)
        throw std::domain_error("mod_inverse: modulus must be positive");
    if (std::gcd(a, r) != 1)
        throw std::domain_error("mod_inverse: arguments not coprime");
    if (r == 1)
        return 0;
    // extended Euclid on (a mod r, r)
    i64 old_r = mod(a, r), cur_r = r, old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        i64 qt = old_r / cur_r;
        std::tie(old_r, cur_r) = std::make_pair(cur_r, old_r - qt * cur_r);
        std::tie(old_s, cur_s) = std::make_pair(cur_s, old_s - qt * cur_s);
    }
    return mod(old_s, r);
}

/// I with a * a^{-1}_r = I r + 1, I in [0, a).
inline i64 inverse_witness(i64 a, i64 r)
{
    if (a < 1 || r < 1)
        throw std::domain_error("inverse_witness: arguments must be positive");
    if (std::gcd(a, r) != 1)
        throw std::domain_error("inverse_witness: arguments not coprime");
    i64 inv = r == 1 ? 1 : mod_inverse(a, r);
    return (a * inv - 1) / r;
}

inline std::vector<i64> divisors(i64 n)
{
    std::vector<i64> out;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d)
            continue;
        out.push_back(d);
        if (d * d != n)
            out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::pair<i64, int>> factorize(i64 n)
{
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

inline bool is_square_free(i64 n)
{
    for (auto [p, e] : factorize(n))
        if (e > 1)
            return false;
    return true;
}

inline i64 euler_phi(i64 n)
{
    i64 out = n;
    for (auto [p, e] : factorize(n))
        out = out / p * (p - 1);
    return out;
}

/// Jacobi symbol (a/n), n odd positive.
inline int jacobi(i64 a, i64 n)
{
    if (n <= 0 || n % 2 == 0)
        throw std::domain_error("jacobi: n must be odd and positive");
    a = mod(a, n);
    int res = 1;
    while (a) {
        while (a % 2 == 0) {
            a /= 2;
            if (n % 8 == 3 || n % 8 == 5)
                res = -res;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            res = -res;
        a %= n;
    }
    return n == 1 ? res : 0;
}

/// e^{2 i pi num / den}, with num reduced first so large exponents stay accurate.
inline cplx unit_phase(i64 num, i64 den)
{
    i64 m = mod(num, den);
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(m) / static_cast<double>(den));
}

// ---------------------------------------------------------------------------
// roots of unity

/// Primitive root e^{2 i pi s / n}.
class RootOfUnity {
public:
    RootOfUnity() = default;

    RootOfUnity(i64 order, i64 exponent) : n_(order), s_(0)
    {
        if (order < 1)
            throw std::domain_error("RootOfUnity: order must be positive");
        s_ = mod(exponent, order);
        if (std::gcd(s_, n_) != 1)
            throw std::domain_error("RootOfUnity: exponent not coprime to order");
    }

    /// ζ_den^num brought to lowest terms.
    static RootOfUnity reduced(i64 num, i64 den)
    {
        if (den < 1)
            throw std::domain_error("RootOfUnity: order must be positive");
        i64 m = mod(num, den);
        i64 g = std::gcd(m, den);
        if (m == 0)
            return RootOfUnity(1, 0);
        return RootOfUnity(den / g, m / g);
    }

    i64 order() const { return n_; }
    i64 exponent() const { return s_; }

    cplx value() const { return unit_phase(s_, n_); }

    /// ξ^e as a complex number.
    cplx pow(i64 e) const
    {
        // s*e fits for the orders handled here; reduce factors first anyway
        return unit_phase(mod(s_, n_) * mod(e, n_), n_);
    }

    RootOfUnity power(i64 e) const { return reduced(mod(s_ * mod(e, n_), n_), n_); }

    bool operator==(const RootOfUnity &o) const { return n_ == o.n_ && s_ == o.s_; }
    bool operator<(const RootOfUnity &o) const
    {
        return n_ != o.n_ ? n_ < o.n_ : s_ < o.s_;
    }

    std::string str() const
    {
        return "e^(2i*pi*" + std::to_string(s_) + "/" + std::to_string(n_) + ")";
    }

private:
    i64 n_ = 1;
    i64 s_ = 0;
};

/// -ξ for ξ of even order 2r.
inline RootOfUnity negate_root(const RootOfUnity &xi)
{
    if (xi.order() % 2)
        throw std::domain_error("negate_root: order must be even");
    i64 n = xi.order();
    return RootOfUnity::reduced(xi.exponent() + n / 2, n);
}

// ---------------------------------------------------------------------------
// invertible squares

struct SquareClassTable {
    i64 modulus = 1;
    std::vector<i64> squares;
    i64 count = 1;
};

inline SquareClassTable invertible_squares(i64 d)
{
    if (d < 1)
        throw std::domain_error("invertible_squares: modulus must be positive");
    SquareClassTable t;
    t.modulus = d;
    if (d == 1) {
        t.squares = {0};
        t.count = 1;
        return t;
    }
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    for (i64 y = 1; y < d; ++y)
        if (std::gcd(y, d) == 1)
            seen[static_cast<std::size_t>(y * y % d)] = 1;
    for (i64 x = 0; x < d; ++x)
        if (seen[static_cast<std::size_t>(x)])
            t.squares.push_back(x);
    t.count = static_cast<i64>(t.squares.size());
    return t;
}

inline i64 sum_squares_over_divisors(i64 k)
{
    if (k < 1)
        throw std::domain_error("sum_squares_over_divisors: k must be positive");
    i64 total = 0;
    for (i64 d : divisors(k))
        total += invertible_squares(d).count;
    return total;
}

/// Product-form count of invertible-square classes over divisors.
inline i64 square_count_closed_form(i64 k)
{
    i64 prod = 1;
    int two = 0;
    for (auto [p, e] : factorize(k)) {
        if (p == 2) {
            two = e;
            continue;
        }
        i64 pe = 1;
        for (int i = 0; i < e; ++i)
            pe *= p;
        prod *= (pe + 1) / 2;
    }
    if (two == 0)
        return prod;
    if (two == 1)
        return 2 * prod;
    return (2 + (i64{1} << (two - 2))) * prod;
}

// ---------------------------------------------------------------------------
// cyclotomic polynomials

namespace detail {

using Poly = std::vector<i64>;  // ascending coefficients

inline Poly poly_exact_div(Poly num, const Poly &den)
{
    // den monic
    std::size_t dn = den.size() - 1;
    if (num.size() < den.size())
        return Poly{0};
    Poly quo(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        i64 c = num[i];
        quo[i - dn] = c;
        if (c == 0)
            continue;
        for (std::size_t j = 0; j <= dn; ++j)
            num[i - dn + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dn; ++i)
        if (num[i] != 0)
            throw std::logic_error("cyclotomic: inexact division");
    return quo;
}

class CyclotomicCache {
public:
    static CyclotomicCache &instance()
    {
        static CyclotomicCache c;
        return c;
    }

    std::shared_ptr<const Poly> get(i64 n)
    {
        {
            std::shared_lock lk(mu_);
            auto it = cache_.find(n);
            if (it != cache_.end())
                return it->second;
        }
        Poly num(static_cast<std::size_t>(n) + 1, 0);
        num[0] = -1;
        num[static_cast<std::size_t>(n)] = 1;
        for (i64 d : divisors(n)) {
            if (d == n)
                continue;
            num = poly_exact_div(num, *get(d));
        }
        auto p = std::make_shared<const Poly>(std::move(num));
        std::unique_lock lk(mu_);
        return cache_.emplace(n, p).first->second;
    }

private:
    std::shared_mutex mu_;
    std::map<i64, std::shared_ptr<const Poly>> cache_;
};

}  // namespace detail

/// Coefficients of the n-th cyclotomic polynomial, ascending.
inline std::vector<i64> cyclotomic_polynomial(i64 n)
{
    if (n < 1)
        throw std::domain_error("cyclotomic_polynomial: n must be positive");
    return *detail::CyclotomicCache::instance().get(n);
}

// ---------------------------------------------------------------------------
// Z[ζ_n]

/// Element Σ c_j ζ_n^j of the integral group ring, unreduced.
class GroupRingElement {
public:
    GroupRingElement() : n_(1), c_(1, 0) {}
    explicit GroupRingElement(i64 order) : n_(order), c_(check(order), 0) {}
    GroupRingElement(i64 order, std::vector<i64> coeffs) : n_(order), c_(std::move(coeffs))
    {
        if (static_cast<i64>(c_.size()) != check(order))
            throw std::invalid_argument("GroupRingElement: length must equal order");
    }

    static GroupRingElement monomial(i64 order, i64 e, i64 coeff = 1)
    {
        GroupRingElement x(order);
        x.c_[static_cast<std::size_t>(mod(e, order))] = coeff;
        return x;
    }

    static GroupRingElement constant(i64 order, i64 c) { return monomial(order, 0, c); }

    i64 order() const { return n_; }
    const std::vector<i64> &coefficients() const { return c_; }
    i64 operator[](i64 j) const { return c_[static_cast<std::size_t>(mod(j, n_))]; }

    void add_term(i64 e, i64 coeff) { c_[static_cast<std::size_t>(mod(e, n_))] += coeff; }

    GroupRingElement &operator+=(const GroupRingElement &o)
    {
        same_order(o);
        for (std::size_t j = 0; j < c_.size(); ++j)
            c_[j] += o.c_[j];
        return *this;
    }
    GroupRingElement &operator-=(const GroupRingElement &o)
    {
        same_order(o);
        for (std::size_t j = 0; j < c_.size(); ++j)
            c_[j] -= o.c_[j];
        return *this;
    }
    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement &b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement &b) { return a -= b; }

    friend GroupRingElement operator*(const GroupRingElement &a, const GroupRingElement &b)
    {
        a.same_order(b);
        GroupRingElement out(a.n_);
        for (i64 i = 0; i < a.n_; ++i) {
            i64 ai = a.c_[static_cast<std::size_t>(i)];
            if (!ai)
                continue;
            for (i64 j = 0; j < b.n_; ++j) {
                i64 bj = b.c_[static_cast<std::size_t>(j)];
                if (bj)
                    out.c_[static_cast<std::size_t>((i + j) % a.n_)] += ai * bj;
            }
        }
        return out;
    }

    GroupRingElement scaled(i64 k) const
    {
        GroupRingElement out = *this;
        for (auto &v : out.c_)
            v *= k;
        return out;
    }

    /// ζ^e · x.
    GroupRingElement scale_by_power(i64 e) const
    {
        GroupRingElement out(n_);
        for (i64 j = 0; j < n_; ++j)
            out.c_[static_cast<std::size_t>(mod(j + e, n_))] = c_[static_cast<std::size_t>(j)];
        return out;
    }

    /// Image in Z[ζ_m] for n | m.
    GroupRingElement promote(i64 m) const
    {
        if (m < 1 || m % n_)
            throw std::invalid_argument("GroupRingElement::promote: target order must be a multiple");
        GroupRingElement out(m);
        i64 f = m / n_;
        for (i64 j = 0; j < n_; ++j)
            out.c_[static_cast<std::size_t>(j * f)] = c_[static_cast<std::size_t>(j)];
        return out;
    }

    /// Remainder modulo Φ_n, length φ(n).
    std::vector<i64> reduced() const
    {
        auto phi = detail::CyclotomicCache::instance().get(n_);
        const auto &P = *phi;
        std::size_t deg = P.size() - 1;
        std::vector<__int128> w(c_.begin(), c_.end());
        std::vector<std::pair<std::size_t, i64>> nz;
        for (std::size_t j = 0; j < deg; ++j)
            if (P[j])
                nz.emplace_back(j, P[j]);
        for (std::size_t i = w.size(); i-- > deg;) {
            __int128 c = w[i];
            if (c == 0)
                continue;
            w[i] = 0;
            for (auto [j, pj] : nz)
                w[i - deg + j] -= c * pj;
        }
        std::vector<i64> out(deg, 0);
        constexpr __int128 lim = static_cast<__int128>(1) << 62;
        for (std::size_t j = 0; j < deg && j < w.size(); ++j) {
            if (w[j] > lim || w[j] < -lim)
                throw std::overflow_error("GroupRingElement: coefficient overflow in reduction");
            out[j] = static_cast<i64>(w[j]);
        }
        return out;
    }

    bool is_zero() const
    {
        auto r = reduced();
        return std::all_of(r.begin(), r.end(), [](i64 v) { return v == 0; });
    }

    bool equals(const GroupRingElement &o) const
    {
        same_order(o);
        return (*this - o).is_zero();
    }

    /// Complex value at ζ_n = e^{2 i pi / n}.
    cplx embed() const
    {
        cplx acc = 0;
        for (i64 j = 0; j < n_; ++j)
            if (c_[static_cast<std::size_t>(j)])
                acc += static_cast<double>(c_[static_cast<std::size_t>(j)]) * unit_phase(j, n_);
        return acc;
    }

private:
    static std::size_t check(i64 order)
    {
        if (order < 1)
            throw std::invalid_argument("GroupRingElement: order must be positive");
        return static_cast<std::size_t>(order);
    }
    void same_order(const GroupRingElement &o) const
    {
        if (o.n_ != n_)
            throw std::invalid_argument("GroupRingElement: order mismatch, promote first");
    }

    i64 n_;
    std::vector<i64> c_;
};

inline bool equals(const GroupRingElement &x, const GroupRingElement &y) { return x.equals(y); }

/// Promote both operands to the least common order.
inline std::pair<GroupRingElement, GroupRingElement> promote_common(const GroupRingElement &x,
                                                                     const GroupRingElement &y)
{
    i64 m = std::lcm(x.order(), y.order());
    return {x.promote(m), y.promote(m)};
}

}  // namespace skeinrt
