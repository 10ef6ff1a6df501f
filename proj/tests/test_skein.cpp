#include "skeinrt/tqft.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace skeinrt;

namespace {

std::vector<RootOfUnity> sample_roots(std::size_t n, i64 min_r = 7)
{
    std::vector<RootOfUnity> out;
    for (i64 r = min_r; out.size() < n; ++r)
        for (i64 s : {1, 3, 7}) {
            if (std::gcd(s, 2 * r) != 1 || out.size() >= n)
                continue;
            out.emplace_back(2 * r, s);
        }
    return out;
}

cplx ev(i64 k, const SkeinVector &v, const RootOfUnity &xi) { return rt_invariant_trace(k, v, xi); }

cplx ev_S(const SkeinVector &v, const RootOfUnity &xi)
{
    BasisSpec spec(xi);
    return (rho_general(0, -1, 1, 0, spec).mat * z_curve(v, spec).mat).trace();
}

}  // namespace

TEST(CurveLabel, Normalization)
{
    EXPECT_EQ(CurveLabel(1, -1), CurveLabel(-1, 1));
    EXPECT_EQ(CurveLabel(-3, 0), CurveLabel(3, 0));
    EXPECT_EQ(CurveLabel(2, -5).p(), -2);
    EXPECT_EQ(CurveLabel(2, -5).q(), 5);
}

TEST(ProductToSum, Examples)
{
    SkeinVector a = product_to_sum(CurveLabel(1, 0), CurveLabel(0, 1));
    SkeinVector want;
    want.add({1, 1}, A_pow(1));
    want.add({1, -1}, A_pow(-1));
    EXPECT_EQ(a, want);
    EXPECT_EQ(product_to_sum(CurveLabel(0, 0), CurveLabel(3, 2)), SkeinVector({3, 2}, Laurent(2)));
    SkeinVector b;
    b.add({2, 2}, Laurent(1));
    b.add({0, 0}, Laurent(1));
    EXPECT_EQ(product_to_sum(CurveLabel(1, 1), CurveLabel(1, 1)), b);
}

TEST(ProductToSum, AssociativeAndChebyshev)
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<i64> c(-3, 3);
    for (int t = 0; t < 100; ++t) {
        SkeinVector x(CurveLabel(c(rng), c(rng))), y(CurveLabel(c(rng), c(rng))), z(CurveLabel(c(rng), c(rng)));
        EXPECT_EQ(product_to_sum(product_to_sum(x, y), z), product_to_sum(x, product_to_sum(y, z)));
    }
    // (1,0)(n,0) = (n+1,0) + (n-1,0)
    for (i64 n = 1; n < 6; ++n) {
        SkeinVector want;
        want.add({n + 1, 0}, Laurent(1));
        want.add({n - 1, 0}, Laurent(1));
        EXPECT_EQ(product_to_sum(CurveLabel(1, 0), CurveLabel(n, 0)), want);
    }
}

TEST(ProductToSum, IsRepresentedByZ)
{
    // Z(a)Z(b) = Z(a*b) at A = ξ
    for (auto xi : sample_roots(6, 5)) {
        BasisSpec spec(xi);
        for (auto [a, b] : {std::pair<CurveLabel, CurveLabel>{{1, 0}, {0, 1}}, {{2, 1}, {1, 3}}, {{-1, 2}, {3, 1}}}) {
            CMatrix lhs = z_curve(a, spec).mat * z_curve(b, spec).mat;
            CMatrix rhs = z_curve(product_to_sum(a, b), spec).mat;
            EXPECT_LT((lhs - rhs).norm(), 1e-9);
        }
    }
}

TEST(ParseSkein, RoundTrip)
{
    SkeinVector v;
    v.add({0, 2}, A_pow(12));
    v.add({1, 1}, A_pow(-1) - Laurent(Rational(1, 2)));
    EXPECT_EQ(parse_skein(v.str()), v);
    EXPECT_EQ(parse_skein("(0,4)"), SkeinVector(CurveLabel(0, 4)));
    EXPECT_EQ(parse_skein("[2]*(1,0) + (3,0)"), SkeinVector({1, 0}, Laurent(2)) + SkeinVector(CurveLabel(3, 0)));
}

TEST(Grading, Examples)
{
    for (i64 k : {2, 3, 4, 7})
        for (i64 l = 0; l < 5; ++l)
            EXPECT_EQ(grading(CurveLabel(2 * l, 0), k), (Hom2Class{0, 0}));
    EXPECT_EQ(grading(CurveLabel(1, 0), 3), (Hom2Class{0, 0}));
    EXPECT_EQ(grading(CurveLabel(1, 0), 4), (Hom2Class{1, 0}));
    EXPECT_EQ(grading(CurveLabel(1, 1), 4), (Hom2Class{1, 1}));
}

TEST(ReduceK, Examples)
{
    auto r = reduce_horizontal_k(SkeinVector(CurveLabel(3, 1)), 3);
    EXPECT_EQ(r.value, SkeinVector(CurveLabel(0, 1)));
    for (i64 p = 0; p <= 3; ++p)
        EXPECT_EQ(reduce_horizontal_k(SkeinVector(CurveLabel(p, 0)), 6).value, SkeinVector(CurveLabel(p, 0)));
    auto r4 = reduce_horizontal_k(SkeinVector(CurveLabel(0, 4)), 4);
    EXPECT_EQ(r4.value, SkeinVector({0, 2}, A_pow(12)));
    for (auto xi : sample_roots(20))
        EXPECT_NEAR(std::abs(ev(4, SkeinVector(CurveLabel(0, 4)), xi) - ev(4, r4.value, xi)), 0, 1e-8);
}

TEST(ReduceK, BasisSupportReplayAndSoundness)
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<i64> c(-9, 9);
    // relations hold where their coefficients do not vanish, which needs r > |q|
    const auto roots = sample_roots(8, 10);
    for (i64 k : {2, 3, 4, 5, 6, 7}) {
        const auto basis = basis_k(k);
        EXPECT_EQ(basis.size(), static_cast<std::size_t>(k % 2 ? k / 2 + 4 : k / 2 + 5));
        for (int t = 0; t < 25; ++t) {
            SkeinVector v(CurveLabel(c(rng), c(rng)));
            auto res = reduce_horizontal_k(v, k);
            for (auto &[l, coef] : res.value.terms())
                EXPECT_TRUE(in_basis_k(l, k)) << l.str();
            EXPECT_EQ(replay(v, res.trace), res.value);
            for (auto &st : res.trace)
                for (auto &xi : roots)
                    EXPECT_NEAR(std::abs(ev(k, SkeinVector(st.lhs), xi) - ev(k, st.rhs, xi)), 0, 1e-8)
                        << st.rule << " at " << st.lhs.str();
        }
    }
    EXPECT_THROW(reduce_horizontal_k(SkeinVector(CurveLabel(1, 1)), 1), std::domain_error);
}

TEST(ReduceS, Examples)
{
    // sign from the trace-consistent sliding relation
    EXPECT_EQ(reduce_horizontal_S(SkeinVector(CurveLabel(0, 1))).value, SkeinVector({1, 0}, Laurent(-1)));
    EXPECT_EQ(reduce_horizontal_S(SkeinVector(CurveLabel(1, -1))).value, SkeinVector(CurveLabel(1, 1)));
    auto r = reduce_horizontal_S(SkeinVector(CurveLabel(2, 0)));
    for (auto &[l, coef] : r.value.terms())
        EXPECT_TRUE(l == CurveLabel(0, 0) || l == CurveLabel(1, 1)) << l.str();
}

TEST(ReduceS, BasisSupportAndEvaluation)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<i64> c(-8, 8);
    std::vector<RootOfUnity> roots;
    for (i64 r : {7, 9, 11, 13})
        roots.emplace_back(2 * r, 1);
    for (int t = 0; t < 60; ++t) {
        SkeinVector v(CurveLabel(c(rng), c(rng)));
        auto res = reduce_horizontal_S(v);
        for (auto &[l, coef] : res.value.terms())
            EXPECT_TRUE(in_basis_S(l));
        EXPECT_EQ(replay(v, res.trace), res.value);
        for (auto &xi : roots)
            EXPECT_NEAR(std::abs(ev_S(v, xi) - ev_S(res.value, xi)), 0, 1e-8) << v.str();
    }
}

TEST(ReduceS, MeasureNeverIncreases)
{
    for (i64 p = -6; p <= 6; ++p)
        for (i64 q = -6; q <= 6; ++q) {
            CurveLabel L(p, q);
            if (in_basis_S(L))
                continue;
            auto st = detail::rewrite_S(L);
            for (auto &[l, coef] : st.rhs.terms())
                if (!in_basis_S(l))
                    EXPECT_LE(detail::measure_S(l), detail::measure_S(L)) << st.rule << " " << L.str() << " -> " << l.str();
            // a label of equal measure is finished off by one slide
            for (auto &[l, coef] : st.rhs.terms())
                if (!in_basis_S(l) && detail::measure_S(l) == detail::measure_S(L) && st.rule != "slide") {
                    auto next = detail::rewrite_S(l);
                    EXPECT_EQ(next.rule, "slide") << L.str() << " -> " << l.str();
                    EXPECT_TRUE(in_basis_S(next.rhs.terms().begin()->first)) << l.str();
                }
            auto res = reduce_horizontal_S(SkeinVector(L));
            EXPECT_LE(res.trace.size(), static_cast<std::size_t>(50 * (std::abs(p) + std::abs(q)) * (std::abs(p) + std::abs(q))));
        }
}
