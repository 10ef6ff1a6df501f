#include "skeinrt/numth.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace skeinrt;

namespace {

i64 brute_inverse(i64 a, i64 r)
{
    for (i64 x = 1; x < r; ++x)
        if (mod(a * x, r) == 1)
            return x;
    return -1;
}

i64 brute_square_count(i64 d)
{
    if (d == 1)
        return 1;
    std::set<i64> s;
    for (i64 y = 0; y < d; ++y)
        if (std::gcd(y, d) == 1)
            s.insert(y * y % d);
    return static_cast<i64>(s.size());
}

i64 ipow(i64 b, int e)
{
    i64 x = 1;
    while (e--)
        x *= b;
    return x;
}

}  // namespace

TEST(ModInverse, MatchesBruteForce)
{
    for (i64 r = 2; r <= 120; ++r)
        for (i64 a = -30; a <= 150; ++a)
            if (std::gcd(a, r) == 1)
                ASSERT_EQ(mod_inverse(a, r), brute_inverse(mod(a, r), r)) << a << " mod " << r;
}

TEST(ModInverse, EdgeCases)
{
    EXPECT_EQ(mod_inverse(5, 1), 0);
    EXPECT_THROW(mod_inverse(4, 6), std::domain_error);
    EXPECT_THROW(mod_inverse(1, 0), std::domain_error);
}

TEST(InverseWitness, IdentityAndPeriodicity)
{
    for (i64 a = 1; a <= 60; ++a)
        for (i64 r = 1; r <= 60; ++r) {
            if (std::gcd(a, r) != 1)
                continue;
            const i64 I = inverse_witness(a, r);
            const i64 inv = r == 1 ? 1 : mod_inverse(a, r);
            EXPECT_EQ(a * inv, I * r + 1);
            EXPECT_GE(I, 0);
            EXPECT_LT(I, a);
            EXPECT_EQ(inverse_witness(a, r + a), I) << "a-periodic in r";
        }
}

TEST(Divisors, MatchBruteForce)
{
    for (i64 n = 1; n <= 300; ++n) {
        std::vector<i64> brute;
        for (i64 d = 1; d <= n; ++d)
            if (n % d == 0)
                brute.push_back(d);
        EXPECT_EQ(divisors(n), brute);
        i64 prod = 1;
        for (auto [p, e] : factorize(n))
            prod *= ipow(p, e);
        EXPECT_EQ(prod, n);
    }
}

TEST(Jacobi, EulerCriterionAtPrimes)
{
    for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        for (i64 a = 0; a < p; ++a) {
            i64 x = 1;
            for (i64 i = 0; i < (p - 1) / 2; ++i)
                x = x * a % p;
            const int euler = x == 0 ? 0 : (x == 1 ? 1 : -1);
            EXPECT_EQ(jacobi(a, p), euler) << a << "/" << p;
        }
    }
}

TEST(EulerPhi, CountsUnits)
{
    for (i64 n = 1; n <= 200; ++n) {
        i64 c = 0;
        for (i64 x = 0; x < n; ++x)
            c += std::gcd(x, n) == 1;
        EXPECT_EQ(euler_phi(n), c);
    }
}

TEST(RootOfUnity, ValidatesAndNegates)
{
    EXPECT_THROW(RootOfUnity(12, 4), std::domain_error);
    EXPECT_THROW(RootOfUnity(0, 1), std::domain_error);
    RootOfUnity xi(10, 3);
    EXPECT_NEAR(std::abs(xi.value() - std::polar(1.0, 2 * kPi * 3 / 10)), 0, 1e-14);
    // r = 5 odd: -ξ has order 5
    RootOfUnity u = negate_root(xi);
    EXPECT_EQ(u.order(), 5);
    EXPECT_NEAR(std::abs(u.value() + xi.value()), 0, 1e-14);
    // r = 4 even: order stays 8
    RootOfUnity v = negate_root(RootOfUnity(8, 1));
    EXPECT_EQ(v.order(), 8);
    EXPECT_EQ(v.exponent(), 5);
    EXPECT_THROW(negate_root(RootOfUnity(7, 1)), std::domain_error);
}

TEST(InvertibleSquares, BruteForceAndClosedForms)
{
    for (i64 d = 1; d <= 300; ++d)
        EXPECT_EQ(invertible_squares(d).count, brute_square_count(d)) << d;
    for (i64 p : {3, 5, 7, 11, 13})
        for (int a = 1; a <= 3; ++a)
            EXPECT_EQ(invertible_squares(ipow(p, a)).count, (p - 1) * ipow(p, a - 1) / 2);
    for (int b = 3; b <= 8; ++b)
        EXPECT_EQ(invertible_squares(ipow(2, b)).count, ipow(2, b - 3));
    EXPECT_EQ(invertible_squares(8).count, 1);
    EXPECT_EQ(invertible_squares(1).count, 1);
}

TEST(SquareCount, DivisorSumMatchesProductForm)
{
    for (i64 k = 1; k <= 400; ++k)
        EXPECT_EQ(sum_squares_over_divisors(k), square_count_closed_form(k)) << k;
    EXPECT_EQ(sum_squares_over_divisors(30), 12);
    EXPECT_EQ(sum_squares_over_divisors(15), 6);
}

TEST(Cyclotomic, DegreeAndValues)
{
    for (i64 n = 1; n <= 60; ++n) {
        auto P = cyclotomic_polynomial(n);
        EXPECT_EQ(static_cast<i64>(P.size()) - 1, euler_phi(n));
        // Φ_n vanishes at a primitive n-th root
        cplx acc = 0;
        for (std::size_t i = 0; i < P.size(); ++i)
            acc += static_cast<double>(P[i]) * unit_phase(static_cast<i64>(i), n);
        EXPECT_LT(std::abs(acc), 1e-8) << n;
    }
}

TEST(GroupRing, RingAxiomsAgainstComplexEmbedding)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> coef(-5, 5);
    for (i64 n : {1, 2, 5, 8, 12, 15, 24}) {
        auto rnd = [&] {
            GroupRingElement x(n);
            for (i64 j = 0; j < n; ++j)
                x.add_term(j, coef(rng));
            return x;
        };
        for (int trial = 0; trial < 10; ++trial) {
            auto x = rnd(), y = rnd(), z = rnd();
            EXPECT_NEAR(std::abs((x + y).embed() - (x.embed() + y.embed())), 0, 1e-9);
            EXPECT_NEAR(std::abs((x * y).embed() - x.embed() * y.embed()), 0, 1e-8);
            EXPECT_TRUE(((x * y) * z).equals(x * (y * z)));
            EXPECT_TRUE((x * (y + z)).equals(x * y + x * z));
            EXPECT_NEAR(std::abs(x.scale_by_power(3).embed() - unit_phase(3, n) * x.embed()), 0, 1e-9);
        }
    }
}

TEST(GroupRing, ZeroTestIsCyclotomicReduction)
{
    // 1 + ζ + ... + ζ^{n-1} = 0 for n > 1
    for (i64 n = 2; n <= 40; ++n) {
        GroupRingElement s(n);
        for (i64 j = 0; j < n; ++j)
            s.add_term(j, 1);
        EXPECT_TRUE(s.is_zero());
        EXPECT_FALSE(GroupRingElement::constant(n, 1).is_zero());
    }
    // ζ_6^2 - ζ_6 + 1 = 0
    GroupRingElement t(6);
    t.add_term(2, 1);
    t.add_term(1, -1);
    t.add_term(0, 1);
    EXPECT_TRUE(t.is_zero());
}

TEST(GroupRing, PromotionAndMismatch)
{
    auto a = GroupRingElement::monomial(4, 1);
    auto b = GroupRingElement::monomial(6, 1);
    EXPECT_THROW(a.equals(b), std::invalid_argument);
    auto [pa, pb] = promote_common(a, b);
    EXPECT_EQ(pa.order(), 12);
    EXPECT_NEAR(std::abs(pa.embed() - a.embed()), 0, 1e-12);
    EXPECT_NEAR(std::abs(pb.embed() - b.embed()), 0, 1e-12);
    EXPECT_THROW(a.promote(6), std::invalid_argument);
}
