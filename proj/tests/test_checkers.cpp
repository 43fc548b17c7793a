#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "isoforge/checkers.hpp"

using namespace isoforge;

namespace {

const TwoTorsionCurve kE11(1, -1);

bool naive_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace

TEST(Main1, Examples)
{
    auto single = main1_check(std::vector<TwoTorsionCurve>{kE11}, 7);
    EXPECT_TRUE(single.met);
    EXPECT_EQ(single.conclusion, kMain1Conclusion);
    ASSERT_EQ(single.classifications.size(), 1u);
    EXPECT_EQ(single.classifications[0].potential, PotentialType::PotGoodSupersingular);

    auto twice = main1_check(std::vector<TwoTorsionCurve>{kE11, kE11}, 7);
    EXPECT_FALSE(twice.met);
    EXPECT_TRUE(twice.conclusion.empty());
    EXPECT_NE(twice.reason.find("2 curves"), std::string::npos);

    auto even = main1_check(std::vector<TwoTorsionCurve>{kE11, TwoTorsionCurve(1, 3)}, 2);
    EXPECT_FALSE(even.met);
    EXPECT_EQ(even.reason, "p must be odd");
    EXPECT_THROW(main1_check(std::vector<TwoTorsionCurve>{kE11}, 9), InvalidArgument);
}

TEST(Main1, SingletonAlwaysMetAndOrderIndependent)
{
    std::mt19937_64 rng(79);
    for (int i = 0; i < 40; ++i) {
        long a = static_cast<long>(rng() % 41) - 20, b = static_cast<long>(rng() % 41) - 20;
        long c = static_cast<long>(rng() % 41) - 20, d = static_cast<long>(rng() % 41) - 20;
        if (!TwoTorsionCurve::is_nondegenerate(a, b) || !TwoTorsionCurve::is_nondegenerate(c, d))
            continue;
        for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul}) {
            EXPECT_TRUE(main1_check(std::vector<TwoTorsionCurve>{TwoTorsionCurve(a, b)}, p).met);
            auto fwd = main1_check(std::vector<TwoTorsionCurve>{TwoTorsionCurve(a, b), TwoTorsionCurve(c, d), kE11}, p);
            auto rev = main1_check(std::vector<TwoTorsionCurve>{kE11, TwoTorsionCurve(c, d), TwoTorsionCurve(a, b)}, p);
            EXPECT_EQ(fwd.met, rev.met);
            EXPECT_EQ(fwd.reason, rev.reason);
            // verdict is a function of the classifications
            int ss = 0;
            for (const auto &cl : fwd.classifications)
                ss += cl.potential == PotentialType::PotGoodSupersingular;
            EXPECT_EQ(fwd.met, ss <= 1);
        }
    }
}

TEST(Main2, Examples)
{
    auto e = weierstrass_model(kE11);
    auto bad_degree = main2_check({ProductFactor{{e}, 3}}, 3, false, false);
    EXPECT_FALSE(bad_degree.met);
    EXPECT_NE(bad_degree.reason.find("not coprime"), std::string::npos);

    // at p = 5, E_{1,-1} is good ordinary: unramified + all-good upgrades the conclusion
    auto ordinary = main2_check({ProductFactor{{e, e}, 2}, ProductFactor{{e}, 4}}, 5, true, true);
    EXPECT_TRUE(ordinary.met);
    EXPECT_EQ(ordinary.conclusion, kMain2DivisibleConclusion);
    auto ordinary_ram = main2_check({ProductFactor{{e, e}, 2}}, 5, false, true);
    EXPECT_EQ(ordinary_ram.conclusion, kMain2Conclusion);

    // at p = 7 it is supersingular: two products carrying it fail, one is fine
    auto ordinary7 = weierstrass_model(TwoTorsionCurve(1, 3)); // a_7 != 0
    ASSERT_FALSE(is_supersingular_at(ordinary7, 7));
    auto two = main2_check({ProductFactor{{e, ordinary7}, 2}, ProductFactor{{e}, 2}}, 7, true, true);
    EXPECT_FALSE(two.met);
    auto one = main2_check({ProductFactor{{e, e}, 2}, ProductFactor{{ordinary7}, 2}}, 7, true, true);
    EXPECT_TRUE(one.met);

    // all-good flag set but a curve is actually bad at p: no upgrade
    auto bad_at_3 = weierstrass_model(TwoTorsionCurve(1, 3));
    auto noup = main2_check({ProductFactor{{bad_at_3}, 2}}, 3, true, true);
    EXPECT_TRUE(noup.met);
    EXPECT_EQ(noup.conclusion, kMain2Conclusion);
}

TEST(Global2, Examples)
{
    EXPECT_EQ(global2_prime_filter(kE11, 2, 20), (std::vector<std::uint64_t>{5, 7, 11, 13, 17, 19}));
    EXPECT_TRUE(global2_prime_filter(kE11, 2, 2).empty());
    EXPECT_EQ(global2_prime_filter(kE11, 5, 20), (std::vector<std::uint64_t>{7, 11, 13, 17, 19}));
    EXPECT_THROW(global2_prime_filter(kE11, 0, 20), InvalidArgument);
    EXPECT_TRUE(global2_check(weierstrass_model(kE11), 2, 5).met);
    EXPECT_FALSE(global2_check(weierstrass_model(kE11), 5, 5).met);
}

TEST(Global2, MatchesIndependentOracle)
{
    std::mt19937_64 rng(83);
    for (int i = 0; i < 50;) {
        long a = static_cast<long>(rng() % 61) - 30, b = static_cast<long>(rng() % 61) - 30;
        if (!TwoTorsionCurve::is_nondegenerate(a, b))
            continue;
        ++i;
        TwoTorsionCurve e(a, b);
        long deg = 1 + static_cast<long>(rng() % 30);
        std::uint64_t bound = rng() % 300;
        BigInt n = conductor(e);
        std::vector<std::uint64_t> oracle;
        for (std::uint64_t p = 2; p <= bound; ++p)
            if (naive_prime(p) && 6 % p != 0 && deg % static_cast<long>(p) != 0 &&
                !mpz_divisible_ui_p(n.get_mpz_t(), p))
                oracle.push_back(p);
        EXPECT_EQ(global2_prime_filter(e, deg, bound), oracle);
    }
}

TEST(Scan, Examples)
{
    auto s = supersingular_scan(kE11, 50);
    EXPECT_EQ(s.primes, (std::vector<std::uint64_t>{3, 7, 11, 19, 23, 31, 43, 47}));
    EXPECT_TRUE(supersingular_scan(kE11, 2).primes.empty());
    EXPECT_EQ(supersingular_scan(kE11, 2).tested, 0u);
}

TEST(Scan, CmCurvePattern)
{
    auto s = supersingular_scan(kE11, 200);
    std::vector<std::uint64_t> expect;
    for (auto p : primes_up_to(200))
        if (p % 4 == 3)
            expect.push_back(p);
    EXPECT_EQ(s.primes, expect);
    EXPECT_NEAR(s.density(), 0.5, 0.1);
}

TEST(Scan, AgreesWithExhaustiveCount)
{
    TwoTorsionCurve e(1, 3);
    auto s = supersingular_scan(e, 100);
    std::vector<std::uint64_t> expect;
    for (auto p : primes_up_to(100)) {
        if (p == 2 || e.discriminant() % p == 0)
            continue;
        auto g = rational_points_mod_p(e, static_cast<unsigned long>(p));
        if ((p + 1 - g.order()) % p == 0)
            expect.push_back(p);
    }
    EXPECT_EQ(s.primes, expect);
}

TEST(Scan, NonMinimalModel)
{
    // scaled model is bad at 3 on the page, good after minimising
    auto scaled = weierstrass_model(kE11).transformed({make_rat(1, 3), 0, 0, 0});
    EXPECT_EQ(supersingular_scan(scaled, 60).primes, supersingular_scan(kE11, 60).primes);
}
