#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "isoforge/genus2.hpp"

using namespace isoforge;

namespace {

Polynomial from_roots(const BigInt &lead, const std::vector<BigInt> &roots)
{
    Polynomial f{lead};
    for (const auto &r : roots)
        f = f * Polynomial{-r, 1};
    return f;
}

// Igusa's root-difference definitions.
std::array<BigInt, 4> root_oracle(const BigInt &lead, const std::vector<BigInt> &r)
{
    auto d = [&](int i, int j) { return BigInt((r[i] - r[j]) * (r[i] - r[j])); };
    BigInt i2 = 0, i4 = 0, i6 = 0, i10 = 1;
    // perfect matchings of {0..5}
    std::vector<int> idx{0, 1, 2, 3, 4, 5};
    for (int a = 1; a < 6; ++a) {
        std::vector<int> rest;
        for (int k = 1; k < 6; ++k)
            if (k != a)
                rest.push_back(k);
        for (int b = 1; b < 4; ++b) {
            std::vector<int> last;
            for (int k = 1; k < 4; ++k)
                if (k != b)
                    last.push_back(rest[k]);
            i2 += d(0, a) * d(rest[0], rest[b]) * d(last[0], last[1]);
        }
    }
    for (int x = 1; x < 6; ++x)
        for (int y = x + 1; y < 6; ++y) {
            std::vector<int> o;
            for (int k = 1; k < 6; ++k)
                if (k != x && k != y)
                    o.push_back(k);
            BigInt t = d(0, x) * d(x, y) * d(y, 0) * d(o[0], o[1]) * d(o[1], o[2]) * d(o[2], o[0]);
            i4 += t;
            std::vector<int> perm = o;
            std::sort(perm.begin(), perm.end());
            do
                i6 += t * d(0, perm[0]) * d(x, perm[1]) * d(y, perm[2]);
            while (std::next_permutation(perm.begin(), perm.end()));
        }
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            i10 *= d(i, j);
    return {pow_int(lead, 2) * i2, pow_int(lead, 4) * i4, pow_int(lead, 6) * i6, pow_int(lead, 10) * i10};
}

std::uint64_t brute_count(const HyperellipticCurve &c, std::uint64_t p)
{
    std::uint64_t l = residue(c.lambda(), p), count = 0;
    std::vector<std::uint64_t> f;
    for (const auto &x : c.sextic())
        f.push_back(residue(x, p));
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t rhs = evaluate_mod(f, x, p);
        for (std::uint64_t y = 0; y < p; ++y)
            if (mul_mod(l, mul_mod(y, y, p), p) == rhs)
                ++count;
    }
    // points at infinity: lambda y^2 = c6 with y = Y/X^3
    for (std::uint64_t y = 0; y < p; ++y)
        if (mul_mod(l, mul_mod(y, y, p), p) == f[6])
            ++count;
    return count;
}

Polynomial random_sextic(std::mt19937_64 &rng, int range)
{
    Polynomial s(7);
    for (auto &c : s)
        c = static_cast<long>(rng() % (2 * range + 1)) - range;
    if (s[6] == 0)
        s[6] = 1;
    return s;
}

} // namespace

TEST(Discriminant, Examples)
{
    EXPECT_EQ(sextic_discriminant({-1, 0, 0, 0, 0, 0, 1}), 46656);
    Polynomial quartic{5, 0, 3, -2, 1};
    EXPECT_EQ(sextic_discriminant(Polynomial{1, -2, 1} * quartic), 0);
    Polynomial s = Polynomial{-1, 0, 1} * Polynomial{-2, 0, 1} * Polynomial{-3, 0, 1};
    EXPECT_NE(sextic_discriminant(s), 0);
    EXPECT_THROW(sextic_discriminant({1, 0, 0, 0, 0, 1}), InvalidArgument);
}

TEST(Discriminant, MatchesRootProduct)
{
    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<BigInt> roots;
        for (int i = 0; i < 6; ++i)
            roots.emplace_back(static_cast<long>(rng() % 15) - 7);
        BigInt lead = static_cast<long>(rng() % 5) + 1;
        auto oracle = root_oracle(lead, roots);
        EXPECT_EQ(sextic_discriminant(from_roots(lead, roots)), oracle[3]);
    }
}

TEST(Igusa, RootOracleOnRationalRoots)
{
    std::vector<BigInt> roots{0, 1, 2, 3, 4, 5};
    auto s = from_roots(1, roots);
    HyperellipticCurve c(1, s);
    auto ic = igusa_clebsch(c);
    auto oracle = root_oracle(1, roots);
    EXPECT_EQ(ic.i2, BigRat(oracle[0]));
    EXPECT_EQ(ic.i4, BigRat(oracle[1]));
    EXPECT_EQ(ic.i6, BigRat(oracle[2]));
    EXPECT_EQ(ic.i10, BigRat(oracle[3]));

    std::mt19937_64 rng(43);
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<BigInt> r;
        while (r.size() < 6) {
            BigInt v = static_cast<long>(rng() % 31) - 15;
            if (std::find(r.begin(), r.end(), v) == r.end())
                r.push_back(v);
        }
        BigInt lead = static_cast<long>(rng() % 7) - 3;
        if (lead == 0)
            lead = 2;
        auto raw = igusa_clebsch_of_sextic(from_roots(lead, r));
        EXPECT_EQ(raw, root_oracle(lead, r));
    }
}

TEST(Igusa, I10IsDiscriminantAndVanishesOnSingular)
{
    std::mt19937_64 rng(47);
    int smooth = 0;
    while (smooth < 100) {
        auto s = random_sextic(rng, 9);
        auto raw = igusa_clebsch_of_sextic(s);
        EXPECT_EQ(raw[3], sextic_discriminant(s));
        if (raw[3] == 0)
            continue;
        ++smooth;
        HyperellipticCurve c(1, s);
        EXPECT_EQ(igusa_clebsch(c).i10 / BigRat(c.discriminant()), 1);
    }
    Polynomial singular = Polynomial{-1, 0, 1} * Polynomial{-1, 0, 1} * Polynomial{-1, 0, 1};
    EXPECT_THROW(igusa_clebsch(HyperellipticCurve(1, singular)), SingularCurve);
}

TEST(Igusa, EquivalenceUnderMoebiusAndScaling)
{
    // x -> x + t and y -> mu y give isomorphic curves
    std::mt19937_64 rng(53);
    for (int iter = 0; iter < 20; ++iter) {
        auto s = random_sextic(rng, 5);
        if (sextic_discriminant(s) == 0)
            continue;
        HyperellipticCurve a(1, s), b(3, translate(s, static_cast<long>(rng() % 7) - 3));
        auto ia = igusa_clebsch(a), ib = igusa_clebsch(b);
        EXPECT_TRUE(ia.equivalent(ib));
        EXPECT_EQ(ia.absolute(), ib.absolute());
        // x -> 2x rescales by a weighted factor
        Polynomial scaled = s;
        for (std::size_t i = 0; i < 7; ++i)
            scaled[i] *= pow_int(2, i);
        EXPECT_TRUE(igusa_clebsch(HyperellipticCurve(1, scaled)).equivalent(ia));
        Polynomial other = s;
        other[0] += 1;
        if (sextic_discriminant(other) != 0)
            EXPECT_FALSE(igusa_clebsch(HyperellipticCurve(1, other)).equivalent(ia));
    }
}

TEST(PointCount, MatchesBruteForce)
{
    std::vector<BigInt> roots{0, 1, 2, 3, 4, 5};
    HyperellipticCurve c(1, from_roots(1, roots));
    EXPECT_EQ(hyperelliptic_point_count(c, 11), brute_count(c, 11));
    EXPECT_THROW(hyperelliptic_point_count(c, 5), BadPrime);
    HyperellipticCurve c3(3, from_roots(1, {0, 1, 2, 4, 7, 9}));
    EXPECT_THROW(hyperelliptic_point_count(c3, 3), BadPrime);

    std::mt19937_64 rng(59);
    for (int iter = 0; iter < 30; ++iter) {
        auto s = random_sextic(rng, 6);
        BigInt lambda = static_cast<long>(rng() % 9) + 1;
        if (sextic_discriminant(s) == 0)
            continue;
        HyperellipticCurve h(lambda, s);
        for (auto p : primes_up_to(100)) {
            if (p == 2 || (lambda * h.discriminant() * s[6]) % p == 0)
                continue;
            auto n = hyperelliptic_point_count(h, p);
            ASSERT_LE(n, 2 * p + 2);
            if (p < 40)
                ASSERT_EQ(n, brute_count(h, p));
            double dev = static_cast<double>(n) - static_cast<double>(p) - 1.0;
            ASSERT_LE(dev * dev, 16.0 * static_cast<double>(p));
        }
    }
}

TEST(PointCount, TranslationInvariant)
{
    std::mt19937_64 rng(61);
    int done = 0;
    while (done < 20) {
        auto s = random_sextic(rng, 6);
        if (sextic_discriminant(s) == 0)
            continue;
        BigInt t = static_cast<long>(rng() % 11) - 5;
        auto primes = primes_up_to(60);
        std::uint64_t p = primes[2 + rng() % (primes.size() - 2)];
        HyperellipticCurve a(1, s), b(1, translate(s, t));
        if ((a.discriminant() * s[6]) % p == 0)
            continue;
        EXPECT_EQ(hyperelliptic_point_count(a, p), hyperelliptic_point_count(b, p));
        ++done;
    }
}

TEST(Polynomials, Helpers)
{
    EXPECT_EQ(translate({0, 0, 1}, 1), (Polynomial{1, 2, 1}));
    EXPECT_EQ(resultant({-1, 1}, {-2, 1}), -1);
    EXPECT_EQ(polynomial_discriminant({-1, 0, 1}), 4);
    EXPECT_EQ(polynomial_to_string({-1, 0, 2}), "2*x^2 - 1");
}
