#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isoforge/elliptic.hpp"

using namespace isoforge;

TEST(CurveFromPair, Invariants)
{
    auto e = curve_from_pair(1, -1);
    EXPECT_EQ(e.model.discriminant(), 64);
    EXPECT_EQ(e.model.j_invariant(), 1728);
    EXPECT_EQ(curve_from_pair(1, 3).model.j_invariant(), make_rat(21952, 9));
    EXPECT_THROW(curve_from_pair(1, 1), DegenerateCurve);
    EXPECT_THROW(curve_from_pair(0, 1), DegenerateCurve);
    EXPECT_THROW(curve_from_pair(2, 0), DegenerateCurve);
}

TEST(CurveFromPair, ClosedFormsAgreeWithGeneralFormulas)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        long a = static_cast<long>(rng() % 101) - 50, b = static_cast<long>(rng() % 101) - 50;
        if (!TwoTorsionCurve::is_nondegenerate(a, b))
            continue;
        auto e = curve_from_pair(a, b);
        BigInt A = a, B = b;
        EXPECT_EQ(e.model.discriminant(), BigRat(e.curve.discriminant()));
        BigRat j = make_rat(256 * pow_int(A * A - A * B + B * B, 3), A * A * B * B * (A - B) * (A - B));
        EXPECT_EQ(e.model.j_invariant(), j);
        EXPECT_EQ(1728 * e.model.discriminant(), pow_rat(e.model.c4(), 3) - e.model.c6() * e.model.c6());
    }
}

TEST(Transform, ComposeAndPreserveJ)
{
    WeierstrassModel w(1, -1, 1, -2, 3);
    Transform t1{2, 1, -1, 3}, t2{make_rat(1, 3), -2, 5, make_rat(1, 2)};
    auto direct = w.transformed(t1).transformed(t2);
    EXPECT_EQ(direct, w.transformed(t1.then(t2)));
    EXPECT_EQ(direct.j_invariant(), w.j_invariant());
    EXPECT_EQ(w.transformed(t1).discriminant(), w.discriminant() / pow_rat(2, 12));
}

TEST(Trace, Examples)
{
    TwoTorsionCurve e(1, -1);
    EXPECT_EQ(ap_trace(e, 5), -2);
    EXPECT_EQ(ap_trace(e, 7), 0);
    EXPECT_THROW(ap_trace(e, 2), BadPrime);
    EXPECT_THROW(ap_trace(e, 9), InvalidArgument);
    EXPECT_TRUE(is_supersingular_at(e, 7));
    EXPECT_FALSE(is_supersingular_at(e, 5));
    EXPECT_FALSE(is_supersingular_at(e, 13));
    EXPECT_THROW(ap_trace(TwoTorsionCurve(1, 11), 11), BadPrime);
}

TEST(Trace, UnsupportedAtTwoForGoodModels)
{
    // y^2 + y = x^3 - x has discriminant 37
    WeierstrassModel w(0, 0, 1, -1, 0);
    EXPECT_THROW(ap_trace(w, 2), UnsupportedPrime);
    EXPECT_EQ(ap_trace(w, 3), -3);
}

TEST(Trace, CharacterSumMatchesBruteForceAndHasse)
{
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        long a = static_cast<long>(rng() % 61) - 30, b = static_cast<long>(rng() % 61) - 30;
        if (!TwoTorsionCurve::is_nondegenerate(a, b))
            continue;
        TwoTorsionCurve e(a, b);
        for (auto p : primes_up_to(200)) {
            if (p == 2)
                continue;
            BigInt P = static_cast<unsigned long>(p);
            auto local = local_minimal_two_torsion(e, P);
            if (local.discriminant() % P == 0) {
                EXPECT_THROW(ap_trace(e, P), BadPrime);
                continue;
            }
            BigInt ap = ap_trace(e, P);
            auto curve = CurveModP::reduce(weierstrass_model(local), p);
            ASSERT_EQ(ap, trace_bruteforce(curve));
            ASSERT_LE(ap * ap, 4 * P);
            ++checked;
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(Trace, MinimalTwoTorsionScaling)
{
    // (9, -9) is the 3-scaling of (1, -1): good reduction at 3 after minimising.
    TwoTorsionCurve e(9, -9);
    EXPECT_EQ(local_minimal_two_torsion(e, 3), TwoTorsionCurve(1, -1));
    EXPECT_EQ(ap_trace(e, 3), ap_trace(TwoTorsionCurve(1, -1), 3));
}

TEST(PointGroupTest, Examples)
{
    auto g = rational_points_mod_p(TwoTorsionCurve(1, -1), 5);
    EXPECT_EQ(g.order(), 8u);
    EXPECT_EQ(g.structure(), (std::vector<BigInt>{2, 4}));
    const auto &c = g.curve();
    auto P = PointModP::affine(2, 1);
    ASSERT_TRUE(c.contains(P));
    EXPECT_EQ(c.add(PointModP::at_infinity(), P), P);
    EXPECT_EQ(c.add(PointModP::affine(0, 0), PointModP::affine(1, 0)), PointModP::affine(4, 0));
    EXPECT_THROW(rational_points_mod_p(TwoTorsionCurve(1, -1), 2), BadPrime);
}

TEST(PointGroupTest, GroupLawExhaustive)
{
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, -1}, {1, 3}, {2, 7}, {-3, 5}}) {
        TwoTorsionCurve e(a, b);
        for (auto p : primes_up_to(31)) {
            if (p == 2 || e.discriminant() % p == 0)
                continue;
            auto g = rational_points_mod_p(e, static_cast<unsigned long>(p));
            const std::size_t n = g.order();
            ASSERT_EQ(BigInt(static_cast<long>(p + 1) - static_cast<long>(n)), ap_trace(e, static_cast<unsigned long>(p)));
            for (std::size_t i = 0; i < n; ++i) {
                ASSERT_EQ(g.add(i, g.negate(i)), g.zero());
                for (std::size_t j = 0; j < n; ++j) {
                    std::size_t ij = g.add(i, j);
                    ASSERT_EQ(ij, g.add(j, i));
                    for (std::size_t k = 0; k < n; ++k)
                        ASSERT_EQ(g.add(ij, k), g.add(i, g.add(j, k)));
                }
            }
            BigInt prod = 1;
            for (auto &d : g.structure())
                prod *= d;
            EXPECT_EQ(prod, BigInt(static_cast<unsigned long>(n)));
            // full two-torsion
            std::uint64_t ar = residue(BigInt(a), p), br = residue(BigInt(b), p);
            int two_torsion = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (g.add(i, i) == g.zero()) {
                    ++two_torsion;
                    auto x = g.point(i).x;
                    EXPECT_TRUE(x == 0 || x == ar || x == br);
                    EXPECT_EQ(g.point(i).y, 0u);
                }
            EXPECT_EQ(two_torsion, 3);
            EXPECT_EQ(g.structure().size(), 2u);
        }
    }
}

TEST(PointGroupTest, CoordinatesAreHomomorphic)
{
    auto g = rational_points_mod_p(TwoTorsionCurve(2, 7), 13);
    const auto &ord = g.basis_orders();
    for (std::size_t i = 0; i < g.order(); ++i)
        for (std::size_t j = 0; j < g.order(); ++j) {
            auto ci = g.coordinates(i), cj = g.coordinates(j), cs = g.coordinates(g.add(i, j));
            for (std::size_t t = 0; t < ord.size(); ++t)
                ASSERT_EQ((ci[t] + cj[t]) % ord[t], cs[t]);
        }
}
