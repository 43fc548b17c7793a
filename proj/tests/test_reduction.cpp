#include <gtest/gtest.h>

#include <random>

#include "isoforge/reduction.hpp"

using namespace isoforge;

namespace {

struct Known
{
    std::array<long, 5> a;
    long n;
};

// Curves with tabulated conductors.
const std::vector<Known> kKnown = {
    {{0, -1, 1, -10, -20}, 11}, {{0, -1, 1, 0, 0}, 11},   {{1, 0, 1, 4, -6}, 14},   {{1, 1, 1, -10, -10}, 15},
    {{0, 1, 1, -9, -15}, 19},   {{0, 1, 0, 4, 4}, 20},    {{0, -1, 0, -4, 4}, 24},  {{1, 0, 1, -5, -8}, 26},
    {{0, 0, 1, 0, -7}, 27},     {{0, 0, 0, -1, 0}, 32},   {{0, 0, 0, 0, 1}, 36},    {{0, 0, 1, -1, 0}, 37},
    {{0, 1, 1, 0, 0}, 43},      {{1, -1, 0, -2, -1}, 49}, {{1, 0, 1, -1, -2}, 50},  {{0, 0, 0, -4, 0}, 64},
    {{0, 1, 1, -2, 0}, 389},    {{0, 0, 1, -7, 6}, 5077},
};

WeierstrassModel model_of(const std::array<long, 5> &a) { return WeierstrassModel(a[0], a[1], a[2], a[3], a[4]); }

std::vector<WeierstrassModel> corpus()
{
    std::vector<WeierstrassModel> out;
    for (const auto &k : kKnown)
        out.push_back(model_of(k.a));
    std::mt19937_64 rng(23);
    while (out.size() < 50) {
        long a = static_cast<long>(rng() % 41) - 20, b = static_cast<long>(rng() % 41) - 20;
        if (TwoTorsionCurve::is_nondegenerate(a, b))
            out.push_back(weierstrass_model(TwoTorsionCurve(a, b)));
    }
    return out;
}

int v_min_disc_tame(const WeierstrassModel &w, const BigInt &p)
{
    // integral model, p >= 5: minimal iff v(c4) < 4 or v(c6) < 6 or v(disc) < 12
    int vc4 = valuation(w.c4(), p), vc6 = valuation(w.c6(), p), vd = valuation(w.discriminant(), p);
    int k = std::min({vc4 == kInfiniteValuation ? 1000 : vc4 / 4, vc6 == kInfiniteValuation ? 1000 : vc6 / 6, vd / 12});
    return vd - 12 * k;
}

} // namespace

TEST(Conductor, TabulatedCurves)
{
    for (const auto &k : kKnown)
        EXPECT_EQ(conductor(model_of(k.a)), k.n) << model_of(k.a);
    EXPECT_EQ(conductor(TwoTorsionCurve(1, -1)), 32);
}

TEST(Conductor, MultiplicativeAtEleven)
{
    TwoTorsionCurve e(1, 11);
    BigInt n = conductor(e);
    EXPECT_EQ(valuation(n, 11), 1);
    auto rep = classify_reduction(e, 11);
    EXPECT_TRUE(is_multiplicative(rep.actual));
    EXPECT_EQ(rep.kodaira.to_string(), "I2");
    EXPECT_EQ(rep.conductor_exponent, 1);
    // -c6 square test decides split vs nonsplit
    bool split = legendre_symbol(residue_big(-weierstrass_model(e).c6(), 11), 11) == 1;
    EXPECT_EQ(rep.actual, split ? ActualType::SplitMultiplicative : ActualType::NonsplitMultiplicative);
}

TEST(Conductor, SingularInputRejected) { EXPECT_THROW(conductor(TwoTorsionCurve(3, 3)), DegenerateCurve); }

TEST(Classify, Examples)
{
    auto good = classify_reduction(TwoTorsionCurve(1, -1), 5);
    EXPECT_EQ(good.actual, ActualType::GoodOrdinary);
    EXPECT_EQ(good.kodaira.to_string(), "I0");
    EXPECT_EQ(good.conductor_exponent, 0);
    auto at2 = classify_reduction(TwoTorsionCurve(1, -1), 2);
    EXPECT_EQ(at2.actual, ActualType::Additive);
    EXPECT_EQ(at2.conductor_exponent, 5);
    EXPECT_FALSE(at2.potential.has_value());
    EXPECT_EQ(classify_reduction(TwoTorsionCurve(1, -1), 7).actual, ActualType::GoodSupersingular);
}

TEST(Classify, KnownSplitAndNonsplit)
{
    // 11a1 is split at 11; 14a1 is nonsplit at 2 and split at 7 (a_2 = -1, a_7 = 1)
    EXPECT_EQ(classify_reduction(model_of({0, -1, 1, -10, -20}), 11).actual, ActualType::SplitMultiplicative);
    EXPECT_EQ(classify_reduction(model_of({1, 0, 1, 4, -6}), 2).actual, ActualType::NonsplitMultiplicative);
    EXPECT_EQ(classify_reduction(model_of({1, 0, 1, 4, -6}), 7).actual, ActualType::SplitMultiplicative);
    // 37a1 at 37: a_37 = -1... split iff a_p = 1
    EXPECT_EQ(classify_reduction(model_of({0, 0, 1, -1, 0}), 37).actual, ActualType::NonsplitMultiplicative);
}

TEST(Classify, KodairaAgainstDiscriminantTable)
{
    // For p >= 5 the Kodaira symbol determines v(disc_min).
    for (const auto &w : corpus())
        for (auto q : primes_up_to(100)) {
            if (q < 5)
                continue;
            BigInt p = static_cast<unsigned long>(q);
            auto rep = classify_reduction(w, p);
            int vd = rep.disc_valuation;
            ASSERT_EQ(vd, v_min_disc_tame(w, p));
            int expect_vd = 0;
            switch (rep.kodaira.kind) {
                case KodairaKind::I0: expect_vd = 0; break;
                case KodairaKind::In: expect_vd = rep.kodaira.n; break;
                case KodairaKind::II: expect_vd = 2; break;
                case KodairaKind::III: expect_vd = 3; break;
                case KodairaKind::IV: expect_vd = 4; break;
                case KodairaKind::I0Star: expect_vd = 6; break;
                case KodairaKind::InStar: expect_vd = 6 + rep.kodaira.n; break;
                case KodairaKind::IVStar: expect_vd = 8; break;
                case KodairaKind::IIIStar: expect_vd = 9; break;
                case KodairaKind::IIStar: expect_vd = 10; break;
            }
            ASSERT_EQ(vd, expect_vd) << w << " at " << q << " " << rep.kodaira.to_string();
            int f = vd == 0 ? 0 : (valuation(rep.minimal.model.c4(), p) == 0 ? 1 : 2);
            ASSERT_EQ(rep.conductor_exponent, f);
        }
}

TEST(Classify, ConsistencyTriple)
{
    for (const auto &w : corpus())
        for (auto q : primes_up_to(100)) {
            BigInt p = static_cast<unsigned long>(q);
            auto rep = classify_reduction(w, p);
            const auto &m = rep.minimal.model;
            ASSERT_TRUE(m.is_p_integral(p));
            ASSERT_EQ(valuation(m.discriminant(), p), rep.disc_valuation) << w << " at " << q;
            ASSERT_EQ(rep.conductor_exponent == 0, rep.disc_valuation == 0);
            ASSERT_EQ(rep.conductor_exponent == 0, is_good(rep.actual));
            bool mult = is_multiplicative(rep.actual);
            ASSERT_EQ(rep.conductor_exponent == 1, mult);
            int vj = valuation(w.j_invariant(), p);
            ASSERT_EQ(mult, rep.disc_valuation > 0 && valuation(m.c4(), p) == 0);
            if (mult)
                ASSERT_TRUE(vj == -rep.disc_valuation && vj < 0);
            if (rep.actual == ActualType::Additive)
                ASSERT_GE(rep.conductor_exponent, 2);
            if (q != 2) {
                ASSERT_EQ(*rep.potential == PotentialType::PotMultiplicative, vj < 0);
                if (is_good(rep.actual)) {
                    bool ss = is_supersingular_at(m, p);
                    ASSERT_EQ(ss, rep.actual == ActualType::GoodSupersingular);
                    ASSERT_EQ(ss, *rep.potential == PotentialType::PotGoodSupersingular) << w << " at " << q;
                }
            }
        }
}

TEST(Conductor, InvariantUnderChangeOfModel)
{
    std::mt19937_64 rng(29);
    const std::vector<BigRat> us = {2, make_rat(1, 2), 3, make_rat(1, 3), 5, make_rat(2, 3), 6};
    for (const auto &w : corpus()) {
        Transform t{us[rng() % us.size()], static_cast<long>(rng() % 7) - 3, make_rat(static_cast<long>(rng() % 5), 2),
                    static_cast<long>(rng() % 9) - 4};
        auto moved = w.transformed(t);
        EXPECT_EQ(conductor(moved), conductor(w)) << w;
    }
}

TEST(MinimalModel, Examples)
{
    WeierstrassModel e(0, 0, 0, -1, 0);
    auto same = minimal_model_at(e, 5);
    EXPECT_EQ(same.model, e);
    EXPECT_TRUE(same.transform.is_identity());
    // y^2 = x^3 - 16x is the u = 1/2 rescaling of y^2 = x^3 - x
    auto m2 = minimal_model_at(WeierstrassModel(0, 0, 0, -16, 0), 2);
    EXPECT_EQ(m2.model, e);
    EXPECT_EQ(m2.transform, (Transform{2, 0, 0, 0}));
    auto m3 = minimal_model_at(WeierstrassModel(0, 0, 0, -81, 0), 3);
    EXPECT_EQ(m3.model, e);
    EXPECT_EQ(WeierstrassModel(0, 0, 0, -81, 0).transformed(m3.transform), m3.model);
    // non-integral input
    auto m4 = minimal_model_at(WeierstrassModel(0, 0, 0, make_rat(-1, 16), 0), 2);
    EXPECT_TRUE(m4.model.is_p_integral(2));
    EXPECT_EQ(valuation(m4.model.discriminant(), 2), 6);
}

TEST(MinimalModel, TransformIsReported)
{
    for (const auto &w : corpus())
        for (long q : {2, 3, 5, 7}) {
            auto scaled = w.transformed({make_rat(1, q), 1, 1, 0});
            auto m = minimal_model_at(scaled, q);
            ASSERT_EQ(scaled.transformed(m.transform), m.model);
            ASSERT_EQ(valuation(m.model.discriminant(), q), classify_reduction(w, q).disc_valuation);
        }
}

TEST(Potential, Examples)
{
    EXPECT_EQ(potential_type(TwoTorsionCurve(1, -1), 7), PotentialType::PotGoodSupersingular);
    EXPECT_EQ(potential_type(TwoTorsionCurve(1, 11), 11), PotentialType::PotMultiplicative);
    EXPECT_EQ(potential_type(TwoTorsionCurve(1, -1), 5), PotentialType::PotGoodOrdinary);
    EXPECT_THROW(potential_type(TwoTorsionCurve(1, -1), 2), UnsupportedPrime);
}

TEST(Potential, ReferenceCurvesHaveRequestedJ)
{
    for (auto q : primes_up_to(60)) {
        if (q == 2)
            continue;
        for (std::uint64_t j = 0; j < q; ++j) {
            auto c = reference_curve(j, q);
            const auto &a = c.ainvs();
            WeierstrassModel w(a[0], a[1], a[2], a[3], a[4]);
            ASSERT_EQ(residue(w.j_invariant(), q), j) << "p=" << q;
        }
    }
}

TEST(Potential, AdditiveReductionUsesReducedJ)
{
    // quadratic twist by p of a good curve has additive reduction at p with the same potential type
    for (auto q : {5ul, 7ul, 11ul, 13ul}) {
        for (const auto &[a, b] : std::vector<std::pair<long, long>>{{1, -1}, {1, 3}, {2, 7}}) {
            TwoTorsionCurve e(a, b);
            if (e.discriminant() % q == 0)
                continue;
            TwoTorsionCurve twist(BigInt(a) * q, BigInt(b) * q);
            EXPECT_EQ(classify_reduction(twist, q).actual, ActualType::Additive);
            EXPECT_EQ(potential_type(twist, q), is_supersingular_at(e, q) ? PotentialType::PotGoodSupersingular
                                                                           : PotentialType::PotGoodOrdinary);
        }
    }
}
