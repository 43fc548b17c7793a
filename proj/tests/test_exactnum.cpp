#include <gtest/gtest.h>

#include <random>

#include "isoforge/exactnum.hpp"

using namespace isoforge;

TEST(Legendre, SmallCases)
{
    EXPECT_EQ(legendre_symbol(0, 5), 0);
    EXPECT_EQ(legendre_symbol(2, 7), 1);
    EXPECT_EQ(legendre_symbol(3, 7), -1);
    EXPECT_EQ(legendre_symbol(-1, 7), -1);
    EXPECT_EQ(legendre_symbol(14, 7), 0);
}

TEST(Legendre, RejectsNonOddPrimes)
{
    EXPECT_THROW(legendre_symbol(1, 2), InvalidArgument);
    EXPECT_THROW(legendre_symbol(1, 9), InvalidArgument);
    EXPECT_THROW(legendre_symbol(1, 1), InvalidArgument);
}

TEST(Legendre, MatchesEulerCriterion)
{
    for (auto p : primes_up_to(200)) {
        if (p == 2)
            continue;
        for (std::uint64_t a = 0; a < 3 * p; ++a) {
            std::uint64_t e = pow_mod(a % p, (p - 1) / 2, p);
            int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
            ASSERT_EQ(legendre_symbol(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(p))),
                      expect)
                << a << " mod " << p;
        }
    }
}

TEST(Primes, UpTo)
{
    EXPECT_TRUE(primes_up_to(1).empty());
    EXPECT_TRUE(primes_up_to(0).empty());
    EXPECT_EQ(primes_up_to(2), (std::vector<std::uint64_t>{2}));
    EXPECT_EQ(primes_up_to(10), (std::vector<std::uint64_t>{2, 3, 5, 7}));
    EXPECT_EQ(primes_up_to(1000).size(), 168u);
}

TEST(Valuation, IntegersAndRationals)
{
    EXPECT_EQ(valuation(BigInt(48), 2), 4);
    EXPECT_EQ(valuation(BigInt(0), 3), kInfiniteValuation);
    EXPECT_EQ(valuation(make_rat(9, 8), 2), -3);
    EXPECT_EQ(valuation(make_rat(9, 8), 3), 2);
}

TEST(Factor, Integers)
{
    auto f = factor_integer(BigInt("600851475143"));
    std::vector<std::pair<BigInt, unsigned>> expect{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}};
    EXPECT_EQ(f, expect);
    auto g = factor_integer(BigInt(-384));
    std::vector<std::pair<BigInt, unsigned>> e2{{2, 7}, {3, 1}};
    EXPECT_EQ(g, e2);
    // product of two ~10-digit primes exercises Pollard rho
    BigInt n = BigInt("1000000007") * BigInt("998244353");
    auto h = factor_integer(n);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0].first, BigInt("998244353"));
}

TEST(Smith, Examples)
{
    EXPECT_EQ(smith_normal_form(IntMatrix(2, 3)).diagonal, (std::vector<BigInt>{0, 0}));
    EXPECT_EQ(smith_normal_form(IntMatrix{{2, 0}, {0, 3}}).diagonal, (std::vector<BigInt>{1, 6}));
    EXPECT_EQ(smith_normal_form(IntMatrix{{2, 4}, {0, 2}}).diagonal, (std::vector<BigInt>{2, 2}));
    EXPECT_EQ(smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}).diagonal,
              (std::vector<BigInt>{2, 6, 12}));
}

namespace {

IntMatrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, int range)
{
    std::uniform_int_distribution<int> d(-range, range);
    std::vector<BigInt> e(r * c);
    for (auto &x : e)
        x = d(rng);
    return IntMatrix(r, c, e);
}

} // namespace

TEST(Smith, TransformsReconstructDiagonal)
{
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        IntMatrix m = random_matrix(rng, r, c, 6);
        SmithForm s = smith_normal_form(m, true);
        ASSERT_TRUE(s.left && s.right);
        IntMatrix prod = *s.left * m * *s.right;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                ASSERT_EQ(prod(i, j), (i == j ? s.diagonal[i] : BigInt(0)));
        for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
            ASSERT_GE(s.diagonal[i], 0);
            if (s.diagonal[i] != 0)
                ASSERT_TRUE(mpz_divisible_p(s.diagonal[i + 1].get_mpz_t(), s.diagonal[i].get_mpz_t()));
            else
                ASSERT_EQ(s.diagonal[i + 1], 0);
        }
        EXPECT_EQ(abs_value(determinant(*s.left)), 1);
        EXPECT_EQ(abs_value(determinant(*s.right)), 1);
        if (r == c) {
            BigInt prod_d = 1;
            for (auto &d : s.diagonal)
                prod_d *= d;
            EXPECT_EQ(prod_d, abs_value(determinant(m)));
        }
    }
}

TEST(Solve, Examples)
{
    std::vector<BigInt> t1{4};
    auto x1 = solve_integer_linear(IntMatrix{{2}}, t1);
    ASSERT_TRUE(x1);
    EXPECT_EQ((*x1)[0], 2);
    std::vector<BigInt> t2{3};
    EXPECT_FALSE(solve_integer_linear(IntMatrix{{2}}, t2));
    std::vector<BigInt> t3{1, 3};
    auto x3 = solve_integer_linear(IntMatrix{{1, 0}, {1, 2}}, t3);
    ASSERT_TRUE(x3);
    EXPECT_EQ(*x3, (std::vector<BigInt>{1, 1}));
    std::vector<BigInt> bad{1, 2, 3};
    EXPECT_THROW(solve_integer_linear(IntMatrix{{1, 0}, {1, 2}}, bad), InvalidArgument);
}

TEST(Solve, FuzzNeverReturnsWrongSolution)
{
    std::mt19937_64 rng(11);
    int found = 0, none = 0;
    for (int iter = 0; iter < 500; ++iter) {
        std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        IntMatrix m = random_matrix(rng, r, c, 5);
        std::vector<BigInt> target(r);
        if (iter % 2 == 0) {
            std::vector<BigInt> x(c);
            for (auto &v : x)
                v = static_cast<long>(rng() % 11) - 5;
            target = m.apply(x);
        } else {
            for (auto &v : target)
                v = static_cast<long>(rng() % 21) - 10;
        }
        auto sol = solve_integer_linear(m, target);
        if (sol) {
            ++found;
            ASSERT_EQ(m.apply(*sol), target);
        } else {
            ++none;
            ASSERT_NE(iter % 2, 0) << "constructed target must be solvable";
        }
    }
    EXPECT_GT(found, 250);
    EXPECT_GT(none, 0);
}

TEST(Solve, NoneAgreesWithSmithCriterion)
{
    // x in col-span(M) over Z iff the SNF system U x = D y is solvable.
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 300; ++iter) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        IntMatrix m = random_matrix(rng, r, c, 4);
        std::vector<BigInt> target(r);
        for (auto &v : target)
            v = static_cast<long>(rng() % 13) - 6;
        SmithForm s = smith_normal_form(m, true);
        auto ut = s.left->apply(target);
        bool solvable = true;
        for (std::size_t i = 0; i < r; ++i) {
            BigInt d = i < s.diagonal.size() ? s.diagonal[i] : BigInt(0);
            if (d == 0)
                solvable = solvable && ut[i] == 0;
            else
                solvable = solvable && mpz_divisible_p(ut[i].get_mpz_t(), d.get_mpz_t());
        }
        EXPECT_EQ(solve_integer_linear(m, target).has_value(), solvable);
    }
}

TEST(Lattice, BasisAndContainment)
{
    IntMatrix m{{2, 4, 6}, {0, 2, 2}};
    LatticeSolver s(m);
    EXPECT_EQ(s.rank(), 2u);
    std::vector<BigInt> in{6, 4}, out{1, 0};
    EXPECT_TRUE(s.contains(in));
    EXPECT_FALSE(s.contains(out));
    EXPECT_TRUE(lattice_contains(m, s.basis()));
    EXPECT_TRUE(lattice_contains(s.basis(), m));
}

TEST(Invariants, Normalize)
{
    EXPECT_EQ(normalize_invariant_factors({4, 6}), (std::vector<BigInt>{2, 12}));
    EXPECT_EQ(normalize_invariant_factors({1, 8}), (std::vector<BigInt>{8}));
    EXPECT_EQ(cokernel_invariants(IntMatrix{{2, 0}, {0, 4}}), (std::vector<BigInt>{2, 4}));
}
