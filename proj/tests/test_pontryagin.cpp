#include <gtest/gtest.h>

#include <cmath>

#include "isoforge/pontryagin.hpp"

using namespace isoforge;

namespace {

using Inv = std::vector<BigInt>;

std::shared_ptr<const FinAbGroup> group(std::vector<std::uint64_t> m)
{
    return std::make_shared<const FinAbGroup>(std::move(m));
}

std::vector<Inv> quotients(const FinAbGroup &g, int r)
{
    return aug_filtration(g, r).quotients;
}

// r-fold products of ([a] - [0]) over all tuples
std::vector<GroupRingElement> odot_products(const std::shared_ptr<const FinAbGroup> &g, int r)
{
    std::vector<GroupRingElement> cur{GroupRingElement::basis(g, 0)};
    for (int k = 0; k < r; ++k) {
        std::vector<GroupRingElement> next;
        for (const auto &z : cur)
            for (std::size_t a = 0; a < g->order(); ++a)
                next.push_back(pontryagin_product(z, GroupRingElement::augmentation_generator(g, a)));
        cur = std::move(next);
    }
    return cur;
}

} // namespace

TEST(Product, Examples)
{
    auto g = group({2, 4});
    const std::size_t a = g->index_of({1, 3}), b = g->index_of({1, 2});
    auto za = GroupRingElement::basis(g, a), zb = GroupRingElement::basis(g, b);
    EXPECT_EQ(pontryagin_product(za, zb), GroupRingElement::basis(g, g->add(a, b)));
    auto mixed = 3 * za - zb;
    EXPECT_EQ(pontryagin_product(GroupRingElement::basis(g, 0), mixed), mixed);

    auto xa = GroupRingElement::augmentation_generator(g, a), xb = GroupRingElement::augmentation_generator(g, b);
    auto expanded = GroupRingElement::basis(g, g->add(a, b)) - za - zb + GroupRingElement::basis(g, 0);
    EXPECT_EQ(pontryagin_product(xa, xb), expanded);
    EXPECT_EQ(alternating_subset_sum(g, {a, b}), expanded);

    EXPECT_THROW(pontryagin_product(za, GroupRingElement::basis(group({8}), 1)), InvalidArgument);
}

TEST(Generators, DegreeZeroAndMatchProducts)
{
    for (auto m : std::vector<std::vector<std::uint64_t>>{{2}, {3}, {4}, {2, 2}, {2, 3}}) {
        auto g = group(m);
        for (int r = 1; r <= 3; ++r) {
            auto gens = gr_generators(g, r);
            ASSERT_EQ(gens.size(), static_cast<std::size_t>(std::pow(g->order(), r)));
            for (const auto &z : gens)
                EXPECT_EQ(z.degree(), 0);
            // each alternating sum equals the corresponding odot product; compare as lattices
            auto prods = odot_products(g, r);
            auto lhs = as_matrix(gens, g->order()), rhs = as_matrix(prods, g->order());
            EXPECT_TRUE(lattice_contains(lhs, rhs));
            EXPECT_TRUE(lattice_contains(rhs, lhs));
        }
    }
    EXPECT_THROW(gr_generators(group({2}), 0), InvalidArgument);
    auto r1 = gr_generators(group({5}), 1);
    EXPECT_EQ(r1[2], GroupRingElement::augmentation_generator(group({5}), 2));
}

TEST(Generators, IterativeBasisSpansSameLattice)
{
    for (auto m : std::vector<std::vector<std::uint64_t>>{{4}, {2, 2}, {6}, {2, 4}}) {
        auto g = group(m);
        IntMatrix basis = as_matrix(gr_generators(g, 1), g->order());
        for (int r = 2; r <= 3; ++r) {
            basis = detail::next_power(*g, basis);
            auto full = as_matrix(gr_generators(g, r), g->order());
            EXPECT_TRUE(lattice_contains(basis, full));
            EXPECT_TRUE(lattice_contains(full, basis));
        }
    }
}

TEST(Filtration, SmallGroups)
{
    EXPECT_EQ(quotients(FinAbGroup({2}), 3), (std::vector<Inv>{{2}, {2}, {2}}));
    EXPECT_EQ(quotients(FinAbGroup({3}), 3), (std::vector<Inv>{{3}, {3}, {3}}));
    EXPECT_EQ(quotients(FinAbGroup({}), 3), (std::vector<Inv>{{}, {}, {}}));
    EXPECT_EQ(quotients(FinAbGroup({1}), 2), (std::vector<Inv>{{}, {}}));
    EXPECT_EQ(quotients(FinAbGroup({4}), 1), (std::vector<Inv>{{4}}));

    auto rep = aug_filtration(FinAbGroup({2}), 4);
    EXPECT_TRUE(rep.first_quotient_matches_group);
    EXPECT_EQ(rep.stabilization_index, 1);

    auto z6 = aug_filtration(FinAbGroup({6}), 4);
    EXPECT_EQ(z6.quotients.front(), (Inv{6}));
}

TEST(Filtration, FirstQuotientIsGroup)
{
    for (auto m : std::vector<std::vector<std::uint64_t>>{{2}, {3}, {4}, {2, 4}, {4, 2}, {3, 3}, {2, 2, 2}, {6}, {12}})
        EXPECT_TRUE(aug_filtration(FinAbGroup(m), 2).first_quotient_matches_group);
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul}) {
        for (auto [a, b] : std::vector<std::pair<long, long>>{{1, -1}, {1, 3}, {2, -3}}) {
            TwoTorsionCurve e(a, b);
            if (e.discriminant() % p == 0)
                continue;
            auto pts = rational_points_mod_p(e, p);
            auto g = FinAbGroup::from_points(pts);
            ASSERT_EQ(g.order(), pts.order());
            auto rep = aug_filtration(g, 2);
            EXPECT_TRUE(rep.first_quotient_matches_group) << p;
            EXPECT_EQ(rep.quotients.front(), g.invariant_factors());
        }
    }
}

TEST(Filtration, MonotoneForCyclicPGroups)
{
    for (std::uint64_t n : {2, 4, 8, 3, 9, 5, 7, 16}) {
        auto rep = aug_filtration(FinAbGroup({n}), 5);
        for (std::size_t r = 1; r < rep.quotients.size(); ++r) {
            ASSERT_EQ(rep.quotients[r].size(), 1u) << n;
            EXPECT_LE(rep.quotients[r][0], rep.quotients[r - 1][0]) << n;
        }
    }
}

TEST(Filtration, Budgets)
{
    EXPECT_THROW(aug_filtration(FinAbGroup({2}), 0), InvalidArgument);
    EXPECT_THROW(aug_filtration(FinAbGroup({2}), 13), BudgetExceeded);
    EXPECT_THROW(aug_filtration(FinAbGroup({101, 100}), 1), BudgetExceeded);
    EXPECT_THROW(FinAbGroup({0}), InvalidArgument);
}
