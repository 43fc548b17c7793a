#pragma once

// Group rings Z[G] of finite abelian groups with the Pontryagin product
// [a] * [b] = [a + b], and the quotients I^r / I^(r+1) of powers of the
// augmentation ideal.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isoforge/elliptic.hpp"
#include "isoforge/errors.hpp"
#include "isoforge/exactnum.hpp"

namespace isoforge {

/// Z/m_1 x ... x Z/m_k; elements are indices in mixed radix (first factor fastest).
class FinAbGroup
{
    public:
        explicit FinAbGroup(std::vector<std::uint64_t> moduli) : moduli_{std::move(moduli)}
        {
            order_ = 1;
            for (auto m : moduli_) {
                if (m == 0)
                    throw InvalidArgument("cyclic factor of order 0");
                strides_.push_back(order_);
                order_ *= m;
            }
        }

        /// E(F_p) realised through its basis coordinates; element i maps to point point_index(i).
        static FinAbGroup from_points(const PointGroup &g)
        {
            FinAbGroup out(g.basis_orders());
            out.point_index_.assign(out.order(), 0);
            for (std::size_t pt = 0; pt < g.order(); ++pt)
                out.point_index_[out.index_of(g.coordinates(pt))] = pt;
            return out;
        }

        std::size_t order() const { return order_; }
        const std::vector<std::uint64_t> &moduli() const { return moduli_; }
        std::vector<BigInt> invariant_factors() const
        {
            std::vector<BigInt> m;
            for (auto x : moduli_)
                m.emplace_back(static_cast<unsigned long>(x));
            return normalize_invariant_factors(m);
        }

        static constexpr std::size_t zero() { return 0; }

        std::vector<std::uint64_t> coordinates(std::size_t i) const
        {
            std::vector<std::uint64_t> c(moduli_.size());
            for (std::size_t k = 0; k < moduli_.size(); ++k) {
                c[k] = i % moduli_[k];
                i /= moduli_[k];
            }
            return c;
        }

        std::size_t index_of(const std::vector<std::uint64_t> &c) const
        {
            if (c.size() != moduli_.size())
                throw InvalidArgument("coordinate vector has the wrong length");
            std::size_t i = 0;
            for (std::size_t k = 0; k < moduli_.size(); ++k)
                i += (c[k] % moduli_[k]) * strides_[k];
            return i;
        }

        std::size_t add(std::size_t i, std::size_t j) const
        {
            std::size_t out = 0;
            for (std::size_t k = 0; k < moduli_.size(); ++k) {
                std::uint64_t a = (i / strides_[k]) % moduli_[k], b = (j / strides_[k]) % moduli_[k];
                out += ((a + b) % moduli_[k]) * strides_[k];
            }
            return out;
        }

        std::size_t negate(std::size_t i) const
        {
            std::size_t out = 0;
            for (std::size_t k = 0; k < moduli_.size(); ++k) {
                std::uint64_t a = (i / strides_[k]) % moduli_[k];
                out += ((moduli_[k] - a) % moduli_[k]) * strides_[k];
            }
            return out;
        }

        /// Standard generators (unit vectors), skipping trivial factors.
        std::vector<std::size_t> generators() const
        {
            std::vector<std::size_t> out;
            for (std::size_t k = 0; k < moduli_.size(); ++k)
                if (moduli_[k] > 1)
                    out.push_back(strides_[k]);
            return out;
        }

        const std::vector<std::size_t> &point_index() const { return point_index_; }

        bool operator==(const FinAbGroup &o) const { return moduli_ == o.moduli_; }

    private:
        std::vector<std::uint64_t> moduli_;
        std::vector<std::size_t> strides_;
        std::size_t order_ = 1;
        std::vector<std::size_t> point_index_;
};

class GroupRingElement
{
    public:
        explicit GroupRingElement(std::shared_ptr<const FinAbGroup> g)
            : group_{std::move(g)}, coeffs_(group_->order())
        {
        }

        static GroupRingElement basis(std::shared_ptr<const FinAbGroup> g, std::size_t a)
        {
            GroupRingElement z(std::move(g));
            z.coeffs_.at(a) = 1;
            return z;
        }

        /// [a] - [0]
        static GroupRingElement augmentation_generator(std::shared_ptr<const FinAbGroup> g, std::size_t a)
        {
            GroupRingElement z = basis(g, a);
            z.coeffs_[FinAbGroup::zero()] -= 1;
            return z;
        }

        const FinAbGroup &group() const { return *group_; }
        const std::shared_ptr<const FinAbGroup> &group_ptr() const { return group_; }
        const std::vector<BigInt> &coefficients() const { return coeffs_; }
        const BigInt &operator[](std::size_t a) const { return coeffs_.at(a); }
        BigInt &operator[](std::size_t a) { return coeffs_.at(a); }

        BigInt degree() const
        {
            BigInt d = 0;
            for (const auto &c : coeffs_)
                d += c;
            return d;
        }

        GroupRingElement &operator+=(const GroupRingElement &o)
        {
            check(o);
            for (std::size_t i = 0; i < coeffs_.size(); ++i)
                coeffs_[i] += o.coeffs_[i];
            return *this;
        }
        GroupRingElement &operator-=(const GroupRingElement &o)
        {
            check(o);
            for (std::size_t i = 0; i < coeffs_.size(); ++i)
                coeffs_[i] -= o.coeffs_[i];
            return *this;
        }
        friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement &b) { return a += b; }
        friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement &b) { return a -= b; }
        friend GroupRingElement operator*(const BigInt &k, GroupRingElement a)
        {
            for (auto &c : a.coeffs_)
                c *= k;
            return a;
        }

        bool operator==(const GroupRingElement &o) const { return *group_ == *o.group_ && coeffs_ == o.coeffs_; }

        void check(const GroupRingElement &o) const
        {
            if (!(*group_ == *o.group_))
                throw InvalidArgument("group ring elements over different groups");
        }

    private:
        std::shared_ptr<const FinAbGroup> group_;
        std::vector<BigInt> coeffs_;
};

/// Bilinear extension of [a] * [b] = [a + b].
inline GroupRingElement pontryagin_product(const GroupRingElement &x, const GroupRingElement &y)
{
    x.check(y);
    const auto &g = x.group();
    GroupRingElement out(x.group_ptr());
    for (std::size_t a = 0; a < g.order(); ++a) {
        if (x[a] == 0)
            continue;
        for (std::size_t b = 0; b < g.order(); ++b)
            if (y[b] != 0)
                out[g.add(a, b)] += x[a] * y[b];
    }
    return out;
}

inline constexpr std::size_t kMaxGroupOrder = 10000;
inline constexpr int kMaxFiltrationDepth = 12;

/// sum_{j=0}^{r} (-1)^(r-j) sum_{nu_1 < ... < nu_j} [a_nu_1 + ... + a_nu_j]
inline GroupRingElement alternating_subset_sum(const std::shared_ptr<const FinAbGroup> &g,
                                               const std::vector<std::size_t> &tuple)
{
    GroupRingElement out(g);
    const std::size_t r = tuple.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
        std::size_t sum = FinAbGroup::zero();
        int bits = 0;
        for (std::size_t k = 0; k < r; ++k)
            if (mask >> k & 1) {
                sum = g->add(sum, tuple[k]);
                ++bits;
            }
        out[sum] += ((r - static_cast<std::size_t>(bits)) % 2) ? -1 : 1;
    }
    return out;
}

/// Generators of G^r: one alternating subset sum per r-tuple of group elements.
inline std::vector<GroupRingElement> gr_generators(const std::shared_ptr<const FinAbGroup> &g, int r)
{
    if (r < 1)
        throw InvalidArgument("filtration index must be at least 1");
    const std::size_t n = g->order();
    double count = 1;
    for (int k = 0; k < r; ++k)
        count *= static_cast<double>(n);
    if (count > 1e6)
        throw BudgetExceeded("|G|^r = " + std::to_string(count) + " tuples exceeds the enumeration budget");
    std::vector<GroupRingElement> out;
    std::vector<std::size_t> tuple(static_cast<std::size_t>(r), 0);
    for (;;) {
        out.push_back(alternating_subset_sum(g, tuple));
        std::size_t k = 0;
        while (k < tuple.size() && ++tuple[k] == n)
            tuple[k++] = 0;
        if (k == tuple.size())
            break;
    }
    return out;
}

inline IntMatrix as_matrix(const std::vector<GroupRingElement> &gens, std::size_t dim)
{
    std::vector<std::vector<BigInt>> cols;
    for (const auto &z : gens)
        cols.push_back(z.coefficients());
    return IntMatrix::from_columns(dim, cols);
}

struct FiltrationReport
{
    std::vector<BigInt> group_invariants;
    std::vector<std::vector<BigInt>> quotients; // quotients[r-1] = invariant factors of I^r / I^(r+1)
    bool first_quotient_matches_group = false;  // I / I^2 = G, checked on invariants and on generators
    std::optional<int> stabilization_index;     // first r from which the quotients stay constant up to r_max
};

namespace detail {

/// Z-basis of I^(r+1) from a Z-basis of I^r: products b * ([s] - [0]) for s in a generating set.
inline IntMatrix next_power(const FinAbGroup &g, const IntMatrix &basis)
{
    const std::size_t n = g.order();
    std::vector<std::vector<BigInt>> cols;
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        auto b = basis.column(j);
        for (std::size_t s : g.generators()) {
            std::vector<BigInt> v(n);
            for (std::size_t a = 0; a < n; ++a)
                if (b[a] != 0) {
                    v[g.add(a, s)] += b[a];
                    v[a] -= b[a];
                }
            cols.push_back(std::move(v));
        }
    }
    return LatticeSolver(IntMatrix::from_columns(n, cols)).basis();
}

/// Invariant factors (1s dropped) of span(outer) / span(inner) for full-rank-equal lattices.
inline std::vector<BigInt> quotient_invariants(const IntMatrix &outer, const IntMatrix &inner)
{
    LatticeSolver s(outer);
    std::vector<std::vector<BigInt>> coords;
    for (std::size_t j = 0; j < inner.cols(); ++j) {
        auto c = s.coordinates(inner.column(j));
        if (!c)
            throw Error("filtration step is not contained in the previous one");
        coords.push_back(std::move(*c));
    }
    IntMatrix rel = IntMatrix::from_columns(s.rank(), coords);
    std::vector<BigInt> out;
    auto snf = smith_normal_form(rel).diagonal;
    std::size_t nonzero = 0;
    for (const auto &d : snf) {
        if (d != 0)
            ++nonzero;
        if (d != 1)
            out.push_back(d);
    }
    if (nonzero < s.rank())
        throw Error("filtration quotient has positive rank");
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

inline FiltrationReport aug_filtration(const FinAbGroup &g, int r_max)
{
    if (r_max < 1)
        throw InvalidArgument("r_max must be at least 1");
    if (r_max > kMaxFiltrationDepth)
        throw BudgetExceeded("r_max = " + std::to_string(r_max) + " exceeds " + std::to_string(kMaxFiltrationDepth));
    if (g.order() > kMaxGroupOrder)
        throw BudgetExceeded("|G| = " + std::to_string(g.order()) + " exceeds " + std::to_string(kMaxGroupOrder));
    const std::size_t n = g.order();
    FiltrationReport rep;
    rep.group_invariants = g.invariant_factors();

    // I = span([a] - [0])
    std::vector<std::vector<BigInt>> first;
    for (std::size_t a = 1; a < n; ++a) {
        std::vector<BigInt> v(n);
        v[a] = 1;
        v[0] = -1;
        first.push_back(std::move(v));
    }
    IntMatrix current = n > 1 ? IntMatrix::from_columns(n, first) : IntMatrix(n, 0);
    std::optional<IntMatrix> second;
    for (int r = 1; r <= r_max; ++r) {
        IntMatrix next = current.cols() ? detail::next_power(g, current) : IntMatrix(n, 0);
        rep.quotients.push_back(current.cols() ? detail::quotient_invariants(current, next) : std::vector<BigInt>{});
        if (r == 1)
            second = next;
        current = std::move(next);
    }
    if (!second)
        second = detail::next_power(g, current);

    // a -> [a] - [0] is a homomorphism G -> I/I^2 whose generator images have the right orders
    bool ok = rep.quotients.front() == rep.group_invariants;
    if (ok && n > 1) {
        LatticeSolver i2(*second);
        auto x = [&](std::size_t a) {
            std::vector<BigInt> v(n);
            v[a] += 1;
            v[0] -= 1;
            return v;
        };
        const auto gens = g.generators();
        for (std::size_t s : gens)
            for (std::size_t t : gens) {
                auto v = x(g.add(s, t));
                auto xs = x(s), xt = x(t);
                for (std::size_t k = 0; k < n; ++k)
                    v[k] -= xs[k] + xt[k];
                ok = ok && i2.contains(v);
            }
        for (std::size_t k = 0; k < g.moduli().size(); ++k) {
            const std::uint64_t m = g.moduli()[k];
            if (m <= 1)
                continue;
            auto xs = x(g.index_of([&] {
                std::vector<std::uint64_t> c(g.moduli().size());
                c[k] = 1;
                return c;
            }()));
            auto scaled = [&](std::uint64_t f) {
                std::vector<BigInt> v(xs);
                for (auto &e : v)
                    e *= static_cast<unsigned long>(f);
                return v;
            };
            ok = ok && i2.contains(scaled(m));
            for (const auto &[q, e] : factor_integer(BigInt(static_cast<unsigned long>(m))))
                ok = ok && !i2.contains(scaled(m / q.get_ui()));
        }
    }
    rep.first_quotient_matches_group = ok;

    for (int r = 1; r < r_max; ++r) {
        bool stable = true;
        for (int s = r; s < r_max; ++s)
            stable = stable && rep.quotients[static_cast<std::size_t>(s)] == rep.quotients[static_cast<std::size_t>(r - 1)];
        if (stable) {
            rep.stabilization_index = r;
            break;
        }
    }
    return rep;
}

} // namespace isoforge
