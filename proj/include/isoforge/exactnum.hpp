#pragma once

// Exact integer and rational arithmetic, residues, prime tools and integer
// linear algebra (Smith normal form, lattice membership).

#include <algorithm>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "isoforge/errors.hpp"

namespace isoforge {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline constexpr int kInfiniteValuation = INT_MAX;

inline std::string to_string(const BigInt &n) { return n.get_str(); }

inline std::string to_string(const BigRat &q)
{
    BigRat c = q;
    c.canonicalize();
    return c.get_str();
}

inline BigRat make_rat(const BigInt &num, const BigInt &den = 1)
{
    if (den == 0)
        throw InvalidArgument("zero denominator");
    BigRat q(num, den);
    q.canonicalize();
    return q;
}

inline BigInt abs_value(const BigInt &n) { return n < 0 ? BigInt(-n) : n; }

inline BigInt gcd(const BigInt &a, const BigInt &b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt pow_int(const BigInt &base, unsigned long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigRat pow_rat(const BigRat &base, unsigned long e)
{
    BigRat r = 1;
    for (unsigned long i = 0; i < e; ++i)
        r *= base;
    return r;
}

/// p-adic valuation; kInfiniteValuation for zero.
inline int valuation(const BigInt &n, const BigInt &p)
{
    if (n == 0)
        return kInfiniteValuation;
    if (p < 2)
        throw InvalidArgument("valuation base must be at least 2");
    BigInt rest;
    return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

inline int valuation(const BigRat &q, const BigInt &p)
{
    if (q == 0)
        return kInfiniteValuation;
    return valuation(BigInt(q.get_num()), p) - valuation(BigInt(q.get_den()), p);
}

/// Primality: trial division is folded into GMP's BPSW test, which has no
/// counterexample below 2^64.
inline bool is_prime(const BigInt &n)
{
    if (n < 2)
        return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

inline bool is_odd_prime(const BigInt &p) { return p != 2 && is_prime(p); }

/// (a/p) for an odd prime p.
inline int legendre_symbol(const BigInt &a, const BigInt &p)
{
    if (!is_odd_prime(p))
        throw InvalidArgument("legendre_symbol: modulus " + to_string(p) + " is not an odd prime");
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

/// Ascending primes <= bound (sieve of Eratosthenes).
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound)
{
    std::vector<std::uint64_t> out;
    if (bound < 2)
        return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i)
            composite[j] = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Word-size modular arithmetic for prime fields.

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t p)
{
    std::uint64_t r = 1 % p;
    base %= p;
    while (e) {
        if (e & 1)
            r = mul_mod(r, base, p);
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p)
{
    a %= p;
    if (a == 0)
        throw InvalidArgument("inverse of zero modulo " + std::to_string(p));
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::pair{nt, t - q * nt};
        std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (t < 0)
        t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

inline std::uint64_t residue(const BigInt &n, std::uint64_t p)
{
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p);
    return r.get_ui();
}

/// Reduction of a p-integral rational modulo p.
inline std::uint64_t residue(const BigRat &q, std::uint64_t p)
{
    std::uint64_t den = residue(BigInt(q.get_den()), p);
    if (den == 0)
        throw BadPrime("denominator of " + to_string(q) + " is divisible by " + std::to_string(p));
    return mul_mod(residue(BigInt(q.get_num()), p), inv_mod(den, p), p);
}

/// Same as residue() but as a BigInt in [0, p).
inline BigInt residue_big(const BigRat &q, const BigInt &p)
{
    BigInt den = q.get_den(), inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
        throw BadPrime("denominator of " + to_string(q) + " is divisible by " + to_string(p));
    BigInt r = BigInt(q.get_num()) * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------------------
// Factorisation (desk scale): trial division, then Pollard-Brent.

namespace detail {

inline BigInt pollard_brent(const BigInt &n, unsigned long seed)
{
    if (mpz_even_p(n.get_mpz_t()))
        return 2;
    BigInt y = seed % n, c = (seed * 7 + 1) % n, m = 128, g = 1, r = 1, q = 1, x, ys;
    auto f = [&](const BigInt &v) {
        BigInt out = v * v + c;
        mpz_mod(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
        return out;
    };
    while (g == 1) {
        x = y;
        for (BigInt i = 0; i < r; ++i)
            y = f(y);
        BigInt k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (BigInt i = 0; i < std::min(m, BigInt(r - k)); ++i) {
                y = f(y);
                q = q * abs_value(BigInt(x - y)) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd(abs_value(BigInt(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

inline void factor_into(BigInt n, std::map<BigInt, unsigned> &out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    for (unsigned long seed = 2;; ++seed) {
        BigInt d = pollard_brent(n, seed);
        if (d != 1 && d != n) {
            factor_into(d, out);
            factor_into(BigInt(n / d), out);
            return;
        }
    }
}

} // namespace detail

/// Prime factorisation of |n| (n != 0), ascending primes.
inline std::vector<std::pair<BigInt, unsigned>> factor_integer(const BigInt &n)
{
    if (n == 0)
        throw InvalidArgument("cannot factor zero");
    BigInt m = abs_value(n);
    std::map<BigInt, unsigned> found;
    for (unsigned long p = 2; p < 100000; p += (p == 2 ? 1 : 2)) {
        if (BigInt(p) * p > m)
            break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++found[BigInt(p)];
        }
    }
    detail::factor_into(m, found);
    return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Integer matrices.

class IntMatrix
{
    public:
        IntMatrix() = default;

        IntMatrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols}, entries_(rows * cols) {}

        IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries)
            : rows_{rows}, cols_{cols}, entries_{std::move(entries)}
        {
            if (entries_.size() != rows_ * cols_)
                throw InvalidArgument("IntMatrix: entry count does not match dimensions");
        }

        IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
            : rows_{rows.size()}, cols_{rows.size() ? rows.begin()->size() : 0}
        {
            entries_.reserve(rows_ * cols_);
            for (const auto &row : rows) {
                if (row.size() != cols_)
                    throw InvalidArgument("IntMatrix: ragged initializer");
                for (long v : row)
                    entries_.emplace_back(v);
            }
        }

        static IntMatrix identity(std::size_t n)
        {
            IntMatrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                m.entries_[i * n + i] = 1;
            return m;
        }

        static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<BigInt>> &columns)
        {
            IntMatrix m(rows, columns.size());
            for (std::size_t j = 0; j < columns.size(); ++j) {
                if (columns[j].size() != rows)
                    throw InvalidArgument("IntMatrix::from_columns: column length mismatch");
                for (std::size_t i = 0; i < rows; ++i)
                    m.entries_[i * m.cols_ + j] = columns[j][i];
            }
            return m;
        }

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        const BigInt &operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

        std::vector<BigInt> column(std::size_t j) const
        {
            std::vector<BigInt> c(rows_);
            for (std::size_t i = 0; i < rows_; ++i)
                c[i] = (*this)(i, j);
            return c;
        }

        std::vector<BigInt> apply(std::span<const BigInt> x) const
        {
            if (x.size() != cols_)
                throw InvalidArgument("IntMatrix::apply: dimension mismatch");
            std::vector<BigInt> y(rows_);
            for (std::size_t i = 0; i < rows_; ++i)
                for (std::size_t j = 0; j < cols_; ++j)
                    if (x[j] != 0)
                        y[i] += (*this)(i, j) * x[j];
            return y;
        }

        IntMatrix operator*(const IntMatrix &o) const
        {
            if (cols_ != o.rows_)
                throw InvalidArgument("IntMatrix product: dimension mismatch");
            IntMatrix r(rows_, o.cols_);
            for (std::size_t i = 0; i < rows_; ++i)
                for (std::size_t k = 0; k < cols_; ++k) {
                    const BigInt &a = (*this)(i, k);
                    if (a == 0)
                        continue;
                    for (std::size_t j = 0; j < o.cols_; ++j)
                        r.entries_[i * r.cols_ + j] += a * o(k, j);
                }
            return r;
        }

        bool operator==(const IntMatrix &o) const
        {
            return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
        }

        bool is_zero() const
        {
            return std::all_of(entries_.begin(), entries_.end(), [](const BigInt &v) { return v == 0; });
        }

    private:
        std::size_t rows_ = 0, cols_ = 0;
        std::vector<BigInt> entries_;
};

namespace detail {

// Row-major scratch matrix for in-place unimodular reductions.
struct Scratch
{
    std::size_t rows, cols;
    std::vector<BigInt> v;

    Scratch(std::size_t r, std::size_t c) : rows{r}, cols{c}, v(r * c) {}

    explicit Scratch(const IntMatrix &m) : rows{m.rows()}, cols{m.cols()}, v(m.rows() * m.cols())
    {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                v[i * cols + j] = m(i, j);
    }

    static Scratch identity(std::size_t n)
    {
        Scratch s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            s.at(i, i) = 1;
        return s;
    }

    BigInt &at(std::size_t i, std::size_t j) { return v[i * cols + j]; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a != b)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(at(a, j), at(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a != b)
            for (std::size_t i = 0; i < rows; ++i)
                std::swap(at(i, a), at(i, b));
    }

    // row[dst] -= q * row[src]
    void sub_row(std::size_t dst, std::size_t src, const BigInt &q)
    {
        for (std::size_t j = 0; j < cols; ++j)
            if (at(src, j) != 0)
                at(dst, j) -= q * at(src, j);
    }

    void sub_col(std::size_t dst, std::size_t src, const BigInt &q)
    {
        for (std::size_t i = 0; i < rows; ++i)
            if (at(i, src) != 0)
                at(i, dst) -= q * at(i, src);
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t j = 0; j < cols; ++j)
            at(r, j) = -at(r, j);
    }

    IntMatrix freeze() const { return IntMatrix(rows, cols, v); }
};

inline BigInt tdiv(const BigInt &a, const BigInt &b)
{
    BigInt q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace detail

struct SmithForm
{
    /// min(rows, cols) diagonal entries, nonnegative, d_i | d_{i+1}.
    std::vector<BigInt> diagonal;
    /// Unimodular transforms with left * M * right == diag (only when requested).
    std::optional<IntMatrix> left, right;
};

/// Smith normal form by least-absolute-value pivoting.
inline SmithForm smith_normal_form(const IntMatrix &m, bool with_transforms = false)
{
    const std::size_t R = m.rows(), C = m.cols(), D = std::min(R, C);
    detail::Scratch a(m);
    std::optional<detail::Scratch> u, v;
    if (with_transforms) {
        u = detail::Scratch::identity(R);
        v = detail::Scratch::identity(C);
    }
    auto swap_rows = [&](std::size_t x, std::size_t y) {
        a.swap_rows(x, y);
        if (u)
            u->swap_rows(x, y);
    };
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        a.swap_cols(x, y);
        if (v)
            v->swap_cols(x, y);
    };

    for (std::size_t t = 0; t < D; ++t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j)
                if (a.at(i, j) != 0 && (!best || abs(a.at(i, j)) < abs(a.at(best->first, best->second))))
                    best = {i, j};
        if (!best)
            break;
        swap_rows(t, best->first);
        swap_cols(t, best->second);

        for (;;) {
            bool leftover = false;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (a.at(i, t) == 0)
                    continue;
                BigInt q = detail::tdiv(a.at(i, t), a.at(t, t));
                a.sub_row(i, t, q);
                if (u)
                    u->sub_row(i, t, q);
                leftover = leftover || a.at(i, t) != 0;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (a.at(t, j) == 0)
                    continue;
                BigInt q = detail::tdiv(a.at(t, j), a.at(t, t));
                a.sub_col(j, t, q);
                if (v)
                    v->sub_col(j, t, q);
                leftover = leftover || a.at(t, j) != 0;
            }
            if (leftover) {
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < R; ++i)
                    if (a.at(i, t) != 0 && abs(a.at(i, t)) < abs(a.at(bi, bj))) {
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < C; ++j)
                    if (a.at(t, j) != 0 && abs(a.at(t, j)) < abs(a.at(bi, bj))) {
                        bi = t;
                        bj = j;
                    }
                swap_rows(t, bi);
                swap_cols(t, bj);
                continue;
            }
            // Pivot must divide the remaining block.
            std::optional<std::size_t> offender;
            for (std::size_t i = t + 1; i < R && !offender; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (!mpz_divisible_p(a.at(i, j).get_mpz_t(), a.at(t, t).get_mpz_t())) {
                        offender = i;
                        break;
                    }
            if (!offender)
                break;
            a.sub_row(t, *offender, BigInt(-1));
            if (u)
                u->sub_row(t, *offender, BigInt(-1));
        }
        if (a.at(t, t) < 0) {
            a.negate_row(t);
            if (u)
                u->negate_row(t);
        }
    }

    SmithForm out;
    out.diagonal.reserve(D);
    for (std::size_t i = 0; i < D; ++i)
        out.diagonal.push_back(a.at(i, i));
    if (with_transforms) {
        out.left = u->freeze();
        out.right = v->freeze();
    }
    return out;
}

/// Invariant factors of the cokernel Z^rows / span(columns), 1s dropped;
/// a 0 entry denotes a free Z summand.
inline std::vector<BigInt> cokernel_invariants(const IntMatrix &m)
{
    auto snf = smith_normal_form(m);
    std::vector<BigInt> out;
    for (const auto &d : snf.diagonal)
        if (d != 1)
            out.push_back(d);
    for (std::size_t i = snf.diagonal.size(); i < m.rows(); ++i)
        out.push_back(0);
    return out;
}

/// Canonical invariant factors (n_1 | n_2 | ...) of prod Z/n_i, 1s dropped.
inline std::vector<BigInt> normalize_invariant_factors(const std::vector<BigInt> &orders)
{
    IntMatrix d(orders.size(), orders.size());
    std::vector<BigInt> entries(orders.size() * orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i)
        entries[i * orders.size() + i] = orders[i];
    return cokernel_invariants(IntMatrix(orders.size(), orders.size(), std::move(entries)));
}

/// Fraction-free (Bareiss) determinant.
inline BigInt determinant(const IntMatrix &m)
{
    if (m.rows() != m.cols())
        throw InvalidArgument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    detail::Scratch a(m);
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a.at(r, k) == 0)
                ++r;
            if (r == n)
                return 0;
            a.swap_rows(k, r);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

/// Column-echelon reduction of a generator set, reusable across many
/// membership queries. Column j of the input is generator j.
class LatticeSolver
{
    public:
        explicit LatticeSolver(const IntMatrix &generators) : rows_{generators.rows()}, cols_{generators.cols()}
        {
            std::vector<Column> active;
            for (std::size_t j = 0; j < cols_; ++j) {
                Column c{generators.column(j), {}};
                if (is_zero(c.entries))
                    continue;
                c.combination.emplace(j, 1);
                active.push_back(std::move(c));
            }
            for (std::size_t i = 0; i < rows_ && !active.empty(); ++i) {
                for (;;) {
                    std::optional<std::size_t> best;
                    std::size_t nonzero = 0;
                    for (std::size_t k = 0; k < active.size(); ++k) {
                        if (active[k].entries[i] == 0)
                            continue;
                        ++nonzero;
                        if (!best || abs(active[k].entries[i]) < abs(active[*best].entries[i]))
                            best = k;
                    }
                    if (nonzero == 0)
                        break;
                    if (nonzero == 1) {
                        pivots_.push_back(Pivot{i, std::move(active[*best])});
                        active.erase(active.begin() + static_cast<std::ptrdiff_t>(*best));
                        break;
                    }
                    const Column &piv = active[*best];
                    for (std::size_t k = 0; k < active.size(); ++k) {
                        if (k == *best || active[k].entries[i] == 0)
                            continue;
                        BigInt q = detail::tdiv(active[k].entries[i], piv.entries[i]);
                        subtract(active[k], piv, q, i);
                    }
                    std::erase_if(active, [](const Column &c) { return is_zero(c.entries); });
                }
            }
        }

        std::size_t ambient_dimension() const { return rows_; }
        std::size_t generator_count() const { return cols_; }
        std::size_t rank() const { return pivots_.size(); }

        /// Coordinates of target in basis(), or nullopt if target is not in the lattice.
        std::optional<std::vector<BigInt>> coordinates(std::span<const BigInt> target) const
        {
            check_dim(target.size());
            std::vector<BigInt> residual(target.begin(), target.end());
            std::vector<BigInt> y(pivots_.size());
            std::size_t next_row = 0;
            for (std::size_t k = 0; k < pivots_.size(); ++k) {
                const auto &pv = pivots_[k];
                for (; next_row < pv.row; ++next_row)
                    if (residual[next_row] != 0)
                        return std::nullopt;
                const BigInt &lead = pv.column.entries[pv.row];
                if (!mpz_divisible_p(residual[pv.row].get_mpz_t(), lead.get_mpz_t()))
                    return std::nullopt;
                mpz_divexact(y[k].get_mpz_t(), residual[pv.row].get_mpz_t(), lead.get_mpz_t());
                for (std::size_t r = pv.row; r < rows_; ++r)
                    if (pv.column.entries[r] != 0)
                        residual[r] -= y[k] * pv.column.entries[r];
                next_row = pv.row + 1;
            }
            for (std::size_t r = next_row; r < rows_; ++r)
                if (residual[r] != 0)
                    return std::nullopt;
            return y;
        }

        /// Integer x with generators * x == target, or nullopt.
        std::optional<std::vector<BigInt>> solve(std::span<const BigInt> target) const
        {
            auto y = coordinates(target);
            if (!y)
                return std::nullopt;
            std::vector<BigInt> x(cols_);
            for (std::size_t k = 0; k < pivots_.size(); ++k) {
                if ((*y)[k] == 0)
                    continue;
                for (const auto &[j, c] : pivots_[k].column.combination)
                    x[j] += (*y)[k] * c;
            }
            return x;
        }

        bool contains(std::span<const BigInt> target) const { return coordinates(target).has_value(); }

        /// Z-basis of the lattice, as columns in echelon order.
        IntMatrix basis() const
        {
            std::vector<std::vector<BigInt>> cols;
            cols.reserve(pivots_.size());
            for (const auto &pv : pivots_)
                cols.push_back(pv.column.entries);
            return IntMatrix::from_columns(rows_, cols);
        }

    private:
        struct Column
        {
            std::vector<BigInt> entries;
            std::map<std::size_t, BigInt> combination;
        };
        struct Pivot
        {
            std::size_t row;
            Column column;
        };

        static bool is_zero(const std::vector<BigInt> &v)
        {
            return std::all_of(v.begin(), v.end(), [](const BigInt &x) { return x == 0; });
        }

        // Rows above `from` are already zero in every active column.
        static void subtract(Column &dst, const Column &src, const BigInt &q, std::size_t from)
        {
            for (std::size_t r = from; r < dst.entries.size(); ++r)
                if (src.entries[r] != 0)
                    dst.entries[r] -= q * src.entries[r];
            for (const auto &[j, c] : src.combination) {
                auto &slot = dst.combination[j];
                slot -= q * c;
                if (slot == 0)
                    dst.combination.erase(j);
            }
        }

        void check_dim(std::size_t n) const
        {
            if (n != rows_)
                throw InvalidArgument("lattice query has length " + std::to_string(n) + ", expected " +
                                      std::to_string(rows_));
        }

        std::size_t rows_, cols_;
        std::vector<Pivot> pivots_;
};

/// Integer solution of M x = target (columns of M are the generators).
/// Returned solutions are re-verified exactly before being handed out.
inline std::optional<std::vector<BigInt>> solve_integer_linear(const IntMatrix &m, std::span<const BigInt> target)
{
    if (target.size() != m.rows())
        throw InvalidArgument("solve_integer_linear: target has length " + std::to_string(target.size()) +
                              " but the matrix has " + std::to_string(m.rows()) + " rows");
    auto x = LatticeSolver(m).solve(target);
    if (x && m.apply(*x) != std::vector<BigInt>(target.begin(), target.end()))
        throw Error("solve_integer_linear: internal verification failure");
    return x;
}

/// True iff every column of `inner` lies in the lattice spanned by `outer`.
inline bool lattice_contains(const IntMatrix &outer, const IntMatrix &inner)
{
    if (outer.rows() != inner.rows())
        throw InvalidArgument("lattice_contains: ambient dimensions differ");
    LatticeSolver s(outer);
    for (std::size_t j = 0; j < inner.cols(); ++j)
        if (!s.contains(inner.column(j)))
            return false;
    return true;
}

} // namespace isoforge
