#pragma once

// Binary sextics and genus-2 curves lambda*y^2 = S(x): discriminant,
// Igusa-Clebsch invariants and point counts over F_p.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "isoforge/detail/igusa_tables.hpp"
#include "isoforge/elliptic.hpp"
#include "isoforge/errors.hpp"
#include "isoforge/exactnum.hpp"

namespace isoforge {

/// Integer polynomial, ascending coefficients; trailing zeros trimmed.
using Polynomial = std::vector<BigInt>;

inline Polynomial trimmed(Polynomial f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
    return f;
}

inline int degree(const Polynomial &f)
{
    auto g = trimmed(f);
    return static_cast<int>(g.size()) - 1;
}

inline Polynomial operator*(const Polynomial &f, const Polynomial &g)
{
    if (f.empty() || g.empty())
        return {};
    Polynomial out(f.size() + g.size() - 1);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            out[i + j] += f[i] * g[j];
    return trimmed(out);
}

inline Polynomial derivative(const Polynomial &f)
{
    Polynomial out;
    for (std::size_t i = 1; i < f.size(); ++i)
        out.push_back(f[i] * static_cast<unsigned long>(i));
    return trimmed(out);
}

/// f(x + t)
inline Polynomial translate(const Polynomial &f, const BigInt &t)
{
    Polynomial out;
    for (std::size_t i = f.size(); i-- > 0;) {
        // Horner: out = out * (x + t) + f[i]
        Polynomial next(out.size() + 1);
        for (std::size_t k = 0; k < out.size(); ++k) {
            next[k + 1] += out[k];
            next[k] += out[k] * t;
        }
        next[0] += f[i];
        out = std::move(next);
    }
    return trimmed(out);
}

inline BigInt evaluate(const Polynomial &f, const BigInt &x)
{
    BigInt acc = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        acc = acc * x + f[i];
    return acc;
}

inline std::uint64_t evaluate_mod(const std::vector<std::uint64_t> &f, std::uint64_t x, std::uint64_t p)
{
    std::uint64_t acc = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        acc = (mul_mod(acc, x, p) + f[i]) % p;
    return acc;
}

/// Res(f, g) as the determinant of the Sylvester matrix.
inline BigInt resultant(const Polynomial &f0, const Polynomial &g0)
{
    Polynomial f = trimmed(f0), g = trimmed(g0);
    if (f.empty() || g.empty())
        return 0;
    const std::size_t m = f.size() - 1, n = g.size() - 1, size = m + n;
    if (size == 0)
        return 1;
    std::vector<BigInt> e(size * size);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k <= m; ++k)
            e[r * size + r + k] = f[m - k];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t k = 0; k <= n; ++k)
            e[(n + r) * size + r + k] = g[n - k];
    return determinant(IntMatrix(size, size, std::move(e)));
}

/// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lead(f).
inline BigInt polynomial_discriminant(const Polynomial &f0)
{
    Polynomial f = trimmed(f0);
    const int n = degree(f);
    if (n < 1)
        throw InvalidArgument("discriminant of a constant polynomial");
    BigInt r = resultant(f, derivative(f));
    BigInt d = r / f.back();
    return ((n * (n - 1) / 2) % 2) ? BigInt(-d) : d;
}

inline BigInt sextic_discriminant(const Polynomial &s)
{
    if (degree(s) != 6)
        throw InvalidArgument("expected a sextic, got degree " + std::to_string(degree(s)));
    return polynomial_discriminant(s);
}

inline std::string polynomial_to_string(const Polynomial &f)
{
    std::string out;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0)
            continue;
        BigInt c = f[i];
        bool neg = c < 0;
        if (neg)
            c = -c;
        out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (c != 1 || i == 0)
            out += c.get_str();
        if (i > 0)
            out += (c != 1 ? "*x" : "x") + (i > 1 ? "^" + std::to_string(i) : std::string());
    }
    return out.empty() ? "0" : out;
}

struct IgusaClebsch
{
    BigRat i2, i4, i6, i10;

    /// (I2^5/I10, I4^5/I10^2, I6^5/I10^3); equal for isomorphic curves.
    std::array<BigRat, 3> absolute() const
    {
        return {pow_rat(i2, 5) / i10, pow_rat(i4, 5) / pow_rat(i10, 2), pow_rat(i6, 5) / pow_rat(i10, 3)};
    }

    /// Same point of weighted projective space with weights (1, 2, 3, 5).
    bool equivalent(const IgusaClebsch &o) const
    {
        const std::array<const BigRat *, 4> a{&i2, &i4, &i6, &i10}, b{&o.i2, &o.i4, &o.i6, &o.i10};
        static constexpr unsigned w[4] = {1, 2, 3, 5};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                if (pow_rat(*a[i], w[j]) * pow_rat(*b[j], w[i]) != pow_rat(*b[i], w[j]) * pow_rat(*a[j], w[i]))
                    return false;
        return true;
    }

    bool operator==(const IgusaClebsch &) const = default;
};

/// lambda y^2 = S(x), deg S = 6, lambda != 0.
class HyperellipticCurve
{
    public:
        HyperellipticCurve(BigInt lambda, Polynomial s) : lambda_{std::move(lambda)}, s_{trimmed(std::move(s))}
        {
            if (lambda_ == 0)
                throw InvalidArgument("hyperelliptic curve with lambda = 0");
            if (degree(s_) != 6)
                throw InvalidArgument("hyperelliptic curve needs a sextic, got degree " + std::to_string(degree(s_)));
            disc_ = sextic_discriminant(s_);
        }

        const BigInt &lambda() const { return lambda_; }
        const Polynomial &sextic() const { return s_; }
        const BigInt &discriminant() const { return disc_; }
        bool is_smooth() const { return disc_ != 0; }

    private:
        BigInt lambda_;
        Polynomial s_;
        BigInt disc_;
};

namespace detail {

template <std::size_t N>
BigInt eval_igusa(const std::array<IgusaTerm, N> &table, const Polynomial &s)
{
    BigInt total = 0;
    for (const auto &term : table) {
        BigInt mono = term.coeff;
        for (std::size_t i = 0; i < 7; ++i)
            if (term.exps[i])
                mono *= pow_int(s[i], term.exps[i]);
        total += mono;
    }
    return total;
}

} // namespace detail

/// Igusa-Clebsch invariants of the sextic S itself (I10 = disc S).
inline std::array<BigInt, 4> igusa_clebsch_of_sextic(const Polynomial &s0)
{
    Polynomial s = trimmed(s0);
    if (degree(s) != 6)
        throw InvalidArgument("Igusa-Clebsch invariants need a sextic");
    return {detail::eval_igusa(detail::kIgusaI2, s), detail::eval_igusa(detail::kIgusaI4, s),
            detail::eval_igusa(detail::kIgusaI6, s), sextic_discriminant(s)};
}

/// Invariants of the model y^2 = S(x)/lambda.
inline IgusaClebsch igusa_clebsch(const HyperellipticCurve &c)
{
    if (!c.is_smooth())
        throw SingularCurve("Igusa-Clebsch invariants of a singular sextic (I10 = 0)");
    auto raw = igusa_clebsch_of_sextic(c.sextic());
    const BigRat l(c.lambda());
    IgusaClebsch ic{BigRat(raw[0]) / pow_rat(l, 2), BigRat(raw[1]) / pow_rat(l, 4), BigRat(raw[2]) / pow_rat(l, 6),
                    BigRat(raw[3]) / pow_rat(l, 10)};
    return ic;
}

/// #C(F_p) on the smooth projective model.
inline std::uint64_t hyperelliptic_point_count(const HyperellipticCurve &c, const BigInt &p)
{
    std::uint64_t q = detail::checked_prime(p);
    if (q == 2)
        throw UnsupportedPrime("hyperelliptic point counting needs odd p");
    if (residue(c.lambda(), q) == 0)
        throw BadPrime(to_string(p) + " divides lambda = " + to_string(c.lambda()));
    if (residue(c.discriminant(), q) == 0)
        throw BadPrime(to_string(p) + " divides disc(S) = " + to_string(c.discriminant()));
    if (residue(c.sextic()[6], q) == 0)
        throw BadPrime(to_string(p) + " divides the leading coefficient of S");
    const std::uint64_t linv = inv_mod(residue(c.lambda(), q), q);
    std::vector<std::uint64_t> f;
    for (const auto &coef : c.sextic())
        f.push_back(mul_mod(residue(coef, q), linv, q));
    QuadraticCharacter chi(q);
    std::int64_t count = 0;
    for (std::uint64_t x = 0; x < q; ++x)
        count += 1 + chi(evaluate_mod(f, x, q));
    count += 1 + chi(f[6]);
    return static_cast<std::uint64_t>(count);
}

} // namespace isoforge
