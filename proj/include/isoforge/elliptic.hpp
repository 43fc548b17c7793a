#pragma once

// Elliptic curves: two-torsion form y^2 = x(x-a)(x-b), general Weierstrass
// models over Q, reduction modulo odd primes, point counting and the group law.

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "isoforge/errors.hpp"
#include "isoforge/exactnum.hpp"

namespace isoforge {

/// y^2 = x(x - a)(x - b) with a, b, a - b all nonzero.
class TwoTorsionCurve
{
    public:
        TwoTorsionCurve(BigInt a, BigInt b) : a_{std::move(a)}, b_{std::move(b)}
        {
            if (a_ == 0)
                throw DegenerateCurve("degenerate two-torsion curve: a = 0");
            if (b_ == 0)
                throw DegenerateCurve("degenerate two-torsion curve: b = 0");
            if (a_ == b_)
                throw DegenerateCurve("degenerate two-torsion curve: a = b");
        }

        static bool is_nondegenerate(const BigInt &a, const BigInt &b) { return a != 0 && b != 0 && a != b; }

        const BigInt &a() const { return a_; }
        const BigInt &b() const { return b_; }

        /// 16 a^2 b^2 (a - b)^2
        BigInt discriminant() const
        {
            BigInt d = a_ * b_ * (a_ - b_);
            return 16 * d * d;
        }

        bool operator==(const TwoTorsionCurve &) const = default;

    private:
        BigInt a_, b_;
};

/// Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct Transform
{
    BigRat u = 1, r = 0, s = 0, t = 0;

    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }

    /// Apply *this first, then next.
    Transform then(const Transform &next) const
    {
        Transform out;
        out.u = u * next.u;
        out.r = r + u * u * next.r;
        out.s = s + u * next.s;
        out.t = t + u * u * s * next.r + u * u * u * next.t;
        return out;
    }

    bool operator==(const Transform &) const = default;
};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q; always nonsingular.
class WeierstrassModel
{
    public:
        WeierstrassModel(BigRat a1, BigRat a2, BigRat a3, BigRat a4, BigRat a6)
            : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)}
        {
            for (auto &c : a_)
                c.canonicalize();
            b2_ = a_[0] * a_[0] + 4 * a_[1];
            b4_ = 2 * a_[3] + a_[0] * a_[2];
            b6_ = a_[2] * a_[2] + 4 * a_[4];
            b8_ = a_[0] * a_[0] * a_[4] + 4 * a_[1] * a_[4] - a_[0] * a_[2] * a_[3] + a_[1] * a_[2] * a_[2] -
                  a_[3] * a_[3];
            c4_ = b2_ * b2_ - 24 * b4_;
            c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
            disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
            if (disc_ == 0)
                throw DegenerateCurve("singular Weierstrass model: discriminant is zero");
        }

        static WeierstrassModel from_ainvs(const std::array<BigRat, 5> &a)
        {
            return WeierstrassModel(a[0], a[1], a[2], a[3], a[4]);
        }

        const BigRat &a1() const { return a_[0]; }
        const BigRat &a2() const { return a_[1]; }
        const BigRat &a3() const { return a_[2]; }
        const BigRat &a4() const { return a_[3]; }
        const BigRat &a6() const { return a_[4]; }
        const std::array<BigRat, 5> &ainvs() const { return a_; }

        const BigRat &b2() const { return b2_; }
        const BigRat &b4() const { return b4_; }
        const BigRat &b6() const { return b6_; }
        const BigRat &b8() const { return b8_; }
        const BigRat &c4() const { return c4_; }
        const BigRat &c6() const { return c6_; }
        const BigRat &discriminant() const { return disc_; }

        BigRat j_invariant() const
        {
            BigRat j = c4_ * c4_ * c4_ / disc_;
            j.canonicalize();
            return j;
        }

        bool is_integral() const
        {
            for (const auto &c : a_)
                if (c.get_den() != 1)
                    return false;
            return true;
        }

        bool is_p_integral(const BigInt &p) const
        {
            for (const auto &c : a_)
                if (valuation(c, p) < 0)
                    return false;
            return true;
        }

        WeierstrassModel transformed(const Transform &tr) const
        {
            const auto &[u, r, s, t] = tr;
            if (u == 0)
                throw InvalidArgument("transform with u = 0");
            const BigRat &a1 = a_[0], &a2 = a_[1], &a3 = a_[2], &a4 = a_[3], &a6 = a_[4];
            BigRat n1 = (a1 + 2 * s) / u;
            BigRat n2 = (a2 - s * a1 + 3 * r - s * s) / pow_rat(u, 2);
            BigRat n3 = (a3 + r * a1 + 2 * t) / pow_rat(u, 3);
            BigRat n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / pow_rat(u, 4);
            BigRat n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / pow_rat(u, 6);
            return WeierstrassModel(n1, n2, n3, n4, n6);
        }

        bool operator==(const WeierstrassModel &o) const { return a_ == o.a_; }

        std::string to_string() const
        {
            std::string s = "[";
            for (std::size_t i = 0; i < 5; ++i)
                s += (i ? "," : "") + isoforge::to_string(a_[i]);
            return s + "]";
        }

    private:
        std::array<BigRat, 5> a_;
        BigRat b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

inline std::ostream &operator<<(std::ostream &os, const WeierstrassModel &w) { return os << w.to_string(); }

/// y^2 = x^3 - (a + b) x^2 + ab x
inline WeierstrassModel weierstrass_model(const TwoTorsionCurve &e)
{
    return WeierstrassModel(0, BigRat(-(e.a() + e.b())), 0, BigRat(e.a() * e.b()), 0);
}

struct CurveFromPair
{
    TwoTorsionCurve curve;
    WeierstrassModel model;
};

inline CurveFromPair curve_from_pair(const BigInt &a, const BigInt &b)
{
    TwoTorsionCurve e(a, b);
    return {e, weierstrass_model(e)};
}

/// For odd p the two-torsion model scaled down by the largest p^k with
/// p^(2k) | gcd(a, b) is p-minimal.
inline TwoTorsionCurve local_minimal_two_torsion(const TwoTorsionCurve &e, const BigInt &p)
{
    if (p == 2)
        throw UnsupportedPrime("local_minimal_two_torsion: p = 2 is not supported");
    BigInt a = e.a(), b = e.b(), p2 = p * p;
    while (mpz_divisible_p(a.get_mpz_t(), p2.get_mpz_t()) && mpz_divisible_p(b.get_mpz_t(), p2.get_mpz_t())) {
        a /= p2;
        b /= p2;
    }
    return TwoTorsionCurve(a, b);
}

// ---------------------------------------------------------------------------
// Curves over prime fields.

struct PointModP
{
    std::uint64_t x = 0, y = 0;
    bool infinity = true;

    static PointModP at_infinity() { return {}; }
    static PointModP affine(std::uint64_t x, std::uint64_t y) { return {x, y, false}; }

    bool operator==(const PointModP &) const = default;
};

/// Reduction of a Weierstrass equation modulo a prime p (p < 2^32).
class CurveModP
{
    public:
        CurveModP(std::uint64_t p, std::array<std::uint64_t, 5> ainvs) : p_{p}, a_{ainvs}
        {
            if (p < 2 || p >= (1ull << 32) || !is_prime(BigInt(static_cast<unsigned long>(p))))
                throw InvalidArgument("CurveModP: modulus must be a prime below 2^32");
            for (auto &c : a_)
                c %= p_;
            if (discriminant() == 0)
                throw BadPrime("reduction modulo " + std::to_string(p) + " is singular");
        }

        /// Reduction of a p-integral model; throws BadPrime if p | disc.
        static CurveModP reduce(const WeierstrassModel &w, std::uint64_t p)
        {
            std::array<std::uint64_t, 5> r{};
            for (std::size_t i = 0; i < 5; ++i)
                r[i] = residue(w.ainvs()[i], p);
            return CurveModP(p, r);
        }

        std::uint64_t p() const { return p_; }
        const std::array<std::uint64_t, 5> &ainvs() const { return a_; }

        std::uint64_t discriminant() const
        {
            const std::uint64_t p = p_;
            auto m = [p](std::uint64_t x, std::uint64_t y) { return mul_mod(x, y, p); };
            auto ad = [p](std::uint64_t x, std::uint64_t y) { return (x + y) % p; };
            auto sc = [p](std::int64_t k, std::uint64_t x) {
                std::uint64_t kk = static_cast<std::uint64_t>(((k % static_cast<std::int64_t>(p)) +
                                                               static_cast<std::int64_t>(p)) %
                                                              static_cast<std::int64_t>(p));
                return mul_mod(kk, x, p);
            };
            auto [a1, a2, a3, a4, a6] = a_;
            std::uint64_t b2 = ad(m(a1, a1), sc(4, a2));
            std::uint64_t b4 = ad(sc(2, a4), m(a1, a3));
            std::uint64_t b6 = ad(m(a3, a3), sc(4, a6));
            std::uint64_t b8 = (m(m(a1, a1), a6) + sc(4, m(a2, a6)) + sc(-1, m(m(a1, a3), a4)) +
                                m(m(a2, a3), a3) + sc(-1, m(a4, a4))) %
                               p;
            return (sc(-1, m(m(b2, b2), b8)) + sc(-8, m(m(b4, b4), b4)) + sc(-27, m(b6, b6)) +
                    sc(9, m(m(b2, b4), b6))) %
                   p;
        }

        bool contains(const PointModP &pt) const
        {
            if (pt.infinity)
                return true;
            return lhs(pt.x, pt.y) == rhs(pt.x);
        }

        PointModP negate(const PointModP &pt) const
        {
            if (pt.infinity)
                return pt;
            const auto [a1, a2, a3, a4, a6] = a_;
            return PointModP::affine(pt.x, sub(sub(neg(pt.y), mul_mod(a1, pt.x, p_)), a3));
        }

        PointModP add(const PointModP &P, const PointModP &Q) const
        {
            if (P.infinity)
                return Q;
            if (Q.infinity)
                return P;
            const auto [a1, a2, a3, a4, a6] = a_;
            std::uint64_t lambda, nu;
            if (P.x == Q.x) {
                std::uint64_t denom = (2 * P.y + mul_mod(a1, P.x, p_) + a3) % p_;
                if ((P.y + Q.y + mul_mod(a1, Q.x, p_) + a3) % p_ == 0)
                    return PointModP::at_infinity();
                std::uint64_t x2 = mul_mod(P.x, P.x, p_);
                std::uint64_t num = (3 * x2 + 2 * mul_mod(a2, P.x, p_) + a4 + p_ - mul_mod(a1, P.y, p_)) % p_;
                std::uint64_t inv = inv_mod(denom, p_);
                lambda = mul_mod(num, inv, p_);
                std::uint64_t x3 = mul_mod(x2, P.x, p_);
                std::uint64_t nnum = sub(sub((mul_mod(a4, P.x, p_) + 2 * a6) % p_, x3), mul_mod(a3, P.y, p_));
                nu = mul_mod(nnum, inv, p_);
            } else {
                std::uint64_t inv = inv_mod(sub(Q.x, P.x), p_);
                lambda = mul_mod(sub(Q.y, P.y), inv, p_);
                nu = mul_mod(sub(mul_mod(P.y, Q.x, p_), mul_mod(Q.y, P.x, p_)), inv, p_);
            }
            std::uint64_t x3 = sub(sub(sub((mul_mod(lambda, lambda, p_) + mul_mod(a1, lambda, p_)) % p_, a2), P.x), Q.x);
            std::uint64_t y3 = sub(sub(neg(mul_mod((lambda + a1) % p_, x3, p_)), nu), a3);
            return PointModP::affine(x3, y3);
        }

        PointModP multiply(std::uint64_t k, PointModP P) const
        {
            PointModP acc = PointModP::at_infinity();
            while (k) {
                if (k & 1)
                    acc = add(acc, P);
                P = add(P, P);
                k >>= 1;
            }
            return acc;
        }

        /// All points, the point at infinity first, then by (x, y).
        std::vector<PointModP> points() const
        {
            std::vector<PointModP> out{PointModP::at_infinity()};
            const auto [a1, a2, a3, a4, a6] = a_;
            for (std::uint64_t x = 0; x < p_; ++x) {
                std::uint64_t r = rhs(x);
                std::uint64_t b = (mul_mod(a1, x, p_) + a3) % p_;
                // y^2 + b y - r = 0
                if (p_ == 2) {
                    for (std::uint64_t y = 0; y < 2; ++y)
                        if (lhs(x, y) == r)
                            out.push_back(PointModP::affine(x, y));
                    continue;
                }
                std::uint64_t disc = (mul_mod(b, b, p_) + mul_mod(4, r, p_)) % p_;
                std::uint64_t half = inv_mod(2, p_);
                if (disc == 0) {
                    out.push_back(PointModP::affine(x, mul_mod(neg(b), half, p_)));
                    continue;
                }
                auto root = sqrt_mod(disc);
                if (!root)
                    continue;
                std::uint64_t y1 = mul_mod(sub(*root, b), half, p_);
                std::uint64_t y2 = mul_mod(sub(neg(*root), b), half, p_);
                if (y1 > y2)
                    std::swap(y1, y2);
                out.push_back(PointModP::affine(x, y1));
                out.push_back(PointModP::affine(x, y2));
            }
            return out;
        }

        std::optional<std::uint64_t> sqrt_mod(std::uint64_t a) const
        {
            a %= p_;
            if (a == 0)
                return 0;
            if (p_ == 2)
                return a;
            if (pow_mod(a, (p_ - 1) / 2, p_) != 1)
                return std::nullopt;
            // Tonelli-Shanks
            std::uint64_t q = p_ - 1, s = 0;
            while ((q & 1) == 0) {
                q >>= 1;
                ++s;
            }
            std::uint64_t z = 2;
            while (pow_mod(z, (p_ - 1) / 2, p_) != p_ - 1)
                ++z;
            std::uint64_t m = s, c = pow_mod(z, q, p_), t = pow_mod(a, q, p_), r = pow_mod(a, (q + 1) / 2, p_);
            while (t != 1) {
                std::uint64_t i = 0, tt = t;
                while (tt != 1) {
                    tt = mul_mod(tt, tt, p_);
                    ++i;
                }
                std::uint64_t b = pow_mod(c, 1ull << (m - i - 1), p_);
                m = i;
                c = mul_mod(b, b, p_);
                t = mul_mod(t, c, p_);
                r = mul_mod(r, b, p_);
            }
            return r;
        }

        std::uint64_t lhs(std::uint64_t x, std::uint64_t y) const
        {
            return (mul_mod(y, y, p_) + mul_mod(mul_mod(a_[0], x, p_), y, p_) + mul_mod(a_[2], y, p_)) % p_;
        }

        std::uint64_t rhs(std::uint64_t x) const
        {
            std::uint64_t x2 = mul_mod(x, x, p_);
            return (mul_mod(x2, x, p_) + mul_mod(a_[1], x2, p_) + mul_mod(a_[3], x, p_) + a_[4]) % p_;
        }

    private:
        std::uint64_t sub(std::uint64_t x, std::uint64_t y) const { return (x + p_ - y % p_) % p_; }
        std::uint64_t neg(std::uint64_t x) const { return (p_ - x % p_) % p_; }

        std::uint64_t p_;
        std::array<std::uint64_t, 5> a_;
};

/// Table of the quadratic character modulo an odd prime.
class QuadraticCharacter
{
    public:
        explicit QuadraticCharacter(std::uint64_t p) : p_{p}, table_(p, -1)
        {
            table_[0] = 0;
            for (std::uint64_t x = 1; x <= p / 2; ++x)
                table_[mul_mod(x, x, p)] = 1;
        }

        int operator()(std::uint64_t v) const { return table_[v % p_]; }

    private:
        std::uint64_t p_;
        std::vector<signed char> table_;
};

/// p + 1 - #E(F_p) by brute force over F_p x F_p; any p.
inline std::int64_t trace_bruteforce(const CurveModP &e)
{
    std::int64_t count = 1;
    for (std::uint64_t x = 0; x < e.p(); ++x)
        for (std::uint64_t y = 0; y < e.p(); ++y)
            if (e.lhs(x, y) == e.rhs(x))
                ++count;
    return static_cast<std::int64_t>(e.p()) + 1 - count;
}

/// a_p = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6) for odd p.
inline std::int64_t trace_of_frobenius(const CurveModP &e)
{
    const std::uint64_t p = e.p();
    if (p == 2)
        return trace_bruteforce(e);
    const auto [a1, a2, a3, a4, a6] = e.ainvs();
    std::uint64_t b2 = (mul_mod(a1, a1, p) + mul_mod(4, a2, p)) % p;
    std::uint64_t b4 = (mul_mod(2, a4, p) + mul_mod(a1, a3, p)) % p;
    std::uint64_t b6 = (mul_mod(a3, a3, p) + mul_mod(4, a6, p)) % p;
    QuadraticCharacter chi(p);
    std::int64_t sum = 0;
    const std::uint64_t c2 = b2, c1 = mul_mod(2, b4, p), c0 = b6;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t v = (mul_mod(mul_mod(4, x, p), mul_mod(x, x, p), p) + mul_mod(c2, mul_mod(x, x, p), p) +
                           mul_mod(c1, x, p) + c0) %
                          p;
        sum += chi(v);
    }
    return -sum;
}

namespace detail {

inline std::uint64_t checked_prime(const BigInt &p)
{
    if (!is_prime(p))
        throw InvalidArgument(to_string(p) + " is not prime");
    if (p >= BigInt(1ul << 31))
        throw InvalidArgument("prime " + to_string(p) + " exceeds the point-counting range");
    return p.get_ui();
}

} // namespace detail

/// Trace of Frobenius of a p-integral model with good reduction at the odd prime p.
/// Non-minimal models should be minimised first (see reduction.hpp).
inline BigInt ap_trace(const WeierstrassModel &w, const BigInt &p)
{
    std::uint64_t q = detail::checked_prime(p);
    if (!w.is_p_integral(p) || valuation(w.discriminant(), p) > 0)
        throw BadPrime("bad reduction: " + to_string(p) + " divides the discriminant of " + w.to_string());
    if (q == 2)
        throw UnsupportedPrime("point counting at p = 2 is not supported");
    return BigInt(static_cast<long>(trace_of_frobenius(CurveModP::reduce(w, q))));
}

inline BigInt ap_trace(const TwoTorsionCurve &e, const BigInt &p)
{
    std::uint64_t q = detail::checked_prime(p);
    if (q == 2)
        throw BadPrime("bad reduction: 2 divides the discriminant " + to_string(e.discriminant()));
    return ap_trace(weierstrass_model(local_minimal_two_torsion(e, p)), p);
}

inline bool is_supersingular_at(const WeierstrassModel &w, const BigInt &p)
{
    BigInt ap = ap_trace(w, p);
    return mpz_divisible_p(ap.get_mpz_t(), p.get_mpz_t()) != 0;
}

inline bool is_supersingular_at(const TwoTorsionCurve &e, const BigInt &p)
{
    BigInt ap = ap_trace(e, p);
    return mpz_divisible_p(ap.get_mpz_t(), p.get_mpz_t()) != 0;
}

/// E(F_p) as an explicit finite abelian group: enumerated points (index 0 is
/// the identity), chord-tangent addition and a basis realising Z/n1 x Z/n2.
class PointGroup
{
    public:
        explicit PointGroup(CurveModP curve) : curve_{std::move(curve)}, points_{curve_.points()}
        {
            for (std::size_t i = 0; i < points_.size(); ++i)
                index_.emplace(key(points_[i]), i);
            compute_structure();
        }

        const CurveModP &curve() const { return curve_; }
        std::uint64_t p() const { return curve_.p(); }
        std::size_t order() const { return points_.size(); }
        const std::vector<PointModP> &points() const { return points_; }
        const PointModP &point(std::size_t i) const { return points_.at(i); }

        std::size_t index_of(const PointModP &pt) const
        {
            auto it = index_.find(key(pt));
            if (it == index_.end())
                throw InvalidArgument("point is not on the curve");
            return it->second;
        }

        static constexpr std::size_t zero() { return 0; }
        std::size_t add(std::size_t i, std::size_t j) const { return index_of(curve_.add(points_[i], points_[j])); }
        std::size_t negate(std::size_t i) const { return index_of(curve_.negate(points_[i])); }

        std::size_t multiply(std::uint64_t k, std::size_t i) const
        {
            return index_of(curve_.multiply(k, points_[i]));
        }

        std::uint64_t element_order(std::size_t i) const
        {
            const std::uint64_t n = order();
            std::uint64_t best = n;
            for (std::uint64_t d = 1; d <= n; ++d)
                if (n % d == 0 && curve_.multiply(d, points_[i]).infinity) {
                    best = d;
                    break;
                }
            return best;
        }

        /// Invariant factors n1 | n2 (1s dropped).
        std::vector<BigInt> structure() const
        {
            std::vector<BigInt> orders;
            for (auto o : basis_orders_)
                orders.emplace_back(static_cast<unsigned long>(o));
            return normalize_invariant_factors(orders);
        }

        /// Basis points g_1, g_2 (one entry for cyclic groups) and their orders.
        const std::vector<std::size_t> &basis() const { return basis_; }
        const std::vector<std::uint64_t> &basis_orders() const { return basis_orders_; }

        /// Coefficients of point i on the basis, each in [0, order).
        const std::vector<std::uint64_t> &coordinates(std::size_t i) const { return coords_.at(i); }

    private:
        std::uint64_t key(const PointModP &pt) const
        {
            return pt.infinity ? ~0ull : pt.x * curve_.p() + pt.y;
        }

        void compute_structure()
        {
            const std::uint64_t n = order();
            std::vector<std::uint64_t> orders(n);
            std::uint64_t exponent = 1;
            std::size_t big = 0;
            for (std::size_t i = 0; i < n; ++i) {
                orders[i] = element_order(i);
                if (orders[i] > exponent) {
                    exponent = orders[i];
                    big = i;
                }
            }
            const std::uint64_t n1 = n / exponent;
            if (n1 == 1) {
                basis_ = {big};
                basis_orders_ = {exponent};
            } else {
                std::vector<bool> in_cyclic(n, false);
                for (std::size_t k = 0, cur = zero(); k < exponent; ++k, cur = add(cur, big))
                    in_cyclic[cur] = true;
                std::optional<std::size_t> small;
                for (std::size_t i = 0; i < n && !small; ++i) {
                    if (orders[i] != n1)
                        continue;
                    bool independent = true;
                    for (std::size_t k = 1, cur = i; k < n1; ++k, cur = add(cur, i))
                        if (in_cyclic[cur]) {
                            independent = false;
                            break;
                        }
                    if (independent)
                        small = i;
                }
                if (!small)
                    throw Error("failed to split E(F_p) into cyclic factors");
                basis_ = {*small, big};
                basis_orders_ = {n1, exponent};
            }
            // Discrete-log table; every element must be hit exactly once.
            coords_.assign(n, {});
            std::vector<bool> seen(n, false);
            if (basis_.size() == 1) {
                for (std::uint64_t k = 0, cur = zero(); k < basis_orders_[0]; ++k, cur = add(cur, basis_[0])) {
                    seen[cur] = true;
                    coords_[cur] = {k};
                }
            } else {
                for (std::uint64_t x = 0, row = zero(); x < basis_orders_[0]; ++x, row = add(row, basis_[0]))
                    for (std::uint64_t y = 0, cur = row; y < basis_orders_[1]; ++y, cur = add(cur, basis_[1])) {
                        if (seen[cur])
                            throw Error("basis of E(F_p) is not independent");
                        seen[cur] = true;
                        coords_[cur] = {x, y};
                    }
            }
            for (bool s : seen)
                if (!s)
                    throw Error("basis of E(F_p) does not generate the group");
        }

        CurveModP curve_;
        std::vector<PointModP> points_;
        std::unordered_map<std::uint64_t, std::size_t> index_;
        std::vector<std::size_t> basis_;
        std::vector<std::uint64_t> basis_orders_;
        std::vector<std::vector<std::uint64_t>> coords_;
};

inline PointGroup rational_points_mod_p(const WeierstrassModel &w, const BigInt &p)
{
    std::uint64_t q = detail::checked_prime(p);
    if (q == 2)
        throw UnsupportedPrime("group enumeration at p = 2 is not supported");
    if (!w.is_p_integral(p) || valuation(w.discriminant(), p) > 0)
        throw BadPrime("bad reduction: " + to_string(p) + " divides the discriminant of " + w.to_string());
    return PointGroup(CurveModP::reduce(w, q));
}

inline PointGroup rational_points_mod_p(const TwoTorsionCurve &e, const BigInt &p)
{
    std::uint64_t q = detail::checked_prime(p);
    if (q == 2)
        throw BadPrime("bad reduction: 2 divides the discriminant " + to_string(e.discriminant()));
    return rational_points_mod_p(weierstrass_model(local_minimal_two_torsion(e, p)), p);
}

} // namespace isoforge
