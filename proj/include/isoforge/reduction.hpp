#pragma once

// Local reduction theory over Q: Tate's algorithm (all primes, including 2
// and 3), minimal models, conductor and potential reduction type.

#include <optional>
#include <set>
#include <string>

#include "isoforge/elliptic.hpp"
#include "isoforge/errors.hpp"
#include "isoforge/exactnum.hpp"

namespace isoforge {

enum class KodairaKind { I0, In, II, III, IV, I0Star, InStar, IVStar, IIIStar, IIStar };

struct KodairaSymbol
{
    KodairaKind kind = KodairaKind::I0;
    int n = 0; // for I_n and I_n*

    std::string to_string() const
    {
        switch (kind) {
            case KodairaKind::I0: return "I0";
            case KodairaKind::In: return "I" + std::to_string(n);
            case KodairaKind::II: return "II";
            case KodairaKind::III: return "III";
            case KodairaKind::IV: return "IV";
            case KodairaKind::I0Star: return "I0*";
            case KodairaKind::InStar: return "I" + std::to_string(n) + "*";
            case KodairaKind::IVStar: return "IV*";
            case KodairaKind::IIIStar: return "III*";
            case KodairaKind::IIStar: return "II*";
        }
        return "?";
    }

    bool operator==(const KodairaSymbol &) const = default;
};

enum class ActualType { GoodOrdinary, GoodSupersingular, SplitMultiplicative, NonsplitMultiplicative, Additive };
enum class PotentialType { PotGoodOrdinary, PotGoodSupersingular, PotMultiplicative };

inline const char *to_string(ActualType t)
{
    switch (t) {
        case ActualType::GoodOrdinary: return "GoodOrdinary";
        case ActualType::GoodSupersingular: return "GoodSupersingular";
        case ActualType::SplitMultiplicative: return "SplitMultiplicative";
        case ActualType::NonsplitMultiplicative: return "NonsplitMultiplicative";
        case ActualType::Additive: return "Additive";
    }
    return "?";
}

inline const char *to_string(PotentialType t)
{
    switch (t) {
        case PotentialType::PotGoodOrdinary: return "PotGoodOrdinary";
        case PotentialType::PotGoodSupersingular: return "PotGoodSupersingular";
        case PotentialType::PotMultiplicative: return "PotMultiplicative";
    }
    return "?";
}

inline bool is_good(ActualType t) { return t == ActualType::GoodOrdinary || t == ActualType::GoodSupersingular; }
inline bool is_multiplicative(ActualType t)
{
    return t == ActualType::SplitMultiplicative || t == ActualType::NonsplitMultiplicative;
}

struct MinimalModel
{
    WeierstrassModel model;
    Transform transform; // input.transformed(transform) == model
};

struct ReductionReport
{
    BigInt p;
    KodairaSymbol kodaira;
    int disc_valuation = 0; // v_p of the minimal discriminant
    int conductor_exponent = 0;
    ActualType actual = ActualType::GoodOrdinary;
    std::optional<PotentialType> potential; // odd p only
    MinimalModel minimal;
};

namespace detail {

struct TateResult
{
    KodairaSymbol kodaira;
    int disc_valuation;
    int conductor_exponent;
    bool split = false;
    WeierstrassModel model; // p-integral, p-minimal
    Transform transform;
};

inline BigInt reduce_mod(const BigRat &q, const BigInt &p) { return residue_big(q, p); }

/// Tate's algorithm at p following the classical step sequence.
inline TateResult tate(const WeierstrassModel &input, const BigInt &p)
{
    Transform total;
    WeierstrassModel c = input;

    auto apply = [&](const Transform &t) {
        c = c.transformed(t);
        total = total.then(t);
    };
    auto v = [&](const BigRat &x) { return valuation(x, p); };
    auto divides = [&](const BigRat &x) { return v(x) > 0; };

    // make p-integral
    int k = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        static constexpr int weight[5] = {1, 2, 3, 4, 6};
        int vi = v(c.ainvs()[i]);
        if (vi != kInfiniteValuation && vi < 0)
            k = std::max(k, (-vi + weight[i] - 1) / weight[i]);
    }
    if (k > 0)
        apply({BigRat(1, 1) / pow_rat(BigRat(p), k), 0, 0, 0});

    const bool p2 = p == 2, p3 = p == 3;
    const BigRat pr(p);
    const BigInt half = p2 ? BigInt(0) : BigInt((p + 1) / 2);

    for (;;) {
        const int vd = v(c.discriminant());
        if (vd == 0)
            return {{KodairaKind::I0, 0}, 0, 0, false, c, total};

        // translate so that p | a3, a4, a6
        BigRat r, t;
        if (p2) {
            if (divides(c.b2())) {
                r = reduce_mod(c.a4(), p);
                t = reduce_mod(r * (1 + c.a2() + c.a4()) + c.a6(), p);
            } else {
                r = reduce_mod(c.a3(), p);
                t = reduce_mod(r + c.a4(), p);
            }
        } else if (p3) {
            r = divides(c.b2()) ? reduce_mod(-c.b6(), p) : reduce_mod(-c.b2() * c.b4(), p);
            t = reduce_mod(c.a1() * r + c.a3(), p);
        } else {
            if (divides(c.c4()))
                r = reduce_mod(-c.b2() / 12, p);
            else
                r = reduce_mod(-(c.c6() + c.b2() * c.c4()) / (12 * c.c4()), p);
            t = reduce_mod(-BigRat(half) * (c.a1() * r + c.a3()), p);
        }
        apply({1, r, 0, t});

        if (!divides(c.c4())) {
            bool split;
            if (p2)
                split = reduce_mod(c.a2(), p) == 0;
            else
                split = legendre_symbol(reduce_mod(-c.c6(), p), p) == 1;
            return {{KodairaKind::In, vd}, vd, 1, split, c, total};
        }
        if (v(c.a6()) < 2)
            return {{KodairaKind::II, 0}, vd, vd, false, c, total};
        if (v(c.b8()) < 3)
            return {{KodairaKind::III, 0}, vd, vd - 1, false, c, total};
        if (v(c.b6()) < 3)
            return {{KodairaKind::IV, 0}, vd, vd - 2, false, c, total};

        // p | a1, a2; p^2 | a3, a4; p^3 | a6
        BigRat s;
        if (p2) {
            s = reduce_mod(c.a2(), p);
            t = pr * reduce_mod(c.a6() / (pr * pr), p);
        } else {
            s = reduce_mod(-c.a1() * half, p);
            t = pr * reduce_mod(-(c.a3() / pr) * half, p);
        }
        apply({1, 0, s, t});

        // roots of T^3 + b T^2 + c T + d mod p
        BigInt b = reduce_mod(c.a2() / pr, p), cc = reduce_mod(c.a4() / (pr * pr), p),
               d = reduce_mod(c.a6() / (pr * pr * pr), p);
        BigInt w = 27 * d * d - b * b * cc * cc + 4 * b * b * b * d - 18 * b * cc * d + 4 * cc * cc * cc;
        BigInt x = 3 * cc - b * b;
        int roots = 1;
        if (w % p == 0)
            roots = x % p == 0 ? 3 : 2;

        if (roots == 1)
            return {{KodairaKind::I0Star, 0}, vd, vd - 4, false, c, total};

        if (roots == 2) {
            BigRat rr;
            if (p2)
                rr = BigRat(cc);
            else if (p3)
                rr = BigRat(b * cc);
            else
                rr = BigRat(b * cc - 9 * d) / BigRat(2 * x);
            apply({1, pr * BigRat(reduce_mod(rr, p)), 0, 0});
            int ix = 3, iy = 3;
            BigRat mx = pr * pr, my = pr * pr;
            for (;;) {
                BigRat a2t = c.a2() / pr, a3t = c.a3() / my, a6t = c.a6() / (mx * my);
                if (!divides(a3t * a3t + 4 * a6t))
                    break;
                BigRat tt = p2 ? my * BigRat(reduce_mod(a6t, p)) : my * BigRat(reduce_mod(-a3t * half, p));
                apply({1, 0, 0, tt});
                my *= pr;
                ++iy;
                a2t = c.a2() / pr;
                BigRat a4t = c.a4() / (pr * mx);
                a6t = c.a6() / (mx * my);
                if (!divides(a4t * a4t - 4 * a6t * a2t))
                    break;
                BigRat rr2 = p2 ? mx * BigRat(reduce_mod(a6t * a2t, p))
                                : mx * BigRat(reduce_mod(-a4t / (2 * a2t), p));
                apply({1, rr2, 0, 0});
                mx *= pr;
                ++ix;
            }
            const int m = ix + iy - 5;
            return {{KodairaKind::InStar, m}, vd, vd - ix - iy + 1, false, c, total};
        }

        // triple root: move it to T = 0
        BigRat rr;
        if (p2)
            rr = BigRat(b);
        else if (p3)
            rr = BigRat(-d);
        else
            rr = BigRat(-b) / 3;
        apply({1, pr * BigRat(reduce_mod(rr, p)), 0, 0});
        BigInt x3 = reduce_mod(c.a3() / (pr * pr), p), x6 = reduce_mod(c.a6() / pow_rat(pr, 4), p);
        if ((x3 * x3 + 4 * x6) % p != 0)
            return {{KodairaKind::IVStar, 0}, vd, vd - 6, false, c, total};
        BigRat tt = p2 ? BigRat(x6) : BigRat(reduce_mod(BigRat(x3 * half), p));
        apply({1, 0, 0, -pr * pr * BigRat(reduce_mod(tt, p))});
        if (v(c.a4()) < 4)
            return {{KodairaKind::IIIStar, 0}, vd, vd - 7, false, c, total};
        if (v(c.a6()) < 6)
            return {{KodairaKind::IIStar, 0}, vd, vd - 8, false, c, total};

        // not minimal
        apply({pr, 0, 0, 0});
    }
}

inline void require_prime(const BigInt &p)
{
    if (!is_prime(p))
        throw InvalidArgument(to_string(p) + " is not prime");
}

/// p-integral reduction of a good model; trace by character sum (brute force at 2).
inline std::int64_t local_trace(const WeierstrassModel &minimal, const BigInt &p)
{
    auto curve = CurveModP::reduce(minimal, detail::checked_prime(p));
    return trace_of_frobenius(curve);
}

} // namespace detail

/// p-minimal, p-integral model and the (u, r, s, t) relating it to w. A pure
/// rescaling is preferred when it suffices; w itself is returned when it is
/// already minimal.
inline MinimalModel minimal_model_at(const WeierstrassModel &w, const BigInt &p)
{
    detail::require_prime(p);
    auto res = detail::tate(w, p);
    const int excess = valuation(w.discriminant(), p) - res.disc_valuation;
    if (excess == 0 && w.is_p_integral(p))
        return {w, Transform{}};
    if (excess % 12 == 0) {
        Transform scale{pow_rat(BigRat(p), static_cast<unsigned long>(std::abs(excess / 12))), 0, 0, 0};
        if (excess < 0)
            scale.u = 1 / scale.u;
        auto scaled = w.transformed(scale);
        if (scaled.is_p_integral(p))
            return {scaled, scale};
    }
    return {res.model, res.transform};
}

/// Reference curve over F_p (p odd) with j-invariant jbar.
inline CurveModP reference_curve(std::uint64_t jbar, std::uint64_t p)
{
    if (p == 2)
        throw UnsupportedPrime("reference curves are only built for odd p");
    jbar %= p;
    if (p == 3) {
        if (jbar == 0)
            return CurveModP(3, {0, 0, 0, 2, 0}); // y^2 = x^3 - x
        return CurveModP(3, {0, 1, 0, 0, (3 - inv_mod(jbar, 3)) % 3});
    }
    if (jbar == 0)
        return CurveModP(p, {0, 0, 0, 0, 1});
    if (jbar == 1728 % p)
        return CurveModP(p, {0, 0, 0, 1, 0});
    std::uint64_t k = mul_mod(jbar, (1728 % p + p - jbar) % p, p);
    return CurveModP(p, {0, 0, 0, mul_mod(3, k, p), mul_mod(mul_mod(2, k, p), (1728 % p + p - jbar) % p, p)});
}

/// Reduction type after a finite extension: determined by v_p(j) and, for
/// integral j, by supersingularity of any curve with the reduced j-invariant.
inline PotentialType potential_type(const WeierstrassModel &w, const BigInt &p)
{
    detail::require_prime(p);
    if (p == 2)
        throw UnsupportedPrime("potential reduction type is only classified for odd p");
    BigRat j = w.j_invariant();
    if (valuation(j, p) < 0)
        return PotentialType::PotMultiplicative;
    std::uint64_t q = detail::checked_prime(p);
    auto ref = reference_curve(residue(j, q), q);
    std::int64_t ap = trace_of_frobenius(ref);
    return ap % static_cast<std::int64_t>(q) == 0 ? PotentialType::PotGoodSupersingular
                                                   : PotentialType::PotGoodOrdinary;
}

inline PotentialType potential_type(const TwoTorsionCurve &e, const BigInt &p)
{
    return potential_type(weierstrass_model(e), p);
}

inline ReductionReport classify_reduction(const WeierstrassModel &w, const BigInt &p)
{
    detail::require_prime(p);
    auto res = detail::tate(w, p);
    ReductionReport rep{p, res.kodaira, res.disc_valuation, res.conductor_exponent, ActualType::Additive,
                        std::nullopt, minimal_model_at(w, p)};
    if (res.conductor_exponent == 0) {
        std::int64_t ap = detail::local_trace(res.model, p);
        bool ss = mpz_divisible_p(BigInt(static_cast<long>(ap)).get_mpz_t(), p.get_mpz_t()) != 0;
        rep.actual = ss ? ActualType::GoodSupersingular : ActualType::GoodOrdinary;
    } else if (res.conductor_exponent == 1) {
        rep.actual = res.split ? ActualType::SplitMultiplicative : ActualType::NonsplitMultiplicative;
    }
    if (p != 2)
        rep.potential = potential_type(w, p);
    return rep;
}

inline ReductionReport classify_reduction(const TwoTorsionCurve &e, const BigInt &p)
{
    return classify_reduction(weierstrass_model(e), p);
}

/// Primes at which some model of the curve could be bad: divisors of the
/// numerator of the discriminant and of the coefficient denominators.
inline std::vector<BigInt> candidate_bad_primes(const WeierstrassModel &w)
{
    std::set<BigInt> seen;
    for (const auto &[q, e] : factor_integer(w.discriminant().get_num()))
        seen.insert(q);
    for (const auto &a : w.ainvs())
        if (a.get_den() != 1)
            for (const auto &[q, e] : factor_integer(a.get_den()))
                seen.insert(q);
    return {seen.begin(), seen.end()};
}

inline BigInt conductor(const WeierstrassModel &w)
{
    BigInt n = 1;
    for (const auto &p : candidate_bad_primes(w)) {
        auto res = detail::tate(w, p);
        n *= pow_int(p, static_cast<unsigned long>(res.conductor_exponent));
    }
    return n;
}

inline BigInt conductor(const TwoTorsionCurve &e) { return conductor(weierstrass_model(e)); }

} // namespace isoforge
