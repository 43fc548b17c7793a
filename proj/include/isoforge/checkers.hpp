#pragma once

// Decidable hypothesis checks for the finiteness statements on zero-cycles of
// products of curves, and a supersingular-prime scanner.

#include <string>
#include <vector>

#include "isoforge/detail/parallel.hpp"
#include "isoforge/elliptic.hpp"
#include "isoforge/reduction.hpp"
#include "isoforge/scholten.hpp"

namespace isoforge {

enum class Theorem { Main1, Main2, Global2 };

inline const char *to_string(Theorem t)
{
    switch (t) {
        case Theorem::Main1: return "main1";
        case Theorem::Main2: return "main2";
        case Theorem::Global2: return "global2";
    }
    return "?";
}

struct CurveClassification
{
    std::string label;
    std::string model;
    std::optional<PotentialType> potential;
    std::optional<ActualType> actual;
};

struct HypothesisVerdict
{
    Theorem theorem;
    BigInt p;
    std::vector<CurveClassification> classifications;
    bool met = false;
    std::string reason;     // why not met; empty when met
    std::string conclusion; // only when met
};

inline constexpr const char *kMain1Conclusion = "F^2(A)_nd is torsion of finite exponent; finite for surfaces";
inline constexpr const char *kMain2Conclusion = "F^2(X)_nd is torsion of finite exponent";
inline constexpr const char *kMain2DivisibleConclusion = "F^2(X)_nd is p-divisible";
inline constexpr const char *kGlobal2Conclusion = "CH_0(A){p} is finite";

namespace detail {

inline void require_prime_arg(const BigInt &p)
{
    if (!is_prime(p))
        throw InvalidArgument(to_string(p) + " is not prime");
}

} // namespace detail

/// At most one curve may have potentially good supersingular reduction at the odd prime p.
inline HypothesisVerdict main1_check(const std::vector<WeierstrassModel> &curves, const BigInt &p)
{
    detail::require_prime_arg(p);
    HypothesisVerdict v{Theorem::Main1, p, {}, false, {}, {}};
    for (std::size_t i = 0; i < curves.size(); ++i)
        v.classifications.push_back({"E" + std::to_string(i + 1), curves[i].to_string(), std::nullopt, std::nullopt});
    if (p == 2) {
        v.reason = "p must be odd";
        return v;
    }
    std::size_t ss = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        auto t = potential_type(curves[i], p);
        v.classifications[i].potential = t;
        ss += t == PotentialType::PotGoodSupersingular;
    }
    if (ss > 1) {
        v.reason = std::to_string(ss) + " curves with potentially good supersingular reduction (at most one allowed)";
        return v;
    }
    v.met = true;
    v.conclusion = kMain1Conclusion;
    return v;
}

inline HypothesisVerdict main1_check(const std::vector<TwoTorsionCurve> &curves, const BigInt &p)
{
    std::vector<WeierstrassModel> models;
    for (const auto &e : curves)
        models.push_back(weierstrass_model(e));
    return main1_check(models, p);
}

/// One product Y_i = E_{i1} x ... x E_{ir} with the degree of the isogeny from J_i.
struct ProductFactor
{
    std::vector<WeierstrassModel> curves;
    BigInt isogeny_degree = 1;
};

inline HypothesisVerdict main2_check(const std::vector<ProductFactor> &factors, const BigInt &p, bool unramified,
                                     bool all_good)
{
    detail::require_prime_arg(p);
    HypothesisVerdict v{Theorem::Main2, p, {}, false, {}, {}};
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = 0; j < factors[i].curves.size(); ++j)
            v.classifications.push_back({"Y" + std::to_string(i + 1) + ".E" + std::to_string(j + 1),
                                         factors[i].curves[j].to_string(), std::nullopt, std::nullopt});
    if (p == 2) {
        v.reason = "p must be odd";
        return v;
    }
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (factors[i].isogeny_degree == 0 || gcd(factors[i].isogeny_degree, p) != 1) {
            v.reason = "degree " + to_string(factors[i].isogeny_degree) + " of the isogeny to Y" +
                       std::to_string(i + 1) + " is not coprime to p";
            return v;
        }
    std::size_t with_ss = 0, k = 0;
    bool every_curve_good = true;
    for (const auto &f : factors) {
        bool has_ss = false;
        for (const auto &e : f.curves) {
            auto &c = v.classifications[k++];
            c.potential = potential_type(e, p);
            c.actual = classify_reduction(e, p).actual;
            has_ss = has_ss || c.potential == PotentialType::PotGoodSupersingular;
            every_curve_good = every_curve_good && is_good(*c.actual);
        }
        with_ss += has_ss;
    }
    if (with_ss > 1) {
        v.reason = std::to_string(with_ss) + " products Y_i contain a supersingular coordinate (at most one allowed)";
        return v;
    }
    v.met = true;
    v.conclusion = unramified && all_good && every_curve_good ? kMain2DivisibleConclusion : kMain2Conclusion;
    return v;
}

/// Primes p <= bound with p not dividing 6 * N * deg_phi, ascending.
inline std::vector<std::uint64_t> global2_prime_filter_with_conductor(const BigInt &n, const BigInt &deg_phi,
                                                                      std::uint64_t bound)
{
    if (deg_phi < 1)
        throw InvalidArgument("isogeny degree must be at least 1");
    const BigInt m = 6 * n * deg_phi;
    std::vector<std::uint64_t> out;
    for (auto p : primes_up_to(bound))
        if (residue(m, p) != 0)
            out.push_back(p);
    return out;
}

inline std::vector<std::uint64_t> global2_prime_filter(const WeierstrassModel &e, const BigInt &deg_phi,
                                                       std::uint64_t bound)
{
    if (deg_phi < 1)
        throw InvalidArgument("isogeny degree must be at least 1");
    return global2_prime_filter_with_conductor(conductor(e), deg_phi, bound);
}

inline std::vector<std::uint64_t> global2_prime_filter(const TwoTorsionCurve &e, const BigInt &deg_phi,
                                                       std::uint64_t bound)
{
    return global2_prime_filter(weierstrass_model(e), deg_phi, bound);
}

inline HypothesisVerdict global2_check(const WeierstrassModel &e, const BigInt &deg_phi, const BigInt &p)
{
    detail::require_prime_arg(p);
    if (deg_phi < 1)
        throw InvalidArgument("isogeny degree must be at least 1");
    HypothesisVerdict v{Theorem::Global2, p, {{"E", e.to_string(), std::nullopt, std::nullopt}}, false, {}, {}};
    BigInt n = conductor(e);
    if (mpz_divisible_p(BigInt(6 * n * deg_phi).get_mpz_t(), p.get_mpz_t())) {
        v.reason = "p divides 6 * N * deg(phi) = " + to_string(BigInt(6 * n * deg_phi));
        return v;
    }
    v.met = true;
    v.conclusion = kGlobal2Conclusion;
    return v;
}

// ---------------------------------------------------------------------------

struct SupersingularScan
{
    std::vector<std::uint64_t> primes; // odd good primes with a_p = 0 mod p
    std::size_t tested = 0;            // odd good primes examined
    double density() const { return tested ? static_cast<double>(primes.size()) / static_cast<double>(tested) : 0.0; }
};

inline SupersingularScan supersingular_scan(const WeierstrassModel &e, std::uint64_t bound, unsigned jobs = 0)
{
    std::set<BigInt> suspicious;
    for (const auto &q : candidate_bad_primes(e))
        suspicious.insert(q);
    std::vector<std::uint64_t> odd;
    for (auto p : primes_up_to(bound))
        if (p != 2)
            odd.push_back(p);
    // -1 bad, 0 ordinary, 1 supersingular
    auto flags = detail::parallel_map(
        odd,
        [&](std::uint64_t p) {
            BigInt P = static_cast<unsigned long>(p);
            WeierstrassModel local = e;
            if (suspicious.count(P)) {
                auto m = minimal_model_at(e, P);
                if (valuation(m.model.discriminant(), P) > 0)
                    return -1;
                local = m.model;
            }
            std::int64_t ap = trace_of_frobenius(CurveModP::reduce(local, p));
            return ap % static_cast<std::int64_t>(p) == 0 ? 1 : 0;
        },
        jobs);
    SupersingularScan scan;
    for (std::size_t i = 0; i < odd.size(); ++i) {
        if (flags[i] < 0)
            continue;
        ++scan.tested;
        if (flags[i] == 1)
            scan.primes.push_back(odd[i]);
    }
    return scan;
}

inline SupersingularScan supersingular_scan(const TwoTorsionCurve &e, std::uint64_t bound, unsigned jobs = 0)
{
    return supersingular_scan(weierstrass_model(e), bound, jobs);
}

/// Search predicate: main1 hypotheses hold for (E1, E2) at p.
inline SearchPredicate main1_predicate(const BigInt &p)
{
    return {"main1@" + to_string(p),
            [p](const ScholtenCurve &c) { return main1_check(std::vector<TwoTorsionCurve>{c.e1(), c.e2()}, p).met; }};
}

} // namespace isoforge
