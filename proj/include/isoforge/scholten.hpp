#pragma once

// Genus-2 curves C_{a,b,c,d}: (ad - bc) y^2 = ((a-b)x^2 - (c-d))(ax^2 - c)(bx^2 - d)
// whose Jacobian splits up to isogeny as E_{a,b} x E_{c,d}.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoforge/detail/parallel.hpp"
#include "isoforge/elliptic.hpp"
#include "isoforge/errors.hpp"
#include "isoforge/exactnum.hpp"
#include "isoforge/genus2.hpp"

namespace isoforge {

struct ScholtenParams
{
    BigInt a, b, c, d;

    bool operator==(const ScholtenParams &) const = default;
    auto operator<=>(const ScholtenParams &o) const
    {
        return std::tie(a, b, c, d) <=> std::tie(o.a, o.b, o.c, o.d);
    }
    std::string to_string() const
    {
        return a.get_str() + "," + b.get_str() + "," + c.get_str() + "," + d.get_str();
    }
};

enum class Degeneracy { LambdaZero, FirstPairDegenerate, SecondPairDegenerate, RepeatedRoots };

inline const char *to_string(Degeneracy d)
{
    switch (d) {
        case Degeneracy::LambdaZero: return "lambda = ad - bc = 0";
        case Degeneracy::FirstPairDegenerate: return "ab(a - b) = 0";
        case Degeneracy::SecondPairDegenerate: return "cd(c - d) = 0";
        case Degeneracy::RepeatedRoots: return "repeated roots (disc S = 0)";
    }
    return "?";
}

class ScholtenCurve
{
    public:
        const ScholtenParams &params() const { return params_; }
        const BigInt &lambda() const { return lambda_; }
        const Polynomial &sextic() const { return sextic_; }

        bool is_smooth() const { return violations_.empty(); }
        /// Violated conditions in the order lambda, (a,b), (c,d), disc; empty when smooth.
        const std::vector<Degeneracy> &violations() const { return violations_; }
        std::optional<Degeneracy> reason() const
        {
            return violations_.empty() ? std::nullopt : std::optional<Degeneracy>(violations_.front());
        }

        /// Available only for smooth curves.
        const HyperellipticCurve &curve() const { return require(curve_, "curve"); }
        const TwoTorsionCurve &e1() const { return require(e1_, "E1"); }
        const TwoTorsionCurve &e2() const { return require(e2_, "E2"); }
        const BigInt &discriminant() const { return disc_; }

        friend ScholtenCurve build_scholten(const BigInt &a, const BigInt &b, const BigInt &c, const BigInt &d);

    private:
        template <class T>
        const T &require(const std::optional<T> &v, const char *what) const
        {
            if (!v || !is_smooth())
                throw DegenerateCurve(std::string(what) + " unavailable: C_{" + params_.to_string() +
                                      "} is degenerate (" + to_string(violations_.front()) + ")");
            return *v;
        }

        ScholtenParams params_;
        BigInt lambda_, disc_ = 0;
        Polynomial sextic_;
        std::optional<HyperellipticCurve> curve_;
        std::optional<TwoTorsionCurve> e1_, e2_;
        std::vector<Degeneracy> violations_;
};

inline Polynomial scholten_sextic(const BigInt &a, const BigInt &b, const BigInt &c, const BigInt &d)
{
    return Polynomial{-(c - d), 0, a - b} * Polynomial{-c, 0, a} * Polynomial{-d, 0, b};
}

inline ScholtenCurve build_scholten(const BigInt &a, const BigInt &b, const BigInt &c, const BigInt &d)
{
    ScholtenCurve out;
    out.params_ = {a, b, c, d};
    out.lambda_ = a * d - b * c;
    out.sextic_ = scholten_sextic(a, b, c, d);
    if (out.lambda_ == 0)
        out.violations_.push_back(Degeneracy::LambdaZero);
    if (TwoTorsionCurve::is_nondegenerate(a, b))
        out.e1_.emplace(a, b);
    else
        out.violations_.push_back(Degeneracy::FirstPairDegenerate);
    if (TwoTorsionCurve::is_nondegenerate(c, d))
        out.e2_.emplace(c, d);
    else
        out.violations_.push_back(Degeneracy::SecondPairDegenerate);
    if (degree(out.sextic_) == 6) {
        out.disc_ = sextic_discriminant(out.sextic_);
        if (out.disc_ == 0)
            out.violations_.push_back(Degeneracy::RepeatedRoots);
    }
    if (out.violations_.empty())
        out.curve_.emplace(out.lambda_, out.sextic_);
    return out;
}

inline ScholtenCurve build_scholten(const ScholtenParams &p) { return build_scholten(p.a, p.b, p.c, p.d); }

// ---------------------------------------------------------------------------
// Isomorphic two-torsion forms.

using ParamPair = std::pair<BigInt, BigInt>;

/// All (r_j - r_i, r_k - r_i) over orderings of the roots {0, a, b}, first
/// occurrence order, each verified to have the j-invariant of (a, b).
inline std::vector<ParamPair> torsion_forms_orbit(const BigInt &a, const BigInt &b)
{
    TwoTorsionCurve base(a, b);
    const BigRat j = weierstrass_model(base).j_invariant();
    std::array<BigInt, 3> roots{0, a, b};
    std::array<int, 3> idx{0, 1, 2};
    std::vector<ParamPair> out;
    do {
        ParamPair pr{roots[idx[1]] - roots[idx[0]], roots[idx[2]] - roots[idx[0]]};
        if (std::find(out.begin(), out.end(), pr) == out.end())
            out.push_back(pr);
    } while (std::next_permutation(idx.begin(), idx.end()));
    for (const auto &[x, y] : out)
        if (weierstrass_model(TwoTorsionCurve(x, y)).j_invariant() != j)
            throw Error("orbit member (" + x.get_str() + "," + y.get_str() + ") changed the j-invariant");
    return out;
}

/// The six forms E_{a,b}, E_{b,a}, E_{-b,b-a}, E_{b-a,-a}, E_{a-b,-b}, E_{-b,a-b}
/// as commonly tabulated; kept only to be audited against the computed orbit.
inline std::vector<ParamPair> tabulated_orbit_forms(const BigInt &a, const BigInt &b)
{
    return {{a, b}, {b, a}, {-b, b - a}, {b - a, -a}, {a - b, -b}, {-b, a - b}};
}

struct OrbitDiscrepancy
{
    ParamPair pair;
    bool degenerate = false;
    bool same_j = false;
    bool in_orbit = false;
};

/// Tabulated forms that fail the j-check or are missing from the computed orbit.
inline std::vector<OrbitDiscrepancy> audit_tabulated_orbit(const BigInt &a, const BigInt &b)
{
    auto orbit = torsion_forms_orbit(a, b);
    const BigRat j = weierstrass_model(TwoTorsionCurve(a, b)).j_invariant();
    std::vector<OrbitDiscrepancy> out;
    for (const auto &pr : tabulated_orbit_forms(a, b)) {
        OrbitDiscrepancy d{pr};
        d.in_orbit = std::find(orbit.begin(), orbit.end(), pr) != orbit.end();
        if (!TwoTorsionCurve::is_nondegenerate(pr.first, pr.second))
            d.degenerate = true;
        else
            d.same_j = weierstrass_model(TwoTorsionCurve(pr.first, pr.second)).j_invariant() == j;
        if (d.degenerate || !d.same_j || !d.in_orbit)
            out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Families and geometric isomorphism classes.

/// Groups Igusa-Clebsch points into geometric isomorphism classes.
class IgusaClassifier
{
    public:
        /// Class index of ic, registering a new class when unseen.
        std::size_t classify(const IgusaClebsch &ic)
        {
            auto &bucket = buckets_[ic.absolute()];
            for (std::size_t k : bucket)
                if (reps_[k].equivalent(ic))
                    return k;
            reps_.push_back(ic);
            bucket.push_back(reps_.size() - 1);
            return reps_.size() - 1;
        }

        std::size_t size() const { return reps_.size(); }

    private:
        std::map<std::array<BigRat, 3>, std::vector<std::size_t>> buckets_;
        std::vector<IgusaClebsch> reps_;
};

struct FamilyMember
{
    ScholtenCurve curve;
    IgusaClebsch igusa;
    std::size_t igusa_class;
};

struct ScholtenFamily
{
    std::vector<FamilyMember> members;         // smooth members, orbit order
    std::vector<ScholtenCurve> discarded;      // degenerate orbit members
    std::size_t class_count = 0;               // geometric classes (twists over Q merged)
};

inline ScholtenFamily scholten_family(const BigInt &a, const BigInt &b, const BigInt &c, const BigInt &d)
{
    ScholtenFamily fam;
    if (!TwoTorsionCurve::is_nondegenerate(a, b) || !TwoTorsionCurve::is_nondegenerate(c, d)) {
        fam.discarded.push_back(build_scholten(a, b, c, d));
        return fam;
    }
    IgusaClassifier classes;
    for (const auto &[x, y] : torsion_forms_orbit(a, b)) {
        auto curve = build_scholten(x, y, c, d);
        if (!curve.is_smooth()) {
            fam.discarded.push_back(std::move(curve));
            continue;
        }
        auto ic = igusa_clebsch(curve.curve());
        std::size_t k = classes.classify(ic);
        fam.members.push_back({std::move(curve), ic, k});
    }
    fam.class_count = classes.size();
    return fam;
}

// ---------------------------------------------------------------------------
// Split-Jacobian certificate: #C(F_p) = p + 1 - a_p(E1) - a_p(E2).

struct SplitJacobianEntry
{
    std::uint64_t p;
    std::uint64_t count;
    BigInt ap1, ap2;
    bool pass;
};

struct ExcludedPrime
{
    std::uint64_t p;
    std::string reason;
};

struct SplitJacobianCertificate
{
    ScholtenParams params;
    TwoTorsionCurve e1, e2;
    std::vector<SplitJacobianEntry> entries;
    std::vector<ExcludedPrime> excluded;
    bool verdict = false;

    std::vector<std::uint64_t> failing_primes() const
    {
        std::vector<std::uint64_t> out;
        for (const auto &e : entries)
            if (!e.pass)
                out.push_back(e.p);
        return out;
    }
};

inline constexpr std::size_t kMinCertificatePrimes = 5;

/// Optional e1/e2 replace the factor curves (negative controls).
inline SplitJacobianCertificate verify_split_jacobian(const ScholtenCurve &c, const std::vector<std::uint64_t> &primes,
                                                      std::optional<TwoTorsionCurve> e1 = std::nullopt,
                                                      std::optional<TwoTorsionCurve> e2 = std::nullopt)
{
    if (!c.is_smooth())
        throw DegenerateCurve("C_{" + c.params().to_string() + "} is degenerate: " + to_string(*c.reason()));
    SplitJacobianCertificate cert{c.params(), e1.value_or(c.e1()), e2.value_or(c.e2()), {}, {}, false};
    const BigInt &lambda = c.lambda(), &disc = c.discriminant(), &lead = c.sextic()[6];
    const BigInt d1 = cert.e1.discriminant(), d2 = cert.e2.discriminant();
    for (auto p : primes) {
        BigInt P = static_cast<unsigned long>(p);
        if (!is_prime(P))
            throw InvalidArgument(std::to_string(p) + " is not prime");
        std::string why;
        if (p == 2)
            why = "p = 2";
        else if (residue(lambda, p) == 0)
            why = "p divides lambda";
        else if (residue(disc, p) == 0)
            why = "p divides disc(S)";
        else if (residue(d1, p) == 0)
            why = "p divides disc(E1)";
        else if (residue(d2, p) == 0)
            why = "p divides disc(E2)";
        else if (residue(lead, p) == 0)
            why = "p divides the leading coefficient";
        if (!why.empty()) {
            cert.excluded.push_back({p, why});
            continue;
        }
        auto n = hyperelliptic_point_count(c.curve(), P);
        BigInt ap1 = ap_trace(cert.e1, P), ap2 = ap_trace(cert.e2, P);
        bool pass = BigInt(static_cast<unsigned long>(n)) == P + 1 - ap1 - ap2;
        cert.entries.push_back({p, n, ap1, ap2, pass});
    }
    if (cert.entries.size() < kMinCertificatePrimes)
        throw InsufficientPrimes("only " + std::to_string(cert.entries.size()) + " usable primes for C_{" +
                                 c.params().to_string() + "}, need " + std::to_string(kMinCertificatePrimes));
    cert.verdict = cert.failing_primes().empty();
    return cert;
}

// ---------------------------------------------------------------------------
// Parameter search.

struct SearchPredicate
{
    std::string name;
    std::function<bool(const ScholtenCurve &)> test;
};

/// Passes when the split-Jacobian identity holds at every usable prime <= bound.
inline SearchPredicate split_jacobian_predicate(std::uint64_t bound)
{
    return {"split-jacobian<=" + std::to_string(bound), [bound](const ScholtenCurve &c) {
                try {
                    return verify_split_jacobian(c, primes_up_to(bound)).verdict;
                } catch (const InsufficientPrimes &) {
                    return false;
                }
            }};
}

struct ParamRange
{
    BigInt lo, hi; // inclusive
};

/// Grid points in lexicographic (a, b, c, d) order.
inline std::vector<ScholtenParams> parameter_grid(const std::array<ParamRange, 4> &r)
{
    std::vector<ScholtenParams> out;
    for (BigInt a = r[0].lo; a <= r[0].hi; ++a)
        for (BigInt b = r[1].lo; b <= r[1].hi; ++b)
            for (BigInt c = r[2].lo; c <= r[2].hi; ++c)
                for (BigInt d = r[3].lo; d <= r[3].hi; ++d)
                    out.push_back({a, b, c, d});
    return out;
}

struct SearchRecord
{
    ScholtenParams params;
    IgusaClebsch igusa;
    std::size_t igusa_class;
    std::vector<std::string> predicates;
};

struct SearchOptions
{
    std::vector<SearchPredicate> predicates;
    bool dedup = true; // one record per geometric Igusa class
    unsigned jobs = 0;
};

/// Evaluates the grid in parallel and emits records in input order from the
/// calling thread; returns the number emitted.
inline std::size_t parameter_search(const std::vector<ScholtenParams> &grid, const SearchOptions &opts,
                                    const std::function<void(const SearchRecord &)> &sink)
{
    struct Eval
    {
        bool keep = false;
        std::optional<IgusaClebsch> igusa;
    };
    auto results = detail::parallel_map(
        grid,
        [&](const ScholtenParams &p) {
            Eval e;
            auto c = build_scholten(p);
            if (!c.is_smooth())
                return e;
            for (const auto &pred : opts.predicates)
                if (!pred.test(c))
                    return e;
            e.keep = true;
            e.igusa = igusa_clebsch(c.curve());
            return e;
        },
        opts.jobs);
    IgusaClassifier classes;
    std::size_t emitted = 0;
    std::vector<std::string> names;
    for (const auto &pred : opts.predicates)
        names.push_back(pred.name);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!results[i].keep)
            continue;
        std::size_t before = classes.size();
        std::size_t k = classes.classify(*results[i].igusa);
        if (opts.dedup && k < before)
            continue;
        sink({grid[i], *results[i].igusa, k, names});
        ++emitted;
    }
    return emitted;
}

} // namespace isoforge
