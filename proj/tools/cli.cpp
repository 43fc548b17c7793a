#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "isoforge/isoforge.hpp"

namespace isoforge::cli {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// value parsing

std::string trim(const std::string &s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

BigInt parse_int(const std::string &s)
{
    const std::string t = trim(s);
    BigInt v;
    if (t.empty() || v.set_str(t, 10) != 0)
        throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

BigRat parse_rat(const std::string &s)
{
    const std::string t = trim(s);
    BigRat v;
    if (t.empty() || t.find_first_of(" \t") != std::string::npos || v.set_str(t, 10) != 0 || v.get_den() == 0)
        throw std::invalid_argument("not a rational number: '" + s + "'");
    v.canonicalize();
    return v;
}

Json jint(const BigInt &x)
{
    if (x.fits_slong_p())
        return x.get_si();
    return x.get_str();
}

Json jrat(const BigRat &x)
{
    if (x.get_den() == 1)
        return jint(x.get_num());
    return x.get_str();
}

BigInt from_json_int(const Json &j) { return j.is_string() ? parse_int(j.get<std::string>()) : parse_int(j.dump()); }

Json jints(const std::vector<BigInt> &v)
{
    Json a = Json::array();
    for (const auto &x : v)
        a.push_back(jint(x));
    return a;
}

std::vector<BigInt> ints_of(const Json &j)
{
    std::vector<BigInt> v;
    for (const auto &x : j)
        v.push_back(from_json_int(x));
    return v;
}

Json jmodel(const WeierstrassModel &w)
{
    Json a = Json::array();
    for (const auto &c : w.ainvs())
        a.push_back(jrat(c));
    return a;
}

Json jigusa(const IgusaClebsch &ic) { return Json::array({jrat(ic.i2), jrat(ic.i4), jrat(ic.i6), jrat(ic.i10)}); }

// ---------------------------------------------------------------------------

class UsageError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

std::vector<ScholtenParams> read_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read " + path);
    std::vector<ScholtenParams> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        if (!header) {
            auto cols = split(line, ',');
            if (cols != std::vector<std::string>{"a", "b", "c", "d"})
                throw UsageError(path + ": expected header 'a,b,c,d'");
            header = true;
            continue;
        }
        try {
            auto v = parse_int_list(line, 4);
            rows.push_back({v[0], v[1], v[2], v[3]});
        } catch (const std::invalid_argument &e) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (in.bad())
        throw IoError("error while reading " + path);
    return rows;
}

// ---------------------------------------------------------------------------
// execution

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class Sink
{
    public:
        Sink(std::ostream &out, const std::optional<std::string> &path)
        {
            if (path) {
                file_.open(*path, std::ios::out | std::ios::trunc);
                if (!file_)
                    throw IoError("cannot open " + *path + " for writing");
                os_ = &file_;
            } else {
                os_ = &out;
            }
        }

        void emit(const ResultRecord &r)
        {
            *os_ << r.to_json_line() << '\n';
            os_->flush();
            if (!*os_)
                throw IoError("write failed");
        }

    private:
        std::ofstream file_;
        std::ostream *os_ = nullptr;
};

Json error_json(const std::exception &e)
{
    const char *type = "Error";
    if (dynamic_cast<const InvalidArgument *>(&e))
        type = "InvalidArgument";
    else if (dynamic_cast<const DegenerateCurve *>(&e))
        type = "DegenerateCurve";
    else if (dynamic_cast<const SingularCurve *>(&e))
        type = "SingularCurve";
    else if (dynamic_cast<const BadPrime *>(&e))
        type = "BadPrime";
    else if (dynamic_cast<const UnsupportedPrime *>(&e))
        type = "UnsupportedPrime";
    else if (dynamic_cast<const InsufficientPrimes *>(&e))
        type = "InsufficientPrimes";
    else if (dynamic_cast<const BudgetExceeded *>(&e))
        type = "BudgetExceeded";
    else if (dynamic_cast<const InvalidConfiguration *>(&e))
        type = "InvalidConfiguration";
    return Json{{"type", type}, {"message", e.what()}};
}

struct Context
{
    const RunPlan &plan;
    Sink &sink;
    ConductorCache &cache;
    std::ostream &err;
    int exit_code = kOk;

    void fail() { exit_code = std::max(exit_code, static_cast<int>(kAnalysisFailure)); }

    /// Runs body into a record; module errors become an error record and exit 1.
    template <class F>
    void record(const std::string &kind, Json inputs, F body)
    {
        ResultRecord r{kind, std::move(inputs), Json::object(), std::nullopt, 0};
        auto t0 = Clock::now();
        try {
            if (!body(r.outputs))
                fail();
        } catch (const isoforge::Error &e) {
            r.outputs = Json::object();
            r.error = error_json(e);
            fail();
        }
        r.timing_ms = elapsed_ms(t0);
        sink.emit(r);
    }
};

std::optional<WeierstrassModel> model_of(const Json &curve, std::optional<ParamPair> &pair)
{
    if (curve.contains("ainvs")) {
        auto a = curve["ainvs"];
        std::array<BigRat, 5> v;
        for (std::size_t i = 0; i < 5; ++i)
            v[i] = a[i].is_string() ? parse_rat(a[i].get<std::string>()) : parse_rat(a[i].dump());
        return WeierstrassModel(v[0], v[1], v[2], v[3], v[4]);
    }
    pair = ParamPair{from_json_int(curve["a"]), from_json_int(curve["b"])};
    return weierstrass_model(TwoTorsionCurve(pair->first, pair->second));
}

BigInt conductor_of(Context &ctx, const WeierstrassModel &w, const std::optional<ParamPair> &pair)
{
    return pair ? ctx.cache.conductor(pair->first, pair->second) : conductor(w);
}

void cmd_analyze(Context &ctx)
{
    const Json &in = ctx.plan.inputs;
    std::optional<ParamPair> pair;
    std::optional<WeierstrassModel> w;
    ctx.record("curve", in, [&](Json &out) {
        w = model_of(in["curve"], pair);
        out["model"] = jmodel(*w);
        out["discriminant"] = jrat(w->discriminant());
        out["j_invariant"] = jrat(w->j_invariant());
        out["conductor"] = jint(conductor_of(ctx, *w, pair));
        return true;
    });
    if (!w)
        return;
    for (const auto &pj : in["primes"]) {
        const BigInt p = from_json_int(pj);
        ctx.record("reduction", Json{{"curve", in["curve"]}, {"p", pj}}, [&](Json &out) {
            auto rep = classify_reduction(*w, p);
            out["kodaira"] = rep.kodaira.to_string();
            out["disc_valuation"] = rep.disc_valuation;
            out["conductor_exponent"] = rep.conductor_exponent;
            out["actual"] = to_string(rep.actual);
            out["potential"] = rep.potential ? Json(to_string(*rep.potential)) : Json(nullptr);
            out["minimal_model"] = jmodel(rep.minimal.model);
            if (is_good(rep.actual) && p != 2)
                out["ap"] = trace_of_frobenius(CurveModP::reduce(rep.minimal.model, p.get_ui()));
            else
                out["ap"] = nullptr;
            return true;
        });
    }
}

Json params_json(const ScholtenParams &p) { return jints({p.a, p.b, p.c, p.d}); }

ScholtenParams params_of(const Json &j)
{
    auto v = ints_of(j);
    return {v.at(0), v.at(1), v.at(2), v.at(3)};
}

std::vector<ScholtenParams> batch(const Context &ctx)
{
    if (ctx.plan.csv)
        return read_csv(*ctx.plan.csv);
    return {params_of(ctx.plan.inputs["params"])};
}

void cmd_scholten_build(Context &ctx)
{
    for (const auto &p : batch(ctx))
        ctx.record("scholten-build", Json{{"params", params_json(p)}}, [&](Json &out) {
            auto c = build_scholten(p);
            out["lambda"] = jint(c.lambda());
            out["sextic"] = polynomial_to_string(c.sextic());
            out["smooth"] = c.is_smooth();
            Json v = Json::array();
            for (auto d : c.violations())
                v.push_back(to_string(d));
            out["violations"] = v;
            if (c.is_smooth()) {
                out["e1"] = jints({c.e1().a(), c.e1().b()});
                out["e2"] = jints({c.e2().a(), c.e2().b()});
                out["discriminant"] = jint(c.discriminant());
                out["igusa_clebsch"] = jigusa(igusa_clebsch(c.curve()));
            }
            return c.is_smooth();
        });
}

void cmd_scholten_family(Context &ctx)
{
    for (const auto &p : batch(ctx))
        ctx.record("scholten-family", Json{{"params", params_json(p)}}, [&](Json &out) {
            auto fam = scholten_family(p.a, p.b, p.c, p.d);
            Json members = Json::array(), discarded = Json::array();
            for (const auto &m : fam.members)
                members.push_back(Json{{"params", params_json(m.curve.params())},
                                       {"igusa_clebsch", jigusa(m.igusa)},
                                       {"class", m.igusa_class}});
            for (const auto &d : fam.discarded) {
                Json why = Json::array();
                for (auto v : d.violations())
                    why.push_back(to_string(v));
                discarded.push_back(Json{{"params", params_json(d.params())}, {"violations", why}});
            }
            out["members"] = members;
            out["discarded"] = discarded;
            out["class_count"] = fam.class_count;
            return !fam.members.empty();
        });
}

std::optional<TwoTorsionCurve> pair_override(const Json &in, const char *key)
{
    if (!in.contains(key))
        return std::nullopt;
    auto v = ints_of(in[key]);
    return TwoTorsionCurve(v.at(0), v.at(1));
}

void cmd_scholten_verify(Context &ctx)
{
    const Json &in = ctx.plan.inputs;
    std::vector<std::uint64_t> primes;
    for (const auto &p : in["primes"])
        primes.push_back(p.get<std::uint64_t>());
    for (const auto &p : batch(ctx)) {
        Json inputs{{"params", params_json(p)}, {"primes", in["primes"]}};
        for (const char *k : {"e1", "e2"})
            if (in.contains(k))
                inputs[k] = in[k];
        ctx.record("scholten-verify", inputs, [&](Json &out) {
            auto e1 = pair_override(in, "e1"), e2 = pair_override(in, "e2");
            auto cert = verify_split_jacobian(build_scholten(p), primes, e1, e2);
            out["e1"] = jints({cert.e1.a(), cert.e1.b()});
            out["e2"] = jints({cert.e2.a(), cert.e2.b()});
            out["conductor_e1"] = jint(ctx.cache.conductor(cert.e1.a(), cert.e1.b()));
            out["conductor_e2"] = jint(ctx.cache.conductor(cert.e2.a(), cert.e2.b()));
            Json entries = Json::array(), excluded = Json::array();
            for (const auto &e : cert.entries)
                entries.push_back(Json{{"p", e.p}, {"count", e.count}, {"ap1", jint(e.ap1)}, {"ap2", jint(e.ap2)},
                                       {"pass", e.pass}});
            for (const auto &x : cert.excluded)
                excluded.push_back(Json{{"p", x.p}, {"reason", x.reason}});
            out["entries"] = entries;
            out["excluded"] = excluded;
            out["failing_primes"] = cert.failing_primes();
            out["verdict"] = cert.verdict ? "pass" : "fail";
            return cert.verdict;
        });
    }
}

void cmd_scholten_search(Context &ctx)
{
    const Json &in = ctx.plan.inputs;
    std::vector<ScholtenParams> grid;
    if (ctx.plan.csv) {
        grid = read_csv(*ctx.plan.csv);
    } else {
        std::array<ParamRange, 4> r;
        for (std::size_t k = 0; k < 4; ++k)
            r[k] = {from_json_int(in["ranges"][k][0]), from_json_int(in["ranges"][k][1])};
        grid = parameter_grid(r);
    }
    SearchOptions opts;
    opts.dedup = in["dedup"].get<bool>();
    opts.jobs = ctx.plan.jobs;
    for (const auto &pred : in["predicates"]) {
        const std::string name = pred["name"];
        if (name == "split-jacobian")
            opts.predicates.push_back(split_jacobian_predicate(pred["bound"].get<std::uint64_t>()));
        else
            opts.predicates.push_back(main1_predicate(from_json_int(pred["p"])));
    }
    auto t0 = Clock::now();
    try {
        parameter_search(grid, opts, [&](const SearchRecord &s) {
            ResultRecord r{"scholten-search", Json{{"params", params_json(s.params)}}, Json::object(), std::nullopt, 0};
            r.outputs["igusa_clebsch"] = jigusa(s.igusa);
            r.outputs["class"] = s.igusa_class;
            r.outputs["predicates"] = s.predicates;
            r.timing_ms = elapsed_ms(t0);
            ctx.sink.emit(r);
            t0 = Clock::now();
        });
    } catch (const isoforge::Error &e) {
        ResultRecord r{"scholten-search", in, Json::object(), error_json(e), elapsed_ms(t0)};
        ctx.sink.emit(r);
        ctx.fail();
    }
}

Json verdict_json(const HypothesisVerdict &v)
{
    Json cls = Json::array();
    for (const auto &c : v.classifications)
        cls.push_back(Json{{"label", c.label},
                           {"model", c.model},
                           {"potential", c.potential ? Json(to_string(*c.potential)) : Json(nullptr)},
                           {"actual", c.actual ? Json(to_string(*c.actual)) : Json(nullptr)}});
    return Json{{"theorem", to_string(v.theorem)}, {"p", jint(v.p)},       {"classifications", cls},
                {"met", v.met},                    {"reason", v.reason}, {"conclusion", v.conclusion}};
}

std::vector<TwoTorsionCurve> curves_of(const Json &j)
{
    std::vector<TwoTorsionCurve> out;
    for (const auto &c : j) {
        auto v = ints_of(c);
        out.emplace_back(v.at(0), v.at(1));
    }
    return out;
}

void cmd_check(Context &ctx, const std::string &which)
{
    const Json &in = ctx.plan.inputs;
    if (which == "main1") {
        ctx.record("check-main1", in, [&](Json &out) {
            auto v = main1_check(curves_of(in["curves"]), from_json_int(in["p"]));
            out = verdict_json(v);
            return v.met;
        });
    } else if (which == "main2") {
        ctx.record("check-main2", in, [&](Json &out) {
            std::vector<ProductFactor> factors;
            for (const auto &f : in["factors"]) {
                ProductFactor pf;
                for (const auto &e : curves_of(f["curves"]))
                    pf.curves.push_back(weierstrass_model(e));
                pf.isogeny_degree = from_json_int(f["degree"]);
                factors.push_back(std::move(pf));
            }
            auto v = main2_check(factors, from_json_int(in["p"]), in["unramified"].get<bool>(),
                                 in["all_good"].get<bool>());
            out = verdict_json(v);
            return v.met;
        });
    } else {
        ctx.record("check-global2", in, [&](Json &out) {
            const BigInt a = from_json_int(in["curve"]["a"]), b = from_json_int(in["curve"]["b"]);
            const BigInt deg = from_json_int(in["deg"]);
            if (deg < 1)
                throw InvalidArgument("isogeny degree must be at least 1");
            TwoTorsionCurve e(a, b);
            const BigInt n = ctx.cache.conductor(a, b);
            out["conductor"] = jint(n);
            bool ok = true;
            if (in.contains("bound"))
                out["primes"] = global2_prime_filter_with_conductor(n, deg, in["bound"].get<std::uint64_t>());
            if (in.contains("p")) {
                const BigInt p = from_json_int(in["p"]);
                if (!is_prime(p))
                    throw InvalidArgument(to_string(p) + " is not prime");
                const BigInt m = 6 * n * deg;
                const bool met = !mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t());
                out["met"] = met;
                out["conclusion"] = met ? kGlobal2Conclusion : "";
                out["reason"] = met ? "" : "p divides 6 * N * deg(phi) = " + to_string(BigInt(6 * n * deg));
                ok = met;
            }
            return ok;
        });
    }
}

void cmd_scan(Context &ctx)
{
    const Json &in = ctx.plan.inputs;
    ctx.record("scan-supersingular", in, [&](Json &out) {
        std::optional<ParamPair> pair;
        auto w = model_of(in["curve"], pair);
        auto s = supersingular_scan(*w, in["bound"].get<std::uint64_t>(), ctx.plan.jobs);
        out["primes"] = s.primes;
        out["tested"] = s.tested;
        out["density"] = s.density();
        return true;
    });
}

void cmd_kgroup(Context &ctx)
{
    const Json &in = ctx.plan.inputs;
    ctx.record("kgroup-prove-skew", in, [&](Json &out) {
        const std::uint64_t q = in["q"];
        const int r = in["r"];
        auto ab = ints_of(in["curve"]);
        auto g = GroupTable::from_curve(weierstrass_model(TwoTorsionCurve(ab.at(0), ab.at(1))), q);
        Tuple tail;
        for (const auto &pt : in["tail"]) {
            if (pt.is_string()) {
                tail.push_back(0);
                continue;
            }
            auto xy = ints_of(pt);
            const std::uint64_t x = residue(xy.at(0), q), y = residue(xy.at(1), q);
            tail.push_back(g->curve()->index_of(PointModP::affine(x, y)));
        }
        const ThirdPoint conv = in["convention"] == "sum" ? ThirdPoint::Sum : ThirdPoint::NegatedSum;
        SkewOptions opt;
        opt.jobs = ctx.plan.jobs;
        auto rep = prove_skew(g, r, tail, conv, opt);
        out["group_order"] = rep.group_order;
        out["convention"] = to_string(rep.convention);
        out["generators"] = Json{{"bilinear", rep.bilinear_generators}, {"wr", rep.wr_generators}};
        out["pairs"] = Json{{"total", rep.pairs_total}, {"proved", rep.pairs_proved}};
        out["doubles"] = Json{{"total", rep.doubles_total}, {"proved", rep.doubles_proved}};
        Json failed = Json::array();
        for (auto [a, b] : rep.failed_pairs)
            failed.push_back(Json::array({g->label(a), g->label(b)}));
        out["failed_pairs"] = failed;
        out["certificate_terms"] = Json{{"total", rep.total_certificate_terms}, {"max", rep.max_certificate_terms}};
        out["certificates_verified"] = rep.certificates_verified;
        if (rep.negative_control)
            out["negative_control"] = Json{{"symbol", Json::array({g->label(rep.negative_control->a1),
                                                                    g->label(rep.negative_control->a2)})},
                                           {"derivable", false},
                                           {"refutation_modulus", jint(rep.negative_control->refutation.modulus)},
                                           {"verified", rep.negative_control->verified}};
        else
            out["negative_control"] = nullptr;
        out["success"] = rep.success();
        return rep.success();
    });
}

void cmd_filtration(Context &ctx)
{
    const Json &in = ctx.plan.inputs;
    ctx.record("filtration", in, [&](Json &out) {
        std::optional<FinAbGroup> g;
        if (in.contains("group")) {
            std::vector<std::uint64_t> m;
            for (const auto &x : in["group"])
                m.push_back(x.get<std::uint64_t>());
            g.emplace(m);
        } else {
            auto ab = ints_of(in["curve"]);
            g.emplace(FinAbGroup::from_points(
                rational_points_mod_p(TwoTorsionCurve(ab.at(0), ab.at(1)), in["p"].get<unsigned long>())));
        }
        auto rep = aug_filtration(*g, in["rmax"].get<int>());
        out["group_invariants"] = jints(rep.group_invariants);
        Json qs = Json::array();
        for (const auto &q : rep.quotients)
            qs.push_back(jints(q));
        out["quotients"] = qs;
        out["first_quotient_matches_group"] = rep.first_quotient_matches_group;
        out["stabilization_index"] = rep.stabilization_index ? Json(*rep.stabilization_index) : Json(nullptr);
        return rep.first_quotient_matches_group;
    });
}

} // namespace

// ---------------------------------------------------------------------------

std::string ResultRecord::to_json_line() const
{
    Json j;
    j["kind"] = kind;
    j["version"] = kVersion;
    j["inputs"] = inputs;
    if (error)
        j["error"] = *error;
    else
        j["outputs"] = outputs;
    j["timing_ms"] = std::round(timing_ms * 1000.0) / 1000.0;
    return j.dump();
}

std::vector<BigInt> parse_int_list(const std::string &s, std::size_t expected)
{
    std::vector<BigInt> out;
    for (const auto &part : split(s, ','))
        out.push_back(parse_int(part));
    if (expected && out.size() != expected)
        throw std::invalid_argument("expected " + std::to_string(expected) + " comma-separated integers, got '" + s +
                                    "'");
    return out;
}

std::vector<std::uint64_t> parse_primes(const std::string &spec)
{
    auto as_u64 = [](const std::string &s) {
        BigInt v = parse_int(s);
        if (v < 0 || !v.fits_ulong_p())
            throw std::invalid_argument("out of range: '" + s + "'");
        return static_cast<std::uint64_t>(v.get_ui());
    };
    std::vector<std::uint64_t> out;
    if (auto dots = spec.find(".."); dots != std::string::npos) {
        const std::uint64_t lo = as_u64(spec.substr(0, dots)), hi = as_u64(spec.substr(dots + 2));
        if (lo > hi)
            throw std::invalid_argument("empty prime range '" + spec + "'");
        for (auto p : primes_up_to(hi))
            if (p >= lo)
                out.push_back(p);
    } else if (spec.find(',') != std::string::npos) {
        for (const auto &part : split(spec, ',')) {
            auto p = as_u64(part);
            if (!is_prime(BigInt(static_cast<unsigned long>(p))))
                throw std::invalid_argument(part + " is not prime");
            out.push_back(p);
        }
    } else {
        out = primes_up_to(as_u64(spec));
    }
    if (out.size() > 100000)
        throw std::invalid_argument("prime list too long");
    return out;
}

ConductorCache::ConductorCache(std::optional<std::string> dir)
{
    if (!dir)
        return;
    path_ = (fs::path(*dir) / "conductors.json").string();
    std::ifstream in(*path_);
    if (!in)
        return;
    try {
        auto j = nlohmann::json::parse(in);
        for (auto it = j.begin(); it != j.end(); ++it)
            entries_[it.key()] = it.value().get<std::string>();
    } catch (const std::exception &) {
        entries_.clear(); // unreadable cache: start over
    }
}

BigInt ConductorCache::conductor(const BigInt &a, const BigInt &b)
{
    const std::string key = a.get_str() + "," + b.get_str();
    if (auto it = entries_.find(key); it != entries_.end()) {
        BigInt v;
        if (v.set_str(it->second, 10) == 0 && v > 0) {
            ++hits_;
            return v;
        }
    }
    ++misses_;
    BigInt n = isoforge::conductor(TwoTorsionCurve(a, b));
    entries_[key] = n.get_str();
    dirty_ = true;
    return n;
}

void ConductorCache::save() const
{
    if (!path_ || !dirty_)
        return;
    std::error_code ec;
    const fs::path target(*path_);
    fs::create_directories(target.parent_path(), ec);
    if (ec)
        throw IoError("cannot create cache directory " + target.parent_path().string() + ": " + ec.message());
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[k, v] : entries_)
        j[k] = v;
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out << j.dump(1) << '\n';
        if (!out)
            throw IoError("cannot write " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec)
        throw IoError("cannot replace " + target.string() + ": " + ec.message());
}

int execute_plan(const RunPlan &plan, std::ostream &out, std::ostream &err)
{
    try {
        ConductorCache cache(plan.cache_dir);
        Sink sink(out, plan.output);
        Context ctx{plan, sink, cache, err};
        const std::string &c = plan.command;
        if (c == "analyze-curve")
            cmd_analyze(ctx);
        else if (c == "scholten build")
            cmd_scholten_build(ctx);
        else if (c == "scholten family")
            cmd_scholten_family(ctx);
        else if (c == "scholten verify")
            cmd_scholten_verify(ctx);
        else if (c == "scholten search")
            cmd_scholten_search(ctx);
        else if (c.rfind("check ", 0) == 0)
            cmd_check(ctx, c.substr(6));
        else if (c == "scan supersingular")
            cmd_scan(ctx);
        else if (c == "kgroup prove-skew")
            cmd_kgroup(ctx);
        else if (c == "filtration")
            cmd_filtration(ctx);
        else
            throw UsageError("unknown command '" + c + "'");
        cache.save();
        return ctx.exit_code;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoFailure;
    }
}

// ---------------------------------------------------------------------------
// argument parsing

std::variant<RunPlan, ParseStop> plan_from_args(const std::vector<std::string> &args)
{
    CLI::App app{"Exact arithmetic for elliptic curves, split Jacobians and symbol relations", "isoforge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunPlan plan;
    std::string cache_dir, output, csv;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--cache-dir", cache_dir, "conductor cache directory (default: $ISOGENY_FORGE_CACHE)");
        sub->add_option("--output,-o", output, "write records to this file instead of stdout");
        sub->add_option("--jobs,-j", plan.jobs, "worker threads (default: logical CPUs)");
    };

    // analyze-curve
    std::string a, b, ainvs, primes = "3..50";
    auto *analyze = app.add_subcommand("analyze-curve", "reduction type, Kodaira symbol and conductor per prime");
    auto *oa = analyze->add_option("--a", a, "E_{a,b}: y^2 = x(x - a)(x - b)");
    auto *ob = analyze->add_option("--b", b);
    auto *oainvs = analyze->add_option("--ainvs", ainvs, "a1,a2,a3,a4,a6 (rationals allowed)");
    analyze->add_option("--primes", primes, "N (primes <= N), LO..HI, or p1,p2,...");
    common(analyze);

    // scholten
    auto *scholten = app.add_subcommand("scholten", "genus-2 curves with split Jacobian");
    scholten->require_subcommand(1);
    std::string params, e1, e2, verify_primes = "50";
    std::array<std::string, 4> ranges;
    bool no_dedup = false;
    std::vector<std::string> predicates;
    auto *build = scholten->add_subcommand("build", "curve C_{a,b,c,d} and its degeneracy report");
    auto *family = scholten->add_subcommand("family", "orbit family with Igusa-Clebsch classes");
    auto *verify = scholten->add_subcommand("verify", "point-count certificate for Jac(C) ~ E1 x E2");
    auto *search = scholten->add_subcommand("search", "parameter grid search");
    for (auto *sub : {build, family, verify}) {
        sub->add_option("--params", params, "a,b,c,d");
        sub->add_option("--csv", csv, "batch input with header a,b,c,d");
        common(sub);
    }
    verify->add_option("--primes", verify_primes, "N (primes <= N), LO..HI, or p1,p2,...");
    verify->add_option("--e1", e1, "override the first factor (a,b)");
    verify->add_option("--e2", e2, "override the second factor (c,d)");
    const char *names[4] = {"--a", "--b", "--c", "--d"};
    for (std::size_t k = 0; k < 4; ++k)
        search->add_option(names[k], ranges[k], "LO..HI or a single value");
    search->add_option("--csv", csv, "grid from a CSV file with header a,b,c,d");
    search->add_flag("--no-dedup", no_dedup, "emit every smooth curve, not one per Igusa class");
    search->add_option("--predicate", predicates, "split-jacobian:BOUND or main1:P (repeatable)");
    common(search);

    // check
    auto *check = app.add_subcommand("check", "hypothesis checks");
    check->require_subcommand(1);
    std::vector<std::string> curves, factors;
    std::string p, deg, bound;
    bool unramified = false, all_good = false;
    auto *main1 = check->add_subcommand("main1", "at most one potentially supersingular factor");
    main1->add_option("--curve", curves, "a,b (repeatable)")->required();
    main1->add_option("--p", p)->required();
    common(main1);
    auto *main2 = check->add_subcommand("main2", "products of curves with isogeny degrees");
    main2->add_option("--factor", factors, "a,b;c,d@DEG (repeatable)")->required();
    main2->add_option("--p", p)->required();
    main2->add_flag("--unramified", unramified);
    main2->add_flag("--all-good", all_good);
    common(main2);
    auto *global2 = check->add_subcommand("global2", "prime filter p not dividing 6 N deg");
    global2->add_option("--a", a)->required();
    global2->add_option("--b", b)->required();
    global2->add_option("--deg", deg)->required();
    auto *gp = global2->add_option("--p", p);
    auto *gbound = global2->add_option("--bound", bound);
    common(global2);

    // scan
    auto *scan = app.add_subcommand("scan", "prime scans");
    scan->require_subcommand(1);
    auto *ss = scan->add_subcommand("supersingular", "good odd primes with a_p = 0 mod p");
    auto *sa = ss->add_option("--a", a);
    auto *sb = ss->add_option("--b", b);
    auto *sainvs = ss->add_option("--ainvs", ainvs);
    ss->add_option("--bound", bound)->required();
    common(ss);

    // kgroup
    auto *kgroup = app.add_subcommand("kgroup", "symbol relations over a prime field");
    kgroup->require_subcommand(1);
    auto *skew = kgroup->add_subcommand("prove-skew", "certify {a,b,X} + {b,a,X} = 0 and 2{a,a,X} = 0");
    std::string q, r = "2", curve = "1,-1", tail, convention = "negated-sum";
    skew->add_option("--q", q)->required();
    skew->add_option("--r", r);
    skew->add_option("--curve", curve, "a,b");
    skew->add_option("--tail", tail, "points x,y or O separated by ';'");
    skew->add_option("--convention", convention)->check(CLI::IsMember({"sum", "negated-sum"}));
    common(skew);

    // filtration
    auto *filt = app.add_subcommand("filtration", "quotients of powers of the augmentation ideal");
    std::string group, rmax = "3";
    auto *og = filt->add_option("--group", group, "cyclic orders m1,m2,...");
    auto *oc = filt->add_option("--curve", curve, "a,b (with --p)");
    auto *fp = filt->add_option("--p", p);
    filt->add_option("--rmax", rmax);
    common(filt);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        // show the help of the deepest subcommand that was named
        CLI::App *deepest = &app;
        for (auto *sub = deepest; !sub->get_subcommands().empty();)
            deepest = sub = sub->get_subcommands().front();
        return ParseStop{kOk, deepest->help()};
    } catch (const CLI::CallForVersion &) {
        return ParseStop{kOk, std::string(kVersion) + "\n"};
    } catch (const CLI::ParseError &e) {
        return ParseStop{kUsageError, std::string(e.what()) + "\nRun with --help for usage.\n"};
    }

    try {
        Json &in = plan.inputs;
        auto curve_input = [&](CLI::Option *oa_, CLI::Option *ob_, CLI::Option *oainvs_) {
            if (oainvs_->count()) {
                if (oa_->count() || ob_->count())
                    throw UsageError("--ainvs cannot be combined with --a/--b");
                auto parts = split(ainvs, ',');
                if (parts.size() != 5)
                    throw UsageError("--ainvs needs five comma-separated values");
                Json v = Json::array();
                for (const auto &s : parts)
                    v.push_back(jrat(parse_rat(s)));
                return Json{{"ainvs", v}};
            }
            if (!oa_->count() || !ob_->count())
                throw UsageError("give both --a and --b, or --ainvs");
            return Json{{"a", jint(parse_int(a))}, {"b", jint(parse_int(b))}};
        };
        auto pair_json = [](const std::string &s) { return jints(parse_int_list(s, 2)); };
        auto positive = [](const std::string &s, const char *what) {
            BigInt v = parse_int(s);
            if (v < 1 || !v.fits_ulong_p())
                throw UsageError(std::string(what) + " must be a positive integer");
            return static_cast<std::uint64_t>(v.get_ui());
        };

        auto *sub = app.get_subcommands().front();
        plan.command = sub->get_name();
        CLI::App *leaf = sub;
        if (!sub->get_subcommands().empty()) {
            leaf = sub->get_subcommands().front();
            plan.command += " " + leaf->get_name();
        }

        if (leaf == analyze) {
            in["curve"] = curve_input(oa, ob, oainvs);
            in["primes"] = parse_primes(primes);
        } else if (leaf == build || leaf == family || leaf == verify) {
            if (!csv.empty() == !params.empty())
                throw UsageError("give exactly one of --params and --csv");
            if (!params.empty())
                in["params"] = jints(parse_int_list(params, 4));
            if (leaf == verify) {
                in["primes"] = parse_primes(verify_primes);
                if (!e1.empty())
                    in["e1"] = pair_json(e1);
                if (!e2.empty())
                    in["e2"] = pair_json(e2);
            }
        } else if (leaf == search) {
            if (!csv.empty()) {
                for (const auto &rg : ranges)
                    if (!rg.empty())
                        throw UsageError("--csv cannot be combined with parameter ranges");
            } else {
                Json rs = Json::array();
                for (std::size_t k = 0; k < 4; ++k) {
                    if (ranges[k].empty())
                        throw UsageError(std::string("missing ") + names[k] + " range");
                    auto dots = ranges[k].find("..");
                    BigInt lo = parse_int(ranges[k].substr(0, dots));
                    BigInt hi = dots == std::string::npos ? lo : parse_int(ranges[k].substr(dots + 2));
                    if (lo > hi)
                        throw UsageError(std::string("empty range for ") + names[k]);
                    rs.push_back(Json::array({jint(lo), jint(hi)}));
                }
                in["ranges"] = rs;
            }
            in["dedup"] = !no_dedup;
            Json preds = Json::array();
            for (const auto &spec : predicates) {
                auto colon = spec.find(':');
                const std::string name = spec.substr(0, colon);
                if (colon == std::string::npos)
                    throw UsageError("predicate '" + spec + "' needs a parameter");
                if (name == "split-jacobian")
                    preds.push_back(Json{{"name", name}, {"bound", positive(spec.substr(colon + 1), "bound")}});
                else if (name == "main1")
                    preds.push_back(Json{{"name", name}, {"p", jint(parse_int(spec.substr(colon + 1)))}});
                else
                    throw UsageError("unknown predicate '" + name + "'");
            }
            in["predicates"] = preds;
        } else if (leaf == main1) {
            Json cs = Json::array();
            for (const auto &c : curves)
                cs.push_back(pair_json(c));
            in["curves"] = cs;
            in["p"] = jint(parse_int(p));
        } else if (leaf == main2) {
            Json fs_ = Json::array();
            for (const auto &f : factors) {
                auto at = f.find('@');
                if (at == std::string::npos)
                    throw UsageError("factor '" + f + "' needs @DEGREE");
                Json cs = Json::array();
                for (const auto &c : split(f.substr(0, at), ';'))
                    cs.push_back(pair_json(c));
                fs_.push_back(Json{{"curves", cs}, {"degree", jint(parse_int(f.substr(at + 1)))}});
            }
            in["factors"] = fs_;
            in["p"] = jint(parse_int(p));
            in["unramified"] = unramified;
            in["all_good"] = all_good;
        } else if (leaf == global2) {
            if (!gp->count() && !gbound->count())
                throw UsageError("give --p, --bound, or both");
            in["curve"] = Json{{"a", jint(parse_int(a))}, {"b", jint(parse_int(b))}};
            in["deg"] = jint(parse_int(deg));
            if (gp->count())
                in["p"] = jint(parse_int(p));
            if (gbound->count())
                in["bound"] = positive(bound, "--bound");
        } else if (leaf == ss) {
            in["curve"] = curve_input(sa, sb, sainvs);
            in["bound"] = positive(bound, "--bound");
        } else if (leaf == skew) {
            const std::uint64_t qq = positive(q, "--q");
            if (!is_prime(BigInt(static_cast<unsigned long>(qq))) || qq == 2)
                throw UsageError("--q must be an odd prime");
            in["q"] = qq;
            in["r"] = positive(r, "--r");
            in["curve"] = pair_json(curve);
            Json pts = Json::array();
            if (!tail.empty())
                for (const auto &pt : split(tail, ';'))
                    pts.push_back(pt == "O" ? Json("O") : pair_json(pt));
            in["tail"] = pts;
            in["convention"] = convention;
        } else if (leaf == filt) {
            if (og->count() == (oc->count() || fp->count()))
                throw UsageError("give either --group or --curve with --p");
            if (og->count()) {
                Json m = Json::array();
                for (const auto &x : parse_int_list(group))
                    m.push_back(positive(x.get_str(), "cyclic order"));
                in["group"] = m;
            } else {
                if (!fp->count() || !oc->count())
                    throw UsageError("--curve needs --p");
                in["curve"] = pair_json(curve);
                in["p"] = positive(p, "--p");
            }
            in["rmax"] = positive(rmax, "--rmax");
        }
    } catch (const UsageError &e) {
        return ParseStop{kUsageError, std::string("error: ") + e.what() + "\n"};
    } catch (const std::invalid_argument &e) {
        return ParseStop{kUsageError, std::string("error: ") + e.what() + "\n"};
    }

    if (!csv.empty())
        plan.csv = csv;
    if (!output.empty())
        plan.output = output;
    if (!cache_dir.empty())
        plan.cache_dir = cache_dir;
    else if (const char *env = std::getenv("ISOGENY_FORGE_CACHE"); env && *env)
        plan.cache_dir = env;
    return plan;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    auto parsed = plan_from_args(args);
    if (auto *stop = std::get_if<ParseStop>(&parsed)) {
        (stop->exit_code == kOk ? out : err) << stop->message;
        return stop->exit_code;
    }
    return execute_plan(std::get<RunPlan>(parsed), out, err);
}

} // namespace isoforge::cli
