#include "pscalc/runner.hpp"

#include "pscalc/suites.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

namespace pscalc {

namespace {

std::string backend_name(Backend b) { return b == Backend::Exact ? "exact" : "float"; }

ojson bounds_json(const Bounds& b) {
    ojson j;
    j["L"] = b.L;
    j["L_big"] = b.L_big;
    j["W"] = b.W;
    j["step"] = b.step;
    j["backend"] = backend_name(b.backend);
    j["tolerance"] = b.tolerance;
    j["pivot"] = b.pivot;
    j["seed"] = b.seed;
    j["word_cap"] = b.word_cap;
    return j;
}

Bounds bounds_from_json(const ojson& j) {
    Bounds b;
    b.L = j.at("L").get<int>();
    b.L_big = j.at("L_big").get<int>();
    b.W = j.at("W").get<int>();
    b.step = j.at("step").get<int>();
    b.backend = j.at("backend").get<std::string>() == "exact" ? Backend::Exact : Backend::Float;
    b.tolerance = j.at("tolerance").get<double>();
    b.pivot = j.at("pivot").get<double>();
    b.seed = j.at("seed").get<std::uint64_t>();
    b.word_cap = j.at("word_cap").get<std::size_t>();
    return b;
}

int param_int(const CheckDecl& c, const char* key, int dflt) {
    return c.params.contains(key) ? c.params[key].get<int>() : dflt;
}

std::string lcm_name(LcmStatus s) {
    switch (s) {
        case LcmStatus::Yes: return "yes";
        case LcmStatus::CounterexampleFree: return "counterexample-free";
        case LcmStatus::No: return "no";
    }
    return "?";
}

// Which representation a witness expression is evaluated in.
std::string witness_target(const CheckDecl& c, const std::string& kind) {
    if (kind == "compact-alignment" || kind == "k-empty" || kind == "wick") return "fock";
    const CheckInfo* info = find_check(c.check);
    if (info && info->needs_action) return "crossed";
    if (!c.rep.empty()) return "rep:" + c.rep;
    return "fock";
}

// Everything built once per run and shared by the checks.
template <class T>
class Context {
public:
    Context(const Scenario& sc, const Bounds& b)
        : sc_(sc), b_(b), m_(build_monoid(sc.monoid)), spec_(build_product_system<T>(m_, sc)) {
        spec_.tol = tol();
        ref_ = std::make_unique<Ball>(m_, b.L_big + b.step);
        eng_ = std::make_unique<IdealEngine>(m_, *ref_);
    }
    Context(const Context&) = delete;

    const Scenario& scenario() const { return sc_; }
    const Bounds& bounds() const { return b_; }
    const Monoid& monoid() const { return m_; }
    const ProductSystemSpec<T>& spec() const { return spec_; }
    const IdealEngine& engine() const { return *eng_; }
    Tolerance tol() const { return Tolerance{b_.tolerance, b_.pivot}; }
    FockCovBounds cov_bounds() const { return FockCovBounds{b_.W, b_.L, b_.L_big, b_.step}; }

    const NeutralLattice& lattice() {
        if (!lat_) {
            letters_ = std::make_unique<Ball>(m_, b_.W);
            lat_ = build_lattice(*eng_, *letters_, b_.W, b_.word_cap);
        }
        return *lat_;
    }

    std::shared_ptr<FiberSystem<T>> fibers(int L) {
        auto& f = fs_[L];
        if (!f) f = std::make_shared<FiberSystem<T>>(m_, spec_, L);
        return f;
    }
    std::shared_ptr<FockRep<T>> fock(int L) {
        auto& f = fock_[L];
        if (!f) f = std::make_shared<FockRep<T>>(fibers(L));
        return f;
    }

    RepFactory<T> factory(const std::string& name) {
        return [this, name](int L) { return rep(name, L); };
    }
    RepFactory<T> fock_factory() {
        return [this](int L) -> std::shared_ptr<Representation<T>> { return fock(L); };
    }

    std::shared_ptr<Representation<T>> rep(const std::string& name, int L) {
        auto key = std::make_pair(name, L);
        auto it = reps_.find(key);
        if (it != reps_.end()) return it->second;
        const RepDecl* d = sc_.rep(name);
        if (!d) throw StructuralError("unknown representation '" + name + "'");
        std::shared_ptr<Representation<T>> r;
        if (d->kind == "fock") {
            r = std::make_shared<FockRep<T>>(fibers(L), name);
        } else if (d->kind == "left-regular") {
            r = std::make_shared<ShiftModelRep<T>>(m_, L, m_, L, m_.generators(), name);
        } else if (d->kind == "shift") {
            Monoid q = build_monoid(d->doc.at("carrier"), "/carrier");
            std::vector<Elem> images;
            int longest = 0;
            for (const auto& im : d->doc.at("images")) {
                images.push_back(parse_elem(q, im, "/images"));
                longest = std::max(longest, carrier_length(q, images.back()));
            }
            int Lq = d->doc.contains("carrier_truncation") ? d->doc["carrier_truncation"].get<int>() : longest * L + 2;
            r = std::make_shared<ShiftModelRep<T>>(m_, L, std::move(q), Lq, std::move(images), name);
        } else if (d->kind == "explicit") {
            std::vector<SpMat<T>> gens;
            const auto& g = d->doc.at("generators");
            for (std::size_t k = 0; k < g.size(); ++k) gens.push_back(parse_matrix<T>(g[k], "/generators/" + std::to_string(k)));
            r = std::make_shared<ExplicitRep<T>>(m_, L, std::move(gens), name);
        } else {
            throw StructuralError("unknown representation kind '" + d->kind + "'");
        }
        if (d->doc.contains("grading")) r->declared_grading = d->doc["grading"].get<std::string>();
        reps_[key] = r;
        return r;
    }

    const GaugeAction<T>& action() {
        if (!act_) act_ = build_action<T>(m_, sc_);
        return *act_;
    }
    std::shared_ptr<CrossedSystem<T>> crossed(int L) {
        auto& c = crossed_[L];
        if (!c) {
            c = build_crossed(m_, spec_, action(), L);
            c->declared_grading = "crossed product, gauge-graded";
        }
        return c;
    }

    const LcmVerdict& lcm(int radius) {
        auto it = lcm_.find(radius);
        if (it == lcm_.end()) it = lcm_.emplace(radius, is_right_lcm_up_to(*eng_, radius)).first;
        return it->second;
    }

    std::shared_ptr<Representation<T>> target(const std::string& t, int L) {
        if (t == "fock") return fock(L);
        if (t == "crossed") return crossed(L);
        if (t.rfind("rep:", 0) == 0) return rep(t.substr(4), L);
        throw StructuralError("unknown witness target '" + t + "'");
    }

private:
    static int carrier_length(const Monoid& q, const Elem& g) {
        if (q.eq(g, q.identity())) return 0;
        for (int r = 1; r <= 64; ++r) {
            Ball b(q, r);
            auto i = b.index_of(g);
            if (i >= 0) return b.length(static_cast<std::size_t>(i));
        }
        throw StructuralError("shift image " + q.format(g) + " is not a product of at most 64 carrier generators");
    }

    const Scenario& sc_;
    Bounds b_;
    Monoid m_;
    ProductSystemSpec<T> spec_;
    std::unique_ptr<Ball> ref_, letters_;
    std::unique_ptr<IdealEngine> eng_;
    std::optional<NeutralLattice> lat_;
    std::map<int, std::shared_ptr<FiberSystem<T>>> fs_;
    std::map<int, std::shared_ptr<FockRep<T>>> fock_;
    std::map<std::pair<std::string, int>, std::shared_ptr<Representation<T>>> reps_;
    std::optional<GaugeAction<T>> act_;
    std::map<int, std::shared_ptr<CrossedSystem<T>>> crossed_;
    std::map<int, LcmVerdict> lcm_;
};

template <class T>
CheckVerdict<T> for_each_ideal(Context<T>& ctx, const std::string& name,
                               const std::function<CheckVerdict<T>(const Ideal&)>& one) {
    std::vector<CheckVerdict<T>> parts;
    const auto& lat = ctx.lattice();
    for (const auto& e : lat.entries) {
        auto v = one(e.ideal);
        if (v.status != Status::Pass)
            v.message = "x=" + ctx.engine().describe(e.ideal) + ": " + v.message;
        parts.push_back(std::move(v));
    }
    auto out = combine(name, parts);
    if (out.status == Status::Pass) out.message = "holds for all " + std::to_string(parts.size()) + " lattice ideals";
    out.stability = {ctx.bounds().L};
    out.notes.push_back({"ideals", std::to_string(parts.size())});
    out.notes.push_back({"word-length bound", std::to_string(ctx.bounds().W)});
    return out;
}

template <class T>
CheckVerdict<T> run_check(Context<T>& ctx, const CheckDecl& c) {
    const Bounds& b = ctx.bounds();
    const auto tol = ctx.tol();
    const auto& eng = ctx.engine();
    const Monoid& m = ctx.monoid();
    const std::string& n = c.check;

    if (n == "ideal-oracle") {
        Ball ball(m, param_int(c, "radius", b.L));
        return check_ideal_oracle<T>(eng, ball, param_int(c, "count", 200), param_int(c, "max_len", 4), b.seed);
    }
    if (n == "reduced-form") {
        Ball ball(m, param_int(c, "radius", b.L));
        return check_reduced_form<T>(eng, ball, param_int(c, "count", 100), param_int(c, "max_len", 4), b.seed);
    }
    if (n == "fock-axioms") {
        auto fs = ctx.fibers(b.L);
        auto r = check_product_system_axioms(*fs);
        CheckVerdict<T> v;
        v.check = n;
        v.instances = r.checked;
        v.stability = {b.L};
        v.notes.push_back({"residual", std::to_string(r.residual)});
        if (r.pass) {
            v.message = "product-system containments hold on the ball";
        } else {
            v.status = Status::Violation;
            v.message = r.violation;
            v.witness = Witness<T>{"fiber-axiom", {}, {}, r.violation, 0};
        }
        return v;
    }
    if (n == "projection-algebra") return check_projection_algebra(*ctx.fock(b.L), eng, ctx.lattice());
    if (n == "fock-formulas")
        return check_fock_formulas(*ctx.fibers(b.L), *ctx.fock(b.L), eng, ctx.lattice(), param_int(c, "count", 200),
                                   b.seed, tol);
    if (n == "right-lcm") {
        int radius = param_int(c, "radius", b.L);
        const auto& l = ctx.lcm(radius);
        CheckVerdict<T> v;
        v.check = n;
        v.stability = {radius};
        v.instances = l.table.size();
        v.notes.push_back({"verdict", lcm_name(l.status)});
        v.message = "right LCM up to radius " + std::to_string(radius) + ": " + lcm_name(l.status);
        if (l.witness_pair) {
            v.notes.push_back({"witness pair", m.format(l.witness_pair->first) + ", " + m.format(l.witness_pair->second)});
            v.notes.push_back({"witness kind", l.witness_kind});
        }
        if (l.witness_ideal) {
            v.notes.push_back({"witness ideal", eng.describe(*l.witness_ideal)});
            v.message += " (witness ideal " + eng.describe(*l.witness_ideal) + ")";
        }
        if (c.expect && *c.expect != lcm_name(l.status)) {
            v.status = Status::Violation;
            v.message = "expected " + *c.expect + ", found " + lcm_name(l.status);
            v.witness = Witness<T>{"right-lcm", {}, {}, v.message, 0};
        }
        return v;
    }
    if (n == "wick") return check_wick(*ctx.fock(b.L), eng, param_int(c, "length", 6), tol);
    if (n == "compact-alignment") return check_compact_alignment(*ctx.fock(b.L), eng, b.W, tol);
    if (n == "nica") return check_nica(*ctx.rep(c.rep, b.L), *ctx.fock(b.L), eng, b.W, tol);
    if (n == "rep-axioms") return check_rep_axioms(*ctx.rep(c.rep, b.L), tol);
    if (n == "t-conditions") {
        auto parts = check_T_conditions(*ctx.rep(c.rep, b.L), eng, ctx.lattice(), tol);
        auto v = combine(n, parts);
        for (const auto& p : parts) v.notes.push_back({p.check, status_name(p.status)});
        if (v.status == Status::Pass) v.message = "(T1)-(T4) hold up to W=" + std::to_string(b.W);
        v.stability = {b.L};
        return v;
    }
    if (n == "theorem-a") return check_theoremA(ctx.factory(c.rep), m, ctx.cov_bounds(), tol);
    if (n == "kernel-inclusion") return check_kernel_inclusion(ctx.factory(c.rep), ctx.fock_factory(), m, ctx.cov_bounds(), tol);
    if (n == "cross-validation") {
        CheckVerdict<T> v;
        v.check = n;
        v.stability = {b.L};
        bool lcm = ctx.lcm(std::max(1, b.W / 2)).status != LcmStatus::No;
        bool semigroup = ctx.scenario().semigroup_system();
        std::vector<std::string> disagreements;
        for (const auto& name : c.reps) {
            auto ta = check_theoremA(ctx.factory(name), m, ctx.cov_bounds(), tol);
            ++v.instances;
            std::string line = "theorem-a " + status_name(ta.status);
            if (lcm) {
                auto ni = check_nica(*ctx.rep(name, b.L), *ctx.fock(b.L), eng, b.W, tol);
                line += ", nica " + status_name(ni.status);
                if (ni.status != ta.status) disagreements.push_back(name + ": nica vs theorem-a");
            }
            if (semigroup) {
                auto tc = combine<T>("t", check_T_conditions(*ctx.rep(name, b.L), eng, ctx.lattice(), tol));
                line += ", t-conditions " + status_name(tc.status);
                if (tc.status != ta.status) disagreements.push_back(name + ": t-conditions vs theorem-a");
            }
            if (ta.status == Status::Inconclusive) disagreements.push_back(name + ": theorem-a inconclusive");
            v.notes.push_back({name, line});
        }
        if (disagreements.empty()) {
            v.message = "all oracles agree on " + std::to_string(c.reps.size()) + " representations";
        } else {
            v.status = Status::Violation;
            v.message = "disagreement: " + disagreements.front();
            v.witness = Witness<T>{"cross-validation", {}, {}, v.message, 0};
        }
        return v;
    }
    if (n == "crossed-axioms") return check_crossed_axioms(*ctx.crossed(b.L), tol);
    if (n == "core-identity") {
        auto cs = ctx.crossed(b.L);
        return for_each_ideal<T>(ctx, n, [&](const Ideal& x) { return check_core_identity(*cs, eng, ctx.lattice(), x, tol); });
    }
    if (n == "core-gauge-invariance") {
        auto cs = ctx.crossed(b.L);
        return for_each_ideal<T>(ctx, n,
                                 [&](const Ideal& x) { return check_core_gauge_invariance(*cs, eng, ctx.lattice(), x, tol); });
    }
    if (n == "expectation-faithful")
        return check_expectation_faithful(*ctx.crossed(b.L), static_cast<std::size_t>(param_int(c, "samples", 100)),
                                          b.seed, tol);
    if (n == "idrep-fock-covariant") return check_idrep_fock_covariant(m, ctx.spec(), ctx.action(), ctx.cov_bounds(), tol);
    throw StructuralError("unknown check '" + n + "'");
}

template <class T>
ojson expression_json(const Monoid& m, const Expression<T>& e) {
    ojson out = ojson::array();
    for (const auto& t : e.terms) {
        ojson term;
        term["coef"] = scalar_to_json(t.coef);
        ojson steps = ojson::array();
        for (const auto& s : t.steps) {
            ojson st;
            st["p"] = elem_to_json(m, s.p);
            st["k"] = s.k;
            st["star"] = s.star;
            steps.push_back(std::move(st));
        }
        term["steps"] = std::move(steps);
        out.push_back(std::move(term));
    }
    return out;
}

template <class T>
Expression<T> expression_from_json(const Monoid& m, const ojson& j) {
    Expression<T> e;
    for (const auto& term : j) {
        Term<T> t{parse_scalar<T>(json::parse(term.at("coef").dump()), "/coef"), {}};
        for (const auto& st : term.at("steps"))
            t.steps.push_back(Step{parse_elem(m, json::parse(st.at("p").dump()), "/p"), st.at("k").get<int>(),
                                   st.at("star").get<bool>()});
        e.terms.push_back(std::move(t));
    }
    return e;
}

template <class T>
ojson entry_json(Context<T>& ctx, std::size_t index, const CheckDecl& c, const CheckVerdict<T>& v) {
    const Monoid& m = ctx.monoid();
    ojson e;
    e["index"] = index;
    e["check"] = c.check;
    if (!c.rep.empty()) e["rep"] = c.rep;
    e["status"] = status_name(v.status);
    e["message"] = v.message;
    e["instances"] = v.instances;
    e["stability"] = v.stability;
    ojson notes = ojson::object();
    for (const auto& [k, val] : v.notes) notes[k] = val;
    e["notes"] = std::move(notes);
    if (v.witness) {
        const auto& w = *v.witness;
        ojson wj;
        wj["kind"] = w.kind;
        wj["detail"] = w.detail;
        wj["rank"] = w.rank;
        wj["target"] = witness_target(c, w.kind);
        wj["truncation"] = ctx.bounds().L;
        ojson ideals = ojson::array();
        for (const auto& word : w.ideals) ideals.push_back(ojson::parse(word_to_json(m, word).dump()));
        wj["ideals"] = std::move(ideals);
        wj["expression"] = expression_json(m, w.expr);
        e["witness"] = std::move(wj);
    }
    return e;
}

ojson error_entry(std::size_t index, const CheckDecl& c, const std::string& kind, const std::string& what) {
    ojson e;
    e["index"] = index;
    e["check"] = c.check;
    if (!c.rep.empty()) e["rep"] = c.rep;
    e["status"] = "error";
    e["error"] = kind;
    e["message"] = what;
    return e;
}

std::string cache_key(const std::string& hash, const Bounds& b, std::size_t index, const CheckDecl& c) {
    json k;
    k["version"] = kVersion;
    k["scenario"] = hash;
    k["bounds"] = json::parse(bounds_json(b).dump());
    k["index"] = index;
    k["check"] = c.doc;
    return sha256_hex(k.dump());
}

std::optional<ojson> cache_load(const std::optional<std::string>& dir, const std::string& key) {
    if (!dir) return std::nullopt;
    std::ifstream in(std::filesystem::path(*dir) / (key + ".json"));
    if (!in) return std::nullopt;
    try {
        return ojson::parse(in);
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries are recomputed
    }
}

void cache_store(const std::optional<std::string>& dir, const std::string& key, const ojson& entry) {
    if (!dir) return;
    std::filesystem::create_directories(*dir);
    auto final_path = std::filesystem::path(*dir) / (key + ".json");
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << entry.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, final_path);
}

template <class T>
RunResult run_typed(const Scenario& sc, const RunOptions& opt, const Bounds& b) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    RunResult res;
    const std::string hash = scenario_hash(sc.doc);
    ojson report;
    report["schema"] = 1;
    report["tool"] = "pscalc";
    report["version"] = kVersion;
    ojson scj;
    scj["name"] = sc.name;
    scj["hash"] = hash;
    scj["document"] = ojson::parse(sc.doc.dump());
    report["scenario"] = std::move(scj);
    ojson env;
    env["backend"] = backend_name(b.backend);
    env["bounds"] = bounds_json(b);
    report["environment"] = std::move(env);

    std::unique_ptr<Context<T>> ctx;
    std::string setup_error;
    try {
        ctx = std::make_unique<Context<T>>(sc, b);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }

    ojson checks = ojson::array();
    ojson timing = ojson::array();
    std::map<std::string, int> counts;
    int worst = 0;  // 0 pass, 1 inconclusive, 2 violation, 3 error
    for (std::size_t i = 0; i < sc.checks.size(); ++i) {
        const auto& c = sc.checks[i];
        auto tc = clock::now();
        ojson entry;
        std::string key = cache_key(hash, b, i, c);
        if (auto hit = cache_load(opt.cache_dir, key)) {
            entry = std::move(*hit);
            ++res.cache_hits;
        } else if (!ctx) {
            entry = error_entry(i, c, "structural", "scenario setup failed: " + setup_error);
        } else {
            try {
                entry = entry_json(*ctx, i, c, run_check(*ctx, c));
                cache_store(opt.cache_dir, key, entry);
            } catch (const ResourceError& e) {
                entry = error_entry(i, c, "resource", e.what());
            } catch (const StructuralError& e) {
                entry = error_entry(i, c, "structural", e.what());
            } catch (const std::exception& e) {
                entry = error_entry(i, c, "internal", e.what());
            }
        }
        std::string st = entry["status"].get<std::string>();
        ++counts[st];
        int rank = st == "pass" ? 0 : st == "inconclusive" ? 1 : st == "violation" ? 2 : 3;
        worst = std::max(worst, rank);
        checks.push_back(std::move(entry));
        ojson tj;
        tj["index"] = i;
        tj["ms"] = std::chrono::duration<double, std::milli>(clock::now() - tc).count();
        timing.push_back(std::move(tj));
    }
    report["checks"] = std::move(checks);
    static const char* names[] = {"pass", "inconclusive", "violation", "error"};
    static const int codes[] = {kExitPass, kExitInconclusive, kExitViolation, kExitError};
    ojson summary;
    summary["status"] = names[worst];
    summary["exit_code"] = codes[worst];
    ojson cj = ojson::object();
    for (const char* s : names) cj[s] = counts[s];
    summary["counts"] = std::move(cj);
    report["summary"] = std::move(summary);
    if (opt.timing) {
        ojson t;
        t["checks"] = std::move(timing);
        t["total_ms"] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        t["cache_hits"] = res.cache_hits;
        report["timing"] = std::move(t);
    }
    res.report = std::move(report);
    res.exit_code = codes[worst];
    return res;
}

template <class T>
ReplayResult replay_typed(const Scenario& sc, const Bounds& b, const ojson& report, std::optional<std::size_t> only) {
    ReplayResult out;
    Context<T> ctx(sc, b);
    bool all = true;
    std::size_t replayed = 0;
    for (const auto& e : report.at("checks")) {
        std::size_t i = e.at("index").get<std::size_t>();
        if (only && *only != i) continue;
        if (!e.contains("witness")) continue;
        ++replayed;
        const auto& w = e["witness"];
        const std::string recorded = e.at("status").get<std::string>();
        const CheckDecl& c = sc.checks.at(i);
        std::string label = "check #" + std::to_string(i) + " " + c.check + " [" + w.at("kind").get<std::string>() + "]";
        std::string got;
        std::string how;
        try {
            if (!w.at("expression").empty()) {
                auto expr = expression_from_json<T>(ctx.monoid(), w["expression"]);
                auto rep = ctx.target(w.at("target").get<std::string>(), w.at("truncation").get<int>());
                Status s = replay_expression(*rep, expr, b.tolerance);
                if (s == Status::Violation && w["kind"] == "theorem-a-ii") {
                    Witness<T> wt{w["kind"].get<std::string>(), expr, {}, "", 0};
                    for (const auto& word : w.at("ideals"))
                        wt.ideals.push_back(word_from_json(ctx.monoid(), json::parse(word.dump()), "/ideals"));
                    auto big = ctx.target(w.at("target").get<std::string>(), b.L_big);
                    if (!theoremA_hypothesis_holds(*big, ctx.engine(), wt)) s = Status::Inconclusive;
                }
                got = status_name(s);
                how = "expression re-evaluated in " + rep->name();
            } else {
                auto v = run_check(ctx, c);
                got = status_name(v.status);
                how = "check re-run";
                if (v.message != e.at("message").get<std::string>()) {
                    got += " (message differs)";
                }
            }
        } catch (const std::exception& ex) {
            got = std::string("error: ") + ex.what();
        }
        bool same = got == recorded;
        all = all && same;
        out.lines.push_back(label + ": recorded " + recorded + ", replayed " + got + " (" + how + ")" +
                            (same ? "" : "  MISMATCH"));
    }
    if (replayed == 0) out.lines.push_back("no witnesses to replay");
    out.exit_code = all ? kExitPass : kExitViolation;
    return out;
}

}  // namespace

Bounds effective_bounds(const Scenario& sc, const RunOptions& opt) {
    Bounds b = sc.bounds;
    if (opt.L) b.L = *opt.L;
    if (opt.L_big) b.L_big = *opt.L_big;
    if (opt.W) b.W = *opt.W;
    if (opt.backend) b.backend = *opt.backend;
    if (opt.tolerance) b.tolerance = *opt.tolerance;
    if (opt.seed) b.seed = *opt.seed;
    if (b.L_big < b.L) b.L_big = b.L;
    return b;
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
    Bounds b = effective_bounds(sc, opt);
    if (b.backend == Backend::Exact) return run_typed<GaussRat>(sc, opt, b);
    return run_typed<CFloat>(sc, opt, b);
}

ReplayResult replay_report(const ojson& report, std::optional<std::size_t> index) {
    ReplayResult out;
    try {
        auto parsed = parse_scenario(json::parse(report.at("scenario").at("document").dump()));
        if (!parsed.ok()) {
            out.lines.push_back("embedded scenario is invalid: " + parsed.errors.front().path + ": " +
                                parsed.errors.front().message);
            return out;
        }
        Bounds b = bounds_from_json(report.at("environment").at("bounds"));
        if (b.backend == Backend::Exact) return replay_typed<GaussRat>(*parsed.scenario, b, report, index);
        return replay_typed<CFloat>(*parsed.scenario, b, report, index);
    } catch (const std::exception& e) {
        out.lines.push_back(std::string("replay failed: ") + e.what());
        out.exit_code = kExitError;
        return out;
    }
}

}  // namespace pscalc
