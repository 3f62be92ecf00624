// Acceptance runner: one PASS/FAIL line per criterion, with the tolerances
// and time limits pinned below. Exit status is the number of failures.

#include "pscalc/runner.hpp"
#include "pscalc/suites.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace pscalc;

namespace {

constexpr double kTolerance = 1e-9;  // float comparisons only; every criterion runs on the exact backend

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

json load_bundled(const std::string& name) {
    std::ifstream in(std::string(PSCALC_SCENARIO_DIR) + "/" + name + ".json");
    if (!in) throw std::runtime_error("missing bundled scenario " + name);
    return json::parse(in);
}

std::vector<std::string> bundled_names() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(PSCALC_SCENARIO_DIR))
        if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

Scenario parse_or_throw(const json& doc) {
    auto r = parse_scenario(doc);
    if (!r.ok()) throw std::runtime_error("scenario invalid: " + r.errors.front().path + ": " + r.errors.front().message);
    return *r.scenario;
}

ojson run_doc(const json& doc, RunOptions opt = {}) {
    opt.timing = true;
    opt.tolerance = kTolerance;
    opt.backend = Backend::Exact;
    return run_scenario(parse_or_throw(doc), opt).report;
}

double check_seconds(const ojson& report, std::size_t i) { return report["timing"]["checks"][i]["ms"].get<double>() / 1000; }

struct Family {
    std::string name;
    json monoid;
};

const std::vector<Family>& families() {
    static const std::vector<Family> f = {
        {"N", {{"family", "lattice"}, {"rank", 1}}},
        {"N2", {{"family", "lattice"}, {"rank", 2}}},
        {"F2", {{"family", "free"}, {"rank", 2}}},
        {"<2,3>", {{"family", "numerical"}, {"generators", {2, 3}}}},
        {"N x| Z>0", json::parse(R"({"family": "affine", "generators":
            [{"b": "1", "a": "1"}, {"b": "0", "a": "2"}, {"b": "0", "a": "3"}]})")},
    };
    return f;
}

// X_P scenario at L with a reference ball of radius L+1.
json family_doc(const Family& f, json checks, int L = 8) {
    json d;
    d["schema"] = 1;
    d["name"] = "acceptance";
    d["monoid"] = f.monoid;
    d["product_system"] = "X_P";
    d["representations"] = json::array({json{{"name", "lambda"}, {"kind", "fock"}}});
    d["bounds"] = json{{"L", L}, {"L_big", L}, {"step", 1}, {"W", 4}, {"seed", 2024}};
    d["checks"] = std::move(checks);
    return d;
}

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

// Every check of the report must have status `want`; reports the first miss.
void expect_status(Outcome& o, const std::string& label, const ojson& report, const std::string& want) {
    for (const auto& c : report["checks"])
        if (c["status"] != want)
            o.fail(label + " #" + std::to_string(c["index"].get<int>()) + " " + c["check"].get<std::string>() + ": " +
                   c["status"].get<std::string>() + " " + c["message"].get<std::string>());
}

// Per-family single-check criterion with a per-family time limit.
Outcome per_family(const json& check, double limit, const std::vector<Family>& fams) {
    Outcome o;
    std::ostringstream d;
    for (const auto& f : fams) {
        auto rep = run_doc(family_doc(f, json::array({check})));
        expect_status(o, f.name, rep, "pass");
        double s = check_seconds(rep, 0);
        if (s >= limit) o.fail(f.name + " took " + std::to_string(s) + "s");
        d << f.name << " " << rep["checks"][0]["instances"].get<std::size_t>() << " inst " << std::fixed
          << std::setprecision(2) << s << "s; ";
    }
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome criterion1() {
    return per_family({{"check", "ideal-oracle"}, {"params", {{"count", 200}, {"max_len", 4}, {"radius", 8}}}}, 5.0,
                      families());
}

Outcome criterion2() {
    return per_family({{"check", "reduced-form"}, {"params", {{"count", 100}, {"max_len", 4}, {"radius", 8}}}}, 5.0,
                      families());
}

Outcome criterion3() { return per_family("projection-algebra", 5.0, families()); }

Outcome criterion4() {
    Outcome o = per_family({{"check", "fock-formulas"}, {"params", {{"count", 200}}}}, 10.0, families());
    // The non-X_P system as well.
    json nil = load_bundled("n-nilpotent");
    nil["checks"] = json::array({json{{"check", "fock-formulas"}, {"params", {{"count", 200}}}}});
    auto rep = run_doc(nil);
    expect_status(o, "nilpotent", rep, "pass");
    if (check_seconds(rep, 0) >= 10.0) o.fail("nilpotent too slow");
    if (o.pass) o.detail += "nilpotent ok";
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::vector<Family> fams = {families()[1], families()[2]};
    o = per_family({{"check", "right-lcm"}}, 5.0, fams);
    for (const auto& f : fams) {
        // F2's ball grows geometrically; L=6 keeps the exhaustive pass inside the time limit.
        int L = f.name == "F2" ? 6 : 8;
        json d = family_doc(f, json::array({"right-lcm", json{{"check", "wick"}, {"params", {{"length", 6}}}}}), L);
        auto rep = run_doc(d);
        expect_status(o, f.name, rep, "pass");
        if (check_seconds(rep, 1) >= 5.0) o.fail(f.name + " wick too slow");
    }
    // v_a^* v_b -> v_b v_a^* on N^2.
    Monoid n2 = Monoid::lattice_cone(2);
    Ball ref(n2, 6);
    IdealEngine eng(n2, ref);
    Elem a = n2.vec({1, 0}), b = n2.vec({0, 1});
    auto nf = wick_normal_form(eng, {{a, true}, {b, false}});
    if (!nf.ok || nf.zero || !n2.eq(nf.r, b) || !n2.eq(nf.s, a) || nf.rewrites != 1)
        o.fail("v_a* v_b did not rewrite to v_b v_a*");
    if (o.pass) o.detail = "words of length <= 6 on N2 (L=8) and F2 (L=6); v_a* v_b -> v_b v_a* on N2";
    return o;
}

Outcome criterion6() {
    Outcome o;
    auto t0 = clock_type::now();
    Monoid s = Monoid::numerical({2, 3});
    Ball ref(s, 14);
    IdealEngine eng(s, ref);
    auto lcm = is_right_lcm_up_to(eng, 12);
    if (lcm.status != LcmStatus::No || !lcm.witness_ideal) {
        o.fail("right LCM verdict is not No");
    } else {
        // {2,3,4,...}
        for (long long n = 0; n <= 20; ++n)
            if (eng.member(s.integer(n), *lcm.witness_ideal) != (n >= 2)) o.fail("witness ideal is not {2,3,4,...}");
    }
    auto rep = run_doc(load_bundled("s23-shift-T4"));
    const auto& lr = rep["checks"][1];
    const auto& sh = rep["checks"][2];
    if (lr["status"] != "pass") o.fail("left regular: " + lr["message"].get<std::string>());
    if (sh["status"] != "violation" || sh["witness"]["kind"] != "T4") {
        o.fail("shift rep did not fail (T4)");
    } else {
        json want = json::array({json::array({3, 2, 2, 3}), json::array({0, 2, 2, 0}), json::array({0, 3, 3, 0})});
        if (json::parse(sh["witness"]["ideals"].dump()) != want) o.fail("unexpected (T4) witness " + sh["witness"]["ideals"].dump());
        if (sh["witness"]["rank"] != 2) o.fail("residual rank " + sh["witness"]["rank"].dump() + ", expected 2");
    }
    if (rep["environment"]["bounds"]["L"] != 12) o.fail("scenario not at L=12");
    double secs = seconds_since(t0);
    if (secs >= 10.0) o.fail("took " + std::to_string(secs) + "s");
    if (o.pass) o.detail = "No with witness {2,3,4,...}; alpha=(3,2,2,3), F={(0,2,2,0),(0,3,3,0)}, rank 2";
    return o;
}

// Replays the witness of check `i` at truncation L + step.
bool survives_growth(ojson report, std::size_t i) {
    auto& w = report["checks"][i]["witness"];
    w["truncation"] = w["truncation"].get<int>() + report["environment"]["bounds"]["step"].get<int>();
    return replay_report(report, i).exit_code == kExitPass;
}

Outcome criterion7() {
    Outcome o;
    auto t0 = clock_type::now();
    std::size_t n = 0;
    for (const auto& name : bundled_names()) {
        if (name == "n-too-small") continue;  // its truncation is deliberately below the word length
        json d = load_bundled(name);
        d["representations"] = json::array({json{{"name", "lambda"}, {"kind", "fock"}}});
        d["checks"] = json::array({json{{"check", "theorem-a"}, {"rep", "lambda"}}});
        d.erase("action");
        expect_status(o, name + " lambda", run_doc(d), "pass");
        ++n;
    }
    for (const auto& [name, idx] : std::vector<std::pair<std::string, std::size_t>>{{"s23-theorem-a", 6}, {"f2-collapsed", 2}}) {
        auto rep = run_doc(load_bundled(name));
        const auto& c = rep["checks"][idx];
        if (c["check"] != "theorem-a" || c["status"] != "violation") {
            o.fail(name + ": expected a theorem-a violation, got " + c["status"].get<std::string>());
            continue;
        }
        if (!survives_growth(rep, idx)) o.fail(name + ": witness does not survive one growth step");
    }
    double secs = seconds_since(t0);
    if (secs >= 30.0) o.fail("took " + std::to_string(secs) + "s");
    if (o.pass) {
        std::ostringstream d;
        d << "lambda passes on " << n << " scenarios; <2,3> shift and F2 collapsed flagged and stable; " << std::fixed
          << std::setprecision(2) << secs << "s";
        o.detail = d.str();
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    auto t0 = clock_type::now();
    std::size_t reps = 0;
    for (const auto& name : bundled_names()) {
        if (name == "n-too-small") continue;
        json d = load_bundled(name);
        if (!d.contains("representations")) continue;
        json names = json::array();
        for (const auto& r : d["representations"]) names.push_back(r["name"]);
        reps += names.size();
        d["checks"] = json::array({json{{"check", "cross-validation"}, {"reps", names}}});
        expect_status(o, name, run_doc(d), "pass");
    }
    double secs = seconds_since(t0);
    if (secs >= 60.0) o.fail("took " + std::to_string(secs) + "s");
    if (o.pass) {
        std::ostringstream d;
        d << "zero disagreements over " << reps << " scenario representations; " << std::fixed << std::setprecision(2)
          << secs << "s";
        o.detail = d.str();
    }
    return o;
}

Outcome criterion9() {
    Outcome o;
    auto t0 = clock_type::now();
    for (const auto& name : {"crossed-n-z2", "crossed-n2-z2"}) {
        json d = load_bundled(name);
        if (d["bounds"]["L"] != 8 || d["bounds"]["W"] != 4) o.fail(std::string(name) + " not at L=8, W=4");
        auto rep = run_doc(d);
        expect_status(o, name, rep, "pass");
        for (const auto& c : rep["checks"])
            if (c["check"] == "expectation-faithful" && c["instances"].get<std::size_t>() < 100)
                o.fail("fewer than 100 expectation samples");
    }
    double secs = seconds_since(t0);
    if (secs >= 30.0) o.fail("took " + std::to_string(secs) + "s");
    if (o.pass) {
        std::ostringstream d;
        d << "N and N2 with Z/2: axioms, core ranks on every lattice ideal, E_H faithful, Theorem A; " << std::fixed
          << std::setprecision(2) << secs << "s";
        o.detail = d.str();
    }
    return o;
}

Outcome criterion10() {
    Outcome o;
    auto dir = std::filesystem::temp_directory_path() / "pscalc-acceptance-cache";
    std::filesystem::remove_all(dir);
    std::size_t witnesses = 0;
    for (const auto& name : bundled_names()) {
        Scenario sc = parse_or_throw(load_bundled(name));
        RunOptions plain;
        RunOptions cached;
        cached.cache_dir = dir.string();
        auto a = run_scenario(sc, plain).report.dump();
        auto cold = run_scenario(sc, cached).report.dump();
        auto hot = run_scenario(sc, cached);
        if (cold != a) o.fail(name + ": cold-cache report differs");
        if (hot.report.dump() != a) o.fail(name + ": hot-cache report differs");
        if (hot.cache_hits == 0 && !sc.checks.empty() && hot.exit_code != kExitError) o.fail(name + ": cache never hit");
        for (const auto& c : hot.report["checks"])
            if (c.contains("witness")) ++witnesses;
        auto rp = replay_report(hot.report);
        if (rp.exit_code != kExitPass) o.fail(name + ": " + rp.lines.front());
    }
    std::filesystem::remove_all(dir);
    if (o.pass) o.detail = "byte-stable across runs and cache states; " + std::to_string(witnesses) + " witnesses replayed";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"ideal-calculus oracle equivalence", criterion1},
        {"reduced-form law", criterion2},
        {"projection algebra", criterion3},
        {"Fock formulas", criterion4},
        {"Wick soundness and normal form", criterion5},
        {"non-LCM detection and (T4)", criterion6},
        {"Theorem A calibration", criterion7},
        {"cross-validation oracles", criterion8},
        {"crossed-product identities", criterion9},
        {"determinism and replay", criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = clock_type::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " ("
                  << std::fixed << std::setprecision(2) << seconds_since(t0) << "s) " << o.detail << std::endl;
        if (!o.pass) ++failures;
    }
    return failures;
}
