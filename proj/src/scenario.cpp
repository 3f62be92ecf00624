#include "pscalc/scenario.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <set>
#include <sstream>

namespace pscalc {

namespace {

std::string idx(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

long long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<long long>();
}

std::pair<long long, long long> small_rational(const json& j, const std::string& path) {
    mpq_class q = parse_rational_json(j, path);
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p())
        throw SchemaError(path, "rational out of range for a group element");
    return {q.get_num().get_si(), q.get_den().get_si()};
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
    static const std::vector<CheckInfo> cat = {
        {"ideal-oracle", false, false, false, false, false, "backend ideal membership against the chain condition"},
        {"reduced-form", false, false, false, false, false, "alpha mirror(alpha) Z = K(alpha) cap Z on the ball"},
        {"fock-axioms", false, false, false, false, false, "product-system containments on the ball"},
        {"projection-algebra", false, false, false, false, true, "E_[x] E_[y] = E_[x cap y] and the neutral-word formula"},
        {"fock-formulas", false, false, false, false, false, "interior evaluation against the closed form; K_empty = 0"},
        {"right-lcm", false, false, false, false, false, "Clifford's condition up to the truncation"},
        {"wick", false, false, false, true, true, "Wick normal forms agree with the Fock evaluation"},
        {"compact-alignment", false, false, false, true, false, "lambda span inclusion for products of rank-ones"},
        {"nica", true, false, false, true, false, "Nica covariance of a representation"},
        {"rep-axioms", true, false, false, false, false, "representation axioms on the ball"},
        {"t-conditions", true, false, false, false, true, "conditions (T1)-(T4)"},
        {"theorem-a", true, false, false, false, false, "Fock covariance conditions (i) and (ii), double-ball"},
        {"kernel-inclusion", true, false, false, false, false, "ker lambda within ker t on the B-core"},
        {"cross-validation", false, true, false, false, false, "Nica / T-conditions / Fock covariance agree"},
        {"crossed-axioms", false, false, true, false, false, "crossed fibers form a product system"},
        {"core-identity", false, false, true, false, false, "K_{x,iota} = K_{x,lambda} x| H for every lattice ideal"},
        {"core-gauge-invariance", false, false, true, false, false, "alpha_h fixes every lambda core"},
        {"expectation-faithful", false, false, true, false, false, "E_H positive and faithful on seeded samples"},
        {"idrep-fock-covariant", false, false, true, false, false, "iota on the crossed product is Fock covariant"},
    };
    return cat;
}

const CheckInfo* find_check(const std::string& name) {
    for (const auto& c : check_catalog())
        if (c.name == name) return &c;
    return nullptr;
}

mpq_class parse_rational_json(const json& j, const std::string& path) {
    if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
    if (j.is_number_float()) return mpq_class(j.get<double>());  // exact binary value
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception&) {
            throw SchemaError(path, "malformed rational '" + j.get<std::string>() + "'");
        }
    }
    throw SchemaError(path, "expected a rational (integer, \"num/den\" or number)");
}

std::pair<mpq_class, mpq_class> parse_complex_json(const json& j, const std::string& path) {
    if (j.is_array()) {
        if (j.size() != 2) throw SchemaError(path, "complex scalar must be [re, im]");
        return {parse_rational_json(j[0], path + "/0"), parse_rational_json(j[1], path + "/1")};
    }
    return {parse_rational_json(j, path), mpq_class(0)};
}

json scalar_to_json(const GaussRat& x) {
    if (x.is_real()) return format_rational(x.re());
    return json::array({format_rational(x.re()), format_rational(x.im())});
}

json scalar_to_json(const CFloat& x) { return json::array({x.real(), x.imag()}); }

Monoid build_monoid(const json& spec, const std::string& path) {
    if (!spec.is_object()) throw SchemaError(path, "monoid must be an object");
    if (!spec.contains("family")) throw SchemaError(path + "/family", "missing family");
    std::string fam = spec["family"].get<std::string>();
    try {
        if (fam == "lattice") {
            int k = static_cast<int>(as_int(spec.at("rank"), path + "/rank"));
            std::vector<Elem> gens;
            if (spec.contains("generators")) {
                const auto& g = spec["generators"];
                for (std::size_t i = 0; i < g.size(); ++i) {
                    std::vector<long long> v;
                    for (std::size_t c = 0; c < g[i].size(); ++c) v.push_back(as_int(g[i][c], idx(idx(path + "/generators", i), c)));
                    gens.push_back(Elem{Family::LatticeCone, v});
                }
            }
            return Monoid::lattice_cone(k, gens);
        }
        if (fam == "free") return Monoid::free_monoid(static_cast<int>(as_int(spec.at("rank"), path + "/rank")));
        if (fam == "numerical") {
            std::vector<long long> g;
            const auto& gs = spec.at("generators");
            for (std::size_t i = 0; i < gs.size(); ++i) g.push_back(as_int(gs[i], idx(path + "/generators", i)));
            return Monoid::numerical(g);
        }
        if (fam == "affine") {
            std::vector<Elem> gens;
            const auto& gs = spec.at("generators");
            for (std::size_t i = 0; i < gs.size(); ++i) {
                auto p = idx(path + "/generators", i);
                auto [bn, bd] = small_rational(gs[i].at("b"), p + "/b");
                auto [an, ad] = small_rational(gs[i].at("a"), p + "/a");
                gens.push_back(Elem{Family::Affine, {bn, bd, an, ad}});
            }
            return Monoid::affine(gens, spec.value("full", false));
        }
    } catch (const SchemaError&) {
        throw;
    } catch (const json::exception& e) {
        throw SchemaError(path, e.what());
    } catch (const std::exception& e) {
        throw SchemaError(path, e.what());
    }
    throw SchemaError(path + "/family", "unknown family '" + fam + "' (lattice, free, numerical, affine)");
}

Elem parse_elem(const Monoid& m, const json& j, const std::string& path) {
    try {
        switch (m.family()) {
            case Family::LatticeCone: {
                if (!j.is_array()) throw SchemaError(path, "lattice element must be an integer list");
                std::vector<long long> v;
                for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_int(j[i], idx(path, i)));
                return m.vec(v);
            }
            case Family::FreeMonoid:
                if (!j.is_string()) throw SchemaError(path, "free element must be a string of letters");
                return m.word(j.get<std::string>());
            case Family::NumericalSemigroup:
                return m.integer(as_int(j, path));
            case Family::Affine: {
                if (!j.is_object()) throw SchemaError(path, "affine element must be {\"b\": ..., \"a\": ...}");
                auto [bn, bd] = small_rational(j.at("b"), path + "/b");
                auto [an, ad] = small_rational(j.at("a"), path + "/a");
                return m.affine_elem(bn, bd, an, ad);
            }
            case Family::Custom:
                break;
        }
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(path, e.what());
    }
    throw SchemaError(path, "custom families cannot be read from scenarios");
}

namespace {
mpq_class rat(long long n, long long d) {
    mpq_class q(mpz_class(std::to_string(n)), mpz_class(std::to_string(d)));
    q.canonicalize();
    return q;
}
}  // namespace

json elem_to_json(const Monoid& m, const Elem& g) {
    switch (g.fam) {
        case Family::LatticeCone:
            return g.v;
        case Family::FreeMonoid:
            return m.format(g);
        case Family::NumericalSemigroup:
            return g.v.at(0);
        case Family::Affine:
            return json{{"b", format_rational(rat(g.v[0], g.v[1]))}, {"a", format_rational(rat(g.v[2], g.v[3]))}};
        case Family::Custom:
            break;
    }
    return g.v;
}

json word_to_json(const Monoid& m, const Word& w) {
    json out = json::array();
    for (const auto& e : flatten(w)) out.push_back(elem_to_json(m, e));
    return out;
}

Word word_from_json(const Monoid& m, const json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || j.size() % 2) throw SchemaError(path, "word must be a flat list (p1,q1,...,pn,qn)");
    std::vector<Elem> flat;
    for (std::size_t i = 0; i < j.size(); ++i) flat.push_back(parse_elem(m, j[i], idx(path, i)));
    return make_word(m, flat);
}

namespace {

Bounds parse_bounds(const json& b, std::vector<Diagnostic>& err) {
    Bounds out;
    if (b.is_null()) return out;
    if (!b.is_object()) {
        err.push_back({"/bounds", "bounds must be an object"});
        return out;
    }
    auto geti = [&](const char* k, int& dst, int lo) {
        if (!b.contains(k)) return;
        if (!b[k].is_number_integer() || b[k].get<long long>() < lo) {
            err.push_back({std::string("/bounds/") + k, "expected an integer >= " + std::to_string(lo)});
            return;
        }
        dst = b[k].get<int>();
    };
    geti("L", out.L, 1);
    geti("L_big", out.L_big, 1);
    geti("W", out.W, 1);
    geti("step", out.step, 1);
    if (b.contains("tolerance")) {
        if (!b["tolerance"].is_number() || b["tolerance"].get<double>() <= 0)
            err.push_back({"/bounds/tolerance", "expected a positive number"});
        else
            out.tolerance = b["tolerance"].get<double>();
    }
    if (b.contains("pivot")) {
        if (!b["pivot"].is_number() || b["pivot"].get<double>() <= 0)
            err.push_back({"/bounds/pivot", "expected a positive number"});
        else
            out.pivot = b["pivot"].get<double>();
    }
    if (b.contains("backend")) {
        std::string s = b["backend"].is_string() ? b["backend"].get<std::string>() : "";
        if (s == "exact")
            out.backend = Backend::Exact;
        else if (s == "float")
            out.backend = Backend::Float;
        else
            err.push_back({"/bounds/backend", "backend must be \"exact\" or \"float\""});
    }
    if (b.contains("seed")) {
        if (!b["seed"].is_number_integer() || b["seed"].get<long long>() < 0)
            err.push_back({"/bounds/seed", "expected a non-negative integer"});
        else
            out.seed = b["seed"].get<std::uint64_t>();
    }
    if (b.contains("caps") && b["caps"].contains("words")) out.word_cap = b["caps"]["words"].get<std::size_t>();
    if (out.L_big < out.L) err.push_back({"/bounds/L_big", "L_big must be at least L"});
    for (const auto& [k, _] : b.items()) {
        static const std::set<std::string> known = {"L", "L_big", "W", "step", "tolerance", "pivot", "backend", "seed", "caps"};
        if (!known.count(k)) err.push_back({"/bounds/" + k, "unknown bound"});
    }
    return out;
}

template <class T>
void validate_typed(const Monoid& m, const Scenario& sc, std::vector<Diagnostic>& err) {
    auto guard = [&](const std::string& where, auto&& f) {
        try {
            f();
        } catch (const SchemaError& e) {
            err.push_back({e.path, e.what()});
        } catch (const json::exception& e) {
            err.push_back({where, e.what()});
        } catch (const std::exception& e) {
            err.push_back({where, e.what()});
        }
    };
    if (!sc.semigroup_system()) {
        guard("/product_system", [&] {
            const auto& ps = sc.product_system;
            if (!ps.contains("dim") || !ps["dim"].is_number_unsigned() || ps["dim"].get<std::size_t>() == 0)
                throw SchemaError("/product_system/dim", "dim must be a positive integer");
            if (!ps.contains("coefficients") || !ps["coefficients"].is_array() || ps["coefficients"].empty())
                throw SchemaError("/product_system/coefficients", "need a non-empty list of matrices");
            if (!ps.contains("fibers") || !ps["fibers"].is_array() || ps["fibers"].size() != m.generators().size())
                throw SchemaError("/product_system/fibers", "need one list of matrices per generator (" +
                                                                std::to_string(m.generators().size()) + ")");
            build_product_system<T>(m, sc);
        });
    }
    for (std::size_t i = 0; i < sc.reps.size(); ++i) {
        const auto& r = sc.reps[i];
        std::string p = idx("/representations", i);
        guard(p, [&] {
            if (r.kind == "shift") {
                Monoid q = build_monoid(r.doc.at("carrier"), p + "/carrier");
                const auto& im = r.doc.at("images");
                if (im.size() != m.generators().size())
                    throw SchemaError(p + "/images", "need one image per generator");
                for (std::size_t k = 0; k < im.size(); ++k) parse_elem(q, im[k], idx(p + "/images", k));
            } else if (r.kind == "explicit") {
                const auto& g = r.doc.at("generators");
                if (g.size() != m.generators().size())
                    throw SchemaError(p + "/generators", "need one matrix per generator");
                std::size_t n = 0;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    auto mat = parse_matrix<T>(g[k], idx(p + "/generators", k), n, n);
                    if (mat.rows() != mat.cols()) throw SchemaError(idx(p + "/generators", k), "generator matrix must be square");
                    n = mat.rows();
                }
            }
        });
    }
    if (!sc.action.is_null())
        guard("/action", [&] {
            // Characters, unitaries and gauge invariance are validated on a small ball.
            auto act = build_action<T>(m, sc);
            build_crossed(m, build_product_system<T>(m, sc), act, std::min(sc.bounds.L, 4));
        });
}

}  // namespace

ParseResult parse_scenario(const json& doc) {
    ParseResult res;
    auto& err = res.errors;
    if (!doc.is_object()) {
        err.push_back({"", "scenario must be a JSON object"});
        return res;
    }
    if (!doc.contains("schema") || doc["schema"] != 1) err.push_back({"/schema", "unsupported schema (expected 1)"});
    static const std::set<std::string> top = {"schema", "name", "description", "monoid", "product_system",
                                              "representations", "action", "bounds", "checks"};
    for (const auto& [k, _] : doc.items())
        if (!top.count(k)) res.warnings.push_back({"/" + k, "unknown field ignored"});

    Scenario sc;
    sc.doc = doc;
    sc.name = doc.value("name", std::string("unnamed"));
    sc.description = doc.value("description", std::string());
    sc.monoid = doc.value("monoid", json());
    sc.product_system = doc.value("product_system", json("X_P"));
    sc.action = doc.value("action", json());
    sc.bounds = parse_bounds(doc.value("bounds", json()), err);

    std::optional<Monoid> m;
    try {
        m = build_monoid(sc.monoid);
    } catch (const SchemaError& e) {
        err.push_back({e.path, e.what()});
    }
    if (sc.product_system.is_string() && sc.product_system != "X_P")
        err.push_back({"/product_system", "product_system must be \"X_P\" or an object"});
    else if (!sc.product_system.is_string() && !sc.product_system.is_object())
        err.push_back({"/product_system", "product_system must be \"X_P\" or an object"});

    static const std::set<std::string> kinds = {"fock", "left-regular", "shift", "explicit"};
    const json reps = doc.value("representations", json::array());
    if (!reps.is_array()) err.push_back({"/representations", "representations must be a list"});
    std::set<std::string> names;
    for (std::size_t i = 0; reps.is_array() && i < reps.size(); ++i) {
        std::string p = idx("/representations", i);
        const auto& r = reps[i];
        if (!r.is_object() || !r.contains("name") || !r.contains("kind")) {
            err.push_back({p, "representation needs a name and a kind"});
            continue;
        }
        RepDecl d{r["name"].get<std::string>(), r["kind"].get<std::string>(), r};
        if (!kinds.count(d.kind)) err.push_back({p + "/kind", "unknown representation kind '" + d.kind + "'"});
        if (!names.insert(d.name).second) err.push_back({p + "/name", "duplicate representation name '" + d.name + "'"});
        if (d.kind != "fock" && !sc.product_system.is_string())
            err.push_back({p + "/kind", "semigroup representations need the product system X_P"});
        sc.reps.push_back(std::move(d));
    }

    const json checks = doc.value("checks", json::array());
    if (!checks.is_array() || checks.empty()) err.push_back({"/checks", "checks must be a non-empty list"});
    bool lcm_seen = false;
    std::vector<std::size_t> lcm_dependent;
    for (std::size_t i = 0; checks.is_array() && i < checks.size(); ++i) {
        std::string p = idx("/checks", i);
        CheckDecl c;
        c.doc = checks[i];
        if (checks[i].is_string()) {
            c.check = checks[i].get<std::string>();
        } else if (checks[i].is_object() && checks[i].contains("check")) {
            c.check = checks[i]["check"].get<std::string>();
            c.rep = checks[i].value("rep", std::string());
            if (checks[i].contains("reps")) c.reps = checks[i]["reps"].get<std::vector<std::string>>();
            if (checks[i].contains("expect")) c.expect = checks[i]["expect"].get<std::string>();
            if (checks[i].contains("params")) c.params = checks[i]["params"];
        } else {
            err.push_back({p, "check must be a name or an object with \"check\""});
            continue;
        }
        const CheckInfo* info = find_check(c.check);
        if (!info) {
            err.push_back({p, "unknown check '" + c.check + "'"});
            continue;
        }
        if (info->needs_rep) {
            if (c.rep.empty())
                err.push_back({p + "/rep", "check '" + c.check + "' needs a representation"});
            else if (!sc.rep(c.rep))
                err.push_back({p + "/rep", "unknown representation '" + c.rep + "'"});
        }
        if (info->needs_reps) {
            if (c.reps.empty()) err.push_back({p + "/reps", "check '" + c.check + "' needs a list of representations"});
            for (std::size_t k = 0; k < c.reps.size(); ++k)
                if (!sc.rep(c.reps[k])) err.push_back({idx(p + "/reps", k), "unknown representation '" + c.reps[k] + "'"});
        }
        if (info->needs_action && sc.action.is_null())
            err.push_back({p, "check '" + c.check + "' needs an action"});
        if (info->semigroup_only && !sc.product_system.is_string())
            err.push_back({p, "check '" + c.check + "' needs the product system X_P"});
        if (info->needs_lcm) {
            if (!lcm_seen) err.push_back({p, "check '" + c.check + "' requires a preceding right-lcm check"});
            lcm_dependent.push_back(i);
        }
        if (c.check == "right-lcm") lcm_seen = true;
        if (c.expect && c.check == "right-lcm" && *c.expect != "yes" && *c.expect != "no" &&
            *c.expect != "counterexample-free")
            err.push_back({p + "/expect", "expect must be yes, no or counterexample-free"});
        sc.checks.push_back(std::move(c));
    }

    if (m) {
        if (sc.bounds.backend == Backend::Exact)
            validate_typed<GaussRat>(*m, sc, err);
        else
            validate_typed<CFloat>(*m, sc, err);
        if (!lcm_dependent.empty()) {
            try {
                Ball ref(*m, std::min(sc.bounds.L, 6) + 2);
                IdealEngine eng(*m, ref);
                auto v = is_right_lcm_up_to(eng, std::min(sc.bounds.L, 6));
                if (v.status == LcmStatus::No) {
                    std::string why = "monoid is not right LCM";
                    if (v.witness_pair)
                        why += " (" + m->format(v.witness_pair->first) + ", " + m->format(v.witness_pair->second) + ")";
                    for (auto i : lcm_dependent)
                        res.warnings.push_back({idx("/checks", i), why + "; '" + sc.checks[i].check +
                                                                       "' will fail at run time with a structural error"});
                }
            } catch (const std::exception& e) {
                res.warnings.push_back({"/monoid", std::string("right-LCM pre-check skipped: ") + e.what()});
            }
        }
    }
    if (err.empty()) res.scenario = std::move(sc);
    return res;
}

ParseResult parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        ParseResult r;
        r.errors.push_back({"", std::string("invalid JSON: ") + e.what()});
        return r;
    }
    return parse_scenario(doc);
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string scenario_hash(const json& doc) { return sha256_hex(doc.dump()); }

}  // namespace pscalc
