#pragma once
// Scenario documents (JSON, schema 1): parsing, validation with JSON-pointer
// paths, and the element / word / matrix / scalar encodings shared with
// reports.

#include "pscalc/crossed.hpp"
#include "pscalc/fibers.hpp"
#include "pscalc/ideal.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pscalc {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    SchemaError(std::string path, const std::string& what) : std::runtime_error(what), path(std::move(path)) {}
    std::string path;
};

struct Bounds {
    int L = 8;
    int L_big = 12;
    int W = 4;
    int step = 2;
    double tolerance = 1e-9;
    double pivot = 1e-7;
    Backend backend = Backend::Exact;
    std::uint64_t seed = 1;
    std::size_t word_cap = 200000;
};

struct RepDecl {
    std::string name;
    std::string kind;  // fock, left-regular, shift, explicit
    json doc;
};

struct CheckDecl {
    std::string check;
    std::string rep;                // single-rep checks
    std::vector<std::string> reps;  // cross-validation
    std::optional<std::string> expect;
    json params = json::object();
    json doc;
};

struct Scenario {
    json doc;
    std::string name;
    std::string description;
    json monoid;
    json product_system;  // "X_P" or an object
    json action;          // null when absent
    std::vector<RepDecl> reps;
    Bounds bounds;
    std::vector<CheckDecl> checks;

    bool semigroup_system() const { return product_system.is_string(); }
    const RepDecl* rep(const std::string& n) const {
        for (const auto& r : reps)
            if (r.name == n) return &r;
        return nullptr;
    }
};

struct Diagnostic {
    std::string path;
    std::string message;
};

struct ParseResult {
    std::optional<Scenario> scenario;
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;
    bool ok() const { return errors.empty(); }
};

struct CheckInfo {
    std::string name;
    bool needs_rep = false;
    bool needs_reps = false;
    bool needs_action = false;
    bool needs_lcm = false;       // a right-lcm check must come first
    bool semigroup_only = false;  // X_P product system
    std::string summary;
};
const std::vector<CheckInfo>& check_catalog();
const CheckInfo* find_check(const std::string& name);

ParseResult parse_scenario(const json& doc);
ParseResult parse_scenario_text(const std::string& text);

Monoid build_monoid(const json& spec, const std::string& path = "/monoid");
Elem parse_elem(const Monoid& m, const json& j, const std::string& path);
json elem_to_json(const Monoid& m, const Elem& g);
json word_to_json(const Monoid& m, const Word& w);
Word word_from_json(const Monoid& m, const json& j, const std::string& path);

mpq_class parse_rational_json(const json& j, const std::string& path);
std::pair<mpq_class, mpq_class> parse_complex_json(const json& j, const std::string& path);

template <class T>
T parse_scalar(const json& j, const std::string& path) {
    auto [re, im] = parse_complex_json(j, path);
    return Field<T>::from_parts(re, im);
}

// Rows of scalars, all of length `cols` (0: take the first row's length).
template <class T>
SpMat<T> parse_matrix(const json& j, const std::string& path, std::size_t rows = 0, std::size_t cols = 0) {
    if (!j.is_array() || j.empty()) throw SchemaError(path, "matrix must be a non-empty list of rows");
    if (rows && j.size() != rows)
        throw SchemaError(path, "matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    std::size_t n = cols;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        std::string rp = path + "/" + std::to_string(i);
        if (!row.is_array()) throw SchemaError(rp, "matrix row must be a list");
        if (n == 0) n = row.size();
        if (row.size() != n)
            throw SchemaError(rp, "ragged matrix: row has " + std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(n));
    }
    SpMat<T> m(j.size(), n);
    for (std::size_t i = 0; i < j.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) {
            T x = parse_scalar<T>(j[i][k], path + "/" + std::to_string(i) + "/" + std::to_string(k));
            if (!Field<T>::is_zero(x, 0)) m.add(i, k, x);
        }
    return m;
}

json scalar_to_json(const GaussRat& x);
json scalar_to_json(const CFloat& x);

template <class T>
ProductSystemSpec<T> build_product_system(const Monoid& m, const Scenario& sc) {
    if (sc.semigroup_system()) {
        auto s = ProductSystemSpec<T>::semigroup(m);
        s.tol = Tolerance{sc.bounds.tolerance, sc.bounds.pivot};
        return s;
    }
    const json& ps = sc.product_system;
    ProductSystemSpec<T> s;
    s.tol = Tolerance{sc.bounds.tolerance, sc.bounds.pivot};
    s.D = ps.at("dim").get<std::size_t>();
    const auto& co = ps.at("coefficients");
    for (std::size_t i = 0; i < co.size(); ++i)
        s.coefficients.push_back(parse_matrix<T>(co[i], "/product_system/coefficients/" + std::to_string(i), s.D, s.D));
    const auto& fb = ps.at("fibers");
    for (std::size_t g = 0; g < fb.size(); ++g) {
        std::vector<SpMat<T>> mats;
        for (std::size_t i = 0; i < fb[g].size(); ++i)
            mats.push_back(parse_matrix<T>(fb[g][i], "/product_system/fibers/" + std::to_string(g) + "/" + std::to_string(i),
                                           s.D, s.D));
        s.fibers.push_back(std::move(mats));
    }
    if (ps.contains("overrides")) {
        const auto& ov = ps["overrides"];
        for (std::size_t o = 0; o < ov.size(); ++o) {
            std::string p = "/product_system/overrides/" + std::to_string(o);
            Elem e = parse_elem(m, ov[o].at("element"), p + "/element");
            std::vector<SpMat<T>> mats;
            const auto& ms = ov[o].at("matrices");
            for (std::size_t i = 0; i < ms.size(); ++i)
                mats.push_back(parse_matrix<T>(ms[i], p + "/matrices/" + std::to_string(i), s.D, s.D));
            s.overrides.push_back({e, std::move(mats)});
        }
    }
    return s;
}

template <class T>
GaugeAction<T> build_action(const Monoid& m, const Scenario& sc) {
    const json& a = sc.action;
    GaugeAction<T> act;
    const std::size_t ngen = m.generators().size();
    const json& g = a.at("group");
    if (g.is_string()) {
        std::string s = g.get<std::string>();
        if (s.rfind("cyclic(", 0) != 0 || s.back() != ')') throw SchemaError("/action/group", "unknown group '" + s + "'");
        int n = std::stoi(s.substr(7, s.size() - 8));
        if (a.contains("exponents")) {
            auto ex = a["exponents"].get<std::vector<int>>();
            if (ex.size() != ngen) throw SchemaError("/action/exponents", "need one exponent per generator");
            act = GaugeAction<T>::cyclic(n, ex);
        } else {
            act.group = FiniteGroup::cyclic(n);
        }
    } else {
        act.group = FiniteGroup::from_table(g.at("table").get<std::vector<std::vector<int>>>(), "table");
    }
    if (a.contains("characters")) {
        act.characters.clear();
        const auto& ch = a["characters"];
        for (std::size_t h = 0; h < ch.size(); ++h) {
            std::vector<T> row;
            for (std::size_t i = 0; i < ch[h].size(); ++i)
                row.push_back(parse_scalar<T>(ch[h][i], "/action/characters/" + std::to_string(h) + "/" + std::to_string(i)));
            act.characters.push_back(std::move(row));
        }
    }
    if (act.characters.empty())
        act.characters.assign(act.group.order(), std::vector<T>(ngen, Field<T>::one()));
    if (a.contains("unitaries")) {
        const auto& us = a["unitaries"];
        for (std::size_t h = 0; h < us.size(); ++h)
            act.unitaries.push_back(parse_matrix<T>(us[h], "/action/unitaries/" + std::to_string(h)));
    }
    return act;
}

std::string sha256_hex(const std::string& data);
// Hash of the canonical (key-sorted, compact) serialization.
std::string scenario_hash(const json& doc);

}  // namespace pscalc
