#pragma once
// Finite-group gauge actions on the truncated Fock representation and the
// reduced crossed product realized on (Fock ball) x C^{|H|}.

#include "pscalc/covariance.hpp"
#include "pscalc/fock.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace pscalc {

// Multiplication table with the identity at index 0.
struct FiniteGroup {
    std::string name;
    std::vector<std::vector<int>> table;
    std::vector<int> inverse;

    std::size_t order() const { return table.size(); }
    int mul(int a, int b) const { return table[a][b]; }
    int inv(int a) const { return inverse[a]; }

    static FiniteGroup cyclic(int n) {
        if (n < 1) throw std::invalid_argument("cyclic(n) needs n >= 1");
        std::vector<std::vector<int>> t(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
        return from_table(std::move(t), "cyclic(" + std::to_string(n) + ")");
    }

    // Validates closure, identity at 0, associativity and inverses.
    static FiniteGroup from_table(std::vector<std::vector<int>> t, std::string name = "table") {
        const int n = static_cast<int>(t.size());
        if (n == 0) throw StructuralError("group table is empty");
        for (const auto& row : t) {
            if (static_cast<int>(row.size()) != n) throw StructuralError("group table is not square");
            for (int x : row)
                if (x < 0 || x >= n) throw StructuralError("group table entry out of range");
        }
        for (int a = 0; a < n; ++a)
            if (t[0][a] != a || t[a][0] != a) throw StructuralError("group table: index 0 is not the identity");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (t[t[a][b]][c] != t[a][t[b][c]])
                        throw StructuralError("group table is not associative at (" + std::to_string(a) + "," +
                                              std::to_string(b) + "," + std::to_string(c) + ")");
        FiniteGroup g{std::move(name), std::move(t), std::vector<int>(n, -1)};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (g.table[a][b] == 0) g.inverse[a] = b;
        for (int a = 0; a < n; ++a)
            if (g.inverse[a] < 0 || g.table[g.inverse[a]][a] != 0)
                throw StructuralError("group table: element " + std::to_string(a) + " has no inverse");
        return g;
    }
};

// alpha_h(lambda_p(xi)) = chi_h(p) lambda_p(u_h xi u_h^*). Characters are given
// on monoid generators; unitaries default to the identity.
template <class T>
struct GaugeAction {
    FiniteGroup group = FiniteGroup::cyclic(1);
    std::vector<std::vector<T>> characters;  // [h][generator]
    std::vector<SpMat<T>> unitaries;         // [h], D x D, optional

    // chi_{g^j}(p_i) = zeta_n^{j k_i} for the cyclic group of order n.
    static GaugeAction cyclic(int n, const std::vector<int>& exponents) {
        GaugeAction a;
        a.group = FiniteGroup::cyclic(n);
        for (int j = 0; j < n; ++j) {
            std::vector<T> row;
            for (int k : exponents) row.push_back(Field<T>::root_of_unity(n, ((j * k) % n + n) % n));
            a.characters.push_back(std::move(row));
        }
        return a;
    }

    static GaugeAction trivial(std::size_t generators) {
        GaugeAction a;
        a.characters.assign(1, std::vector<T>(generators, Field<T>::one()));
        return a;
    }
};

template <class T>
bool close(const T& a, const T& b, double tol) {
    return Field<T>::is_zero(a - b, tol);
}

// The product system crossed by H, viewed through its identity
// representation iota on (Fock ball) x C^{|H|}: fiber index k |H| + h stands
// for pibar(lambda_r(xi_{r,k})) U_h. Column index of the big space is h N + j.
template <class T>
class CrossedSystem : public CachedRepresentation<T> {
public:
    CrossedSystem(const Monoid& m, const ProductSystemSpec<T>& spec, GaugeAction<T> act, int L,
                  std::string name = "crossed")
        : monoid_(std::make_shared<const Monoid>(m)),
          act_(std::move(act)),
          name_(std::move(name)),
          tol_(spec.tol),
          crossed_(*this) {
        base_fs_ = std::make_shared<FiberSystem<T>>(*monoid_, spec, L);
        base_ = std::make_shared<FockRep<T>>(base_fs_, "fock");
        nH_ = act_.group.order();
        N_ = base_->dim();
        validate_and_build(spec);
    }
    CrossedSystem(const CrossedSystem&) = delete;

    std::string name() const override { return name_; }
    std::size_t dim() const override { return N_ * nH_; }
    const FiberAlgebra<T>& fibers() const override { return crossed_; }
    std::vector<char> interior(const std::vector<Step>& steps) const override { return lift_mask(base_->interior(steps)); }
    int truncation() const override { return base_->truncation(); }

    const FockRep<T>& base() const { return *base_; }
    const FiberSystem<T>& base_fibers() const { return *base_fs_; }
    const GaugeAction<T>& action() const { return act_; }
    std::size_t group_order() const { return nH_; }
    std::size_t base_dim() const { return N_; }
    Tolerance tolerance() const { return tol_; }

    // Gamma_h on the Fock module; alpha_h = Ad Gamma_h.
    const SpMat<T>& gamma(int h) const { return gamma_[h]; }
    SpMat<T> alpha(int h, const SpMat<T>& x) const { return gamma_[h] * x * gamma_[act_.group.inv(h)]; }
    // alpha_h on X_r in fiber coordinates.
    const SpMat<T>& fiber_map(int h, std::size_t r) const { return fmap_[h][r]; }
    T character(int h, std::size_t r) const { return chi_[h][r]; }

    // blockdiag(alpha_{h^{-1}}(x))_h.
    SpMat<T> pibar(const SpMat<T>& x) const {
        SpMat<T> out(dim(), dim());
        for (std::size_t h = 0; h < nH_; ++h) place(out, alpha(act_.group.inv(static_cast<int>(h)), x), h, h);
        return out;
    }

    // Slot g to slot hg.
    SpMat<T> U(int h) const {
        SpMat<T> out(dim(), dim());
        for (std::size_t g = 0; g < nH_; ++g) {
            std::size_t hg = static_cast<std::size_t>(act_.group.mul(h, static_cast<int>(g)));
            for (std::size_t j = 0; j < N_; ++j) out.add(hg * N_ + j, g * N_ + j, Field<T>::one());
        }
        return out;
    }

    // Block (g, h) of a big matrix: rows in slot g, columns in slot h.
    SpMat<T> block(const SpMat<T>& c, std::size_t g, std::size_t h) const {
        SpMat<T> out(N_, N_);
        for (std::size_t j = 0; j < N_; ++j) {
            std::vector<std::pair<std::size_t, T>> raw;
            for (const auto& [i, v] : c.col(h * N_ + j).e)
                if (i >= g * N_ && i < (g + 1) * N_) raw.emplace_back(i - g * N_, v);
            out.col(j) = make_sparse(std::move(raw));
        }
        return out;
    }

    std::vector<char> lift_mask(const std::vector<char>& base_mask) const {
        std::vector<char> out;
        out.reserve(dim());
        for (std::size_t h = 0; h < nH_; ++h) out.insert(out.end(), base_mask.begin(), base_mask.end());
        return out;
    }

    std::size_t fiber_index(std::size_t k, int h) const { return k * nH_ + static_cast<std::size_t>(h); }

    // Extra fiber elements with their adjoints, for corruption experiments.
    struct Extra {
        std::size_t r;
        SpMat<T> value, adjoint;
    };
    void add_fiber_element(std::size_t r, SpMat<T> value, std::optional<SpMat<T>> adjoint = std::nullopt) {
        SpMat<T> adj = adjoint ? std::move(*adjoint) : value.adjoint();
        extras_.push_back({r, std::move(value), std::move(adj)});
    }
    const std::vector<Extra>& extras() const { return extras_; }

protected:
    SpMat<T> build(std::size_t r, std::size_t idx, bool star) const override {
        std::size_t k = idx / nH_;
        int h = static_cast<int>(idx % nH_);
        if (!star) return pibar(base_->create(r, k)) * U(h);
        return U(act_.group.inv(h)) * pibar(base_->annihilate(r, k));
    }

private:
    class CrossedFibers : public FiberAlgebra<T> {
    public:
        explicit CrossedFibers(const CrossedSystem& cs) : cs_(cs) {}
        const Ball& ball() const override { return cs_.base_fs_->ball(); }
        std::size_t dim(std::size_t r) const override { return cs_.base_fs_->dim(r) * cs_.nH_; }
        bool semigroup_case() const override { return cs_.nH_ == 1 && cs_.base_fs_->semigroup_case(); }

        // pibar(xi) U_h pibar(eta) U_g = pibar(xi alpha_h(eta)) U_{hg}
        std::optional<SparseVec<T>> mul(std::size_t r, std::size_t a, std::size_t s, std::size_t b) const override {
            const auto& G = cs_.act_.group;
            auto [k, h] = split(a);
            auto [l, g] = split(b);
            const Ball& bl = ball();
            auto rs = bl.index_of(bl.monoid().mul(bl[r], bl[s]));
            if (rs < 0) return std::nullopt;
            SparseVec<T> acc;
            for (const auto& [l2, c] : cs_.fmap_[h][s].col(l).e) {
                auto p = cs_.base_fs_->mul(r, k, s, l2);
                if (!p) return std::nullopt;
                acc = axpy(acc, c, *p);
            }
            return tag(acc, G.mul(h, g));
        }

        // (pibar(xi) U_h)^* pibar(eta) U_g = pibar(alpha_{h^{-1}}(xi^* eta)) U_{h^{-1} g}
        std::optional<SparseVec<T>> adj_mul(std::size_t r, std::size_t a, std::size_t s, std::size_t b) const override {
            const auto& G = cs_.act_.group;
            auto [k, h] = split(a);
            auto [l, g] = split(b);
            auto p = cs_.base_fs_->adj_mul(r, k, s, l);
            if (!p) return std::nullopt;
            const Ball& bl = ball();
            const Monoid& m = bl.monoid();
            auto t = static_cast<std::size_t>(bl.index_of(m.mul(m.inv(bl[r]), bl[s])));
            int hi = G.inv(h);
            SparseVec<T> acc;
            for (const auto& [i, c] : p->e) acc = axpy(acc, c, cs_.fmap_[hi][t].col(i));
            return tag(acc, G.mul(hi, g));
        }

    private:
        std::pair<std::size_t, int> split(std::size_t a) const { return {a / cs_.nH_, static_cast<int>(a % cs_.nH_)}; }
        SparseVec<T> tag(const SparseVec<T>& v, int h) const {
            std::vector<std::pair<std::size_t, T>> raw;
            for (const auto& [i, c] : v.e) raw.emplace_back(cs_.fiber_index(i, h), c);
            return make_sparse(std::move(raw));
        }
        const CrossedSystem& cs_;
    };

    void place(SpMat<T>& out, const SpMat<T>& x, std::size_t g, std::size_t h) const {
        for (std::size_t j = 0; j < N_; ++j) {
            std::vector<std::pair<std::size_t, T>> raw;
            for (const auto& [i, v] : x.col(j).e) raw.emplace_back(g * N_ + i, v);
            auto& col = out.col(h * N_ + j);
            col = axpy(col, Field<T>::one(), make_sparse(std::move(raw)));
        }
    }

    void validate_and_build(const ProductSystemSpec<T>& spec) {
        const auto& G = act_.group;
        const Ball& b = base_fs_->ball();
        const Monoid& m = b.monoid();
        const std::size_t ngen = m.generators().size();
        const double tol = Field<T>::backend == Backend::Exact ? 0.0 : tol_.tol;
        if (act_.characters.size() != nH_) throw StructuralError("gauge action: need one character row per group element");
        for (const auto& row : act_.characters)
            if (row.size() != ngen) throw StructuralError("gauge action: need one character value per generator");
        if (!act_.unitaries.empty() && act_.unitaries.size() != nH_)
            throw StructuralError("gauge action: need one unitary per group element");

        for (std::size_t h = 0; h < nH_; ++h) {
            for (std::size_t i = 0; i < ngen; ++i) {
                const T& c = act_.characters[h][i];
                if (!close(c * Field<T>::conj(c), Field<T>::one(), tol))
                    throw StructuralError("gauge action: character value of h=" + std::to_string(h) + " on generator " +
                                          std::to_string(i) + " is not unimodular");
                for (std::size_t g = 0; g < nH_; ++g) {
                    int hg = G.mul(static_cast<int>(h), static_cast<int>(g));
                    if (!close(c * act_.characters[g][i], act_.characters[hg][i], tol))
                        throw StructuralError("gauge action: chi_" + std::to_string(h) + " chi_" + std::to_string(g) +
                                              " != chi_" + std::to_string(hg) + " on generator " + std::to_string(i));
                }
            }
        }
        if (!act_.unitaries.empty()) {
            auto I = SpMat<T>::identity(spec.D);
            for (std::size_t h = 0; h < nH_; ++h) {
                const auto& u = act_.unitaries[h];
                if (u.rows() != spec.D || u.cols() != spec.D) throw StructuralError("gauge action: unitary has wrong size");
                if (!(u.adjoint() * u - I).is_zero(tol))
                    throw StructuralError("gauge action: u_" + std::to_string(h) + " is not unitary");
                for (std::size_t g = 0; g < nH_; ++g) {
                    int hg = G.mul(static_cast<int>(h), static_cast<int>(g));
                    if (!(u * act_.unitaries[g] - act_.unitaries[hg]).is_zero(tol))
                        throw StructuralError("gauge action: u_" + std::to_string(h) + " u_" + std::to_string(g) +
                                              " != u_" + std::to_string(hg));
                }
            }
        }

        // Characters on the ball, extended along factorizations, then checked
        // for consistency on every composable pair.
        chi_.assign(nH_, std::vector<T>(b.size(), Field<T>::one()));
        for (std::size_t h = 0; h < nH_; ++h)
            for (std::size_t r = 0; r < b.size(); ++r)
                for (int gi : b.factorization(r)) chi_[h][r] *= act_.characters[h][gi];
        for (std::size_t h = 0; h < nH_; ++h)
            for (std::size_t r = 0; r < b.size(); ++r)
                for (std::size_t s = 0; s < b.size(); ++s) {
                    auto rs = b.index_of(m.mul(b[r], b[s]));
                    if (rs < 0) continue;
                    if (!close(chi_[h][r] * chi_[h][s], chi_[h][rs], tol))
                        throw StructuralError("gauge action: character of h=" + std::to_string(h) +
                                              " is not well defined on P (" + m.format(b[r]) + " * " + m.format(b[s]) + ")");
                }

        // Fiber maps; failure to land in X_r breaks gauge invariance.
        fmap_.assign(nH_, {});
        for (std::size_t h = 0; h < nH_; ++h) {
            for (std::size_t r = 0; r < b.size(); ++r) {
                std::size_t d = base_fs_->dim(r);
                SpMat<T> f(d, d);
                for (std::size_t l = 0; l < d; ++l) {
                    SpMat<T> y = base_fs_->element(r, l);
                    if (!act_.unitaries.empty()) y = act_.unitaries[h] * y * act_.unitaries[h].adjoint();
                    auto c = base_fs_->coords(r, y.scaled(chi_[h][r]));
                    if (!c)
                        throw StructuralError("gauge action does not preserve X_" + m.format(b[r]) + ": alpha_" +
                                              std::to_string(h) + " moves basis element " + std::to_string(l) +
                                              " outside the fiber");
                    f.col(l) = *c;
                }
                fmap_[h].push_back(std::move(f));
            }
        }

        gamma_.clear();
        for (std::size_t h = 0; h < nH_; ++h) {
            SpMat<T> g(N_, N_);
            for (std::size_t r = 0; r < b.size(); ++r) {
                std::size_t off = base_->offset(r);
                for (std::size_t l = 0; l < base_fs_->dim(r); ++l) {
                    std::vector<std::pair<std::size_t, T>> raw;
                    for (const auto& [i, v] : fmap_[h][r].col(l).e) raw.emplace_back(off + i, v);
                    g.col(off + l) = make_sparse(std::move(raw));
                }
            }
            gamma_.push_back(std::move(g));
        }
    }

    std::shared_ptr<const Monoid> monoid_;
    GaugeAction<T> act_;
    std::string name_;
    Tolerance tol_;
    CrossedFibers crossed_;
    std::shared_ptr<FiberSystem<T>> base_fs_;
    std::shared_ptr<FockRep<T>> base_;
    std::size_t nH_ = 1, N_ = 0;
    std::vector<std::vector<T>> chi_;
    std::vector<std::vector<SpMat<T>>> fmap_;
    std::vector<SpMat<T>> gamma_;
    std::vector<Extra> extras_;
};

template <class T>
std::shared_ptr<CrossedSystem<T>> build_crossed(const Monoid& m, const ProductSystemSpec<T>& spec,
                                                const GaugeAction<T>& act, int L) {
    return std::make_shared<CrossedSystem<T>>(m, spec, act, L);
}

// E_H(sum_h pibar(x_h) U_h) = x_e, the (e,e) block.
template <class T>
SpMat<T> conditional_expectation(const CrossedSystem<T>& cs, const SpMat<T>& c) {
    return cs.block(c, 0, 0);
}

// Covariance U_h pibar(x) U_h^* = pibar(alpha_h(x)) on the generator data,
// then the product-system containments for the crossed fibers at span level:
// X_r X_s in X_rs and X_r^* X_rs in X_s, on the columns where both sides are
// free of truncation.
template <class T>
CheckVerdict<T> check_crossed_axioms(const CrossedSystem<T>& cs, Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "crossed-axioms";
    v.stability = {cs.truncation()};
    const auto& G = cs.action().group;
    const FiberSystem<T>& X = cs.base_fibers();
    const Ball& b = X.ball();
    const Monoid& m = b.monoid();
    const double dtol = Field<T>::backend == Backend::Exact ? 0.0 : tol.tol;

    for (std::size_t h = 0; h < cs.group_order(); ++h) {
        auto Uh = cs.U(static_cast<int>(h));
        auto Uhs = cs.U(G.inv(static_cast<int>(h)));
        for (std::size_t r = 0; r < b.size(); ++r) {
            if (b.length(r) != 1) continue;
            for (std::size_t k = 0; k < X.dim(r); ++k) {
                ++v.instances;
                const auto& x = cs.base().create(r, k);
                if (!(Uh * cs.pibar(x) * Uhs - cs.pibar(cs.alpha(static_cast<int>(h), x))).is_zero(dtol)) {
                    v.status = Status::Violation;
                    v.message = "covariance fails: U_" + std::to_string(h) + " pibar(t_" + m.format(b[r]) +
                                ") U^* != pibar(alpha(t_" + m.format(b[r]) + "))";
                    v.witness = Witness<T>{"crossed-covariance", {}, {}, v.message, 0};
                    return v;
                }
            }
        }
    }

    struct Elt {
        const SpMat<T>* value;
        const SpMat<T>* adjoint;
        std::string label;
    };
    std::vector<std::vector<Elt>> fib(b.size());
    const auto& cf = cs.fibers();
    for (std::size_t r = 0; r < b.size(); ++r)
        for (std::size_t a = 0; a < cf.dim(r); ++a)
            fib[r].push_back({&cs.create(r, a), &cs.annihilate(r, a),
                              m.format(b[r]) + "#" + std::to_string(a)});
    for (const auto& e : cs.extras())
        fib[e.r].push_back({&e.value, &e.adjoint, m.format(b[e.r]) + "#extra"});

    auto contained = [&](const SpMat<T>& prod, std::size_t target, const std::vector<char>& mask) {
        Span<T> sp(tol);
        for (const auto& e : fib[target]) sp.insert(e.value->vectorize(&mask));
        return sp.contains(prod.vectorize(&mask));
    };
    auto fail = [&](std::string what) {
        v.status = Status::Violation;
        v.message = std::move(what);
        v.witness = Witness<T>{"crossed-fiber", {}, {}, v.message, 0};
    };
    for (std::size_t r = 0; r < b.size(); ++r) {
        for (std::size_t s = 0; s < b.size(); ++s) {
            auto rs_ = b.index_of(m.mul(b[r], b[s]));
            if (rs_ < 0) continue;
            auto rs = static_cast<std::size_t>(rs_);
            auto mul_mask = cs.interior({Step{b[r], 0, false}, Step{b[s], 0, false}});
            auto adj_mask = cs.interior({Step{b[r], 0, true}, Step{b[rs], 0, false}});
            for (const auto& x : fib[r]) {
                for (const auto& y : fib[s]) {
                    ++v.instances;
                    if (!contained(*x.value * *y.value, rs, mul_mask)) {
                        fail("(X|H)_" + x.label + " (X|H)_" + y.label + " not in (X|H)_" + m.format(b[rs]));
                        return v;
                    }
                }
                for (const auto& z : fib[rs]) {
                    ++v.instances;
                    if (!contained(*x.adjoint * *z.value, s, adj_mask)) {
                        fail("(X|H)_" + x.label + "^* (X|H)_" + z.label + " not in (X|H)_" + m.format(b[s]));
                        return v;
                    }
                }
            }
        }
    }
    v.message = "crossed fibers form a product system on the ball";
    return v;
}

// Core identity K_{x,iota} = K_{x,lambda} x| H at span level: the iota core and
// span{pibar(b) U_h : b in K_{x,lambda}} agree on the common interior, and
// E_H maps the iota core into the lambda core.
template <class T>
CheckVerdict<T> check_core_identity(const CrossedSystem<T>& cs, const IdealEngine& eng, const NeutralLattice& lat,
                                    const Ideal& x, Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "core-identity";
    v.stability = {cs.truncation()};
    v.notes.push_back({"word-length bound", std::to_string(lat.W)});
    const auto& base = cs.base();
    auto lw = enumerate_core_words(eng, lat, x, base.fibers());
    auto iw = enumerate_core_words(eng, lat, x, cs.fibers());
    auto lc = core_span(base, lw, lat.W, tol);
    auto ic = core_span(cs, iw, lat.W, tol);
    if (!lc.ok || !ic.ok) {
        v.status = Status::Inconclusive;
        v.message = "core words do not fit the ball: " + (lc.ok ? ic.reason : lc.reason);
        return v;
    }
    auto lmask = cs.lift_mask(lc.interior);
    std::vector<char> mask(cs.dim());
    for (std::size_t j = 0; j < cs.dim(); ++j) mask[j] = lmask[j] && ic.interior[j];
    if (!any_set(mask)) {
        v.status = Status::Inconclusive;
        v.message = "no common interior columns at this truncation";
        return v;
    }

    std::vector<SparseVec<T>> left, right, both;
    for (const auto& val : ic.values) left.push_back(val.vectorize(&mask));
    for (const auto& val : lc.values) {
        auto pv = cs.pibar(val);
        for (std::size_t h = 0; h < cs.group_order(); ++h) right.push_back((pv * cs.U(static_cast<int>(h))).vectorize(&mask));
    }
    both = left;
    both.insert(both.end(), right.begin(), right.end());
    std::size_t rl = rank_of(left, tol), rr = rank_of(right, tol), rb = rank_of(both, tol);
    v.instances = left.size() + right.size();
    v.notes.push_back({"iota core rank", std::to_string(rl)});
    v.notes.push_back({"crossed lambda core rank", std::to_string(rr)});
    v.notes.push_back({"lambda core rank", std::to_string(lc.rank)});
    if (rl != rb || rr != rb) {
        v.status = Status::Violation;
        v.message = "core spans differ: rank(iota core)=" + std::to_string(rl) +
                    ", rank(lambda core x| H)=" + std::to_string(rr) + ", rank(sum)=" + std::to_string(rb);
        v.witness = Witness<T>{"core-identity", {}, {}, v.message, rb};
        return v;
    }

    // E_H(iota(b_x)) in K_{x,lambda}.
    Span<T> lam(tol);
    for (const auto& val : lc.values) lam.insert(val.vectorize(&lc.interior));
    for (std::size_t i = 0; i < ic.values.size(); ++i) {
        ++v.instances;
        auto e = conditional_expectation(cs, ic.values[i]);
        if (!lam.contains(e.vectorize(&lc.interior))) {
            v.status = Status::Violation;
            v.message = "E_H of " + format_operator_word(eng.monoid(), iw[i]) + " is not in the lambda core";
            v.witness = Witness<T>{"core-expectation", detail::single<T>(steps_of(iw[i])), {}, v.message, 0};
            return v;
        }
    }
    v.message = "core identity holds (rank " + std::to_string(rb) + ")";
    return v;
}

// alpha_h maps the lambda core at x onto itself, on its interior.
template <class T>
CheckVerdict<T> check_core_gauge_invariance(const CrossedSystem<T>& cs, const IdealEngine& eng, const NeutralLattice& lat,
                                            const Ideal& x, Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "core-gauge-invariance";
    v.stability = {cs.truncation()};
    auto lc = core_span(cs.base(), enumerate_core_words(eng, lat, x, cs.base().fibers()), lat.W, tol);
    if (!lc.ok) {
        v.status = Status::Inconclusive;
        v.message = lc.reason;
        return v;
    }
    Span<T> sp(tol);
    for (const auto& val : lc.values) sp.insert(val.vectorize(&lc.interior));
    for (std::size_t h = 0; h < cs.group_order(); ++h) {
        Span<T> img(tol);
        for (const auto& val : lc.values) {
            ++v.instances;
            auto a = cs.alpha(static_cast<int>(h), val).vectorize(&lc.interior);
            img.insert(a);
            if (!sp.contains(a)) {
                v.status = Status::Violation;
                v.message = "alpha_" + std::to_string(h) + " moves a core element outside the core";
                v.witness = Witness<T>{"core-gauge", {}, {}, v.message, 0};
                return v;
            }
        }
        if (img.dim() != sp.dim()) {
            v.status = Status::Violation;
            v.message = "alpha_" + std::to_string(h) + " is not onto the core";
            v.witness = Witness<T>{"core-gauge", {}, {}, v.message, 0};
            return v;
        }
    }
    v.message = "cores are gauge invariant";
    return v;
}

// Positivity and faithfulness of E_H on seeded random elements
// sum c_i pibar(w_i) U_{h_i} with w_i short lambda words. The Hilbert adjoint
// is the conjugate transpose only in the semigroup case, so other product
// systems are reported inconclusive.
template <class T>
CheckVerdict<T> check_expectation_faithful(const CrossedSystem<T>& cs, std::size_t samples, std::uint64_t seed,
                                           Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "expectation-faithful";
    v.notes.push_back({"seed", std::to_string(seed)});
    v.stability = {cs.truncation()};
    if (!cs.base_fibers().semigroup_case()) {
        v.status = Status::Inconclusive;
        v.message = "faithfulness sampling needs an orthonormal Fock basis (semigroup case)";
        return v;
    }
    const double dtol = Field<T>::backend == Backend::Exact ? 0.0 : tol.tol;
    const Ball& b = cs.base_fibers().ball();
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> short_elems;
    for (std::size_t r = 0; r < b.size(); ++r)
        if (b.length(r) <= 2) short_elems.push_back(r);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    for (std::size_t n = 0; n < samples; ++n) {
        SpMat<T> c(cs.dim(), cs.dim());
        std::size_t terms = 1 + pick(3);
        for (std::size_t t = 0; t < terms; ++t) {
            std::size_t r = short_elems[pick(short_elems.size())];
            std::size_t s = short_elems[pick(short_elems.size())];
            SpMat<T> w = cs.base().create(r, 0) * cs.base().annihilate(s, 0);
            long coef = static_cast<long>(pick(5)) - 2;
            if (coef == 0) coef = 1;
            c = c.plus(cs.pibar(w) * cs.U(static_cast<int>(pick(cs.group_order()))), Field<T>::from_int(coef));
        }
        ++v.instances;
        auto e = conditional_expectation(cs, c.adjoint() * c);
        bool c_zero = c.is_zero(dtol), e_zero = e.is_zero(dtol);
        bool positive = true;
        for (std::size_t j = 0; j < e.rows(); ++j) {
            T d = e.at(j, j);
            if constexpr (Field<T>::backend == Backend::Exact) {
                positive = positive && d.is_real() && sgn(d.re()) >= 0;
            } else {
                positive = positive && std::abs(d.imag()) <= dtol && d.real() >= -dtol;
            }
        }
        if (!positive || (e_zero && !c_zero)) {
            v.status = Status::Violation;
            v.message = std::string(positive ? "E_H(c^* c) = 0 for c != 0" : "E_H(c^* c) has a negative diagonal") +
                        " at sample " + std::to_string(n);
            v.witness = Witness<T>{"expectation", {}, {}, v.message, 0};
            return v;
        }
    }
    v.message = "E_H positive and faithful on " + std::to_string(samples) + " samples";
    return v;
}

// Theorem A conditions for iota on the crossed product system; the semigroup
// and its ideal lattice are those of the base.
template <class T>
CheckVerdict<T> check_idrep_fock_covariant(const Monoid& m, const ProductSystemSpec<T>& spec, const GaugeAction<T>& act,
                                           FockCovBounds bd, Tolerance tol = {}) {
    RepFactory<T> f = [&m, &spec, &act](int L) -> std::shared_ptr<Representation<T>> {
        auto cs = build_crossed(m, spec, act, L);
        cs->declared_grading = "crossed product, gauge-graded";
        return cs;
    };
    auto v = check_theoremA(f, m, bd, tol);
    v.check = "idrep-fock-covariant";
    return v;
}

}  // namespace pscalc
