#pragma once
// Representations of product systems as truncated matrices, operator-word
// evaluation with interior masks, projections E_[x] and core spans.

#include "pscalc/fibers.hpp"
#include "pscalc/ideal.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pscalc {

// A word together with a fiber basis index for every letter. Index -1 marks
// an absent outer letter (eps = 0); a present e-letter carries an element of A.
struct OperatorWord {
    Word word;
    std::vector<int> cp, cq;

    friend bool operator==(const OperatorWord& a, const OperatorWord& b) {
        return a.word == b.word && a.cp == b.cp && a.cq == b.cq;
    }
};

// Every present letter gets basis element 0 (the unit in the semigroup case).
inline OperatorWord semigroup_word(const Word& w) {
    OperatorWord o{w, std::vector<int>(w.pairs.size(), 0), std::vector<int>(w.pairs.size(), 0)};
    if (!w.pairs.empty()) {
        if (!w.eps_left) o.cp.front() = -1;
        if (!w.eps_right) o.cq.back() = -1;
    }
    return o;
}

// omega^*: reversed order with p and q swapped.
inline OperatorWord adjoint_word(const OperatorWord& w) {
    OperatorWord o{mirror(w.word), {}, {}};
    std::size_t n = w.cp.size();
    for (std::size_t i = 0; i < n; ++i) {
        o.cp.push_back(w.cq[n - 1 - i]);
        o.cq.push_back(w.cp[n - 1 - i]);
    }
    return o;
}

inline std::string format_operator_word(const Monoid& m, const OperatorWord& w) {
    std::string s = format_word(m, w.word);
    bool coeffs = false;
    for (std::size_t i = 0; i < w.cp.size(); ++i) coeffs = coeffs || w.cp[i] > 0 || w.cq[i] > 0;
    if (!coeffs) return s;
    s += " [";
    for (std::size_t i = 0; i < w.cp.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w.cp[i]) + "," + std::to_string(w.cq[i]);
    }
    return s + "]";
}

// One factor t_p(xi_{p,k}) or its adjoint, in written (left-to-right) order.
struct Step {
    Elem p;
    int k = 0;
    bool star = false;
};

inline std::vector<Step> steps_of(const OperatorWord& w) {
    std::vector<Step> out;
    for (std::size_t i = 0; i < w.word.pairs.size(); ++i) {
        if (w.cp[i] >= 0) out.push_back({w.word.pairs[i].first, w.cp[i], true});
        if (w.cq[i] >= 0) out.push_back({w.word.pairs[i].second, w.cq[i], false});
    }
    return out;
}

// Where each column of a representation lives in some carrier monoid Q, and
// which element of Q each letter moves it by. Shared by the Fock module
// (Q = P) and the shift models.
struct Carrier {
    std::shared_ptr<const Monoid> owner;  // keeps Q alive when the carrier owns it
    std::shared_ptr<const Ball> ball;
    std::vector<std::size_t> site;  // column -> carrier ball index
    std::function<Elem(const Elem&)> phi;

    // Columns on which the product is free of truncation: following the
    // column from the right, every creation stays inside the ball, and the
    // chain either dies (an exact zero) or every annihilation lands in the ball.
    std::vector<char> interior(const std::vector<Step>& steps) const {
        std::vector<const std::vector<std::ptrdiff_t>*> mv;
        for (const auto& s : steps) mv.push_back(&moves(phi(s.p), s.star));
        std::vector<char> mask(site.size(), 0);
        for (std::size_t j = 0; j < site.size(); ++j) {
            auto cur = static_cast<std::ptrdiff_t>(site[j]);
            char ok = 1;
            for (std::size_t i = steps.size(); i-- > 0;) {
                auto next = (*mv[i])[static_cast<std::size_t>(cur)];
                if (next == kDead) break;
                if (next == kOut) {
                    ok = 0;
                    break;
                }
                cur = next;
            }
            mask[j] = ok;
        }
        return mask;
    }

private:
    static constexpr std::ptrdiff_t kOut = -1;   // left the ball
    static constexpr std::ptrdiff_t kDead = -2;  // annihilated off the monoid

    // Ball index -> ball index after one step by g (or g^*), memoized per letter.
    const std::vector<std::ptrdiff_t>& moves(const Elem& g, bool star) const {
        auto key = std::make_pair(g, star);
        auto it = move_cache_.find(key);
        if (it != move_cache_.end()) return it->second;
        if (move_cache_.size() >= 4096) move_cache_.clear();
        const Monoid& q = ball->monoid();
        const Elem ginv = q.inv(g);
        std::vector<std::ptrdiff_t> out(ball->size());
        for (std::size_t i = 0; i < ball->size(); ++i) {
            if (!star) {
                out[i] = ball->index_of(q.mul(g, (*ball)[i]));
            } else {
                Elem x = q.mul(ginv, (*ball)[i]);
                out[i] = q.in_monoid(x) ? ball->index_of(x) : kDead;
            }
        }
        return move_cache_.emplace(key, std::move(out)).first->second;
    }
    mutable std::map<std::pair<Elem, bool>, std::vector<std::ptrdiff_t>> move_cache_;
};

template <class T>
class Representation {
public:
    virtual ~Representation() = default;
    virtual std::string name() const = 0;
    virtual std::size_t dim() const = 0;
    // The product system being represented; letters are looked up in its ball.
    virtual const FiberAlgebra<T>& fibers() const = 0;
    virtual const SpMat<T>& create(std::size_t r, std::size_t k) const = 0;
    virtual const SpMat<T>& annihilate(std::size_t r, std::size_t k) const = 0;
    virtual std::vector<char> interior(const std::vector<Step>& steps) const = 0;
    // Radius of the ball the representation is truncated to.
    virtual int truncation() const = 0;
    // The user's equivariance assertion, recorded in reports.
    std::optional<std::string> declared_grading;
};

// Memoizes create/annihilate, which the checkers call repeatedly.
template <class T>
class CachedRepresentation : public Representation<T> {
public:
    const SpMat<T>& create(std::size_t r, std::size_t k) const override { return lookup(cre_, r, k, false); }
    const SpMat<T>& annihilate(std::size_t r, std::size_t k) const override { return lookup(ann_, r, k, true); }

protected:
    virtual SpMat<T> build(std::size_t r, std::size_t k, bool star) const = 0;

private:
    const SpMat<T>& lookup(std::map<std::pair<std::size_t, std::size_t>, SpMat<T>>& c, std::size_t r, std::size_t k,
                    bool star) const {
        auto key = std::make_pair(r, k);
        auto it = c.find(key);
        if (it != c.end()) return it->second;
        return c.emplace(key, build(r, k, star)).first->second;
    }
    mutable std::map<std::pair<std::size_t, std::size_t>, SpMat<T>> cre_, ann_;
};

// The left-creation representation lambda on the truncated Fock module.
template <class T>
class FockRep : public CachedRepresentation<T> {
public:
    explicit FockRep(std::shared_ptr<const FiberAlgebra<T>> fa, std::string name = "fock") : fa_(std::move(fa)), name_(std::move(name)) {
        const Ball& b = fa_->ball();
        offset_.resize(b.size() + 1, 0);
        for (std::size_t r = 0; r < b.size(); ++r) offset_[r + 1] = offset_[r] + fa_->dim(r);
        carrier_.ball = std::shared_ptr<const Ball>(std::shared_ptr<const Ball>{}, &b);
        for (std::size_t r = 0; r < b.size(); ++r)
            for (std::size_t l = 0; l < fa_->dim(r); ++l) carrier_.site.push_back(r);
        carrier_.phi = [](const Elem& p) { return p; };
    }

    std::string name() const override { return name_; }
    std::size_t dim() const override { return offset_.back(); }
    const FiberAlgebra<T>& fibers() const override { return *fa_; }
    std::vector<char> interior(const std::vector<Step>& steps) const override { return carrier_.interior(steps); }
    int truncation() const override { return fa_->ball().radius(); }
    std::size_t offset(std::size_t r) const { return offset_[r]; }
    const Carrier& carrier() const { return carrier_; }

protected:
    SpMat<T> build(std::size_t r, std::size_t k, bool star) const override {
        SpMat<T> m(dim(), dim());
        const Ball& b = fa_->ball();
        for (std::size_t s = 0; s < b.size(); ++s) {
            for (std::size_t l = 0; l < fa_->dim(s); ++l) {
                auto c = star ? fa_->adj_mul(r, k, s, l) : fa_->mul(r, k, s, l);
                if (!c) continue;
                std::size_t t = target(r, s, star);
                std::vector<std::pair<std::size_t, T>> raw;
                for (const auto& [i, v] : c->e) raw.emplace_back(offset_[t] + i, v);
                m.col(offset_[s] + l) = make_sparse(std::move(raw));
            }
        }
        return m;
    }

private:
    std::size_t target(std::size_t r, std::size_t s, bool star) const {
        const Ball& b = fa_->ball();
        const Monoid& m = b.monoid();
        Elem t = star ? m.mul(m.inv(b[r]), b[s]) : m.mul(b[r], b[s]);
        return static_cast<std::size_t>(b.index_of(t));
    }

    std::shared_ptr<const FiberAlgebra<T>> fa_;
    std::string name_;
    std::vector<std::size_t> offset_;
    Carrier carrier_;
};

// Image of a ball element under the generator images, multiplied along the
// ball's recorded factorization.
inline Elem extend_on_factorization(const Ball& b, std::size_t r, const Monoid& q, const std::vector<Elem>& images) {
    Elem acc = q.identity();
    for (int g : b.factorization(r)) acc = q.mul(acc, images.at(g));
    return acc;
}

// Semigroup representation w_p = V_{phi(p)} acting on l^2 of a truncated
// ball in a carrier monoid Q; phi is given on generators and extended along
// factorizations, so a non-homomorphic phi shows up in the axiom check.
template <class T>
class ShiftModelRep : public CachedRepresentation<T> {
public:
    ShiftModelRep(const Monoid& P, int Lp, Monoid Q, int Lq, std::vector<Elem> images, std::string name)
        : fs_(std::make_shared<FiberSystem<T>>(P, ProductSystemSpec<T>::semigroup(P), Lp)),
          images_(std::move(images)),
          name_(std::move(name)) {
        if (images_.size() != P.generators().size())
            throw StructuralError("shift model: need one image per generator");
        auto q = std::make_shared<const Monoid>(std::move(Q));
        carrier_.owner = q;
        carrier_.ball = std::make_shared<const Ball>(*q, Lq);
        for (std::size_t j = 0; j < carrier_.ball->size(); ++j) carrier_.site.push_back(j);
        const Ball& pb = fs_->ball();
        for (std::size_t r = 0; r < pb.size(); ++r) phi_.emplace(pb[r], extend_on_factorization(pb, r, *q, images_));
        carrier_.phi = [this](const Elem& p) { return phi_.at(p); };
    }
    ShiftModelRep(const ShiftModelRep&) = delete;
    ShiftModelRep& operator=(const ShiftModelRep&) = delete;

    std::string name() const override { return name_; }
    std::size_t dim() const override { return carrier_.ball->size(); }
    const FiberAlgebra<T>& fibers() const override { return *fs_; }
    std::vector<char> interior(const std::vector<Step>& steps) const override { return carrier_.interior(steps); }
    int truncation() const override { return fs_->ball().radius(); }
    const Carrier& carrier() const { return carrier_; }
    const std::vector<Elem>& images() const { return images_; }

protected:
    SpMat<T> build(std::size_t r, std::size_t, bool star) const override {
        const Ball& qb = *carrier_.ball;
        const Monoid& q = qb.monoid();
        Elem g = phi_.at(fs_->ball()[r]);
        SpMat<T> m(dim(), dim());
        for (std::size_t j = 0; j < qb.size(); ++j) {
            auto t = qb.index_of(q.mul(g, qb[j]));
            if (t >= 0) m.add(static_cast<std::size_t>(t), j, Field<T>::one());
        }
        return star ? m.adjoint() : m;
    }

private:
    std::shared_ptr<FiberSystem<T>> fs_;
    std::vector<Elem> images_;
    std::string name_;
    Carrier carrier_;
    std::map<Elem, Elem> phi_;
};

// Finite-dimensional semigroup representation from generator matrices;
// nothing is truncated, so every column is interior.
template <class T>
class ExplicitRep : public CachedRepresentation<T> {
public:
    ExplicitRep(const Monoid& P, int Lp, std::vector<SpMat<T>> gens, std::string name)
        : fs_(std::make_shared<FiberSystem<T>>(P, ProductSystemSpec<T>::semigroup(P), Lp)),
          gens_(std::move(gens)),
          name_(std::move(name)) {
        if (gens_.size() != P.generators().size()) throw StructuralError("explicit rep: need one matrix per generator");
        n_ = gens_.front().rows();
        for (const auto& g : gens_)
            if (g.rows() != n_ || g.cols() != n_) throw StructuralError("explicit rep: generator matrices must be square of one size");
    }

    std::string name() const override { return name_; }
    std::size_t dim() const override { return n_; }
    const FiberAlgebra<T>& fibers() const override { return *fs_; }
    std::vector<char> interior(const std::vector<Step>&) const override { return std::vector<char>(n_, 1); }
    int truncation() const override { return fs_->ball().radius(); }

protected:
    SpMat<T> build(std::size_t r, std::size_t, bool star) const override {
        SpMat<T> m = SpMat<T>::identity(n_);
        for (int g : fs_->ball().factorization(r)) m = m * gens_[g];
        return star ? m.adjoint() : m;
    }

private:
    std::shared_ptr<FiberSystem<T>> fs_;
    std::vector<SpMat<T>> gens_;
    std::string name_;
    std::size_t n_ = 0;
};

template <class T>
struct Evaluation {
    bool ok = true;           // false: some letter lies outside the ball
    std::string reason;
    SpMat<T> value;
    std::vector<char> interior;
    int reach = 0;            // total generator length of the creation letters
    int radius = 0;           // truncation - reach

    bool interior_empty() const {
        for (char c : interior)
            if (c) return false;
        return true;
    }
};

template <class T>
Evaluation<T> eval_steps(const Representation<T>& rep, const std::vector<Step>& steps) {
    Evaluation<T> ev;
    const Ball& b = rep.fibers().ball();
    std::vector<std::size_t> idx;
    for (const auto& s : steps) {
        auto r = b.index_of(s.p);
        if (r < 0 || s.k < 0 || static_cast<std::size_t>(s.k) >= rep.fibers().dim(static_cast<std::size_t>(r))) {
            ev.ok = false;
            ev.reason = "letter " + b.monoid().format(s.p) + " outside the ball or its fiber";
            return ev;
        }
        idx.push_back(static_cast<std::size_t>(r));
        if (!s.star) ev.reach += b.length(static_cast<std::size_t>(r));
    }
    ev.radius = rep.truncation() - ev.reach;
    if (steps.empty()) ev.value = SpMat<T>::identity(rep.dim());
    for (std::size_t i = steps.size(); i-- > 0;) {
        const auto k = static_cast<std::size_t>(steps[i].k);
        const SpMat<T>& f = steps[i].star ? rep.annihilate(idx[i], k) : rep.create(idx[i], k);
        ev.value = i + 1 == steps.size() ? f : f * ev.value;
    }
    ev.interior = rep.interior(steps);
    if (ev.radius < 0) {
        ev.ok = false;
        ev.reason = "word too long for ball";
    }
    return ev;
}

template <class T>
Evaluation<T> eval_operator_word(const Representation<T>& rep, const OperatorWord& w) {
    return eval_steps(rep, steps_of(w));
}

// Closed form of the Fock action: on xi_{s,l} with s in K(word) the result is
// the fiber product of the coefficient matrices with xi, placed in X_{deg s};
// otherwise zero. Computed from D x D products and coordinates only.
template <class T>
std::optional<SparseVec<T>> fock_closed_form(const FiberSystem<T>& fs, const FockRep<T>& rep, const OperatorWord& w,
                                             std::size_t s, std::size_t l) {
    const Ball& b = fs.ball();
    const Monoid& m = b.monoid();
    auto img = chain_image(m, w.word, b[s]);
    if (!img) return SparseVec<T>{};
    auto t = b.index_of(*img);
    if (t < 0) return std::nullopt;
    SpMat<T> x = fs.element(s, l);
    auto steps = steps_of(w);
    for (std::size_t i = steps.size(); i-- > 0;) {
        auto r = static_cast<std::size_t>(b.index_of(steps[i].p));
        const SpMat<T>& c = fs.element(r, static_cast<std::size_t>(steps[i].k));
        x = (steps[i].star ? c.adjoint() : c) * x;
    }
    auto co = fs.coords(static_cast<std::size_t>(t), x);
    if (!co) {
        if (x.is_zero(fs.spec().tol.tol)) return SparseVec<T>{};
        return std::nullopt;
    }
    std::vector<std::pair<std::size_t, T>> raw;
    for (const auto& [i, v] : co->e) raw.emplace_back(rep.offset(static_cast<std::size_t>(t)) + i, v);
    return make_sparse(std::move(raw));
}

// Diagonal 0/1 matrix on l^2(ball) with 1 at r in x (semigroup case).
template <class T>
SpMat<T> projection_E(const IdealEngine& eng, const Ideal& x, const Ball& b) {
    SpMat<T> m(b.size(), b.size());
    for (std::size_t r = 0; r < b.size(); ++r)
        if (eng.member(b[r], x)) m.add(r, r, Field<T>::one());
    return m;
}

// All coefficient instantiations of a word over the fiber bases. Absent outer
// letters also get present e-letter variants with every basis element of A
// when A is more than the scalars.
template <class T>
std::vector<OperatorWord> instantiate(const Word& w, const FiberAlgebra<T>& fa, std::size_t cap = 100000) {
    const Ball& b = fa.ball();
    std::size_t n = w.pairs.size();
    std::vector<std::vector<int>> choices;  // per slot: 2*i for p_i, 2*i+1 for q_i
    for (std::size_t i = 0; i < n; ++i) {
        for (int side = 0; side < 2; ++side) {
            const Elem& letter = side == 0 ? w.pairs[i].first : w.pairs[i].second;
            bool absent = (side == 0 && i == 0 && !w.eps_left) || (side == 1 && i + 1 == n && !w.eps_right);
            std::vector<int> opts;
            if (absent) opts.push_back(-1);
            if (!absent || fa.dim(0) > 1) {
                auto r = b.index_of(letter);
                if (r < 0) return {};
                for (std::size_t k = 0; k < fa.dim(static_cast<std::size_t>(r)); ++k) opts.push_back(static_cast<int>(k));
            }
            if (opts.empty()) return {};
            choices.push_back(std::move(opts));
        }
    }
    std::vector<OperatorWord> out;
    std::vector<std::size_t> at(choices.size(), 0);
    while (true) {
        OperatorWord o{w, std::vector<int>(n), std::vector<int>(n)};
        for (std::size_t c = 0; c < choices.size(); ++c) (c % 2 == 0 ? o.cp : o.cq)[c / 2] = choices[c][at[c]];
        if (!o.word.pairs.empty()) {
            o.word.eps_left = o.cp.front() >= 0;
            o.word.eps_right = o.cq.back() >= 0;
        }
        out.push_back(std::move(o));
        if (out.size() > cap) throw ResourceError("core word count exceeds cap " + std::to_string(cap));
        std::size_t c = 0;
        while (c < choices.size() && ++at[c] == choices[c].size()) at[c++] = 0;
        if (c == choices.size()) break;
    }
    return out;
}

// Neutral operator words of length <= lattice.W whose ideal is x.
template <class T>
std::vector<OperatorWord> enumerate_core_words(const IdealEngine& eng, const NeutralLattice& lat, const Ideal& x,
                                               const FiberAlgebra<T>& fa, std::size_t cap = 100000) {
    std::vector<OperatorWord> out;
    auto idx = lat.find(eng.key(x));
    if (!idx) return out;
    for (const auto& w : lat.entries[*idx].words) {
        auto inst = instantiate(w, fa, cap);
        out.insert(out.end(), inst.begin(), inst.end());
        if (out.size() > cap) throw ResourceError("core word count exceeds cap " + std::to_string(cap));
    }
    return out;
}

// Span of evaluated core words, restricted to the columns where every word is
// interior. Verdicts built on it are relative to the word-length bound W.
template <class T>
struct CoreSpan {
    int W = 0;
    std::vector<OperatorWord> words;
    std::vector<SpMat<T>> values;
    std::vector<char> interior;
    std::size_t rank = 0;
    bool ok = true;
    std::string reason;
};

template <class T>
CoreSpan<T> core_span(const Representation<T>& rep, const std::vector<OperatorWord>& words, int W, Tolerance tol = {}) {
    CoreSpan<T> cs;
    cs.W = W;
    cs.words = words;
    cs.interior.assign(rep.dim(), 1);
    for (const auto& w : words) {
        auto ev = eval_operator_word(rep, w);
        if (!ev.ok) {
            cs.ok = false;
            cs.reason = ev.reason;
            return cs;
        }
        for (std::size_t j = 0; j < rep.dim(); ++j) cs.interior[j] = cs.interior[j] && ev.interior[j];
        cs.values.push_back(std::move(ev.value));
    }
    std::vector<SparseVec<T>> vs;
    for (const auto& v : cs.values) vs.push_back(v.vectorize(&cs.interior));
    cs.rank = rank_of(vs, tol);
    return cs;
}

// B-core: all core words over the members of a family.
template <class T>
CoreSpan<T> b_core_span(const Representation<T>& rep, const IdealEngine& eng, const NeutralLattice& lat,
                        const IdealFamily& f, Tolerance tol = {}) {
    std::vector<OperatorWord> words;
    for (const auto& x : f.ideals) {
        auto ws = enumerate_core_words(eng, lat, x, rep.fibers());
        words.insert(words.end(), ws.begin(), ws.end());
    }
    return core_span(rep, words, lat.W, tol);
}

}  // namespace pscalc
