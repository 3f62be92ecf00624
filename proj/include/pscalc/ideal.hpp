#pragma once
// Constructible right ideals K(alpha) = q_n^{-1} p_n ... q_1^{-1} p_1 P with a
// syntactic defining word and a per-family semantic backend.

#include "pscalc/monoid.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pscalc {

// alpha = (p_1, q_1, ..., p_n, q_n); pairs[0] is the innermost pair.
// eps_left = 0 means the outer p_1 letter is absent (p_1 = e); eps_right = 0
// likewise for q_n. Ideals read the full pattern with absent letters as e.
struct Word {
    std::vector<std::pair<Elem, Elem>> pairs;
    bool eps_left = true;
    bool eps_right = true;

    friend bool operator==(const Word& a, const Word& b) {
        return a.pairs == b.pairs && a.eps_left == b.eps_left && a.eps_right == b.eps_right;
    }
    friend bool operator<(const Word& a, const Word& b) {
        if (a.pairs != b.pairs) return a.pairs < b.pairs;
        return std::pair(a.eps_left, a.eps_right) < std::pair(b.eps_left, b.eps_right);
    }
};

// Builds a word from the flat tuple (p1, q1, ..., pn, qn); the flags follow
// from whether the outer letters are the identity.
Word make_word(const Monoid& m, const std::vector<Elem>& flat);
std::vector<Elem> flatten(const Word& w);

Word mirror(const Word& w);
// The word acting as `outer` after `inner`: inner pairs, then outer pairs.
Word compose(const Word& outer, const Word& inner);

// p_1^{-1} q_1 ... p_n^{-1} q_n.
Elem degree(const Monoid& m, const Word& w);
bool is_neutral(const Monoid& m, const Word& w);
std::string format_word(const Monoid& m, const Word& w);

// Chain condition: starting from r, each p_k^{-1} q_k s stays in P.
// Returns the final element deg(w) r, or nullopt when the chain breaks.
std::optional<Elem> chain_image(const Monoid& m, const Word& w, const Elem& r);
inline bool chain_member(const Monoid& m, const Word& w, const Elem& r) { return chain_image(m, w, r).has_value(); }

// Sum of generator lengths of the letters, each looked up in `letters`.
// Returns -1 when a letter is outside the ball.
int word_length(const Ball& letters, const Word& w);

namespace backend {
struct Empty {
    std::string certificate;
};
struct Lattice {  // w + N^k
    std::vector<long long> w;
};
struct Free {  // wP
    std::vector<long long> w;
};
struct Numerical {  // eventually full: all n >= threshold, plus `below`
    long long threshold;
    std::vector<long long> below;
};
struct Affine {  // {(B, A) in P : B >= lo (if bounded), B = res mod m, n | A}, m | n
    bool bounded;
    long long lo;
    long long res;
    long long m;
    long long n;
};
struct Generic {  // membership through the word; verdicts limited to the reference ball
    std::vector<char> chi;
    int horizon;
};
}  // namespace backend

using IdealBackend =
    std::variant<backend::Empty, backend::Lattice, backend::Free, backend::Numerical, backend::Affine, backend::Generic>;

struct Ideal {
    Word word;  // defining word
    IdealBackend data;

    bool exact() const { return !std::holds_alternative<backend::Generic>(data); }
};

enum class EmptyStatus { Empty, NonEmpty, UnknownUpTo };
struct EmptinessVerdict {
    EmptyStatus status;
    std::string certificate;  // Empty
    std::optional<Elem> witness;  // NonEmpty
    int horizon = -1;             // UnknownUpTo
};

enum class Tri { False, True, Unknown };

struct IdealFamily {
    std::vector<Ideal> ideals;
    bool cap_closed = false;
};

class IdealEngine {
public:
    // `reference` is the ball Generic backends are evaluated on. With
    // force_generic the exact backends are bypassed (used to cross-check them).
    IdealEngine(const Monoid& m, const Ball& reference, bool force_generic = false);

    const Monoid& monoid() const { return *m_; }
    const Ball& reference() const { return *ref_; }
    bool generic() const { return generic_; }

    Ideal whole() const;
    Ideal K_of_word(const Word& w) const;
    Ideal left_mult(const Elem& p, const Ideal& z) const;
    Ideal preimage(const Elem& q, const Ideal& z) const;
    // The word applied to z: q_n^{-1} p_n ... q_1^{-1} p_1 z.
    Ideal apply_word(const Word& w, const Ideal& z) const;
    Ideal intersect(const Ideal& x, const Ideal& y) const;

    bool member(const Elem& r, const Ideal& x) const;
    EmptinessVerdict is_empty(const Ideal& x) const;
    Tri equal(const Ideal& x, const Ideal& y) const;
    // Canonical string; equal keys mean equal ideals (ball-equal for Generic).
    std::string key(const Ideal& x) const;
    std::string describe(const Ideal& x) const;

    // g with x = gP, when x is principal. Exact backends decide this;
    // Generic searches the reference ball.
    std::optional<Elem> principal_generator(const Ideal& x) const;
    Ideal principal(const Elem& p) const { return left_mult(p, whole()); }

    IdealFamily cap_closure(const std::vector<Ideal>& f, std::size_t cap = 4096) const;

private:
    Word neutral_rep(const Word& w) const;
    Ideal generic_from_word(const Word& w) const;

    const Monoid* m_;
    const Ball* ref_;
    bool generic_;
};

enum class LcmStatus { Yes, CounterexampleFree, No };
struct LcmEntry {
    std::size_t p, q;              // ball indices
    std::optional<Elem> join;      // pP cap qP = join P; nullopt when empty
};
struct LcmVerdict {
    LcmStatus status;
    int radius;
    std::vector<LcmEntry> table;
    std::vector<Elem> units;  // joins are unique up to right multiplication by these
    // No: the pair and the non-principal ideal found.
    std::optional<std::pair<Elem, Elem>> witness_pair;
    std::optional<Ideal> witness_ideal;
    std::string witness_kind;  // "preimage" (q^{-1} p P) or "intersection" (pP cap qP)
};

LcmVerdict is_right_lcm_up_to(const IdealEngine& eng, int L);

// Neutral words up to total letter length W, grouped by their ideal.
struct LatticeEntry {
    Ideal ideal;
    std::vector<Word> words;
};
struct NeutralLattice {
    int W = 0;
    std::vector<LatticeEntry> entries;
    std::map<std::string, std::size_t> by_key;

    std::optional<std::size_t> find(const std::string& key) const {
        auto it = by_key.find(key);
        if (it == by_key.end()) return std::nullopt;
        return it->second;
    }
};

// All words (p1, q1, ..., pn, qn) with interior letters non-trivial, total
// generator length <= W, in deterministic order (length, then lexicographic).
std::vector<Word> enumerate_words(const Ball& letters, int W, bool neutral_only, std::size_t cap = 200000);
NeutralLattice build_lattice(const IdealEngine& eng, const Ball& letters, int W, std::size_t cap = 200000);

}  // namespace pscalc
