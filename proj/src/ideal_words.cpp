#include "pscalc/ideal.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace pscalc {

Word make_word(const Monoid& m, const std::vector<Elem>& flat) {
    if (flat.empty() || flat.size() % 2 != 0) throw std::invalid_argument("a word needs an even, non-zero number of letters");
    Word w;
    for (std::size_t i = 0; i < flat.size(); i += 2) {
        for (std::size_t j = i; j < i + 2; ++j)
            if (!m.in_monoid(flat[j])) throw StructuralError("word letter " + m.format(flat[j]) + " is not in P");
        w.pairs.emplace_back(flat[i], flat[i + 1]);
    }
    Elem e = m.identity();
    w.eps_left = !m.eq(flat.front(), e);
    w.eps_right = !m.eq(flat.back(), e);
    return w;
}

std::vector<Elem> flatten(const Word& w) {
    std::vector<Elem> out;
    for (const auto& [p, q] : w.pairs) {
        out.push_back(p);
        out.push_back(q);
    }
    return out;
}

Word mirror(const Word& w) {
    Word r;
    for (auto it = w.pairs.rbegin(); it != w.pairs.rend(); ++it) r.pairs.emplace_back(it->second, it->first);
    r.eps_left = w.eps_right;
    r.eps_right = w.eps_left;
    return r;
}

Word compose(const Word& outer, const Word& inner) {
    Word r;
    r.pairs = inner.pairs;
    r.pairs.insert(r.pairs.end(), outer.pairs.begin(), outer.pairs.end());
    r.eps_left = inner.eps_left;
    r.eps_right = outer.eps_right;
    return r;
}

Elem degree(const Monoid& m, const Word& w) {
    Elem d = m.identity();
    for (const auto& [p, q] : w.pairs) d = m.mul(d, m.mul(m.inv(p), q));
    return d;
}

bool is_neutral(const Monoid& m, const Word& w) { return m.eq(degree(m, w), m.identity()); }

std::string format_word(const Monoid& m, const Word& w) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (const auto& [p, q] : w.pairs) {
        os << (first ? "" : ",") << m.format(p) << "," << m.format(q);
        first = false;
    }
    os << ")";
    return os.str();
}

std::optional<Elem> chain_image(const Monoid& m, const Word& w, const Elem& r) {
    if (!m.in_monoid(r)) return std::nullopt;
    Elem s = r;
    for (auto it = w.pairs.rbegin(); it != w.pairs.rend(); ++it) {
        s = m.mul(m.inv(it->first), m.mul(it->second, s));
        if (!m.in_monoid(s)) return std::nullopt;
    }
    return s;
}

int word_length(const Ball& letters, const Word& w) {
    int total = 0;
    for (const auto& [p, q] : w.pairs) {
        for (const Elem* x : {&p, &q}) {
            auto i = letters.index_of(*x);
            if (i < 0) return -1;
            total += letters.length(static_cast<std::size_t>(i));
        }
    }
    return total;
}

std::vector<Word> enumerate_words(const Ball& letters, int W, bool neutral_only, std::size_t cap) {
    const Monoid& m = letters.monoid();
    struct Letter {
        const Elem* e;
        int len;
    };
    std::vector<Letter> nonid;
    for (std::size_t i = 1; i < letters.size(); ++i)
        if (letters.length(i) <= W) nonid.push_back({&letters[i], letters.length(i)});
    const Elem id = m.identity();

    // Words grouped by total length for the deterministic order.
    std::vector<std::vector<Word>> by_len(W + 1);
    std::size_t count = 0;
    std::vector<Letter> seq;

    auto emit = [&](int used) {
        std::vector<Elem> flat;
        for (const auto& l : seq) flat.push_back(l.e ? *l.e : id);
        Word w;
        for (std::size_t i = 0; i < flat.size(); i += 2) w.pairs.emplace_back(flat[i], flat[i + 1]);
        w.eps_left = seq.front().e != nullptr;
        w.eps_right = seq.back().e != nullptr;
        if (neutral_only && !is_neutral(m, w)) return;
        if (++count > cap)
            throw ResourceError("word enumeration exceeds the cap of " + std::to_string(cap) + " words");
        by_len[used].push_back(std::move(w));
    };

    // Position 0 may be the identity (absent p_1); the last position may be the
    // identity (absent q_n). Interior letters are non-trivial.
    std::function<void(int)> rec = [&](int used) {
        std::size_t k = seq.size();
        // Close the word here with q_n = e when the sequence has odd length.
        if (k % 2 == 1) {
            seq.push_back({nullptr, 0});
            emit(used);
            seq.pop_back();
        }
        for (const auto& l : nonid) {
            if (used + l.len > W) continue;
            seq.push_back(l);
            if (seq.size() % 2 == 0) emit(used + l.len);
            rec(used + l.len);
            seq.pop_back();
        }
    };
    // p_1 = e
    seq.push_back({nullptr, 0});
    rec(0);
    seq.pop_back();
    // p_1 non-trivial
    for (const auto& l : nonid) {
        if (l.len > W) continue;
        seq.push_back(l);
        rec(l.len);
        seq.pop_back();
    }

    std::vector<Word> out;
    for (auto& bucket : by_len) {
        std::sort(bucket.begin(), bucket.end());
        bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
        for (auto& w : bucket) out.push_back(std::move(w));
    }
    return out;
}

}  // namespace pscalc
