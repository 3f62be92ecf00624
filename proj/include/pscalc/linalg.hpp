#pragma once
// Sparse column-major matrices and incremental row reduction.

#include "pscalc/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace pscalc {

template <class T>
struct SparseVec {
    std::vector<std::pair<std::size_t, T>> e;  // sorted by index, no stored zeros

    bool empty() const { return e.empty(); }
    const T* find(std::size_t i) const {
        auto it = std::lower_bound(e.begin(), e.end(), i,
                                   [](const auto& a, std::size_t k) { return a.first < k; });
        return (it != e.end() && it->first == i) ? &it->second : nullptr;
    }
};

// Canonicalizes an unsorted list of (index, value) pairs: sorts, sums
// duplicates and drops values the field considers zero.
template <class T>
SparseVec<T> make_sparse(std::vector<std::pair<std::size_t, T>> raw, double drop = 0) {
    std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec<T> out;
    for (auto& [i, v] : raw) {
        if (!out.e.empty() && out.e.back().first == i)
            out.e.back().second += v;
        else
            out.e.emplace_back(i, std::move(v));
    }
    std::erase_if(out.e, [&](const auto& p) { return Field<T>::is_zero(p.second, drop); });
    return out;
}

// a + s*b
template <class T>
SparseVec<T> axpy(const SparseVec<T>& a, const T& s, const SparseVec<T>& b, double drop = 0) {
    SparseVec<T> out;
    out.e.reserve(a.e.size() + b.e.size());
    std::size_t i = 0, j = 0;
    while (i < a.e.size() || j < b.e.size()) {
        if (j == b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first)) {
            out.e.push_back(a.e[i++]);
        } else if (i == a.e.size() || b.e[j].first < a.e[i].first) {
            T v = s * b.e[j].second;
            if (!Field<T>::is_zero(v, drop)) out.e.emplace_back(b.e[j].first, std::move(v));
            ++j;
        } else {
            T v = a.e[i].second + s * b.e[j].second;
            if (!Field<T>::is_zero(v, drop)) out.e.emplace_back(a.e[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

template <class T>
double max_magnitude(const SparseVec<T>& v) {
    double m = 0;
    for (const auto& [i, x] : v.e) m = std::max(m, Field<T>::magnitude(x));
    return m;
}

template <class T>
class SpMat {
public:
    SpMat() = default;
    SpMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(cols) {}

    static SpMat identity(std::size_t n) {
        SpMat m(n, n);
        for (std::size_t j = 0; j < n; ++j) m.data_[j].e.emplace_back(j, Field<T>::one());
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const SparseVec<T>& col(std::size_t j) const { return data_[j]; }
    SparseVec<T>& col(std::size_t j) { return data_[j]; }

    T at(std::size_t i, std::size_t j) const {
        const T* p = data_[j].find(i);
        return p ? *p : Field<T>::zero();
    }
    // Adds v to entry (i, j).
    void add(std::size_t i, std::size_t j, const T& v) {
        SparseVec<T> unit;
        unit.e.emplace_back(i, Field<T>::one());
        data_[j] = axpy(data_[j], v, unit);
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : data_) n += c.e.size();
        return n;
    }

    SpMat adjoint() const {
        std::vector<std::vector<std::pair<std::size_t, T>>> raw(rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j].e) raw[i].emplace_back(j, Field<T>::conj(v));
        SpMat out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = make_sparse(std::move(raw[i]));
        return out;
    }

    SpMat scaled(const T& s) const {
        SpMat out(rows_, cols_);
        if (Field<T>::is_zero(s, 0)) return out;
        for (std::size_t j = 0; j < cols_; ++j) {
            out.data_[j] = data_[j];
            for (auto& [i, v] : out.data_[j].e) v *= s;
        }
        return out;
    }

    // this + s*o
    SpMat plus(const SpMat& o, const T& s = Field<T>::one()) const {
        check_same(o);
        SpMat out(rows_, cols_);
        for (std::size_t j = 0; j < cols_; ++j) out.data_[j] = axpy(data_[j], s, o.data_[j]);
        return out;
    }

    friend SpMat operator*(const SpMat& a, const SpMat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
        SpMat out(a.rows_, b.cols_);
        std::vector<std::pair<std::size_t, T>> raw;
        for (std::size_t j = 0; j < b.cols_; ++j) {
            raw.clear();
            for (const auto& [k, bv] : b.data_[j].e)
                for (const auto& [i, av] : a.data_[k].e) raw.emplace_back(i, av * bv);
            out.data_[j] = make_sparse(std::move(raw));
        }
        return out;
    }
    friend SpMat operator+(const SpMat& a, const SpMat& b) { return a.plus(b); }
    friend SpMat operator-(const SpMat& a, const SpMat& b) { return a.plus(b, -Field<T>::one()); }

    // Zeroes every column whose mask entry is false.
    SpMat masked_cols(const std::vector<char>& mask) const {
        SpMat out(rows_, cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            if (mask[j]) out.data_[j] = data_[j];
        return out;
    }

    bool is_zero(double tol = 0) const {
        for (const auto& c : data_)
            for (const auto& [i, v] : c.e)
                if (!Field<T>::is_zero(v, tol)) return false;
        return true;
    }
    bool is_zero_on(const std::vector<char>& mask, double tol = 0) const {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!mask[j]) continue;
            for (const auto& [i, v] : data_[j].e)
                if (!Field<T>::is_zero(v, tol)) return false;
        }
        return true;
    }
    bool equal_on(const SpMat& o, const std::vector<char>& mask, double tol = 0) const {
        return plus(o, -Field<T>::one()).is_zero_on(mask, tol);
    }

    // Column-stacked vectorization restricted to the masked columns.
    SparseVec<T> vectorize(const std::vector<char>* mask = nullptr) const {
        SparseVec<T> v;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (mask && !(*mask)[j]) continue;
            for (const auto& [i, x] : data_[j].e) v.e.emplace_back(j * rows_ + i, x);
        }
        return v;
    }
    static SpMat unvectorize(const SparseVec<T>& v, std::size_t rows, std::size_t cols) {
        SpMat m(rows, cols);
        for (const auto& [k, x] : v.e) m.data_[k / rows].e.emplace_back(k % rows, x);
        return m;
    }

private:
    void check_same(const SpMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: dimension mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseVec<T>> data_;
};

// Incremental echelon basis over sparse vectors. Each stored row remembers
// how it combines the inserted generators, so coordinates and null
// combinations are available. Pivot order is deterministic: first nonzero
// index for the exact field, largest magnitude (ties to the smallest index)
// for floats.
template <class T>
class Span {
public:
    explicit Span(Tolerance tol = {}) : tol_(tol) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t generators() const { return ngen_; }

    struct Reduced {
        SparseVec<T> residual;
        SparseVec<T> combo;  // residual = v - sum combo[g] * generator[g]
    };

    Reduced reduce(const SparseVec<T>& v) const {
        Reduced r{v, {}};
        for (const auto& row : rows_) {
            const T* x = r.residual.find(row.pivot);
            if (!x) continue;
            T c = *x / *row.v.find(row.pivot);
            r.residual = axpy(r.residual, -c, row.v, drop());
            r.combo = axpy(r.combo, c, row.tag, drop());
        }
        if (max_magnitude(r.residual) <= threshold()) r.residual.e.clear();
        return r;
    }

    bool contains(const SparseVec<T>& v) const { return reduce(v).residual.empty(); }

    // Inserts a generator. Returns the null combination (generators summing
    // to zero, last one with coefficient 1) when v is dependent.
    std::optional<SparseVec<T>> insert(const SparseVec<T>& v) {
        std::size_t g = ngen_++;
        Reduced r = reduce(v);
        SparseVec<T> tag = axpy(SparseVec<T>{{{g, Field<T>::one()}}}, -Field<T>::one(), r.combo);
        if (r.residual.empty()) return tag;
        std::size_t piv = choose_pivot(r.residual);
        rows_.push_back(Row{std::move(r.residual), piv, std::move(tag)});
        return std::nullopt;
    }

    // Coefficients expressing v through the inserted generators.
    std::optional<SparseVec<T>> coords(const SparseVec<T>& v) const {
        Reduced r = reduce(v);
        if (!r.residual.empty()) return std::nullopt;
        return r.combo;
    }

private:
    struct Row {
        SparseVec<T> v;
        std::size_t pivot;
        SparseVec<T> tag;
    };

    double drop() const { return Field<T>::backend == Backend::Exact ? 0.0 : tol_.tol * 1e-4; }
    double threshold() const { return Field<T>::backend == Backend::Exact ? 0.0 : tol_.pivot; }

    std::size_t choose_pivot(const SparseVec<T>& v) const {
        if (Field<T>::backend == Backend::Exact) return v.e.front().first;
        std::size_t best = v.e.front().first;
        double m = -1;
        for (const auto& [i, x] : v.e) {
            double a = Field<T>::magnitude(x);
            if (a > m + 1e-15) {
                m = a;
                best = i;
            }
        }
        return best;
    }

    Tolerance tol_;
    std::size_t ngen_ = 0;
    std::vector<Row> rows_;
};

// Basis of {c : sum_u c_u v_u = 0}.
template <class T>
std::vector<SparseVec<T>> nullspace(const std::vector<SparseVec<T>>& vs, Tolerance tol = {}) {
    Span<T> s(tol);
    std::vector<SparseVec<T>> out;
    for (const auto& v : vs)
        if (auto n = s.insert(v)) out.push_back(std::move(*n));
    return out;
}

template <class T>
std::size_t rank_of(const std::vector<SparseVec<T>>& vs, Tolerance tol = {}) {
    Span<T> s(tol);
    for (const auto& v : vs) s.insert(v);
    return s.dim();
}

// Rank of a matrix restricted to the masked columns.
template <class T>
std::size_t matrix_rank(const SpMat<T>& m, const std::vector<char>* mask = nullptr, Tolerance tol = {}) {
    std::vector<SparseVec<T>> cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!mask || (*mask)[j]) cols.push_back(m.col(j));
    return rank_of(cols, tol);
}

}  // namespace pscalc
