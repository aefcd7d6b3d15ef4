#ifndef BPQ_GF2_HPP
#define BPQ_GF2_HPP

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bpq::gf2 {

/* Bit-packed vector over GF(2). Coordinates are indexed 0..n-1; the "lead"
 * of a nonzero vector is its smallest set index, so echelon forms prefer
 * low-index (preferred-label) coordinates. */
class Vec {
public:
    Vec() = default;
    explicit Vec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }

    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    void xor_in(const Vec& o)
    {
        for (size_t k = 0; k < w_.size(); ++k)
            w_[k] ^= o.w_[k];
    }

    bool any() const
    {
        for (uint64_t x : w_)
            if (x)
                return true;
        return false;
    }

    /* smallest set index, or -1 */
    long lead() const
    {
        for (size_t k = 0; k < w_.size(); ++k)
            if (w_[k])
                return long(k * 64 + size_t(__builtin_ctzll(w_[k])));
        return -1;
    }

    std::vector<size_t> support() const
    {
        std::vector<size_t> out;
        for (size_t k = 0; k < w_.size(); ++k) {
            uint64_t x = w_[k];
            while (x) {
                out.push_back(k * 64 + size_t(__builtin_ctzll(x)));
                x &= x - 1;
            }
        }
        return out;
    }

    size_t popcount() const
    {
        size_t c = 0;
        for (uint64_t x : w_)
            c += size_t(__builtin_popcountll(x));
        return c;
    }

    bool operator==(const Vec& o) const { return n_ == o.n_ && w_ == o.w_; }

private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

/* Row space in reduced echelon form, with an optional shadow: rows inserted
 * together with a companion vector (e.g. preimages under a linear map) keep
 * the companion reduced consistently. */
class Echelon {
public:
    Echelon() = default;
    explicit Echelon(size_t n) : n_(n) {}

    size_t dim() const { return rows_.size(); }
    size_t ambient() const { return n_; }

    /* residue of v modulo the row space */
    Vec reduce(Vec v) const
    {
        for (const auto& r : rows_) {
            if (v.get(size_t(r.first)))
                v.xor_in(r.second);
        }
        return v;
    }

    /* reduce v and record which rows were used (combination indices) */
    Vec reduce_tracked(Vec v, std::vector<size_t>& used) const
    {
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (v.get(size_t(rows_[i].first))) {
                v.xor_in(rows_[i].second);
                used.push_back(i);
            }
        }
        return v;
    }

    /* insert v; returns false if v was already in the span */
    bool insert(Vec v)
    {
        v = reduce(std::move(v));
        long p = v.lead();
        if (p < 0)
            return false;
        for (auto& r : rows_)
            if (r.second.get(size_t(p)))
                r.second.xor_in(v);
        rows_.emplace_back(p, std::move(v));
        // keep rows ordered by pivot for deterministic iteration
        for (size_t i = rows_.size(); i > 1 && rows_[i - 1].first < rows_[i - 2].first; --i)
            std::swap(rows_[i - 1], rows_[i - 2]);
        return true;
    }

    bool contains(const Vec& v) const { return !reduce(v).any(); }

    const std::vector<std::pair<long, Vec>>& rows() const { return rows_; }

private:
    size_t n_ = 0;
    std::vector<std::pair<long, Vec>> rows_;  // (pivot, row), pivots increasing
};

/* dense row-major matrix over GF(2), rows are Vec */
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, Vec(cols)) {}

    size_t row_count() const { return rows_.size(); }
    size_t col_count() const { return cols_; }

    Vec& row(size_t i) { return rows_[i]; }
    const Vec& row(size_t i) const { return rows_[i]; }

    void set(size_t i, size_t j) { rows_[i].set(j); }
    bool get(size_t i, size_t j) const { return rows_[i].get(j); }

    size_t rank() const
    {
        Echelon e(cols_);
        for (const auto& r : rows_)
            e.insert(r);
        return e.dim();
    }

    /* basis of { x : x * M = 0 } (left kernel, x over the row index set) */
    std::vector<Vec> kernel() const
    {
        size_t m = rows_.size();
        // eliminate on [row | identity] pairs
        std::vector<std::pair<Vec, Vec>> work;
        work.reserve(m);
        for (size_t i = 0; i < m; ++i) {
            Vec id(m);
            id.set(i);
            work.emplace_back(rows_[i], std::move(id));
        }
        std::vector<std::pair<long, size_t>> pivots;  // (pivot col, work index)
        std::vector<Vec> ker;
        for (size_t i = 0; i < m; ++i) {
            for (auto& pv : pivots) {
                if (work[i].first.get(size_t(pv.first))) {
                    work[i].first.xor_in(work[pv.second].first);
                    work[i].second.xor_in(work[pv.second].second);
                }
            }
            long p = work[i].first.lead();
            if (p < 0)
                ker.push_back(work[i].second);
            else
                pivots.emplace_back(p, i);
        }
        return ker;
    }

    /* one solution x of x * M = b over the rows, if any */
    std::optional<Vec> solve_left(const Vec& b) const
    {
        size_t m = rows_.size();
        std::vector<std::pair<Vec, Vec>> work;
        work.reserve(m);
        for (size_t i = 0; i < m; ++i) {
            Vec id(m);
            id.set(i);
            work.emplace_back(rows_[i], std::move(id));
        }
        Vec acc = b, comb(m);
        std::vector<std::pair<long, size_t>> pivots;
        for (size_t i = 0; i < m; ++i) {
            for (auto& pv : pivots) {
                if (work[i].first.get(size_t(pv.first))) {
                    work[i].first.xor_in(work[pv.second].first);
                    work[i].second.xor_in(work[pv.second].second);
                }
            }
            long p = work[i].first.lead();
            if (p >= 0)
                pivots.emplace_back(p, i);
        }
        for (auto& pv : pivots) {
            if (acc.get(size_t(pv.first))) {
                acc.xor_in(work[pv.second].first);
                comb.xor_in(work[pv.second].second);
            }
        }
        if (acc.any())
            return std::nullopt;
        return comb;
    }

private:
    size_t cols_ = 0;
    std::vector<Vec> rows_;
};

}  // namespace bpq::gf2

#endif
