#include "dhilb/sparse_matrix.hpp"

#include <algorithm>

#include "dhilb/error.hpp"

namespace dhilb {

SparseVector normalize(std::vector<std::pair<Index, Rational>> raw) {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVector out;
    out.reserve(raw.size());
    for (auto& [i, v] : raw) {
        if (!out.empty() && out.back().first == i)
            out.back().second += v;
        else
            out.emplace_back(i, std::move(v));
        if (out.back().second == 0) out.pop_back();
    }
    // A cancellation may have left a zero behind a merged run; sweep once more.
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
    return out;
}

void axpy(SparseVector& dst, const Rational& scale, const SparseVector& src) {
    if (scale == 0 || src.empty()) return;
    SparseVector out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(std::move(dst[i++]));
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            out.emplace_back(src[j].first, scale * src[j].second);
            ++j;
        } else {
            Rational v = dst[i].second + scale * src[j].second;
            if (v != 0) out.emplace_back(dst[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    dst.swap(out);
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
        if (t.row >= rows || t.col >= cols) throw InternalError("triplet outside matrix bounds");
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    SparseMatrix m(rows, cols);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::size_t k = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        while (k < triplets.size() && triplets[k].row == r) {
            Index c = triplets[k].col;
            Rational v = std::move(triplets[k].value);
            ++k;
            while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) v += triplets[k++].value;
            if (v != 0) {
                m.col_idx_.push_back(c);
                m.values_.push_back(std::move(v));
            }
        }
        m.row_ptr_[r + 1] = m.values_.size();
    }
    return m;
}

SparseMatrix SparseMatrix::from_rows(std::size_t cols, const std::vector<SparseVector>& rows) {
    SparseMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [c, v] : rows[r]) {
            if (c >= cols) throw InternalError("row entry outside matrix bounds");
            if (v == 0) continue;
            m.col_idx_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_ptr_[r + 1] = m.values_.size();
    }
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
    const std::size_t cols = dense.empty() ? 0 : dense.front().size();
    std::vector<SparseVector> rows(dense.size());
    for (std::size_t r = 0; r < dense.size(); ++r)
        for (std::size_t c = 0; c < dense[r].size(); ++c)
            if (dense[r][c] != 0) rows[r].emplace_back(static_cast<Index>(c), dense[r][c]);
    return from_rows(cols, rows);
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({static_cast<Index>(i), static_cast<Index>(i), Rational(1)});
    return from_triplets(n, n, std::move(t));
}

SparseVector SparseMatrix::row(std::size_t r) const {
    SparseVector out;
    out.reserve(row_end(r) - row_begin(r));
    for (std::size_t k = row_begin(r); k < row_end(r); ++k) out.emplace_back(col_idx_[k], values_[k]);
    return out;
}

Rational SparseMatrix::at(std::size_t r, std::size_t c) const {
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_begin(r));
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_end(r));
    auto it = std::lower_bound(first, last, static_cast<Index>(c));
    if (it == last || *it != c) return Rational(0);
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    std::vector<std::size_t> count(cols_ + 1, 0);
    for (Index c : col_idx_) ++count[c + 1];
    for (std::size_t c = 0; c < cols_; ++c) count[c + 1] += count[c];
    t.row_ptr_ = count;
    t.col_idx_.resize(values_.size());
    t.values_.resize(values_.size());
    std::vector<std::size_t> next(count.begin(), count.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_begin(r); k < row_end(r); ++k) {
            std::size_t pos = next[col_idx_[k]]++;
            t.col_idx_[pos] = static_cast<Index>(r);
            t.values_[pos] = values_[k];
        }
    return t;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
    if (cols_ != other.rows_) throw InternalError("matrix product dimension mismatch");
    SparseMatrix out(rows_, other.cols_);
    std::vector<Rational> acc(other.cols_);
    std::vector<char> used(other.cols_, 0);
    std::vector<Index> touched;
    for (std::size_t r = 0; r < rows_; ++r) {
        touched.clear();
        for (std::size_t k = row_begin(r); k < row_end(r); ++k) {
            const Index mid = col_idx_[k];
            for (std::size_t l = other.row_begin(mid); l < other.row_end(mid); ++l) {
                const Index c = other.col_idx_[l];
                if (!used[c]) {
                    used[c] = 1;
                    acc[c] = 0;
                    touched.push_back(c);
                }
                acc[c] += values_[k] * other.values_[l];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (Index c : touched) {
            used[c] = 0;
            if (acc[c] != 0) {
                out.col_idx_.push_back(c);
                out.values_.push_back(acc[c]);
            }
        }
        out.row_ptr_[r + 1] = out.values_.size();
    }
    return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw InternalError("matrix sum dimension mismatch");
    std::vector<SparseVector> rows(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        rows[r] = row(r);
        axpy(rows[r], Rational(1), other.row(r));
    }
    return from_rows(cols_, rows);
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& other) const { return *this + other.scaled(Rational(-1)); }

SparseMatrix SparseMatrix::scaled(const Rational& s) const {
    if (s == 0) return SparseMatrix(rows_, cols_);
    SparseMatrix out = *this;
    for (auto& v : out.values_) v *= s;
    return out;
}

SparseVector SparseMatrix::apply(const SparseVector& x) const {
    std::vector<Rational> dense(cols_);
    for (const auto& [i, v] : x) dense[i] = v;
    std::vector<Rational> y = apply_dense(dense);
    SparseVector out;
    for (std::size_t r = 0; r < y.size(); ++r)
        if (y[r] != 0) out.emplace_back(static_cast<Index>(r), y[r]);
    return out;
}

std::vector<Rational> SparseMatrix::apply_dense(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw InternalError("matrix-vector dimension mismatch");
    std::vector<Rational> y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_begin(r); k < row_end(r); ++k) y[r] += values_[k] * x[col_idx_[k]];
    return y;
}

SparseMatrix SparseMatrix::select_columns(const std::vector<Index>& cols) const {
    std::vector<std::int64_t> where(cols_, -1);
    for (std::size_t i = 0; i < cols.size(); ++i) where[cols[i]] = static_cast<std::int64_t>(i);
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_begin(r); k < row_end(r); ++k)
            if (where[col_idx_[k]] >= 0)
                t.push_back({static_cast<Index>(r), static_cast<Index>(where[col_idx_[k]]), values_[k]});
    return from_triplets(rows_, cols.size(), std::move(t));
}

SparseMatrix SparseMatrix::block(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                                 const SparseMatrix& d) {
    const std::size_t top = std::max(a.rows(), b.rows());
    const std::size_t bottom = std::max(c.rows(), d.rows());
    const std::size_t left = std::max(a.cols(), c.cols());
    const std::size_t right = std::max(b.cols(), d.cols());
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz() + c.nnz() + d.nnz());
    auto put = [&t](const SparseMatrix& m, std::size_t r0, std::size_t c0) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t k = m.row_begin(r); k < m.row_end(r); ++k)
                t.push_back({static_cast<Index>(r0 + r), static_cast<Index>(c0 + m.col_at(k)), m.value_at(k)});
    };
    put(a, 0, 0);
    put(b, 0, left);
    put(c, top, 0);
    put(d, top, left);
    return from_triplets(top + bottom, left + right, std::move(t));
}

std::vector<std::vector<Rational>> SparseMatrix::to_dense() const {
    std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_begin(r); k < row_end(r); ++k) out[r][col_idx_[k]] = values_[k];
    return out;
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_begin(r); k < row_end(r); ++k)
            t.push_back({static_cast<Index>(r), col_idx_[k], values_[k]});
    return t;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ && a.col_idx_ == b.col_idx_ &&
           a.values_ == b.values_;
}

}  // namespace dhilb
