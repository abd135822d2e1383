#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dhilb/field.hpp"

namespace dhilb {

using Index = std::uint32_t;

struct Triplet {
    Index row;
    Index col;
    Rational value;
};

/// Sparse vector as (index, value) pairs sorted by index with no explicit zeros.
using SparseVector = std::vector<std::pair<Index, Rational>>;

/// Adds `scale * src` into an accumulating sparse vector, keeping it sorted.
void axpy(SparseVector& dst, const Rational& scale, const SparseVector& src);
SparseVector normalize(std::vector<std::pair<Index, Rational>> raw);

/// Immutable CSR matrix over the rationals.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

    /// Duplicate positions are summed; entries that cancel are dropped.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
    static SparseMatrix from_rows(std::size_t cols, const std::vector<SparseVector>& rows);
    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool is_zero() const noexcept { return values_.empty(); }

    std::size_t row_begin(std::size_t r) const { return row_ptr_[r]; }
    std::size_t row_end(std::size_t r) const { return row_ptr_[r + 1]; }
    Index col_at(std::size_t k) const { return col_idx_[k]; }
    const Rational& value_at(std::size_t k) const { return values_[k]; }
    SparseVector row(std::size_t r) const;
    Rational at(std::size_t r, std::size_t c) const;

    SparseMatrix transpose() const;
    SparseMatrix operator*(const SparseMatrix& other) const;
    SparseMatrix operator+(const SparseMatrix& other) const;
    SparseMatrix operator-(const SparseMatrix& other) const;
    SparseMatrix scaled(const Rational& s) const;
    SparseVector apply(const SparseVector& x) const;
    std::vector<Rational> apply_dense(const std::vector<Rational>& x) const;

    /// Selects columns in the given order.
    SparseMatrix select_columns(const std::vector<Index>& cols) const;
    /// Block matrix [[a, b], [c, d]]; empty operands are treated as zero blocks of the implied size.
    static SparseMatrix block(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                              const SparseMatrix& d);

    std::vector<std::vector<Rational>> to_dense() const;
    std::vector<Triplet> triplets() const;

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<Index> col_idx_;
    std::vector<Rational> values_;
};

}  // namespace dhilb
