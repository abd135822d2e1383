#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dhilb/field.hpp"
#include "dhilb/parallel.hpp"
#include "dhilb/sparse_matrix.hpp"

namespace dhilb {

enum class PivotOrder {
    markowitz,  // shortest row, then sparsest column, then smallest entry
    natural,    // rows in input order, leading column of each reduced row
};

struct RankOptions {
    Field field = Field::rationals();
    PivotOrder order = PivotOrder::markowitz;
    /// Components with both sides below this use dense Bareiss elimination.
    std::size_t dense_cutoff = 64;
};

/// Exact rank. The matrix is split into the connected components of its
/// row/column incidence graph first; multigraded inputs fall apart into their
/// weight blocks this way without the caller having to know the grading.
std::size_t rank(const SparseMatrix& m, const RankOptions& options = {});
inline std::size_t rank(const SparseMatrix& m, const Field& field) { return rank(m, RankOptions{field}); }

/// Columns span ker(m). Over a prime field the entries are residues in [0, p).
SparseMatrix kernel_basis(const SparseMatrix& m, const Field& field = Field::rationals());

/// Row/column sets of each connected component with at least one nonzero.
struct Component {
    std::vector<Index> rows;
    std::vector<Index> cols;
};
std::vector<Component> connected_components(const SparseMatrix& m);


/// Subspace of Q^n held in reduced row echelon form (leftmost pivots).
/// Used for ideal pieces, normal forms and other small dense problems.
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return rows_.size(); }

    /// Adds a vector; returns true if it enlarged the subspace.
    bool add(const SparseVector& v);
    bool add_dense(const std::vector<Rational>& v);
    bool contains(const SparseVector& v) const { return reduce(v).empty(); }
    /// Remainder of v after clearing every pivot column (the normal form).
    SparseVector reduce(const SparseVector& v) const;
    /// Coordinates of v in the echelon basis; nullopt if v is not in the span.
    std::optional<std::vector<Rational>> coordinates(const SparseVector& v) const;

    /// Echelon rows, sorted by pivot column. Each row has a 1 at its pivot and 0 at other pivots.
    const std::vector<SparseVector>& basis() const noexcept { return rows_; }
    const std::vector<Index>& pivots() const noexcept { return pivots_; }
    bool is_pivot(Index c) const;
    /// Columns that are not pivots, ascending. These index a basis of the quotient.
    std::vector<Index> non_pivots() const;

private:
    std::size_t ambient_;
    std::vector<SparseVector> rows_;
    std::vector<Index> pivots_;
};

}  // namespace dhilb
