#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dhilb/field.hpp"
#include "dhilb/sparse_matrix.hpp"

namespace dhilb {

/// Dimensions (and optional basis labels) per internal degree.
class GradedVectorSpace {
public:
    GradedVectorSpace() = default;
    explicit GradedVectorSpace(std::map<int, std::size_t> dims, std::map<int, std::vector<std::string>> labels = {});

    std::size_t dim(int degree) const;
    std::size_t total_dim() const;
    std::vector<int> degrees() const;
    const std::vector<std::string>& labels(int degree) const;

private:
    std::map<int, std::size_t> dims_;
    std::map<int, std::vector<std::string>> labels_;
};

/// (cohomological degree, internal degree)
using Bidegree = std::pair<int, int>;

/// Finite bigraded cochain complex. Differentials raise the cohomological
/// degree by one and preserve the internal degree. Every constructed complex
/// has d*d = 0 verified exactly.
///
/// A complex may be cut off: if `known_through` is set to t, terms above t were
/// not built, so d^t and cohomology in degrees >= t are unavailable.
class CochainComplex {
public:
    CochainComplex() = default;
    CochainComplex(std::map<Bidegree, std::size_t> dims, std::map<Bidegree, SparseMatrix> differentials,
                   std::optional<int> known_through = std::nullopt);

    std::size_t dim(int i, int j) const;
    /// d^{i,j}: C^{i,j} -> C^{i+1,j}. A zero matrix of the right shape when absent.
    SparseMatrix differential(int i, int j) const;
    const std::map<Bidegree, std::size_t>& dims() const noexcept { return dims_; }
    std::optional<int> known_through() const noexcept { return known_through_; }
    bool has_differential(int i) const { return !known_through_ || i < *known_through_; }

    std::set<int> internal_degrees() const;
    std::optional<std::pair<int, int>> cohomological_range() const;

    /// Number of exact d*d = 0 verifications performed by all constructors so far.
    static std::size_t checks_performed() { return checks_.load(); }

private:
    std::map<Bidegree, std::size_t> dims_;
    std::map<Bidegree, SparseMatrix> diffs_;
    std::optional<int> known_through_;
    static inline std::atomic<std::size_t> checks_{0};
};

struct CohomologyResult {
    std::size_t dim = 0;
    /// Columns are cocycles independent modulo coboundaries (only filled on request).
    SparseMatrix representatives;
};

/// H^{i,j}. Throws BudgetError if degree i lies past the built range.
CohomologyResult cohomology(const CochainComplex& c, int i, int j, const Field& field = Field::rationals(),
                            bool representatives = false);
std::size_t cohomology_dim(const CochainComplex& c, int i, int j, const Field& field = Field::rationals());

/// Degree-0 chain map f: S -> T, components f^{i,j}: S^{i,j} -> T^{i,j}.
class ChainMap {
public:
    /// Throws InternalError unless f d_S = d_T f wherever both sides are defined.
    ChainMap(CochainComplex source, CochainComplex target, std::map<Bidegree, SparseMatrix> components);

    const CochainComplex& source() const noexcept { return source_; }
    const CochainComplex& target() const noexcept { return target_; }
    SparseMatrix component(int i, int j) const;

private:
    CochainComplex source_;
    CochainComplex target_;
    std::map<Bidegree, SparseMatrix> components_;
};

/// Mapping fiber F of f: S -> T with F^k = S^k + T^{k-1} and
///   d(s, t) = (d_S s, f(s) - d_T t).
/// The projection F -> S gives the long exact sequence
///   ... -> H^k(F) -> H^k(S) -> H^k(T) -> H^{k+1}(F) -> ...
/// In each F^k the S-part comes first in the basis.
CochainComplex mapping_fiber(const ChainMap& f);

}  // namespace dhilb
