#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dhilb/graded_algebra.hpp"

namespace dhilb {

/// V_i inside A_i (local coordinates of the degree-i piece) for each degree of the window.
class GradedSubspace {
public:
    GradedSubspace() = default;
    explicit GradedSubspace(const FiniteGradedAlgebra& A);

    Subspace& piece(int d) { return pieces_.at(d); }
    const Subspace& piece(int d) const { return pieces_.at(d); }
    const std::map<int, Subspace>& pieces() const noexcept { return pieces_; }
    std::map<int, std::size_t> dims() const;
    /// Adds a vector given in global algebra coordinates; it must be homogeneous.
    void add_global(const FiniteGradedAlgebra& A, const SparseVector& v);
    static GradedSubspace whole(const FiniteGradedAlgebra& A);

private:
    std::map<int, Subspace> pieces_;
};

/// A graded subspace that has passed is_graded_ideal.
struct IdealPoint {
    GradedSubspace subspace;
    std::map<int, std::size_t> k() const { return subspace.dims(); }
};

bool is_graded_ideal(const FiniteGradedAlgebra& A, const GradedSubspace& V);
/// Throws ValidationError if V is not an ideal.
IdealPoint make_ideal_point(const FiniteGradedAlgebra& A, GradedSubspace V);

/// Point of the ideal scheme of A_[p,q](X) given by Z inside X.
/// Throws ValidationError "not a subscheme of X" unless I_X is contained in I_Z.
IdealPoint subscheme_to_point(const TruncatedRing& R, const HomIdealPresentation& Z);
IdealPoint subscheme_to_point(const HomIdealPresentation& X, const HomIdealPresentation& Z, int p, int q);

FiniteGradedAlgebra quotient_algebra(const FiniteGradedAlgebra& A, const IdealPoint& I);
/// The projection A -> A/I onto the basis used by quotient_algebra.
AlgebraMap quotient_map(const FiniteGradedAlgebra& A, const IdealPoint& I);

struct ClassicalTangentOptions {
    Field field = Field::rationals();
    /// When set, each I_d basis is replaced by a random invertible recombination before
    /// I/I^2 is formed (used to test basis independence).
    std::optional<std::uint64_t> basis_seed;
};

/// dim of degree-0 A-module maps I/I^2 -> A/I, with linearity imposed on in-window products.
std::size_t classical_tangent_dim(const FiniteGradedAlgebra& A, const IdealPoint& I,
                                  const ClassicalTangentOptions& options = {});

}  // namespace dhilb
