#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dhilb/complex.hpp"
#include "dhilb/linalg.hpp"
#include "dhilb/polynomial.hpp"

namespace dhilb {

/// Homogeneous generators in x0..xn.
struct HomIdealPresentation {
    std::size_t n = 0;  // ambient projective dimension; there are n+1 variables
    std::vector<Polynomial> gens;
    std::vector<int> degrees;

    std::size_t nvars() const noexcept { return n + 1; }
    /// Parses and checks homogeneity. Zero generators are dropped.
    static HomIdealPresentation parse(std::size_t n, const std::vector<std::string>& gens);
    static HomIdealPresentation from_polynomials(std::size_t n, std::vector<Polynomial> gens);
};

/// I_d = span of monomial multiples of the generators, as an echelon subspace of S_d.
Subspace ideal_degree_piece(const HomIdealPresentation& P, int d);

/// Finite-dimensional graded commutative (possibly non-unital) algebra on the
/// degrees p..q. Basis elements are numbered globally, degree by degree.
/// Products whose degree exceeds q are zero.
class FiniteGradedAlgebra {
public:
    FiniteGradedAlgebra() = default;
    /// `products[a * size + b]` is a*b in global coordinates. Commutativity,
    /// associativity and degree compatibility are verified (ValidationError on failure).
    FiniteGradedAlgebra(int p, int q, std::map<int, std::size_t> dims, std::vector<SparseVector> products,
                        std::vector<std::string> labels = {});

    /// Degree-0 algebra from a structure-constant table: table[a][b][c] = coefficient of e_c in e_a e_b.
    static FiniteGradedAlgebra ungraded(const std::vector<std::vector<std::vector<Rational>>>& table,
                                        std::vector<std::string> labels = {});
    static FiniteGradedAlgebra zero_product(int p, int q, std::map<int, std::size_t> dims);

    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }
    std::size_t size() const noexcept { return deg_of_.size(); }
    std::size_t dim(int d) const;
    Index offset(int d) const;
    int degree_of(Index g) const { return deg_of_[g]; }
    const std::vector<int>& degrees() const noexcept { return deg_of_; }
    const std::string& label(Index g) const { return labels_[g]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    GradedVectorSpace pieces() const;

    const SparseVector& product(Index a, Index b) const { return products_[static_cast<std::size_t>(a) * size() + b]; }
    SparseVector multiply(const SparseVector& x, const SparseVector& y) const;
    /// A_i (x) A_j -> A_{i+j} in local coordinates; column index = a_local * dim(j) + b_local.
    SparseMatrix mult_matrix(int i, int j) const;
    bool has_zero_multiplication() const;

private:
    void check_structure() const;

    int p_ = 0, q_ = -1;
    std::map<int, std::size_t> dims_;
    std::map<int, Index> offsets_;
    std::vector<int> deg_of_;
    std::vector<SparseVector> products_;
    std::vector<std::string> labels_;
};

/// Degree-preserving linear map between algebras, by images of the source basis.
struct AlgebraMap {
    std::vector<SparseVector> images;  // images[g] in target global coordinates
    SparseVector apply(const SparseVector& x) const;
};

/// Throws ValidationError naming the first basis pair with f(ab) != f(a)f(b).
void check_homomorphism(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B, const AlgebraMap& f);

/// Module M over an algebra, given by the action table a . m.
struct GradedModule {
    std::vector<int> degrees;            // degree of each M basis element
    std::vector<SparseVector> action;    // action[a * size() + m]
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return degrees.size(); }
    const SparseVector& act(Index a, Index m) const { return action[static_cast<std::size_t>(a) * size() + m]; }

    static GradedModule regular(const FiniteGradedAlgebra& A);
    /// B as an A-module through a . m = f(a) m.
    static GradedModule via_map(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B, const AlgebraMap& f);
    static GradedModule trivial(const FiniteGradedAlgebra& A, std::vector<int> degrees);
};

/// S_d / I_{X,d} for p <= d <= q with monomial normal-form bases.
class TruncatedRing {
public:
    TruncatedRing(const HomIdealPresentation& X, int p, int q);

    const HomIdealPresentation& presentation() const noexcept { return X_; }
    const FiniteGradedAlgebra& algebra() const noexcept { return algebra_; }
    const MonomialBasis& monomials(int d) const { return monomials_.at(d); }
    const Subspace& ideal(int d) const { return ideals_.at(d); }
    /// Normal form of a degree-d element of S_d, in global algebra coordinates.
    SparseVector normal_form(int d, const SparseVector& s_coords) const;
    SparseVector normal_form(const Polynomial& f) const;

private:
    HomIdealPresentation X_;
    std::map<int, MonomialBasis> monomials_;
    std::map<int, Subspace> ideals_;
    std::map<int, std::vector<std::int64_t>> local_index_;  // S_d monomial -> A_d basis position or -1
    FiniteGradedAlgebra algebra_;
};

FiniteGradedAlgebra coordinate_ring_truncation(const HomIdealPresentation& X, int p, int q);

struct HilbertData {
    std::map<int, std::size_t> values;
    std::vector<Rational> polynomial;  // coefficients of 1, t, t^2, ...
    int stable_from = 0;               // first degree from which the polynomial matches every computed value

    Rational evaluate(const Rational& t) const;
    std::string polynomial_string() const;
};

/// Throws ValidationError ("unstable") if no polynomial of degree <= n fits the tail.
HilbertData hilbert_data(const HomIdealPresentation& X, int d_max);

FiniteGradedAlgebra veronese_truncation(const FiniteGradedAlgebra& A, int step);

}  // namespace dhilb
