#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dhilb/complex.hpp"
#include "dhilb/field.hpp"
#include "dhilb/sparse_matrix.hpp"

namespace dhilb {

/// sigma[j] is the image of j (0-based). The action on operations is
/// (sigma . p)(x_1, ..., x_n) = p(x_sigma(1), ..., x_sigma(n)), a left action.
using Permutation = std::vector<int>;

Permutation compose(const Permutation& a, const Permutation& b);  // (a b)(j) = a(b(j))
Permutation inverse(const Permutation& a);
int sign(const Permutation& a);
std::vector<Permutation> all_permutations(int n);
Permutation adjacent_transposition(int n, int j);  // swaps j and j+1

inline constexpr int kDefaultArityCap = 5;

/// Reduced operad (arities 2..max_arity; arity 1 is the unit and nothing else).
/// Degrees are cohomological. Compositions have degree 0, the differential degree 1.
class Operad {
public:
    virtual ~Operad() = default;
    virtual std::string name() const = 0;
    virtual int max_arity() const = 0;
    virtual std::size_t dim(int n) const = 0;
    virtual int degree(int n, Index b) const = 0;
    virtual SparseVector act(int n, const Permutation& sigma, Index b) const = 0;
    /// a in P(m) with b in P(k) plugged into input slot i (0-based).
    virtual SparseVector compose(int m, int i, int k, Index a, Index b) const = 0;
    virtual bool has_differential() const { return false; }
    virtual SparseVector differential(int, Index) const { return {}; }
    virtual std::string label(int n, Index b) const;
};

using OperadPtr = std::shared_ptr<const Operad>;

SparseVector act(const Operad& P, int n, const Permutation& sigma, const SparseVector& x);
SparseVector compose(const Operad& P, int m, int i, int k, const SparseVector& a, const SparseVector& b);
SparseVector differential(const Operad& P, int n, const SparseVector& x);

/// Graded S-module with the action of every permutation stored as a matrix (column b = image of b).
struct SModule {
    int max_arity = 0;
    std::vector<std::vector<int>> degrees;  // indexed by arity
    std::vector<std::map<Permutation, SparseMatrix>> actions;
    std::vector<std::vector<std::string>> labels;

    std::size_t dim(int n) const;
    const SparseMatrix& action(int n, const Permutation& sigma) const;
    /// Coxeter relations on adjacent transpositions; throws InternalError naming the failure.
    void check_relations() const;
    static SModule of(const Operad& P);
    friend bool operator==(const SModule& a, const SModule& b) {
        return a.max_arity == b.max_arity && a.degrees == b.degrees && a.actions == b.actions;
    }
};

/// E(n)[1-n] tensor sgn_n: degrees of arity n drop by n-1 and the action is twisted by the sign.
SModule suspend(const SModule& E);
SModule desuspend(const SModule& E);
/// Linear dual: degrees negated, contragredient action.
SModule dual(const SModule& E);
/// Degree shift of every element by `shift` (no sign twist).
SModule shift(const SModule& E, int shift);

OperadPtr com_operad(int max_arity = kDefaultArityCap);
/// Lie(n) on the left-normed Dynkin basis [x1, x_sigma(2), ..., x_sigma(n)], realized inside
/// the associative words: coordinates of a Lie element are its coefficients on words starting with x1.
OperadPtr lie_operad(int max_arity = kDefaultArityCap);
/// End of a one-dimensional odd space: one element per arity, degree (1-n)*parity_shift, sign action.
OperadPtr sign_operad(int max_arity, int degree_per_input);
/// Arity-wise tensor product with Koszul signs.
OperadPtr hadamard(OperadPtr P, OperadPtr Q);
/// Operadic suspension (degrees 1-n, sign twist) and its inverse, as operads.
OperadPtr suspend(OperadPtr P);
OperadPtr desuspend(OperadPtr P);

struct LieComponent {
    int arity = 0;
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<SparseMatrix> transpositions;  // action of (j j+1), j = 0..n-2
};
LieComponent lie_component(int n);
/// Rank of the span of all bracketings of x1..xn in the associative words (independent of the Dynkin basis).
std::size_t lie_dimension_by_spanning(int n);

/// Rooted tree with leaves 0..n-1. Vertices in preorder (root 0), children sorted by smallest leaf.
/// children entries >= 0 are vertices, entries < 0 encode leaf l as -(l+1).
struct Tree {
    std::vector<std::vector<int>> children;
    std::vector<Index> labels;  // basis element of the decorating S-module per vertex

    std::size_t vertices() const { return children.size(); }
    int arity() const;
    std::string to_string(const std::function<std::string(int, Index)>& vertex_label = {}) const;
    friend bool operator<(const Tree& a, const Tree& b) {
        return a.children != b.children ? a.children < b.children : a.labels < b.labels;
    }
    friend bool operator==(const Tree& a, const Tree& b) { return a.children == b.children && a.labels == b.labels; }
};

struct TreeBasis {
    int arity = 0;
    std::vector<Tree> trees;
    std::vector<int> degrees;
    std::map<Tree, Index> index;

    std::size_t size() const { return trees.size(); }
    Index find(const Tree& t) const;
};

/// Trees on n leaves with every vertex of arity >= 2 decorated by a basis element of E(arity).
/// Degree of a tree = sum of vertex_degree over its vertices.
TreeBasis enumerate_trees(int n, const std::function<std::size_t(int)>& vertex_dim,
                          const std::function<int(int, Index)>& vertex_degree);
/// Number of decorated trees by recursion over root partitions (cross-check for enumerate_trees).
std::size_t count_trees(int n, const std::function<std::size_t(int)>& vertex_dim);

/// Free operad on generators E (used as given: no shift). An optional differential per arity
/// (square matrices over the tree basis) makes it quasi-free.
class FreeOperad : public Operad {
public:
    FreeOperad(SModule generators, std::string name);
    std::string name() const override { return name_; }
    int max_arity() const override { return generators_.max_arity; }
    std::size_t dim(int n) const override { return basis(n).size(); }
    int degree(int n, Index b) const override { return basis(n).degrees[b]; }
    SparseVector act(int n, const Permutation& sigma, Index b) const override;
    SparseVector compose(int m, int i, int k, Index a, Index b) const override;
    bool has_differential() const override { return !differential_.empty(); }
    SparseVector differential(int n, Index b) const override;
    std::string label(int n, Index b) const override;

    const SModule& generators() const { return generators_; }
    const TreeBasis& basis(int n) const;
    void set_differential(std::vector<SparseMatrix> per_arity);  // index = arity

private:
    SModule generators_;
    std::string name_;
    std::vector<TreeBasis> bases_;
    std::vector<SparseMatrix> differential_;
};

/// Bar(P)(n): trees decorated by sP (each vertex shifted down by one), d = d' + d'' where d'
/// contracts an internal edge through the composition of P and d'' applies the differential of P.
struct BarComplex {
    int arity = 0;
    TreeBasis basis;           // degrees are bar degrees
    SparseMatrix total;        // full differential over the tree basis
    CochainComplex complex;    // split by degree, internal degree 0
    std::vector<std::string> labels;
};
BarComplex bar(const Operad& P, int n);

/// Cobar(P^*) for a finite-dimensional operad P: the free operad on s^{-1}P^* whose differential,
/// induced by the cocomposition of P^* (the transposed composition tables), is the transpose of
/// the bar differential of P.
std::shared_ptr<FreeOperad> cobar_of_dual(OperadPtr P);

/// Splits the basis of P(n) by degree into a cochain complex using P's differential.
CochainComplex operad_complex(const Operad& P, int n);

/// Cobar(Bar(P))(n) as the linear dual of Bar(Cobar(P^*))(n).
CochainComplex cobar_bar(OperadPtr P, int n);

/// Cobar(Lie^*) with Lie^* entering through its operadic suspension, the Koszul dual cooperad of Com.
std::shared_ptr<FreeOperad> small_resolution(int max_arity = 4);

struct CohomologyProfile {
    std::map<int, std::size_t> dims;  // nonzero cohomology by degree
    std::size_t total() const;
};
CohomologyProfile cohomology_profile(const CochainComplex& c, const Field& field = Field::rationals());

struct DgOperadReport {
    bool d_squared_zero = true;
    bool derivation = true;
    bool equivariant = true;
    std::size_t pairs_checked = 0;
    std::string first_failure;
    bool ok() const { return d_squared_zero && derivation && equivariant; }
};
/// Checks d^2 = 0, d(a o_i b) = da o_i b + (-1)^|a| a o_i db on all basis pairs, and d(sigma x) = sigma dx.
DgOperadReport check_dg_operad(const Operad& P, int max_arity);

}  // namespace dhilb
