#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dhilb/field.hpp"
#include "dhilb/graded_algebra.hpp"
#include "dhilb/linalg.hpp"

namespace dhilb {

/// Multilinear map W^{(x)n} -> W as a dense table: entry [word * dim + e] is the coefficient of
/// basis element e in the value on `word`. Words are numbered in base dim, first letter most significant.
using MultilinearTable = std::vector<Rational>;

std::size_t table_size(std::size_t dim, int weight);
std::vector<Index> word_letters(std::size_t dim, int weight, std::size_t word);

/// The corestrictions D_i: W^{(x)i} -> W (degree 2 - i) of a coderivation of the cofree Lie
/// coalgebra on W[1]. D_1 is allowed and is the differential of W.
struct CInfinityStructure {
    std::vector<int> degrees;  // cohomological degree of each basis element of W
    std::map<int, MultilinearTable> D;
    std::vector<std::string> labels;

    std::size_t dim() const { return degrees.size(); }
    /// W = A placed in cohomological degree 0 (its internal grading is ignored), D_2 = product.
    static CInfinityStructure strict(const FiniteGradedAlgebra& A);
    /// Table sizes, degrees and the shuffle relations of every D_i. Returns the first problem or "".
    std::string problem() const;
    void validate() const;  // ValidationError carrying problem()
};

struct MCCheck {
    bool ok = true;
    std::optional<int> first_failing_weight;
    std::string reason;
};

/// D o D = 0 through weight_cap. A D_i that is not a Harrison cochain fails at weight i.
MCCheck mc_check(const CInfinityStructure& S, int weight_cap);

/// Weight-n corestriction of D o D, transported back to a map W^{(x)n} -> W.
/// For W in degree 0 with only D_2 this is minus the associator at weight 3.
MultilinearTable mc_defect(const CInfinityStructure& S, int n);

/// A Harrison cochain D_n of degree 2 - n (replacing the current one) that makes the weight-n
/// defect vanish, or nullopt if none exists. The lower weights are not re-checked.
std::optional<MultilinearTable> solve_mc_component(const CInfinityStructure& S, int n);

/// Signed-shuffle-vanishing maps (sW)^{(x)n} -> sW (the b-form Harrison cochains), optionally
/// restricted to maps of a fixed degree. Rows of the subspace are tables in b-form.
Subspace harrison_b_cochains(const std::vector<int>& degrees, int n, std::optional<int> b_degree = std::nullopt);

/// Harrison coordinates t of D_2..D_cap on W (dim_w basis vectors in degree 0), each t of degree
/// 2 - n, with d t given by the coefficients of D o D. Checks d^2 = 0 on every generator as an
/// identity of graded-commutative polynomials.
struct CoordinateDgaReport {
    std::size_t dim_w = 0;
    int weight_cap = 0;
    std::map<int, std::size_t> generators;  // weight -> number of coordinates
    std::size_t monomials_checked = 0;
    bool d_squared_zero = true;
    std::string first_failure;
};
CoordinateDgaReport coordinate_dga_check(std::size_t dim_w, int weight_cap = 4);

/// Tangent cohomology of RCA(W) at the strict structure mu: H^0 = Z^2_Harr(W, W) and
/// H^i = H^{i+2}_Harr(W, W) for 0 < i <= m.
struct RcaTangentReport {
    int m = 0;
    std::vector<std::size_t> dims;            // from the linearized Maurer-Cartan operator
    std::vector<std::size_t> harrison_dims;   // from the Harrison complex of (W, mu)
    std::vector<std::size_t> term_dims;       // tangent complex terms T^0..T^{m+2}
    bool euler_ok = false;
};
/// Tangent complex T^i = weight-(i+2) cochains with d E = [D, E].
std::vector<std::size_t> rca_tangent_mc(const FiniteGradedAlgebra& W, int m, std::vector<std::size_t>* term_dims = nullptr,
                                        bool* euler_ok = nullptr);
std::vector<std::size_t> rca_tangent_harrison(const FiniteGradedAlgebra& W, int m, const Field& field = Field::rationals());
/// Both paths; InternalError if they disagree. BudgetError past max_entries table cells.
RcaTangentReport rca_tangent(const FiniteGradedAlgebra& W, int m, std::size_t max_entries = 1u << 18);

/// H^i T_[f] RHom_Com(A, B) = H^{i+1}_Harr(A, B) for 0 <= i <= m, B an A-module through f,
/// summed over internal degrees. ValidationError "not a homomorphism: ..." if f is not multiplicative.
std::vector<std::size_t> rhom_tangent(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B, const AlgebraMap& f,
                                      int m, const Field& field = Field::rationals());

}  // namespace dhilb
