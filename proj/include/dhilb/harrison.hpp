#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dhilb/complex.hpp"
#include "dhilb/graded_algebra.hpp"

namespace dhilb {

/// Solution space of the signed-shuffle equations on words with a fixed letter
/// multiplicity pattern. Letters are 0..r-1; words are all rearrangements.
/// Depends only on the pattern, so it is computed once and shared.
struct ShufflePattern {
    std::vector<int> multiplicities;
    std::vector<std::vector<std::uint8_t>> words;     // lex order
    std::vector<Index> coordinate_words;              // words whose values are free
    std::vector<SparseVector> expansion;              // f(word) = sum_j expansion[word][j] * f(coordinate_words[j])

    std::size_t dim() const { return coordinate_words.size(); }
    Index word_index(const std::vector<std::uint8_t>& w) const;

    static std::shared_ptr<const ShufflePattern> get(const std::vector<int>& multiplicities);

private:
    std::map<std::uint64_t, Index> index_;
    friend std::shared_ptr<const ShufflePattern> build_pattern(const std::vector<int>&);
};

/// Sign of the (i, n-i) shuffle placing the first word at `positions` (ascending).
int shuffle_sign(const std::vector<int>& positions);

/// Weight-n Harrison cochains A^{(x)n} -> M of one internal degree
/// (deg of output minus total degree of inputs). Coordinates are organized in
/// blocks indexed by (sorted input content, output basis element); inside a
/// block they are the values on the pattern's coordinate words.
class HarrisonSlice {
public:
    HarrisonSlice() = default;
    HarrisonSlice(const FiniteGradedAlgebra& A, const GradedModule& M, int weight, int internal_degree);

    struct Block {
        std::vector<Index> content;   // sorted letters (A basis indices)
        std::vector<Index> distinct;  // sorted distinct letters
        Index output;                 // M basis index
        std::shared_ptr<const ShufflePattern> pattern;
        Index offset;
    };

    int weight() const noexcept { return weight_; }
    int internal_degree() const noexcept { return internal_degree_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    /// Value of a cochain at (word, m) as a combination of coordinates; empty if the block does not exist.
    void evaluate(const std::vector<Index>& word, Index m, const Rational& scale,
                  std::vector<std::pair<Index, Rational>>& out) const;
    /// Letters of coordinate j of a block.
    std::vector<Index> coordinate_word(const Block& b, std::size_t j) const;
    std::string coordinate_label(Index coord, const FiniteGradedAlgebra& A, const GradedModule& M) const;
    std::optional<std::size_t> find_block(const std::vector<Index>& sorted_content, Index m) const;

private:
    int weight_ = 0;
    int internal_degree_ = 0;
    std::size_t dim_ = 0;
    std::vector<Block> blocks_;
    std::map<std::vector<Index>, std::vector<std::pair<Index, std::size_t>>> lookup_;  // content -> (m, block)
    std::vector<Index> block_of_coord_;
};

/// Harrison cochain space of weight n split by internal degree; `internal_degree`
/// restricts to a single slice.
struct HarrisonCochainSpace {
    int weight = 0;
    std::map<int, HarrisonSlice> slices;
    std::size_t dim() const;
};

HarrisonCochainSpace harrison_space(const FiniteGradedAlgebra& A, const GradedModule& M, int n,
                                    std::optional<int> internal_degree = std::nullopt);

/// Internal degrees that can carry weight-n cochains.
std::vector<int> harrison_internal_degrees(const FiniteGradedAlgebra& A, const GradedModule& M, int n);

struct DifferentialOptions {
    /// Re-evaluate delta(f) on every word, not only coordinate words, and require the shuffle
    /// relations to hold (InternalError otherwise).
    bool verify_closure = false;
};

/// delta: weight n -> weight n+1 in one internal degree, with
///   (delta f)(a, b) = f(ab) - a f(b) - b f(a)
/// on weight 1, i.e. minus the Hochschild coboundary in every weight.
SparseMatrix harrison_differential(const FiniteGradedAlgebra& A, const GradedModule& M, const HarrisonSlice& source,
                                   const HarrisonSlice& target, const DifferentialOptions& options = {});

/// Harrison complex with cohomological degree = weight, weights 1..n_max.
/// The top weight is cut off (its outgoing differential is not built) unless
/// all higher weights vanish for degree reasons.
CochainComplex harrison_complex(const FiniteGradedAlgebra& A, const GradedModule& M, int n_max,
                                std::optional<int> internal_degree = std::nullopt,
                                const DifferentialOptions& options = {});

struct HarrisonCohomology {
    std::size_t dim = 0;
    std::map<int, std::size_t> by_internal_degree;
    SparseMatrix representatives;  // only for a single requested internal degree
};

HarrisonCohomology harrison_cohomology(const FiniteGradedAlgebra& A, const GradedModule& M, int n,
                                       std::optional<int> internal_degree = std::nullopt,
                                       const Field& field = Field::rationals(), bool representatives = false);

/// Pullback along f: A -> B restricted to one slice: g |-> g(f a_1, ..., f a_n).
/// M is a B-module (source slice over B) and an A-module through f (target slice over A).
SparseMatrix harrison_pullback(const AlgebraMap& f, const HarrisonSlice& over_B, const HarrisonSlice& over_A,
                               const FiniteGradedAlgebra& A);

/// Lowest weight from which every weight-n space in `internal_degree` is zero for degree reasons,
/// or nullopt if no such bound exists (e.g. degree-0 algebras).
std::optional<int> vanishing_weight(const FiniteGradedAlgebra& A, const GradedModule& M, int internal_degree);

/// Brute-force dimension of Der(A, M) in one internal degree (or all): solves
/// D(ab) = a D(b) + b D(a) on the unknown matrix of D. Independent of the Harrison code.
std::size_t derivation_dim(const FiniteGradedAlgebra& A, const GradedModule& M,
                           std::optional<int> internal_degree = std::nullopt,
                           const Field& field = Field::rationals());

}  // namespace dhilb
