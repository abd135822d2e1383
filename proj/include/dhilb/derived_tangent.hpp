#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dhilb/complex.hpp"
#include "dhilb/harrison.hpp"
#include "dhilb/ideal_scheme.hpp"

namespace dhilb {

struct TangentOptions {
    Field field = Field::rationals();
    /// Largest Harrison weight that may be built.
    int n_max = 4;
    /// Re-check shuffle closure of every Harrison differential (slow; for tests).
    bool verify_closure = false;
};

/// Internal-degree-0 Harrison complex of B with coefficients in M, shifted so
/// that cohomological degree i holds weight i+1 (H^0 = degree-0 derivations).
/// Weights 1..max_weight are built; the complex is complete if higher weights vanish.
CochainComplex rder_complex(const FiniteGradedAlgebra& B, const GradedModule& M, int max_weight,
                            const DifferentialOptions& options = {});

struct TangentReport {
    int p = 0, q = 0;
    int m = 0;
    std::vector<std::size_t> dims;  // H^0..H^m of the tangent complex
    std::size_t classical_dim = 0;
    /// Alternating sum of h^k(F) - h^k(S) - h^{k-1}(T) vanishes; checked when both complexes are complete.
    bool euler_checked = false;
    bool euler_ok = true;
    std::vector<std::size_t> weight_dims_source;  // dims of rder(A/I, A/I) terms
    std::vector<std::size_t> weight_dims_target;  // dims of rder(A, A/I) terms
};

/// H^i T = H^{i+1} of the fiber of rder(A/I, A/I) -> rder(A, A/I), internal degree 0.
TangentReport derived_tangent(const FiniteGradedAlgebra& A, const IdealPoint& I, int m,
                              const TangentOptions& options = {});
TangentReport derived_tangent(const HomIdealPresentation& X, const HomIdealPresentation& Z, int p, int q, int m,
                              const TangentOptions& options = {});

struct SweepEntry {
    int p = 0, q = 0;
    std::optional<TangentReport> report;
    std::string error;  // set when the window could not be computed
};

struct SweepTable {
    std::vector<int> p_values, q_values;
    int m = 0;
    std::vector<SweepEntry> entries;  // row-major over (p, q)
    /// stable[i]: H^i identical over the whole grid.
    std::vector<bool> stable;
    /// Smallest corner (p*, q*) from which H^i is constant on the sub-grid p >= p*, q >= q*.
    std::vector<std::optional<std::pair<int, int>>> stable_corner;
    std::vector<std::optional<std::size_t>> stable_value;
    bool classical_consistent = true;  // H^0 == classical_dim in every computed window

    const SweepEntry& at(int p, int q) const;
};

SweepTable stabilization_sweep(const HomIdealPresentation& X, const HomIdealPresentation& Z, int m,
                               const std::vector<int>& p_values, const std::vector<int>& q_values,
                               const TangentOptions& options = {});

/// Tangent of the mapping space at f, via its graph Z_f inside a Segre-presented C x Y.
/// That Z_f projects isomorphically onto C is the caller's responsibility.
TangentReport rmap_tangent(const HomIdealPresentation& segre, const HomIdealPresentation& graph, int p, int q, int m,
                           const TangentOptions& options = {});

}  // namespace dhilb
