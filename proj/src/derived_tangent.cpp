#include "dhilb/derived_tangent.hpp"

#include <algorithm>

#include "dhilb/error.hpp"
#include "dhilb/parallel.hpp"

namespace dhilb {

namespace {

struct ShiftedHarrison {
    std::vector<HarrisonSlice> slices;  // slices[w-1] has weight w
    CochainComplex complex;
};

/// Builds weights 1..max_weight in internal degree 0, reindexed to degree = weight - 1.
ShiftedHarrison build_shifted(const FiniteGradedAlgebra& B, const GradedModule& M, int max_weight,
                              const DifferentialOptions& options) {
    ShiftedHarrison h;
    const auto vw = vanishing_weight(B, M, 0);
    const int top = vw ? std::min(max_weight, *vw - 1) : max_weight;
    const bool complete = vw && *vw - 1 <= max_weight;
    std::map<Bidegree, std::size_t> dims;
    std::map<Bidegree, SparseMatrix> diffs;
    for (int w = 1; w <= top; ++w) {
        h.slices.emplace_back(B, M, w, 0);
        dims[{w - 1, 0}] = h.slices.back().dim();
    }
    for (int w = 1; w < top; ++w)
        diffs[{w - 1, 0}] = harrison_differential(B, M, h.slices[static_cast<std::size_t>(w - 1)],
                                                  h.slices[static_cast<std::size_t>(w)], options);
    std::optional<int> known;
    if (!complete) known = top - 1;
    h.complex = CochainComplex(std::move(dims), std::move(diffs), known);
    return h;
}

/// Highest weight needed, after discarding weights that vanish for degree reasons.
int needed_weight(const FiniteGradedAlgebra& B, const GradedModule& M, int wanted) {
    const auto vw = vanishing_weight(B, M, 0);
    return vw ? std::min(wanted, *vw - 1) : wanted;
}

}  // namespace

CochainComplex rder_complex(const FiniteGradedAlgebra& B, const GradedModule& M, int max_weight,
                            const DifferentialOptions& options) {
    return build_shifted(B, M, max_weight, options).complex;
}

TangentReport derived_tangent(const FiniteGradedAlgebra& A, const IdealPoint& I, int m,
                              const TangentOptions& options) {
    if (m < 0) throw ValidationError("m must be nonnegative");
    if (!is_graded_ideal(A, I.subspace)) throw ValidationError("derived tangent at a subspace that is not an ideal");
    const FiniteGradedAlgebra B = quotient_algebra(A, I);
    const AlgebraMap pi = quotient_map(A, I);
    const GradedModule MB = GradedModule::regular(B);
    const GradedModule MA = GradedModule::via_map(A, B, pi);

    // H^m of the tangent is H^{m+1} of the fiber: it needs S up to degree m+2
    // (weight m+3) and T up to degree m+1 (weight m+2).
    const int wS = needed_weight(B, MB, m + 3);
    const int wT = needed_weight(A, MA, m + 2);
    const int need = std::max(wS, wT);
    if (need > options.n_max) throw BudgetError("Harrison weight budget (n_max)", options.n_max, need);

    const DifferentialOptions dopt{options.verify_closure};
    ShiftedHarrison S = build_shifted(B, MB, wS, dopt);
    ShiftedHarrison T = build_shifted(A, MA, wT, dopt);
    std::map<Bidegree, SparseMatrix> comps;
    const std::size_t common = std::min(S.slices.size(), T.slices.size());
    for (std::size_t w = 0; w < common; ++w)
        comps[{static_cast<int>(w), 0}] = harrison_pullback(pi, S.slices[w], T.slices[w], A);
    const ChainMap f(S.complex, T.complex, std::move(comps));
    const CochainComplex F = mapping_fiber(f);

    TangentReport r;
    r.p = A.p();
    r.q = A.q();
    r.m = m;
    for (int i = 0; i <= m; ++i) r.dims.push_back(cohomology_dim(F, i + 1, 0, options.field));
    r.classical_dim = classical_tangent_dim(A, I, {options.field, std::nullopt});
    for (const auto& s : S.slices) r.weight_dims_source.push_back(s.dim());
    for (const auto& s : T.slices) r.weight_dims_target.push_back(s.dim());

    if (!S.complex.known_through() && !T.complex.known_through()) {
        r.euler_checked = true;
        long long sum = 0;
        const int hi = static_cast<int>(std::max(S.slices.size(), T.slices.size())) + 1;
        for (int k = 0; k <= hi; ++k) {
            const long long term = static_cast<long long>(cohomology_dim(F, k, 0, options.field)) -
                                   static_cast<long long>(cohomology_dim(S.complex, k, 0, options.field)) -
                                   static_cast<long long>(cohomology_dim(T.complex, k - 1, 0, options.field));
            sum += (k % 2 == 0) ? term : -term;
        }
        r.euler_ok = sum == 0;
    }
    return r;
}

TangentReport derived_tangent(const HomIdealPresentation& X, const HomIdealPresentation& Z, int p, int q, int m,
                              const TangentOptions& options) {
    const TruncatedRing R(X, p, q);
    return derived_tangent(R.algebra(), subscheme_to_point(R, Z), m, options);
}

const SweepEntry& SweepTable::at(int p, int q) const {
    for (const auto& e : entries)
        if (e.p == p && e.q == q) return e;
    throw ValidationError("window (" + std::to_string(p) + "," + std::to_string(q) + ") not in the sweep");
}

SweepTable stabilization_sweep(const HomIdealPresentation& X, const HomIdealPresentation& Z, int m,
                               const std::vector<int>& p_values, const std::vector<int>& q_values,
                               const TangentOptions& options) {
    if (p_values.empty() || q_values.empty()) throw ValidationError("sweep ranges must be nonempty");
    SweepTable t;
    t.p_values = p_values;
    t.q_values = q_values;
    std::sort(t.p_values.begin(), t.p_values.end());
    std::sort(t.q_values.begin(), t.q_values.end());
    t.m = m;
    for (int p : t.p_values)
        for (int q : t.q_values) t.entries.push_back({p, q, std::nullopt, ""});
    parallel_for(t.entries.size(), [&](std::size_t k) {
        auto& e = t.entries[k];
        if (e.p > e.q) {
            e.error = "empty window";
            return;
        }
        try {
            e.report = derived_tangent(X, Z, e.p, e.q, m, options);
        } catch (const BudgetError&) {
            throw;
        } catch (const ValidationError& err) {
            e.error = err.what();
        }
    });
    for (const auto& e : t.entries)
        if (e.report && e.report->dims[0] != e.report->classical_dim) t.classical_consistent = false;
    for (int i = 0; i <= m; ++i) {
        auto constant_from = [&](int p0, int q0) -> std::optional<std::size_t> {
            std::optional<std::size_t> v;
            for (const auto& e : t.entries) {
                if (e.p < p0 || e.q < q0) continue;
                if (!e.report) return std::nullopt;
                const std::size_t d = e.report->dims[static_cast<std::size_t>(i)];
                if (v && *v != d) return std::nullopt;
                v = d;
            }
            return v;
        };
        const auto whole = constant_from(t.p_values.front(), t.q_values.front());
        t.stable.push_back(whole.has_value());
        std::optional<std::pair<int, int>> corner;
        std::optional<std::size_t> value;
        std::size_t best_size = 0;
        for (int p0 : t.p_values)
            for (int q0 : t.q_values) {
                const auto v = constant_from(p0, q0);
                if (!v) continue;
                std::size_t size = 0;
                for (const auto& e : t.entries) size += (e.p >= p0 && e.q >= q0);
                if (size > best_size) {
                    best_size = size;
                    corner = std::make_pair(p0, q0);
                    value = v;
                }
            }
        t.stable_corner.push_back(corner);
        t.stable_value.push_back(value);
    }
    return t;
}

TangentReport rmap_tangent(const HomIdealPresentation& segre, const HomIdealPresentation& graph, int p, int q, int m,
                           const TangentOptions& options) {
    return derived_tangent(segre, graph, p, q, m, options);
}

}  // namespace dhilb
