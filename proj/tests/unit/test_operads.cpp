#include "doctest.h"
#include "dhilb/c_infinity.hpp"
#include "dhilb/error.hpp"
#include "dhilb/harrison.hpp"
#include "dhilb/operads.hpp"

#include <numeric>

using namespace dhilb;

namespace {

std::size_t factorial(int n) {
    std::size_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::size_t>(k);
    return f;
}

/// Single binary generator with trivial S_2 action, nothing in arity 3.
SModule binary_generator() {
    SModule E = SModule::of(*com_operad(3));
    E.degrees[3].clear();
    E.labels[3].clear();
    for (auto& [sigma, m] : E.actions[3]) m = SparseMatrix(0, 0);
    return E;
}

/// Degree 1-n in arity n like the suspension of Com, but with trivial action and unsigned compositions.
struct UnsignedSuspension : Operad {
    std::string name() const override { return "unsigned"; }
    int max_arity() const override { return 4; }
    std::size_t dim(int) const override { return 1; }
    int degree(int n, Index) const override { return 1 - n; }
    SparseVector act(int, const Permutation&, Index) const override { return {{0, Rational(1)}}; }
    SparseVector compose(int, int, int, Index, Index) const override { return {{0, Rational(1)}}; }
};

Rational trace(const SparseMatrix& m) {
    Rational t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
}

void set_entry(MultilinearTable& t, std::size_t dim, const std::vector<Index>& word, Index e, const Rational& v) {
    std::size_t k = 0;
    for (Index l : word) k = k * dim + l;
    t[k * dim + e] = v;
}

using Table = std::vector<std::vector<std::vector<Rational>>>;
Table zero_table(std::size_t n) { return Table(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0))); }

/// Structure on W = span(a, b) in degree 0: bb = a, ab = ba = a (commutative, not associative).
CInfinityStructure non_associative() {
    CInfinityStructure S;
    S.degrees = {0, 0};
    S.D[2] = MultilinearTable(table_size(2, 2), Rational(0));
    set_entry(S.D[2], 2, {1, 1}, 0, 1);
    set_entry(S.D[2], 2, {0, 1}, 0, 1);
    set_entry(S.D[2], 2, {1, 0}, 0, 1);
    return S;
}

/// The same product with u in degree -1, D_1(u) = a and bu = ub = kappa u.
CInfinityStructure non_associative_with_differential(int kappa) {
    CInfinityStructure S;
    S.degrees = {0, 0, -1};
    S.D[1] = MultilinearTable(table_size(3, 1), Rational(0));
    set_entry(S.D[1], 3, {2}, 0, 1);
    S.D[2] = MultilinearTable(table_size(3, 2), Rational(0));
    set_entry(S.D[2], 3, {1, 1}, 0, 1);
    set_entry(S.D[2], 3, {0, 1}, 0, 1);
    set_entry(S.D[2], 3, {1, 0}, 0, 1);
    set_entry(S.D[2], 3, {1, 2}, 2, kappa);
    set_entry(S.D[2], 3, {2, 1}, 2, kappa);
    return S;
}

/// span(x, x^2, ..., x^k) with x^{k+1} = 0, x^i in degree i.
FiniteGradedAlgebra truncated_powers(int k) {
    std::map<int, std::size_t> dims;
    for (int d = 1; d <= k; ++d) dims[d] = 1;
    const std::size_t n = static_cast<std::size_t>(k);
    std::vector<SparseVector> products(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a + b + 2 <= n) products[a * n + b] = {{static_cast<Index>(a + b + 1), Rational(1)}};
    return FiniteGradedAlgebra(1, k, dims, products);
}

AlgebraMap identity_map(std::size_t n) {
    AlgebraMap f;
    for (Index g = 0; g < n; ++g) f.images.push_back({{g, Rational(1)}});
    return f;
}

}  // namespace

TEST_CASE("Lie(n) has dimension (n-1)! by Dynkin basis and by spanning all bracketings") {
    CHECK(lie_component(2).dim == 1);
    CHECK(lie_component(3).dim == 2);
    CHECK(lie_component(4).dim == 6);
    for (int n = 2; n <= 5; ++n) {
        CAPTURE(n);
        CHECK(lie_component(n).dim == factorial(n - 1));
        CHECK(lie_dimension_by_spanning(n) == factorial(n - 1));
        CHECK(lie_operad(5)->dim(n) == factorial(n - 1));
    }
    SModule::of(*lie_operad(5)).check_relations();
}

TEST_CASE("suspension: round trip, degrees and sign twist") {
    const SModule com = SModule::of(*com_operad(5));
    CHECK(desuspend(suspend(com)) == com);
    CHECK(suspend(desuspend(com)) == com);
    const SModule s = suspend(com);
    CHECK(s.degrees[2] == std::vector<int>{-1});
    CHECK(s.action(2, {1, 0}) == SparseMatrix::identity(1).scaled(-1));

    // Sigma(Lie)(3): degree -2; action is Lie(3) tensor sgn, still the 2-dim standard representation.
    const SModule lie = SModule::of(*lie_operad(4));
    const SModule sl = suspend(lie);
    CHECK(sl.degrees[3] == std::vector<int>{-2, -2});
    for (const auto& sigma : all_permutations(3)) {
        CAPTURE(sigma);
        CHECK(sl.action(3, sigma) == lie.action(3, sigma).scaled(sign(sigma)));
    }
    CHECK(trace(sl.action(3, {1, 0, 2})) == 0);
    CHECK(trace(sl.action(3, {1, 2, 0})) == -1);
    CHECK(trace(sl.action(3, {0, 1, 2})) == 2);
    sl.check_relations();

    // The operad-level suspension agrees with the S-module one.
    CHECK(SModule::of(*suspend(lie_operad(4))) == sl);
}

TEST_CASE("free operad tree bases") {
    FreeOperad F(binary_generator(), "F");
    CHECK(F.dim(2) == 1);
    CHECK(F.dim(3) == 3);
    CHECK_THROWS_AS(F.dim(4), BudgetError);

    // Trees decorated by Lie*: enumeration agrees with the root-partition recursion.
    const auto lam = small_resolution(4);
    for (int n = 2; n <= 4; ++n) {
        CAPTURE(n);
        CHECK(lam->dim(n) == count_trees(n, [](int k) { return factorial(k - 1); }));
    }
    CHECK(lam->dim(3) == 5);
    CHECK(lam->dim(4) == 41);
    CHECK(count_trees(4, [](int) { return std::size_t{1}; }) == 26);
}

TEST_CASE("bar construction of Com is Koszul through arity 4") {
    const auto com = com_operad(4);
    for (int n = 2; n <= 4; ++n) {
        CAPTURE(n);
        const BarComplex B = bar(*com, n);
        const CohomologyProfile h = cohomology_profile(B.complex);
        REQUIRE(h.dims.size() == 1);
        CHECK(h.dims.begin()->first == 1 - n);
        CHECK(h.dims.begin()->second == factorial(n - 1));
    }
    CHECK(bar(*com, 3).complex.dim(-2, 0) == 3);
    CHECK(bar(*com, 3).complex.dim(-1, 0) == 1);
}

TEST_CASE("cobar of Lie*: one-dimensional cohomology in a single degree") {
    const auto lam = small_resolution(4);
    CHECK(operad_complex(*lam, 2).dims().size() == 1);
    CHECK(differential(*lam, 2, {{0, Rational(1)}}).empty());
    const CochainComplex c3 = operad_complex(*lam, 3);
    CHECK(c3.dims().size() == 2);
    for (int n = 2; n <= 4; ++n) {
        CAPTURE(n);
        const CohomologyProfile h = cohomology_profile(operad_complex(*lam, n));
        CHECK(h.total() == 1);
        CHECK(h.dims.size() == 1);
        CHECK(h.dims.count(0) == 1);
    }
    const DgOperadReport r = check_dg_operad(*lam, 4);
    CHECK(r.ok());
    CHECK(r.pairs_checked > 0);
}

TEST_CASE("Cobar(Bar(Com)) recovers Com through arity 3") {
    const auto com = com_operad(3);
    for (int n = 2; n <= 3; ++n) {
        CAPTURE(n);
        const CohomologyProfile h = cohomology_profile(cobar_bar(com, n));
        CHECK(h.total() == 1);
        CHECK(h.dims.count(0) == 1);
    }
    CHECK_THROWS_AS(cobar_bar(com, 4), ValidationError);
    CHECK(check_dg_operad(*cobar_of_dual(com), 3).ok());
}

TEST_CASE("sign control: a suspension without the Koszul signs breaks d^2 = 0") {
    const UnsignedSuspension naive;
    CHECK_NOTHROW(bar(naive, 3));
    CHECK_THROWS_AS(bar(naive, 4), InternalError);
    const auto signed_version = suspend(com_operad(4));
    CHECK(cohomology_profile(bar(*signed_version, 4).complex).total() == 6);
}

TEST_CASE("mc_check: strict, non-associative and corrected structures") {
    Table t = zero_table(2);
    t[0][0][1] = 1;  // x * x = x^2
    const auto W = FiniteGradedAlgebra::ungraded(t);
    const MCCheck strict = mc_check(CInfinityStructure::strict(W), 5);
    CHECK(strict.ok);
    CHECK(!strict.first_failing_weight);

    const CInfinityStructure N = non_associative();
    const MCCheck bad = mc_check(N, 4);
    CHECK(!bad.ok);
    CHECK(bad.first_failing_weight == 3);
    // Weight-3 defect is minus the associator: (a, b, b) -> -a and (b, b, a) -> a.
    MultilinearTable expected(table_size(2, 3), Rational(0));
    set_entry(expected, 2, {0, 1, 1}, 0, -1);
    set_entry(expected, 2, {1, 1, 0}, 0, 1);
    CHECK(mc_defect(N, 3) == expected);
    CHECK(!solve_mc_component(N, 3));  // degree 0 leaves no room for D_3

    CInfinityStructure G = non_associative_with_differential(1);
    CHECK(G.problem().empty());
    const MCCheck before = mc_check(G, 3);
    CHECK(before.first_failing_weight == 3);
    const auto d3 = solve_mc_component(G, 3);
    REQUIRE(d3);
    G.D[3] = *d3;
    CHECK(G.problem().empty());
    CHECK(mc_check(G, 3).ok);

    // With the opposite sign D_2 is not a derivation for D_1.
    CHECK(mc_check(non_associative_with_differential(-1), 3).first_failing_weight == 2);

    // Associative but not commutative: not a Harrison cochain.
    CInfinityStructure A;
    A.degrees = {0, 0};
    A.D[2] = MultilinearTable(table_size(2, 2), Rational(0));
    set_entry(A.D[2], 2, {0, 0}, 0, 1);
    set_entry(A.D[2], 2, {0, 1}, 1, 1);
    const MCCheck nc = mc_check(A, 3);
    CHECK(!nc.ok);
    CHECK(nc.first_failing_weight == 2);
    CHECK(nc.reason.find("Harrison") != std::string::npos);
    CHECK_THROWS_AS(A.validate(), ValidationError);
    CHECK_THROWS_AS(mc_check(A, 1), ValidationError);
}

TEST_CASE("mc_check agrees with the algebra's own associativity check") {
    Table t = zero_table(2);
    t[1][1][0] = 1;
    t[0][1][0] = t[1][0][0] = 1;
    CHECK_THROWS_AS(FiniteGradedAlgebra::ungraded(t), ValidationError);
    CInfinityStructure S;
    S.degrees = {0, 0};
    S.D[2] = MultilinearTable(table_size(2, 2), Rational(0));
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c) S.D[2][(a * 2 + b) * 2 + c] = t[a][b][c];
    CHECK(!mc_check(S, 3).ok);
}

TEST_CASE("coordinate dg-algebra of RCA(W): d^2 = 0 on every generator") {
    for (std::size_t dim = 1; dim <= 2; ++dim) {
        CAPTURE(dim);
        const CoordinateDgaReport r = coordinate_dga_check(dim, 4);
        CHECK(r.d_squared_zero);
        CHECK(r.first_failure.empty());
    }
    const CoordinateDgaReport r = coordinate_dga_check(2, 4);
    // Harrison dims on a 2-dim W: symmetric bilinear maps, then the free Lie coalgebra in weights 3, 4.
    CHECK(r.generators.at(2) == 6);
    CHECK(r.generators.at(3) == 4);
    CHECK(r.generators.at(4) == 6);
    CHECK(r.monomials_checked > 0);
    CHECK_THROWS_AS(coordinate_dga_check(0, 4), ValidationError);
}

TEST_CASE("rca_tangent: Maurer-Cartan and Harrison paths agree") {
    // W = span(x, x^2) with x^3 = 0, both placed in degree 0.
    Table t = zero_table(2);
    t[0][0][1] = 1;
    const auto W = FiniteGradedAlgebra::ungraded(t);
    const RcaTangentReport r = rca_tangent(W, 2);
    CHECK(r.dims == r.harrison_dims);
    CHECK(r.euler_ok);
    // Independent count of Z^2: symmetric bilinear f with x f(y, z) - f(xy, z) + f(x, yz) - f(x, y) z = 0.
    const GradedModule M = GradedModule::regular(W);
    const CochainComplex c = harrison_complex(W, M, 3);
    CHECK(r.dims[0] == c.dim(2, 0) - rank(c.differential(2, 0)));
    CHECK(r.dims == std::vector<std::size_t>{4, 0, 0});
    CHECK(r.term_dims == std::vector<std::size_t>{6, 4, 6, 12, 22});

    // The same algebra with its internal grading gives the same totals.
    CHECK(rca_tangent(truncated_powers(2), 1).dims == std::vector<std::size_t>{4, 0});

    // Zero multiplication: delta = 0, so H^0 is the whole weight-2 space S^2(W) (x) W.
    const auto Z = FiniteGradedAlgebra::zero_product(0, 0, {{0, 2}});
    const RcaTangentReport z = rca_tangent(Z, 1);
    CHECK(z.dims[0] == 3 * 2);
    CHECK(z.dims[1] == 2 * 2);

    CHECK_THROWS_AS(rca_tangent(W, 2, 32), BudgetError);
    CHECK_THROWS_AS(rca_tangent(W, -1), ValidationError);
}

TEST_CASE("rhom_tangent: H^0 = Der(A, B)") {
    const auto A3 = truncated_powers(3);
    const auto id3 = rhom_tangent(A3, A3, identity_map(3), 1);
    CHECK(id3[0] == 3);
    CHECK(id3[0] == derivation_dim(A3, GradedModule::regular(A3)));

    const auto A1 = truncated_powers(1);
    CHECK(rhom_tangent(A1, A1, identity_map(1), 0)[0] == 1);

    const auto zero = FiniteGradedAlgebra::zero_product(1, 3, {});
    AlgebraMap to_zero;
    to_zero.images.assign(3, SparseVector{});
    const auto z = rhom_tangent(A3, zero, to_zero, 1);
    CHECK(z == std::vector<std::size_t>{0, 0});

    // Quotient map span(x, x^2, x^3) -> span(x, x^2).
    const auto A2 = truncated_powers(2);
    AlgebraMap quotient;
    quotient.images = {{{0, Rational(1)}}, {{1, Rational(1)}}, {}};
    const auto q = rhom_tangent(A3, A2, quotient, 1);
    CHECK(q[0] == derivation_dim(A3, GradedModule::via_map(A3, A2, quotient)));

    // The inclusion the other way is not multiplicative: x * x^2 = 0 in the source.
    AlgebraMap inclusion;
    inclusion.images = {{{0, Rational(1)}}, {{1, Rational(1)}}};
    CHECK_THROWS_WITH_AS(rhom_tangent(A2, A3, inclusion, 0), doctest::Contains("not a homomorphism"), ValidationError);
}
