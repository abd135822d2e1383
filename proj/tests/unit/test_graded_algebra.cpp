#include "doctest.h"
#include "dhilb/error.hpp"
#include "dhilb/graded_algebra.hpp"
#include "dhilb/ideal_scheme.hpp"

using namespace dhilb;

namespace {
HomIdealPresentation P(std::size_t n, std::vector<std::string> g) { return HomIdealPresentation::parse(n, g); }
const std::vector<std::string> kTwistedCubic = {"x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"};
}  // namespace

TEST_CASE("polynomial parsing") {
    Polynomial f = parse_polynomial("x0*x1*(x0 - x1)", 2);
    CHECK(f.homogeneous_degree() == 3);
    CHECK(f.terms().size() == 2);
    CHECK(parse_polynomial("2/4*x0^2 - -x1^2", 2).to_string() == "1/2*x0^2 + x1^2");
    CHECK(parse_polynomial("(x0+x1)^2", 2).terms().size() == 3);
    CHECK_THROWS_AS(parse_polynomial("x0^2 + ", 2), ValidationError);
    CHECK_THROWS_AS(parse_polynomial("x3", 2), ValidationError);
    CHECK_THROWS_AS(parse_polynomial("x0 ** x1", 2), ValidationError);
    CHECK_THROWS_AS(P(1, {"x0^2 + x1"}), ValidationError);
    try {
        parse_polynomial("x0 + y", 2);
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("column 6") != std::string::npos);
    }
}

TEST_CASE("monomial bases") {
    auto m = monomials_of_degree(3, 2);
    CHECK(m.size() == 6);
    CHECK(m.front() == Monomial{2, 0, 0});
    CHECK(m.back() == Monomial{0, 0, 2});
    for (std::size_t n = 1; n <= 3; ++n)
        for (int d = 0; d <= 5; ++d) CHECK(monomials_of_degree(n + 1, d).size() == binomial(n + d, n));
}

TEST_CASE("ideal degree pieces") {
    CHECK(ideal_degree_piece(P(1, {"x0*x1"}), 2).dim() == 1);
    CHECK(ideal_degree_piece(P(1, {"x0*x1"}), 3).dim() == 2);
    CHECK(ideal_degree_piece(P(3, kTwistedCubic), 2).dim() == 3);
}

TEST_CASE("coordinate ring truncations") {
    auto A = coordinate_ring_truncation(P(2, {}), 1, 2);
    CHECK(A.dim(1) == 3);
    CHECK(A.dim(2) == 6);
    CHECK(coordinate_ring_truncation(P(2, {"x0^2 - x1*x2"}), 2, 2).dim(2) == 5);
    CHECK(coordinate_ring_truncation(P(3, kTwistedCubic), 2, 2).dim(2) == 7);
    // Window read as degrees p..q; products past q vanish.
    auto T = coordinate_ring_truncation(P(1, {}), 1, 2);
    CHECK(T.product(T.offset(2), T.offset(1)).empty());
    CHECK_FALSE(T.product(T.offset(1), T.offset(1)).empty());
}

TEST_CASE("structure checks reject bad tables") {
    using V = std::vector<Rational>;
    // Non-commutative: e0*e1 = e1, e1*e0 = 0.
    std::vector<std::vector<V>> t = {{V{0, 0}, V{0, 1}}, {V{0, 0}, V{0, 0}}};
    CHECK_THROWS_AS(FiniteGradedAlgebra::ungraded(t), ValidationError);
    // Commutative, non-associative: u*u = u, v*v = u.
    std::vector<std::vector<V>> s = {{V{1, 0}, V{0, 0}}, {V{0, 0}, V{1, 0}}};
    CHECK_THROWS_AS(FiniteGradedAlgebra::ungraded(s), ValidationError);
}

TEST_CASE("Hilbert data") {
    auto h = hilbert_data(P(2, {}), 8);
    CHECK(h.polynomial == std::vector<Rational>{1, Rational(3, 2), Rational(1, 2)});
    for (int d = 0; d <= 8; ++d) CHECK(h.values[d] == binomial(2 + d, 2));
    CHECK(hilbert_data(P(2, {"x0*x2 - x1^2"}), 8).polynomial == std::vector<Rational>{1, 2});
    auto cubic = hilbert_data(P(3, kTwistedCubic), 8);
    CHECK(cubic.polynomial == std::vector<Rational>{1, 3});
    CHECK(cubic.values[2] == 7);
    CHECK(cubic.polynomial_string() == "3*t + 1");
    auto pts = hilbert_data(P(1, {"x0*x1*(x0 - x1)"}), 8);
    CHECK(pts.polynomial == std::vector<Rational>{3});
    CHECK(pts.stable_from == 2);
}

TEST_CASE("Veronese truncation") {
    auto A = coordinate_ring_truncation(P(1, {}), 1, 4);
    auto B = veronese_truncation(A, 2);
    CHECK(B.p() == 1);
    CHECK(B.q() == 2);
    CHECK(B.dim(1) == 3);
    CHECK(B.dim(2) == 5);
    auto same = veronese_truncation(A, 1);
    CHECK(same.size() == A.size());
    CHECK(same.mult_matrix(1, 2) == A.mult_matrix(1, 2));
}

TEST_CASE("graded ideal test") {
    auto A = coordinate_ring_truncation(P(1, {}), 1, 3);
    GradedSubspace zero(A);
    CHECK(is_graded_ideal(A, zero));
    CHECK(is_graded_ideal(A, GradedSubspace::whole(A)));
    GradedSubspace x(A);
    x.piece(1).add({{0, Rational(1)}});
    CHECK_FALSE(is_graded_ideal(A, x));
}

TEST_CASE("subscheme points") {
    auto X = P(1, {});
    auto two = P(1, {"x0*x1"});
    auto I = subscheme_to_point(X, two, 2, 5);
    CHECK(I.k() == std::map<int, std::size_t>{{2, 1}, {3, 2}, {4, 3}, {5, 4}});
    auto same = subscheme_to_point(X, X, 2, 5);
    for (auto [d, k] : same.k()) CHECK(k == 0);
    auto conic = subscheme_to_point(P(2, {}), P(2, {"x0*x2 - x1^2"}), 2, 4);
    CHECK(conic.k() == std::map<int, std::size_t>{{2, 1}, {3, 3}, {4, 6}});
    CHECK_THROWS_AS(subscheme_to_point(P(2, {"x0*x2 - x1^2"}), P(2, {"x0"}), 2, 4), ValidationError);
}

TEST_CASE("quotient algebras") {
    auto A = coordinate_ring_truncation(P(1, {}), 2, 5);
    auto I = subscheme_to_point(P(1, {}), P(1, {"x0*x1"}), 2, 5);
    auto B = quotient_algebra(A, I);
    for (int d = 2; d <= 5; ++d) CHECK(B.dim(d) == 2);
    check_homomorphism(A, B, quotient_map(A, I));
    auto zero = quotient_algebra(A, IdealPoint{GradedSubspace(A)});
    CHECK(zero.size() == A.size());
    auto none = quotient_algebra(A, IdealPoint{GradedSubspace::whole(A)});
    CHECK(none.size() == 0);
}

TEST_CASE("classical tangent dimensions") {
    auto X1 = P(1, {});
    auto A = coordinate_ring_truncation(X1, 2, 5);
    CHECK(classical_tangent_dim(A, IdealPoint{GradedSubspace(A)}) == 0);
    auto I = subscheme_to_point(X1, P(1, {"x0*x1"}), 2, 5);
    CHECK(classical_tangent_dim(A, I) == 2);
    ClassicalTangentOptions shuffled;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        shuffled.basis_seed = seed;
        CHECK(classical_tangent_dim(A, I, shuffled) == 2);
    }
    auto X2 = P(2, {});
    auto A2 = coordinate_ring_truncation(X2, 2, 6);
    auto conic = subscheme_to_point(X2, P(2, {"x0*x2 - x1^2"}), 2, 6);
    CHECK(classical_tangent_dim(A2, conic) == 5);
    CHECK(classical_tangent_dim(A2, conic, {Field::prime(1000003)}) == 5);
}

TEST_CASE("hypersurface tangent equals the linear system dimension") {
    // Cubic curve in P^2: C(5, 2) - 1 = 9.
    auto X2 = P(2, {});
    auto A = coordinate_ring_truncation(X2, 3, 8);
    auto I = subscheme_to_point(X2, P(2, {"x0^3 + x1^3 + x2^3"}), 3, 8);
    CHECK(classical_tangent_dim(A, I) == binomial(5, 2) - 1);
}
