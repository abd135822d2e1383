#include <random>

#include "doctest.h"
#include "dhilb/complex.hpp"
#include "dhilb/error.hpp"
#include "dhilb/linalg.hpp"

using namespace dhilb;

namespace {

SparseMatrix dense(std::vector<std::vector<int>> rows) {
    std::vector<std::vector<Rational>> q;
    for (auto& r : rows) {
        q.emplace_back();
        for (int v : r) q.back().emplace_back(v);
    }
    return SparseMatrix::from_dense(q);
}

SparseMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, double density, int low_rank) {
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> val(-4, 4);
    std::vector<Triplet> t;
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            if (u(rng) < density) t.push_back({i, j, Rational(val(rng), 1 + (val(rng) + 4) % 3)});
    SparseMatrix m = SparseMatrix::from_triplets(r, c, std::move(t));
    if (low_rank > 0) {
        // Force dependencies: a product through a thin middle.
        SparseMatrix left = random_matrix(rng, r, low_rank, 0.5, 0);
        SparseMatrix right = random_matrix(rng, low_rank, c, 0.5, 0);
        return left * right;
    }
    return m;
}

const Field kPrime = Field::prime(1000003);

}  // namespace

TEST_CASE("rank of small examples") {
    CHECK(rank(SparseMatrix::zero(3, 3)) == 0);
    CHECK(rank(SparseMatrix::identity(4)) == 4);
    CHECK(rank(dense({{1, 2, 3}, {2, 4, 6}})) == 1);
    CHECK(rank(dense({{1, 2, 3}, {2, 4, 6}}), kPrime) == 1);
}

TEST_CASE("kernel of small examples") {
    CHECK(kernel_basis(SparseMatrix::identity(3)).cols() == 0);
    CHECK(kernel_basis(SparseMatrix::zero(2, 2)).cols() == 2);
    SparseMatrix k = kernel_basis(dense({{1, 1}}));
    REQUIRE(k.cols() == 1);
    CHECK(k.at(0, 0) == -k.at(1, 0));
    CHECK(k.at(0, 0) != 0);
}

TEST_CASE("rank-nullity and pivot-order agreement on random matrices") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t r = 1 + rng() % 90, c = 1 + rng() % 90;
        const int low = trial % 3 == 0 ? static_cast<int>(1 + rng() % 12) : 0;
        SparseMatrix m = random_matrix(rng, r, c, 0.08 + 0.02 * (trial % 5), low);
        const std::size_t rk = rank(m);
        RankOptions natural;
        natural.order = PivotOrder::natural;
        CHECK(rank(m, natural) == rk);
        RankOptions sparse_only;
        sparse_only.dense_cutoff = 0;
        CHECK(rank(m, sparse_only) == rk);
        CHECK(rank(m.transpose()) == rk);
        SparseMatrix k = kernel_basis(m);
        CHECK(k.cols() + rk == c);
        CHECK((m * k).is_zero());
        CHECK(rank(k) == k.cols());
        CHECK(rank(m, kPrime) == rk);
        RankOptions prime_natural{kPrime, PivotOrder::natural};
        CHECK(rank(m, prime_natural) == rk);
        SparseMatrix kp = kernel_basis(m, kPrime);
        CHECK(kp.cols() + rk == c);
    }
}

TEST_CASE("modular kernel annihilates modulo p") {
    SparseMatrix m = dense({{1, 2, 3, 4}, {2, 3, 4, 5}, {3, 5, 7, 9}});
    SparseMatrix k = kernel_basis(m, kPrime);
    CHECK(k.cols() == 2);
    SparseMatrix prod = m * k;
    for (const auto& t : prod.triplets()) CHECK(kPrime.reduce(t.value) == 0);
}

TEST_CASE("prime field validation") {
    CHECK_THROWS_AS(Field::prime(1000001), ValidationError);  // 101 * 9901
    CHECK_THROWS_AS(Field::prime(101), ValidationError);
    CHECK_THROWS_AS(Field::parse("p:abc"), ValidationError);
    CHECK(Field::parse("p:1000003").modulus() == 1000003);
    CHECK(Field::parse("q").is_rational());
    CHECK_THROWS_AS(kPrime.reduce(Rational(1, 1000003)), ValidationError);
    CHECK(kPrime.reduce(Rational(-1, 2)) * 2 % 1000003 == 1000002);
}

TEST_CASE("connected components split block structure") {
    SparseMatrix m = dense({{1, 0, 0, 2}, {0, 3, 0, 0}, {4, 0, 0, 0}, {0, 0, 0, 0}});
    auto comps = connected_components(m);
    CHECK(comps.size() == 2);
}

TEST_CASE("subspace echelon form") {
    Subspace s(3);
    CHECK(s.add({{0, Rational(2)}, {1, Rational(4)}}));
    CHECK_FALSE(s.add({{0, Rational(1)}, {1, Rational(2)}}));
    CHECK(s.add({{1, Rational(1)}, {2, Rational(1)}}));
    CHECK(s.dim() == 2);
    CHECK(s.non_pivots() == std::vector<Index>{2});
    auto coords = s.coordinates({{0, Rational(1)}, {1, Rational(3)}, {2, Rational(1)}});
    REQUIRE(coords.has_value());
    CHECK((*coords)[0] == 1);
    CHECK((*coords)[1] == 3);
    CHECK(s.reduce({{1, Rational(1)}}) == SparseVector{{2, Rational(-1)}});
}

TEST_CASE("cohomology of simple complexes") {
    // 0 -> K -> K -> 0 with identity
    CochainComplex acyclic({{{0, 0}, 1}, {{1, 0}, 1}}, {{{0, 0}, SparseMatrix::identity(1)}});
    CHECK(cohomology_dim(acyclic, 0, 0) == 0);
    CHECK(cohomology_dim(acyclic, 1, 0) == 0);
    CochainComplex zero({{{0, 0}, 2}, {{1, 0}, 3}}, {});
    CHECK(cohomology_dim(zero, 0, 0) == 2);
    CHECK(cohomology_dim(zero, 1, 0) == 3);
    auto rep = cohomology(zero, 1, 0, Field::rationals(), true);
    CHECK(rep.representatives.cols() == 3);
}

TEST_CASE("Koszul complex of (x, y) in internal degree 2") {
    // K^{-2} = S_0, K^{-1} = S_1 + S_1 (basis x e1, y e1, x e2, y e2), K^0 = S_2 (x^2, xy, y^2).
    // d(1) = y e1 - x e2; d(a e1 + b e2) = a x + b y.
    SparseMatrix d2 = dense({{0}, {1}, {-1}, {0}});
    SparseMatrix d1 = dense({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}});
    CochainComplex k({{{-2, 2}, 1}, {{-1, 2}, 4}, {{0, 2}, 3}}, {{{-2, 2}, d2}, {{-1, 2}, d1}});
    CHECK(cohomology_dim(k, 0, 2) == 0);
    CHECK(cohomology_dim(k, -1, 2) == 0);
    CHECK(cohomology_dim(k, -2, 2) == 0);
}

TEST_CASE("d*d != 0 is rejected") {
    SparseMatrix d0 = dense({{1}});
    CHECK_THROWS_AS(CochainComplex({{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 1}}, {{{0, 0}, d0}, {{1, 0}, d0}}),
                    InternalError);
}

TEST_CASE("truncated complexes refuse cohomology at the cut") {
    CochainComplex c({{{0, 0}, 2}, {{1, 0}, 2}}, {{{0, 0}, SparseMatrix::identity(2)}}, 1);
    CHECK(cohomology_dim(c, 0, 0) == 0);
    CHECK_THROWS_AS(cohomology_dim(c, 1, 0), BudgetError);
}

TEST_CASE("mapping fiber") {
    CochainComplex two({{{0, 0}, 2}, {{1, 0}, 1}}, {{{0, 0}, dense({{1, 0}})}});
    SUBCASE("identity gives an acyclic fiber") {
        ChainMap id(two, two, {{{0, 0}, SparseMatrix::identity(2)}, {{1, 0}, SparseMatrix::identity(1)}});
        CochainComplex f = mapping_fiber(id);
        for (int k = -1; k <= 3; ++k) CHECK(cohomology_dim(f, k, 0) == 0);
    }
    SUBCASE("zero map splits") {
        CochainComplex t({{{0, 0}, 1}, {{1, 0}, 2}}, {});
        ChainMap z(two, t, {});
        CochainComplex f = mapping_fiber(z);
        for (int k = -1; k <= 3; ++k)
            CHECK(cohomology_dim(f, k, 0) == cohomology_dim(two, k, 0) + cohomology_dim(t, k - 1, 0));
    }
    SUBCASE("surjective quasi-isomorphism of 2-term complexes") {
        // S: K^2 -> K, d = (1 0); T: K in degree 0; f = projection onto the second coordinate.
        CochainComplex t({{{0, 0}, 1}}, {});
        ChainMap q(two, t, {{{0, 0}, dense({{0, 1}})}});
        CochainComplex f = mapping_fiber(q);
        for (int k = -1; k <= 3; ++k) CHECK(cohomology_dim(f, k, 0) == 0);
    }
    SUBCASE("non-chain maps are rejected") {
        CochainComplex t({{{0, 0}, 1}, {{1, 0}, 1}}, {});
        CHECK_THROWS_AS(ChainMap(two, t, {{{1, 0}, SparseMatrix::identity(1)}}), InternalError);
    }
}
