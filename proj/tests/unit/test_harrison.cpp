#include "doctest.h"
#include "dhilb/error.hpp"
#include "dhilb/harrison.hpp"
#include "dhilb/ideal_scheme.hpp"

using namespace dhilb;

namespace {

using Table = std::vector<std::vector<std::vector<Rational>>>;

/// span(x, ..., x^{k-1}) with x^k = 0, as a degree-0 algebra.
FiniteGradedAlgebra power_truncation(int k) {
    const std::size_t n = static_cast<std::size_t>(k - 1);
    Table t(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a + b + 2 < static_cast<std::size_t>(k)) t[a][b][a + b + 1] = 1;
    return FiniteGradedAlgebra::ungraded(t);
}

FiniteGradedAlgebra zero_algebra(std::size_t n) { return FiniteGradedAlgebra::zero_product(0, 0, {{0, n}}); }

FiniteGradedAlgebra product(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B) {
    const std::size_t n = A.size() + B.size();
    Table t(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
    for (Index a = 0; a < A.size(); ++a)
        for (Index b = 0; b < A.size(); ++b)
            for (const auto& [c, v] : A.product(a, b)) t[a][b][c] = v;
    for (Index a = 0; a < B.size(); ++a)
        for (Index b = 0; b < B.size(); ++b)
            for (const auto& [c, v] : B.product(a, b)) t[A.size() + a][A.size() + b][A.size() + c] = v;
    return FiniteGradedAlgebra::ungraded(t);
}

/// span(x, y, xy) with x^2 = y^2 = 0.
FiniteGradedAlgebra exterior_like() {
    Table t(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3)));
    t[0][1][2] = t[1][0][2] = 1;
    return FiniteGradedAlgebra::ungraded(t);
}

/// Independent count: words of length n on d letters minus the rank of the signed shuffle span.
std::size_t shuffle_oracle(std::size_t d, int n) {
    std::size_t words = 1;
    for (int k = 0; k < n; ++k) words *= d;
    auto index = [&](const std::vector<std::size_t>& w) {
        std::size_t i = 0;
        for (auto x : w) i = i * d + x;
        return static_cast<Index>(i);
    };
    std::vector<Triplet> t;
    Index row = 0;
    for (std::size_t code = 0; code < words; ++code) {
        std::vector<std::size_t> w(static_cast<std::size_t>(n));
        std::size_t c = code;
        for (int k = n - 1; k >= 0; --k) {
            w[static_cast<std::size_t>(k)] = c % d;
            c /= d;
        }
        for (int i = 1; i < n; ++i) {
            // All binary masks with i ones give the (i, n-i) shuffles.
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                if (__builtin_popcount(mask) != i) continue;
                std::vector<std::size_t> s(static_cast<std::size_t>(n));
                std::size_t u = 0, v = static_cast<std::size_t>(i);
                int inv = 0, seen_v = 0;
                for (int slot = 0; slot < n; ++slot) {
                    if (mask >> slot & 1u) {
                        s[static_cast<std::size_t>(slot)] = w[u++];
                        inv += seen_v;
                    } else {
                        s[static_cast<std::size_t>(slot)] = w[v++];
                        ++seen_v;
                    }
                }
                t.push_back({row, index(s), Rational(inv % 2 ? -1 : 1)});
            }
            ++row;
        }
    }
    return words - rank(SparseMatrix::from_triplets(row, words, std::move(t)));
}

/// Hypersurface oracle for D = K + A with A = (x)/(x^k): multiplication by k x^{k-1} on M.
std::pair<std::size_t, std::size_t> hypersurface_oracle(int k, const GradedModule& M) {
    // x^{k-1} is the last basis element of power_truncation(k).
    const Index top = static_cast<Index>(k - 2);
    std::vector<Triplet> t;
    for (Index m = 0; m < M.size(); ++m)
        for (const auto& [mp, c] : M.act(top, m)) t.push_back({mp, m, Rational(k) * c});
    const std::size_t r = rank(SparseMatrix::from_triplets(M.size(), M.size(), std::move(t)));
    return {M.size() - r, M.size() - r};
}

}  // namespace

TEST_CASE("shuffle patterns") {
    CHECK(ShufflePattern::get({1})->dim() == 1);
    CHECK(ShufflePattern::get({2})->dim() == 1);
    CHECK(ShufflePattern::get({1, 1})->dim() == 1);
    CHECK(ShufflePattern::get({3})->dim() == 0);
    CHECK(ShufflePattern::get({1, 1, 1})->dim() == 2);
    CHECK(ShufflePattern::get({1, 1, 1, 1})->dim() == 6);
    CHECK(ShufflePattern::get({1, 1, 1, 1, 1})->dim() == 24);
}

TEST_CASE("Harrison space dimensions") {
    auto A3 = zero_algebra(3);
    auto M3 = GradedModule::regular(A3);
    CHECK(harrison_space(A3, M3, 1).dim() == 9);
    CHECK(harrison_space(A3, M3, 2).dim() == 18);
    auto A2 = zero_algebra(2);
    auto K = GradedModule::trivial(A2, {0});
    for (int n = 1; n <= 5; ++n) CHECK(harrison_space(A2, K, n).dim() == shuffle_oracle(2, n));
    CHECK(harrison_space(A3, GradedModule::trivial(A3, {0}), 4).dim() == shuffle_oracle(3, 4));
}

TEST_CASE("weight-2 cochains are the symmetric bilinear maps") {
    auto A = power_truncation(4);
    auto M = GradedModule::regular(A);
    auto s = harrison_space(A, M, 2, 0).slices.at(0);
    for (const auto& blk : s.blocks()) {
        REQUIRE(blk.pattern->dim() == 1);
        if (blk.distinct.size() == 2) {
            std::vector<std::pair<Index, Rational>> ab, ba;
            s.evaluate({blk.distinct[0], blk.distinct[1]}, blk.output, Rational(1), ab);
            s.evaluate({blk.distinct[1], blk.distinct[0]}, blk.output, Rational(1), ba);
            CHECK(normalize(ab) == normalize(ba));
        }
    }
}

TEST_CASE("weight-1 differential matches f(ab) - a f(b) - b f(a)") {
    auto A = product(power_truncation(3), exterior_like());
    auto M = GradedModule::regular(A);
    HarrisonSlice s1(A, M, 1, 0), s2(A, M, 2, 0);
    SparseMatrix d = harrison_differential(A, M, s1, s2);
    // Coordinates of weight 1 are f(e_a)_m at offset a * |M| + m.
    for (const auto& blk : s1.blocks()) CHECK(blk.offset == blk.content[0] * M.size() + blk.output);
    for (std::size_t r = 0; r < s2.blocks().size(); ++r) {
        const auto& blk = s2.blocks()[r];
        const auto w = s2.coordinate_word(blk, 0);
        const Index a = w[0], b = w[1], mp = blk.output;
        std::vector<std::pair<Index, Rational>> expect;
        for (const auto& [k, mu] : A.product(a, b)) expect.emplace_back(k * M.size() + mp, mu);
        for (Index m = 0; m < M.size(); ++m) {
            for (const auto& [x, c] : M.act(a, m))
                if (x == mp) expect.emplace_back(b * M.size() + m, -c);
            for (const auto& [x, c] : M.act(b, m))
                if (x == mp) expect.emplace_back(a * M.size() + m, -c);
        }
        CHECK(d.row(blk.offset) == normalize(expect));
    }
}

TEST_CASE("zero multiplication gives zero differentials") {
    auto A = zero_algebra(2);
    auto M = GradedModule::regular(A);
    auto c = harrison_complex(A, M, 4);
    for (int n = 1; n < 4; ++n) CHECK(c.differential(n, 0).is_zero());
    CHECK(harrison_cohomology(A, M, 1).dim == 4);
}

TEST_CASE("H1 equals derivations on a battery of algebras") {
    std::vector<FiniteGradedAlgebra> battery = {power_truncation(2), power_truncation(3), power_truncation(4),
                                                power_truncation(5), zero_algebra(2), exterior_like(),
                                                product(power_truncation(2), power_truncation(3))};
    for (const auto& A : battery) {
        auto M = GradedModule::regular(A);
        CHECK(harrison_cohomology(A, M, 1).dim == derivation_dim(A, M));
        auto K = GradedModule::trivial(A, {0});
        CHECK(harrison_cohomology(A, K, 1).dim == derivation_dim(A, K));
    }
    CHECK(derivation_dim(power_truncation(4), GradedModule::regular(power_truncation(4))) == 3);
}

TEST_CASE("d*d = 0 and closure through weight 4") {
    std::vector<FiniteGradedAlgebra> battery = {power_truncation(4), exterior_like(),
                                                product(power_truncation(2), power_truncation(3))};
    DifferentialOptions verify{true};
    for (const auto& A : battery) {
        const std::size_t before = CochainComplex::checks_performed();
        auto c = harrison_complex(A, GradedModule::regular(A), 5, std::nullopt, verify);
        CHECK(CochainComplex::checks_performed() >= before);
        CHECK(c.known_through() == 5);
    }
}

TEST_CASE("hypersurface truncations match the two-term cotangent complex") {
    for (int k = 2; k <= 5; ++k) {
        auto A = power_truncation(k);
        for (const GradedModule& M : {GradedModule::regular(A), GradedModule::trivial(A, {0})}) {
            auto [t1, t2] = hypersurface_oracle(k, M);
            CHECK(harrison_cohomology(A, M, 1).dim == t1);
            CHECK(harrison_cohomology(A, M, 2).dim == t2);
            CHECK(harrison_cohomology(A, M, 3).dim == 0);
        }
    }
}

TEST_CASE("pullback along a surjection is a chain map") {
    auto A = power_truncation(5);
    auto B = power_truncation(4);
    AlgebraMap pi;
    for (Index g = 0; g < A.size(); ++g)
        pi.images.push_back(g < B.size() ? SparseVector{{g, Rational(1)}} : SparseVector{});
    check_homomorphism(A, B, pi);
    auto MB = GradedModule::regular(B);
    auto MA = GradedModule::via_map(A, B, pi);
    std::vector<HarrisonSlice> sb, sa;
    for (int n = 1; n <= 4; ++n) {
        sb.emplace_back(B, MB, n, 0);
        sa.emplace_back(A, MA, n, 0);
    }
    for (int n = 1; n < 4; ++n) {
        auto f_n = harrison_pullback(pi, sb[n - 1], sa[n - 1], A);
        auto f_n1 = harrison_pullback(pi, sb[n], sa[n], A);
        auto dB = harrison_differential(B, MB, sb[n - 1], sb[n]);
        auto dA = harrison_differential(A, MA, sa[n - 1], sa[n]);
        CHECK(f_n1 * dB == dA * f_n);
    }
}

TEST_CASE("graded slices respect internal degree") {
    auto X = HomIdealPresentation::parse(1, {});
    auto A = coordinate_ring_truncation(X, 1, 3);
    auto M = GradedModule::regular(A);
    // Degree-0 derivations of k[x,y] truncated [1,3]: determined by the image of degree-1 elements,
    // which is gl_2 (dim 4), plus free choices in degree 3 that the window cannot constrain.
    const std::size_t der0 = derivation_dim(A, M, 0);
    CHECK(harrison_cohomology(A, M, 1, 0).dim == der0);
    CHECK(vanishing_weight(A, M, 0) == 4);
}
