#include "doctest.h"
#include "dhilb/ci_oracle.hpp"
#include "dhilb/derived_tangent.hpp"
#include "dhilb/error.hpp"
#include "dhilb/graded_algebra.hpp"

using namespace dhilb;

namespace {

/// Closed form for line bundles on P^n.
std::size_t projective_h(int n, int e, int i) {
    if (i == 0 && e >= 0) return binomial(static_cast<std::size_t>(n + e), static_cast<std::size_t>(n));
    if (i == n && e <= -n - 1) return binomial(static_cast<std::size_t>(-e - 1), static_cast<std::size_t>(n));
    return 0;
}

}  // namespace

TEST_CASE("projective space line bundles match the closed form and Serre duality") {
    for (int n = 1; n <= 3; ++n)
        for (int e = -6; e <= 6; ++e) {
            CAPTURE(n);
            CAPTURE(e);
            const CIData P = CIData::parse(static_cast<std::size_t>(n), {});
            const auto h = ci_twist_cohomology_all(P, e);
            const auto dual = ci_twist_cohomology_all(P, -e - n - 1);
            for (int i = 0; i <= n; ++i) {
                CHECK(h[static_cast<std::size_t>(i)] == projective_h(n, e, i));
                CHECK(h[static_cast<std::size_t>(i)] == dual[static_cast<std::size_t>(n - i)]);
            }
        }
}

TEST_CASE("truncation bound: larger N changes nothing") {
    const CIData Z = CIData::parse(2, {"x0^3+x1^3+x2^3"});
    for (int e = -4; e <= 2; ++e) {
        CAPTURE(e);
        CIOptions o;
        const auto base = ci_twist_cohomology_all(Z, e, o);
        o.laurent_bound = sufficient_laurent_bound(Z, e) + 2;
        CHECK(ci_twist_cohomology_all(Z, e, o) == base);
    }
    // Plane cubic: genus one, so h^1(O_Z) = 1.
    CHECK(ci_twist_cohomology_all(Z, 0) == std::vector<std::size_t>{1, 1, 0});
}

TEST_CASE("points, conic and the (2,2) curve") {
    CHECK(ci_normal_cohomology_all(CIData::parse(1, {"x0*x1"})) == std::vector<std::size_t>{2, 0});
    CHECK(ci_normal_cohomology_all(CIData::parse(1, {"x0*x1*(x0-x1)"})) == std::vector<std::size_t>{3, 0});
    CHECK(ci_twist_cohomology_all(CIData::parse(1, {"x0^2*x1"}), 3) == std::vector<std::size_t>{3, 0});
    const CIData conic = CIData::parse(2, {"x0^2+x1^2+x2^2"});
    CHECK(ci_twist_cohomology(conic, 2, 0) == 5);
    CHECK(ci_twist_cohomology(conic, 2, 1) == 0);
    CHECK(ci_normal_cohomology(conic, 0) == 5);

    const CIData quartic = CIData::parse(3, {"x0*x1-x2*x3", "x0^2+x1^2+x2^2+x3^2"});
    const auto N = ci_normal_cohomology_all(quartic);
    CHECK(N[0] == 2 * ci_twist_cohomology(quartic, 2, 0));
    CHECK(N[0] == 16);
    CHECK(N[1] == 0);
    // The independent pipeline: derived tangent of the same point.
    const auto r = derived_tangent(HomIdealPresentation::parse(3, {}),
                                   HomIdealPresentation::parse(3, {"x0*x1-x2*x3", "x0^2+x1^2+x2^2+x3^2"}), 1, 3, 1);
    CHECK(r.dims == std::vector<std::size_t>{N[0], N[1]});
}

TEST_CASE("Euler characteristic equals the Hilbert polynomial") {
    struct Case { std::size_t n; std::vector<std::string> forms; };
    for (const auto& c : std::vector<Case>{{1, {"x0*x1*(x0+x1)"}},
                                           {2, {"x0^2+x1^2+x2^2"}},
                                           {2, {"x0^3+x1^3+x2^3"}},
                                           {2, {"x0*x1", "x2^2"}},
                                           {3, {"x0*x1-x2*x3", "x0^2+x1^2+x2^2+x3^2"}}}) {
        CAPTURE(c.forms[0]);
        const CIData Z = CIData::parse(c.n, c.forms);
        const auto hd = hilbert_data(HomIdealPresentation::parse(c.n, c.forms), static_cast<int>(c.n) + 8);
        for (int e = -3; e <= 4; ++e) {
            CAPTURE(e);
            CHECK(Rational(static_cast<long>(ci_euler_characteristic(Z, e))) == hd.evaluate(Rational(e)));
        }
    }
}

TEST_CASE("prime mode and input validation") {
    CIOptions o;
    o.field = Field::prime(kDefaultPrime);
    const CIData Z = CIData::parse(3, {"x0*x1-x2*x3", "x0^2+x1^2+x2^2+x3^2"});
    CHECK(ci_normal_cohomology_all(Z, o) == ci_normal_cohomology_all(Z));
    CHECK_THROWS_WITH_AS(ci_twist_cohomology_all(CIData::parse(2, {"x0*x1", "x0*x2"}), 1),
                         doctest::Contains("not a regular sequence"), ValidationError);
    CHECK_THROWS_AS(CIData::parse(1, {"x0+1"}), ValidationError);
    CHECK_THROWS_AS(CIData::parse(1, {"x0", "x1", "x0+x1"}), ValidationError);
    CHECK_THROWS_AS(ci_twist_cohomology(Z, 0, 4), ValidationError);
    CHECK_THROWS_AS(cech_koszul_complex(Z, 0, -1), ValidationError);
}
