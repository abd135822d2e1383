#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dhilb/complex.hpp"
#include "dhilb/field.hpp"
#include "dhilb/polynomial.hpp"

namespace dhilb {

/// Complete intersection Z = V(f_1, ..., f_c) in P^n (variables x0..xn).
struct CIData {
    std::size_t n = 0;
    std::vector<Polynomial> forms;
    std::vector<int> degrees;

    /// Forms must be nonzero, homogeneous and of positive degree; c <= n + 1.
    static CIData from_forms(std::size_t n, std::vector<Polynomial> forms);
    static CIData parse(std::size_t n, const std::vector<std::string>& forms);
    std::size_t codim() const noexcept { return forms.size(); }
};

struct CIOptions {
    Field field = Field::rationals();
    /// Lower bound -N on Laurent exponents; negative means the smallest sufficient N.
    int laurent_bound = -1;
    bool check_regular = true;
};

/// Throws ValidationError "not a regular sequence" unless the Koszul complex on
/// the forms is exact above homological degree 0 in polynomial degrees 0..max_degree.
void check_regular_sequence(const CIData& Z, int max_degree, const Field& field = Field::rationals());

/// Total complex of Cech(standard cover) tensor Koszul(f) for O_Z(e), truncated
/// to Laurent exponents >= -N. Cohomological degree r = Cech level - Koszul degree.
CochainComplex cech_koszul_complex(const CIData& Z, int e, int laurent_bound);

/// dims H^0..H^n of O_Z(e).
std::vector<std::size_t> ci_twist_cohomology_all(const CIData& Z, int e, const CIOptions& options = {});
std::size_t ci_twist_cohomology(const CIData& Z, int e, int i, const CIOptions& options = {});

/// H^i(Z, N) with N = sum_j O_Z(d_j).
std::size_t ci_normal_cohomology(const CIData& Z, int i, const CIOptions& options = {});
std::vector<std::size_t> ci_normal_cohomology_all(const CIData& Z, const CIOptions& options = {});

long long ci_euler_characteristic(const CIData& Z, int e, const CIOptions& options = {});

/// Smallest N for which the truncation is exact at twist e.
int sufficient_laurent_bound(const CIData& Z, int e);

}  // namespace dhilb
