#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dhilb/field.hpp"
#include "dhilb/sparse_matrix.hpp"

namespace dhilb {

/// Exponent vector for variables x0..xn.
using Monomial = std::vector<int>;

int degree(const Monomial& m);
Monomial operator*(const Monomial& a, const Monomial& b);
std::string to_string(const Monomial& m);

/// Lex order with x0 > x1 > ... ; `lex_greater(a, b)` means a comes first.
bool lex_greater(const Monomial& a, const Monomial& b);

/// All monomials of degree d in `nvars` variables, lex order, x0^d first.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int d);
std::size_t binomial(std::size_t n, std::size_t k);

/// Monomials of one degree with a lookup from exponent vector to position.
class MonomialBasis {
public:
    MonomialBasis() = default;
    MonomialBasis(std::size_t nvars, int d);

    std::size_t nvars() const noexcept { return nvars_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return monomials_.size(); }
    const Monomial& operator[](std::size_t i) const { return monomials_[i]; }
    const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
    Index index_of(const Monomial& m) const;

private:
    std::size_t nvars_ = 0;
    int degree_ = 0;
    std::vector<Monomial> monomials_;
    std::map<Monomial, Index> index_;
};

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t i);

    std::size_t nvars() const noexcept { return nvars_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }
    void add_term(const Monomial& m, const Rational& c);

    /// Degree of the homogeneous polynomial; -1 for zero. Throws ValidationError if inhomogeneous.
    int homogeneous_degree() const;
    bool is_homogeneous() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial pow(unsigned e) const;
    Polynomial scaled(const Rational& c) const;

    /// Coordinates in the degree-d monomial basis (the polynomial must be homogeneous of degree d).
    SparseVector coordinates(const MonomialBasis& basis) const;
    std::string to_string() const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

private:
    std::size_t nvars_ = 0;
    std::map<Monomial, Rational> terms_;
};

/// Parses expressions in x0..x{nvars-1} with +, -, *, ^, parentheses and
/// integer or rational (a/b) constants. Errors carry the column.
Polynomial parse_polynomial(const std::string& text, std::size_t nvars);

}  // namespace dhilb
