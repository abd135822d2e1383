#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace dhilb {

using Rational = mpq_class;
using Integer = mpz_class;

/// Arithmetic used by rank and kernel computations.
///
/// Structure constants (multiplication tables, normal forms, shuffle bases) are
/// always exact rationals. The field only selects how the large linear systems
/// built from them are eliminated: exactly over Q, or modulo a prime.
class Field {
public:
    enum class Kind { rational, prime };

    static Field rationals() { return Field(Kind::rational, 0); }
    /// Throws ValidationError unless p is a prime >= 10^6 that fits in 32 bits.
    static Field prime(std::uint64_t p);
    /// Parses "q" or "p:<prime>".
    static Field parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    bool is_rational() const noexcept { return kind_ == Kind::rational; }
    std::uint64_t modulus() const noexcept { return p_; }
    std::string name() const;

    /// Residue of an exact rational. Throws ValidationError if p divides the denominator.
    std::uint64_t reduce(const Rational& x) const;

    friend bool operator==(const Field& a, const Field& b) { return a.kind_ == b.kind_ && a.p_ == b.p_; }

private:
    Field(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::uint64_t p_;
};

inline constexpr std::uint64_t kDefaultPrime = 2147483629ULL;  // largest prime below 2^31

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p);

}  // namespace dhilb
