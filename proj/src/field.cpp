#include "dhilb/field.hpp"

#include "dhilb/error.hpp"

namespace dhilb {

Field Field::prime(std::uint64_t p) {
    if (p < 1000000ULL || p >= (1ULL << 32))
        throw ValidationError("prime field modulus must lie in [10^6, 2^32): got " + std::to_string(p));
    mpz_class z(static_cast<unsigned long>(p));
    if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
        throw ValidationError("prime field modulus is not prime: " + std::to_string(p));
    return Field(Kind::prime, p);
}

Field Field::parse(const std::string& text) {
    if (text == "q" || text == "Q" || text == "rational" || text == "rationals") return rationals();
    if (text.rfind("p:", 0) == 0) {
        const std::string digits = text.substr(2);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ValidationError("bad field '" + text + "'");
        return prime(std::stoull(digits));
    }
    if (text == "p") return prime(kDefaultPrime);
    throw ValidationError("bad field '" + text + "' (expected q or p:<prime>)");
}

std::string Field::name() const {
    return is_rational() ? std::string("q") : "p:" + std::to_string(p_);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // a^(p-2) mod p
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return result;
}

std::uint64_t Field::reduce(const Rational& x) const {
    mpz_class m(static_cast<unsigned long>(p_));
    mpz_class num = x.get_num() % m;
    if (num < 0) num += m;
    mpz_class den = x.get_den() % m;
    if (den == 0)
        throw ValidationError("prime " + std::to_string(p_) + " divides a denominator (" + x.get_str() +
                              "); choose another prime");
    const auto n = static_cast<std::uint64_t>(num.get_ui());
    const auto d = static_cast<std::uint64_t>(den.get_ui());
    return n * mod_inverse(d, p_) % p_;
}

}  // namespace dhilb
