#include "dhilb/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "dhilb/error.hpp"

namespace dhilb {

int degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

std::string to_string(const Monomial& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += '*';
        s += 'x' + std::to_string(i);
        if (m[i] > 1) s += '^' + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

bool lex_greater(const Monomial& a, const Monomial& b) { return a > b; }

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace {
void fill(std::size_t var, int left, Monomial& cur, std::vector<Monomial>& out) {
    if (var + 1 == cur.size()) {
        cur[var] = left;
        out.push_back(cur);
        return;
    }
    for (int e = left; e >= 0; --e) {
        cur[var] = e;
        fill(var + 1, left - e, cur, out);
    }
    cur[var] = 0;
}
}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int d) {
    std::vector<Monomial> out;
    if (d < 0 || nvars == 0) return out;
    Monomial cur(nvars, 0);
    fill(0, d, cur, out);
    return out;
}

MonomialBasis::MonomialBasis(std::size_t nvars, int d)
    : nvars_(nvars), degree_(d), monomials_(monomials_of_degree(nvars, d)) {
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_[monomials_[i]] = static_cast<Index>(i);
}

Index MonomialBasis::index_of(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw InternalError("monomial " + dhilb::to_string(m) + " not in degree basis");
    return it->second;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[i] = 1;
    p.add_term(m, Rational(1));
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = degree(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return degree(t.first) == d; });
}

int Polynomial::homogeneous_degree() const {
    if (terms_.empty()) return -1;
    if (!is_homogeneous()) throw ValidationError("polynomial " + to_string() + " is not homogeneous");
    return degree(terms_.begin()->first);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(Rational(-1)); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r(nvars_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r = constant(nvars_, Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(nvars_);
    if (c == 0) return r;
    for (const auto& [m, x] : terms_) r.terms_.emplace(m, x * c);
    return r;
}

SparseVector Polynomial::coordinates(const MonomialBasis& basis) const {
    std::vector<std::pair<Index, Rational>> raw;
    for (const auto& [m, c] : terms_) {
        if (degree(m) != basis.degree())
            throw ValidationError("polynomial " + to_string() + " is not of degree " + std::to_string(basis.degree()));
        raw.emplace_back(basis.index_of(m), c);
    }
    return normalize(std::move(raw));
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    // Highest lex term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        const bool neg = c < 0;
        const Rational a = neg ? Rational(-c) : c;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        const bool unit_monomial = degree(m) == 0;
        if (a != 1 || unit_monomial) {
            s += a.get_str();
            if (!unit_monomial) s += '*';
        }
        if (!unit_monomial) s += dhilb::to_string(m);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Parser: expr := term (('+'|'-') term)* ; term := unary ('*' unary)* ;
// unary := '-' unary | power ; power := atom ('^' integer)? ;
// atom := number ('/' number)? | 'x' digits | '(' expr ')'

namespace {

class Parser {
public:
    Parser(const std::string& text, std::size_t nvars) : s_(text), nvars_(nvars) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + msg + " in \"" +
                              s_ + "\"");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string digits() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        return s_.substr(start, pos_ - start);
    }

    Polynomial expr() {
        Polynomial p = term();
        for (;;) {
            if (accept('+'))
                p = p + term();
            else if (accept('-'))
                p = p - term();
            else
                return p;
        }
    }
    Polynomial term() {
        Polynomial p = unary();
        while (accept('*')) p = p * unary();
        return p;
    }
    Polynomial unary() {
        if (accept('-')) return unary().scaled(Rational(-1));
        if (accept('+')) return unary();
        return power();
    }
    Polynomial power() {
        Polynomial base = atom();
        if (accept('^')) {
            const std::string e = digits();
            if (e.size() > 3) fail("exponent too large");
            return base.pow(static_cast<unsigned>(std::stoul(e)));
        }
        return base;
    }
    Polynomial atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        if (c == 'x') {
            ++pos_;
            const std::size_t at = pos_;
            const std::string idx = digits();
            const std::size_t v = idx.size() > 4 ? nvars_ : std::stoul(idx);
            if (v >= nvars_) {
                pos_ = at;
                fail("variable x" + idx + " outside x0..x" + std::to_string(nvars_ - 1));
            }
            return Polynomial::variable(nvars_, v);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num(digits());
            mpz_class den = 1;
            skip();
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                den = mpz_class(digits());
                if (den == 0) fail("zero denominator");
            }
            Rational q(num, den);
            q.canonicalize();
            return Polynomial::constant(nvars_, q);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t nvars_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, std::size_t nvars) {
    if (nvars == 0) throw ValidationError("polynomial ring needs at least one variable");
    return Parser(text, nvars).parse();
}

}  // namespace dhilb
