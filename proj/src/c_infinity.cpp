#include "dhilb/c_infinity.hpp"

#include <algorithm>
#include <bit>

#include "dhilb/complex.hpp"
#include "dhilb/error.hpp"
#include "dhilb/harrison.hpp"

namespace dhilb {

namespace {

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

bool is_zero(const MultilinearTable& t) {
    return std::all_of(t.begin(), t.end(), [](const Rational& x) { return x == 0; });
}

// Degrees on sW, where |sx| = |x| - 1.
std::vector<int> suspended(const std::vector<int>& degrees) {
    std::vector<int> s(degrees);
    for (int& d : s) d -= 1;
    return s;
}

// (-1)^{sum_l (n-1-l) |sx_l|}: the sign relating b_n = s m_n (s^{-1})^{(x)n} to m_n on a word.
int transport_sign(const std::vector<int>& sdeg, const std::vector<Index>& w) {
    long e = 0;
    const long n = static_cast<long>(w.size());
    for (long l = 0; l < n; ++l) e += (n - 1 - l) * sdeg[w[l]];
    return (e & 1) ? -1 : 1;
}

MultilinearTable transport(const MultilinearTable& t, const std::vector<int>& sdeg, int n) {
    const std::size_t dim = sdeg.size();
    MultilinearTable out(t.size());
    for (std::size_t w = 0; w < ipow(dim, n); ++w) {
        const int s = transport_sign(sdeg, word_letters(dim, n, w));
        for (std::size_t e = 0; e < dim; ++e)
            if (t[w * dim + e] != 0) out[w * dim + e] = s > 0 ? t[w * dim + e] : Rational(-t[w * dim + e]);
    }
    return out;
}

// outer o (1^r (x) inner (x) 1^{i-1-r}) summed over r, in b-form. The inner map of degree
// inner_degree passes the first r inputs with the Koszul sign.
void compose_add(MultilinearTable& out, const MultilinearTable& outer, int i, const MultilinearTable& inner, int j,
                 int inner_degree, const std::vector<int>& sdeg, const Rational& scale) {
    const std::size_t dim = sdeg.size();
    const int n = i + j - 1;
    if (out.empty()) out.assign(table_size(dim, n), Rational(0));
    const std::size_t words = ipow(dim, n);
    for (std::size_t w = 0; w < words; ++w) {
        const std::vector<Index> letters = word_letters(dim, n, w);
        long passed = 0;
        for (int r = 0; r < i; ++r) {
            if (r > 0) passed += sdeg[letters[r - 1]];
            const bool negative = ((static_cast<long>(inner_degree) * passed) & 1) != 0;
            std::size_t inner_word = 0;
            for (int l = r; l < r + j; ++l) inner_word = inner_word * dim + letters[l];
            std::size_t prefix = 0;
            for (int l = 0; l < r; ++l) prefix = prefix * dim + letters[l];
            std::size_t suffix = 0;
            for (int l = r + j; l < n; ++l) suffix = suffix * dim + letters[l];
            const std::size_t suffix_scale = ipow(dim, n - r - j);
            for (std::size_t mid = 0; mid < dim; ++mid) {
                const Rational& c1 = inner[inner_word * dim + mid];
                if (c1 == 0) continue;
                const std::size_t outer_word = ((prefix * dim + mid) * suffix_scale) + suffix;
                for (std::size_t e = 0; e < dim; ++e) {
                    const Rational& c2 = outer[outer_word * dim + e];
                    if (c2 == 0) continue;
                    Rational term = scale * c1 * c2;
                    if (negative) term = -term;
                    out[w * dim + e] += term;
                }
            }
        }
    }
}

// Weight-n corestriction of D o D in b-form from b-form components.
MultilinearTable square_b(const std::map<int, MultilinearTable>& b, const std::vector<int>& sdeg, int n,
                          std::optional<int> skip = std::nullopt) {
    MultilinearTable out(table_size(sdeg.size(), n), Rational(0));
    for (const auto& [i, bi] : b) {
        const int j = n + 1 - i;
        if (j < 1 || (skip && (i == *skip || j == *skip))) continue;
        auto it = b.find(j);
        if (it == b.end()) continue;
        compose_add(out, bi, i, it->second, j, 1, sdeg, Rational(1));
    }
    return out;
}

std::map<int, MultilinearTable> b_form(const CInfinityStructure& S) {
    const std::vector<int> sdeg = suspended(S.degrees);
    std::map<int, MultilinearTable> b;
    for (const auto& [i, t] : S.D) b[i] = transport(t, sdeg, i);
    return b;
}

SparseVector to_sparse(const MultilinearTable& t) {
    SparseVector v;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] != 0) v.emplace_back(static_cast<Index>(k), t[k]);
    return v;
}

MultilinearTable to_dense(const SparseVector& v, std::size_t size) {
    MultilinearTable t(size, Rational(0));
    for (const auto& [k, x] : v) t[k] = x;
    return t;
}

std::pair<int, std::string> first_problem(const CInfinityStructure& S) {
    const std::size_t dim = S.dim();
    for (const auto& [i, t] : S.D) {
        const std::string tag = "D_" + std::to_string(i);
        if (i < 1) return {i, tag + ": weight must be at least 1"};
        if (t.size() != table_size(dim, i)) return {i, tag + ": table has the wrong size"};
        for (std::size_t w = 0; w < ipow(dim, i); ++w) {
            const std::vector<Index> letters = word_letters(dim, i, w);
            int in = 0;
            for (Index l : letters) in += S.degrees[l];
            for (std::size_t e = 0; e < dim; ++e)
                if (t[w * dim + e] != 0 && S.degrees[e] != in + 2 - i)
                    return {i, tag + ": entry of the wrong degree"};
        }
        if (i >= 2) {
            const Subspace h = harrison_b_cochains(S.degrees, i, 1);
            if (!h.contains(to_sparse(transport(t, suspended(S.degrees), i))))
                return {i, tag + ": not a Harrison cochain (shuffle relation fails)"};
        }
    }
    return {0, ""};
}

}  // namespace

std::size_t table_size(std::size_t dim, int weight) { return ipow(dim, weight) * dim; }

std::vector<Index> word_letters(std::size_t dim, int weight, std::size_t word) {
    std::vector<Index> w(static_cast<std::size_t>(weight));
    for (int l = weight - 1; l >= 0; --l) {
        w[l] = static_cast<Index>(word % dim);
        word /= dim;
    }
    return w;
}

CInfinityStructure CInfinityStructure::strict(const FiniteGradedAlgebra& A) {
    CInfinityStructure S;
    const std::size_t n = A.size();
    S.degrees.assign(n, 0);
    S.labels = A.labels();
    MultilinearTable mu(table_size(n, 2), Rational(0));
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            for (const auto& [c, v] : A.product(a, b)) mu[(a * n + b) * n + c] = v;
    S.D[2] = std::move(mu);
    return S;
}

std::string CInfinityStructure::problem() const { return first_problem(*this).second; }

void CInfinityStructure::validate() const {
    const std::string p = problem();
    if (!p.empty()) throw ValidationError(p);
}

Subspace harrison_b_cochains(const std::vector<int>& degrees, int n, std::optional<int> b_degree) {
    const std::size_t dim = degrees.size();
    const std::vector<int> sdeg = suspended(degrees);
    const std::size_t words = ipow(dim, n);
    const std::size_t ambient = words * dim;
    // Unknown positions, optionally restricted by degree.
    std::vector<long> column(ambient, -1);
    std::vector<Index> position;
    for (std::size_t w = 0; w < words; ++w) {
        int in = 0;
        for (Index l : word_letters(dim, n, w)) in += sdeg[l];
        for (std::size_t e = 0; e < dim; ++e)
            if (!b_degree || sdeg[e] == in + *b_degree) {
                column[w * dim + e] = static_cast<long>(position.size());
                position.push_back(static_cast<Index>(w * dim + e));
            }
    }
    Subspace result(ambient);
    if (position.empty()) return result;

    std::vector<Triplet> triplets;
    Index row = 0;
    const unsigned full = (1u << n) - 1;
    for (int p = 1; p < n; ++p)
        for (std::size_t w = 0; w < words; ++w) {
            const std::vector<Index> letters = word_letters(dim, n, w);
            for (std::size_t e = 0; e < dim; ++e) {
                if (column[w * dim + e] < 0) continue;  // every shuffle of w has the same degree
                for (unsigned mask = 0; mask <= full; ++mask) {
                    if (std::popcount(mask) != p) continue;
                    // u = letters[0..p) at the positions in mask, v = the rest in order.
                    std::vector<Index> shuffled(static_cast<std::size_t>(n));
                    long exponent = 0;
                    int ui = 0, vi = p;
                    long v_deg_seen = 0;
                    for (int pos = 0; pos < n; ++pos) {
                        if (mask & (1u << pos)) {
                            shuffled[pos] = letters[ui];
                            exponent += static_cast<long>(sdeg[letters[ui]]) * v_deg_seen;
                            ++ui;
                        } else {
                            shuffled[pos] = letters[vi];
                            v_deg_seen += sdeg[letters[vi]];
                            ++vi;
                        }
                    }
                    std::size_t sw = 0;
                    for (Index l : shuffled) sw = sw * dim + l;
                    triplets.push_back({row, static_cast<Index>(column[sw * dim + e]),
                                        Rational((exponent & 1) ? -1 : 1)});
                }
                ++row;
            }
        }
    const SparseMatrix constraints = SparseMatrix::from_triplets(row, position.size(), std::move(triplets));
    const SparseMatrix kernel = kernel_basis(constraints);
    const SparseMatrix kt = kernel.transpose();
    for (std::size_t k = 0; k < kt.rows(); ++k) {
        SparseVector v;
        for (const auto& [c, x] : kt.row(k)) v.emplace_back(position[c], x);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        result.add(v);
    }
    return result;
}

MCCheck mc_check(const CInfinityStructure& S, int weight_cap) {
    if (weight_cap < 2) throw ValidationError("weight_cap must be at least 2");
    const auto [bad_weight, reason] = first_problem(S);
    const std::vector<int> sdeg = suspended(S.degrees);
    const auto b = b_form(S);
    for (int n = 1; n <= weight_cap; ++n) {
        if (!reason.empty() && bad_weight == n) return {false, n, reason};
        if (!is_zero(square_b(b, sdeg, n))) return {false, n, "D o D has a nonzero weight-" + std::to_string(n) + " component"};
    }
    return {};
}

MultilinearTable mc_defect(const CInfinityStructure& S, int n) {
    if (n < 1) throw ValidationError("weight must be at least 1");
    const std::vector<int> sdeg = suspended(S.degrees);
    return transport(square_b(b_form(S), sdeg, n), sdeg, n);
}

std::optional<MultilinearTable> solve_mc_component(const CInfinityStructure& S, int n) {
    if (n < 2) throw ValidationError("can only solve for D_n with n >= 2");
    const std::vector<int> sdeg = suspended(S.degrees);
    const std::size_t size = table_size(S.dim(), n);
    auto b = b_form(S);
    b.erase(n);
    const MultilinearTable rest = square_b(b, sdeg, n, n);
    const Subspace h = harrison_b_cochains(S.degrees, n, 1);
    auto b1 = b.find(1);
    std::vector<SparseVector> columns;  // images of the basis cochains under X -> b_1 X + X b_1
    if (b1 != b.end())
        for (const SparseVector& basis : h.basis()) {
            const MultilinearTable x = to_dense(basis, size);
            MultilinearTable img;
            compose_add(img, b1->second, 1, x, n, 1, sdeg, Rational(1));
            compose_add(img, x, n, b1->second, 1, 1, sdeg, Rational(1));
            columns.push_back(to_sparse(img));
        }
    // Solve sum_k c_k columns[k] = -rest through the kernel of [columns | rest].
    std::vector<Triplet> triplets;
    for (std::size_t k = 0; k < columns.size(); ++k)
        for (const auto& [r, x] : columns[k]) triplets.push_back({r, static_cast<Index>(k), x});
    for (std::size_t r = 0; r < size; ++r)
        if (rest[r] != 0) triplets.push_back({static_cast<Index>(r), static_cast<Index>(columns.size()), rest[r]});
    const SparseMatrix system = SparseMatrix::from_triplets(size, columns.size() + 1, std::move(triplets));
    const SparseMatrix kt = kernel_basis(system).transpose();
    for (std::size_t k = 0; k < kt.rows(); ++k) {
        const SparseVector v = kt.row(k);
        if (v.empty() || v.back().first != columns.size()) continue;
        const Rational last = v.back().second;
        MultilinearTable x(size, Rational(0));
        for (const auto& [c, coef] : v) {
            if (c == columns.size()) continue;
            for (const auto& [pos, val] : h.basis()[c]) x[pos] += coef / last * val;
        }
        return transport(x, sdeg, n);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Coordinate dg-algebra

namespace {

// Graded-commutative polynomials: a monomial is a sorted list of variable indices.
using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Rational>;

struct GradedVariables {
    std::vector<int> degree;
    bool odd(int v) const { return (degree[v] & 1) != 0; }
};

// Product of two monomials with the Koszul sign of sorting; nullopt if an odd variable repeats.
std::optional<std::pair<int, Monomial>> multiply(const GradedVariables& vars, const Monomial& a, const Monomial& b) {
    Monomial m(a);
    m.insert(m.end(), b.begin(), b.end());
    int sign = 1;
    // Insertion sort; swapping two odd variables costs a sign.
    for (std::size_t i = 1; i < m.size(); ++i)
        for (std::size_t k = i; k > 0 && m[k - 1] > m[k]; --k) {
            if (vars.odd(m[k - 1]) && vars.odd(m[k])) sign = -sign;
            std::swap(m[k - 1], m[k]);
        }
    for (std::size_t i = 1; i < m.size(); ++i)
        if (m[i] == m[i - 1] && vars.odd(m[i])) return std::nullopt;
    return std::make_pair(sign, m);
}

void add_product(Poly& out, const GradedVariables& vars, const Monomial& a, const Poly& p, const Monomial& b,
                 const Rational& scale) {
    for (const auto& [mono, c] : p) {
        auto left = multiply(vars, a, mono);
        if (!left) continue;
        auto full = multiply(vars, left->second, b);
        if (!full) continue;
        Rational& slot = out[full->second];
        slot += scale * c * left->first * full->first;
        if (slot == 0) out.erase(full->second);
    }
}

Poly apply_d(const GradedVariables& vars, const std::vector<Poly>& d, const Poly& p) {
    Poly out;
    for (const auto& [mono, c] : p) {
        int prefix_degree = 0;
        for (std::size_t k = 0; k < mono.size(); ++k) {
            const Monomial before(mono.begin(), mono.begin() + static_cast<long>(k));
            const Monomial after(mono.begin() + static_cast<long>(k) + 1, mono.end());
            const Rational scale = (prefix_degree & 1) ? Rational(-c) : c;
            add_product(out, vars, before, d[mono[k]], after, scale);
            prefix_degree += vars.degree[mono[k]];
        }
    }
    return out;
}

std::string poly_to_string(const Poly& p) {
    std::string s;
    std::size_t shown = 0;
    for (const auto& [mono, c] : p) {
        if (shown++ == 3) {
            s += " + ...";
            break;
        }
        if (!s.empty()) s += " + ";
        s += c.get_str();
        for (int v : mono) s += "*t" + std::to_string(v);
    }
    return s;
}

}  // namespace

CoordinateDgaReport coordinate_dga_check(std::size_t dim_w, int weight_cap) {
    if (dim_w < 1 || dim_w > 3) throw ValidationError("coordinate dg-algebra check supports 1 <= dim W <= 3");
    if (weight_cap < 2 || weight_cap > 5) throw ValidationError("coordinate dg-algebra check supports weight_cap 2..5");
    CoordinateDgaReport report;
    report.dim_w = dim_w;
    report.weight_cap = weight_cap;
    const std::vector<int> degrees(dim_w, 0);
    const std::vector<int> sdeg = suspended(degrees);

    // Harrison basis e_k per weight, in b-form; e_k has degree n - 1 and its coordinate t_k degree 2 - n.
    std::map<int, Subspace> basis;
    std::map<int, int> first_var;
    GradedVariables vars;
    for (int n = 2; n <= weight_cap; ++n) {
        basis.emplace(n, harrison_b_cochains(degrees, n));
        first_var[n] = static_cast<int>(vars.degree.size());
        report.generators[n] = basis.at(n).dim();
        for (std::size_t k = 0; k < basis.at(n).dim(); ++k) vars.degree.push_back(2 - n);
    }

    // d t = coefficients of D o D, D = sum t_k e_k, with
    // (t_k e_k) o (t_l e_l) = (-1)^{|e_k||t_l|} t_k t_l (e_k o e_l).
    std::vector<Poly> d(vars.degree.size());
    for (int n = 3; n <= weight_cap; ++n) {
        std::map<Monomial, MultilinearTable> square;
        for (int i = 2; i <= n - 1; ++i) {
            const int j = n + 1 - i;
            const Subspace& hi = basis.at(i);
            const Subspace& hj = basis.at(j);
            for (std::size_t k = 0; k < hi.dim(); ++k) {
                const MultilinearTable ek = to_dense(hi.basis()[k], table_size(dim_w, i));
                for (std::size_t l = 0; l < hj.dim(); ++l) {
                    const MultilinearTable el = to_dense(hj.basis()[l], table_size(dim_w, j));
                    const int tk = first_var[i] + static_cast<int>(k);
                    const int tl = first_var[j] + static_cast<int>(l);
                    auto mono = multiply(vars, {tk}, {tl});
                    if (!mono) continue;
                    const int sign = ((((i - 1) * (2 - j)) & 1) ? -1 : 1) * mono->first;
                    MultilinearTable& slot = square[mono->second];
                    compose_add(slot, ek, i, el, j, j - 1, sdeg, Rational(sign));
                }
            }
        }
        const Subspace& hn = basis.at(n);
        for (const auto& [mono, table] : square) {
            const SparseVector v = to_sparse(table);
            if (v.empty()) continue;
            if (!hn.contains(v)) {
                report.d_squared_zero = false;
                report.first_failure = "weight-" + std::to_string(n) + " part of D o D is not a Harrison cochain";
                return report;
            }
            for (std::size_t r = 0; r < hn.dim(); ++r) {
                const Index pivot = hn.pivots()[r];
                if (table[pivot] != 0) d[first_var[n] + r][mono] += table[pivot];
            }
        }
    }

    for (std::size_t v = 0; v < d.size(); ++v) {
        const Poly dd = apply_d(vars, d, d[v]);
        report.monomials_checked += d[v].size();
        if (!dd.empty()) {
            report.d_squared_zero = false;
            report.first_failure = "d^2 t" + std::to_string(v) + " = " + poly_to_string(dd);
            return report;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------------------------
// Tangent complexes

std::vector<std::size_t> rca_tangent_mc(const FiniteGradedAlgebra& W, int m, std::vector<std::size_t>* term_dims,
                                        bool* euler_ok) {
    if (m < 0) throw ValidationError("m must be non-negative");
    const CInfinityStructure S = CInfinityStructure::strict(W);
    const MCCheck check = mc_check(S, 3);
    if (!check.ok) throw ValidationError("product is not a strict C-infinity structure: " + check.reason);
    const std::size_t dim = S.dim();
    const std::vector<int> sdeg = suspended(S.degrees);
    const MultilinearTable b2 = b_form(S).at(2);

    // T^i = weight-(i+2) Harrison cochains in b-form, degree i + 1 on sW.
    const int top = m + 2;
    std::vector<Subspace> T;
    for (int i = 0; i <= top; ++i) T.push_back(harrison_b_cochains(S.degrees, i + 2));
    std::map<Bidegree, std::size_t> dims;
    std::map<Bidegree, SparseMatrix> diffs;
    for (int i = 0; i <= top; ++i) dims[{i, 0}] = T[i].dim();
    for (int i = 0; i < top; ++i) {
        const int n = i + 2;
        const int e_degree = n - 1;
        std::vector<Triplet> triplets;
        for (std::size_t k = 0; k < T[i].dim(); ++k) {
            const MultilinearTable e = to_dense(T[i].basis()[k], table_size(dim, n));
            // [D, E] = D o E - (-1)^{|E|} E o D
            MultilinearTable img;
            compose_add(img, b2, 2, e, n, e_degree, sdeg, Rational(1));
            compose_add(img, e, n, b2, 2, 1, sdeg, Rational((e_degree & 1) ? 1 : -1));
            const SparseVector v = to_sparse(img);
            if (!T[i + 1].contains(v)) throw InternalError("[D, E] left the Harrison cochains");
            for (std::size_t r = 0; r < T[i + 1].dim(); ++r) {
                const Rational& x = img[T[i + 1].pivots()[r]];
                if (x != 0) triplets.push_back({static_cast<Index>(r), static_cast<Index>(k), x});
            }
        }
        diffs[{i, 0}] = SparseMatrix::from_triplets(T[i + 1].dim(), T[i].dim(), std::move(triplets));
    }
    const CochainComplex c(dims, diffs, top);
    std::vector<std::size_t> h;
    for (int i = 0; i <= m + 1; ++i) h.push_back(cohomology_dim(c, i, 0));
    if (term_dims) {
        term_dims->clear();
        for (int i = 0; i <= top; ++i) term_dims->push_back(T[i].dim());
    }
    if (euler_ok) {
        // sum_{i<=m+1} (-1)^i h^i = sum_{i<=m+1} (-1)^i dim T^i - (-1)^{m+1} rank d^{m+1}
        long lhs = 0, rhs = 0;
        for (int i = 0; i <= m + 1; ++i) {
            const long s = (i & 1) ? -1 : 1;
            lhs += s * static_cast<long>(h[i]);
            rhs += s * static_cast<long>(T[i].dim());
        }
        const long r = static_cast<long>(rank(c.differential(m + 1, 0)));
        rhs -= (((m + 1) & 1) ? -1 : 1) * r;
        *euler_ok = lhs == rhs;
    }
    h.pop_back();
    return h;
}

std::vector<std::size_t> rca_tangent_harrison(const FiniteGradedAlgebra& W, int m, const Field& field) {
    if (m < 0) throw ValidationError("m must be non-negative");
    const GradedModule M = GradedModule::regular(W);
    const CochainComplex c = harrison_complex(W, M, m + 3);
    std::vector<std::size_t> h(static_cast<std::size_t>(m) + 1, 0);
    for (int j : c.internal_degrees()) {
        h[0] += c.dim(2, j) - rank(c.differential(2, j), field);
        for (int i = 1; i <= m; ++i) h[i] += cohomology_dim(c, i + 2, j, field);
    }
    return h;
}

RcaTangentReport rca_tangent(const FiniteGradedAlgebra& W, int m, std::size_t max_entries) {
    if (m < 0) throw ValidationError("m must be non-negative");
    if (table_size(W.size(), m + 3) > max_entries)
        throw BudgetError("rca_tangent table entries", static_cast<int>(max_entries),
                          static_cast<int>(table_size(W.size(), m + 3)));
    RcaTangentReport report;
    report.m = m;
    report.dims = rca_tangent_mc(W, m, &report.term_dims, &report.euler_ok);
    report.harrison_dims = rca_tangent_harrison(W, m);
    if (report.dims != report.harrison_dims)
        throw InternalError("tangent of RCA(W) disagrees between the Maurer-Cartan and Harrison computations");
    return report;
}

std::vector<std::size_t> rhom_tangent(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B, const AlgebraMap& f,
                                      int m, const Field& field) {
    if (m < 0) throw ValidationError("m must be non-negative");
    check_homomorphism(A, B, f);
    const GradedModule M = GradedModule::via_map(A, B, f);
    const CochainComplex c = harrison_complex(A, M, m + 2);
    std::vector<std::size_t> h(static_cast<std::size_t>(m) + 1, 0);
    for (int j : c.internal_degrees())
        for (int i = 0; i <= m; ++i) h[i] += cohomology_dim(c, i + 1, j, field);
    return h;
}

}  // namespace dhilb
