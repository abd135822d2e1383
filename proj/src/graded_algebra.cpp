#include "dhilb/graded_algebra.hpp"

#include <algorithm>

#include "dhilb/error.hpp"

namespace dhilb {

HomIdealPresentation HomIdealPresentation::from_polynomials(std::size_t n, std::vector<Polynomial> gens) {
    HomIdealPresentation P;
    P.n = n;
    for (auto& g : gens) {
        if (g.nvars() != n + 1) throw ValidationError("generator has the wrong number of variables");
        if (g.is_zero()) continue;
        const int d = g.homogeneous_degree();
        if (d == 0) throw ValidationError("constant generator " + g.to_string() + " defines the empty scheme");
        P.degrees.push_back(d);
        P.gens.push_back(std::move(g));
    }
    return P;
}

HomIdealPresentation HomIdealPresentation::parse(std::size_t n, const std::vector<std::string>& gens) {
    std::vector<Polynomial> polys;
    for (const auto& s : gens) polys.push_back(parse_polynomial(s, n + 1));
    return from_polynomials(n, std::move(polys));
}

Subspace ideal_degree_piece(const HomIdealPresentation& P, int d) {
    const MonomialBasis basis(P.nvars(), d);
    Subspace I(basis.size());
    if (d < 0) return I;
    for (std::size_t k = 0; k < P.gens.size(); ++k) {
        const int e = P.degrees[k];
        if (e > d) continue;
        for (const Monomial& m : monomials_of_degree(P.nvars(), d - e)) {
            std::vector<std::pair<Index, Rational>> raw;
            for (const auto& [mon, c] : P.gens[k].terms()) raw.emplace_back(basis.index_of(mon * m), c);
            I.add(normalize(std::move(raw)));
            if (I.dim() == basis.size()) return I;
        }
    }
    return I;
}

// ---------------------------------------------------------------------------

FiniteGradedAlgebra::FiniteGradedAlgebra(int p, int q, std::map<int, std::size_t> dims,
                                         std::vector<SparseVector> products, std::vector<std::string> labels)
    : p_(p), q_(q), products_(std::move(products)), labels_(std::move(labels)) {
    if (p > q) throw ValidationError("empty window: p=" + std::to_string(p) + " > q=" + std::to_string(q));
    Index off = 0;
    for (int d = p; d <= q; ++d) {
        auto it = dims.find(d);
        const std::size_t k = it == dims.end() ? 0 : it->second;
        dims_[d] = k;
        offsets_[d] = off;
        off += static_cast<Index>(k);
        for (std::size_t i = 0; i < k; ++i) deg_of_.push_back(d);
    }
    for (const auto& [d, k] : dims)
        if (k > 0 && (d < p || d > q)) throw ValidationError("piece of degree " + std::to_string(d) + " outside window");
    const std::size_t n = size();
    if (products_.empty()) products_.resize(n * n);
    if (products_.size() != n * n) throw InternalError("product table has the wrong size");
    if (labels_.empty())
        for (std::size_t g = 0; g < n; ++g) labels_.push_back("e" + std::to_string(g));
    if (labels_.size() != n) throw InternalError("label count differs from algebra dimension");
    check_structure();
}

FiniteGradedAlgebra FiniteGradedAlgebra::ungraded(const std::vector<std::vector<std::vector<Rational>>>& table,
                                                  std::vector<std::string> labels) {
    const std::size_t n = table.size();
    std::vector<SparseVector> prods(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        if (table[a].size() != n) throw ValidationError("structure table is not square");
        for (std::size_t b = 0; b < n; ++b) {
            if (table[a][b].size() != n) throw ValidationError("structure table entry has the wrong length");
            for (std::size_t c = 0; c < n; ++c)
                if (table[a][b][c] != 0) prods[a * n + b].emplace_back(static_cast<Index>(c), table[a][b][c]);
        }
    }
    return FiniteGradedAlgebra(0, 0, {{0, n}}, std::move(prods), std::move(labels));
}

FiniteGradedAlgebra FiniteGradedAlgebra::zero_product(int p, int q, std::map<int, std::size_t> dims) {
    return FiniteGradedAlgebra(p, q, std::move(dims), {});
}

std::size_t FiniteGradedAlgebra::dim(int d) const {
    auto it = dims_.find(d);
    return it == dims_.end() ? 0 : it->second;
}

Index FiniteGradedAlgebra::offset(int d) const {
    auto it = offsets_.find(d);
    if (it == offsets_.end()) throw InternalError("degree " + std::to_string(d) + " outside window");
    return it->second;
}

GradedVectorSpace FiniteGradedAlgebra::pieces() const {
    std::map<int, std::vector<std::string>> labs;
    for (const auto& [d, k] : dims_)
        labs[d] = std::vector<std::string>(labels_.begin() + offset(d), labels_.begin() + offset(d) + k);
    return GradedVectorSpace(dims_, labs);
}

SparseVector FiniteGradedAlgebra::multiply(const SparseVector& x, const SparseVector& y) const {
    SparseVector out;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) axpy(out, ca * cb, product(a, b));
    return out;
}

SparseMatrix FiniteGradedAlgebra::mult_matrix(int i, int j) const {
    const std::size_t di = dim(i), dj = dim(j);
    const int k = i + j;
    const std::size_t dk = (k >= p_ && k <= q_) ? dim(k) : 0;
    std::vector<Triplet> t;
    if (dk > 0)
        for (std::size_t a = 0; a < di; ++a)
            for (std::size_t b = 0; b < dj; ++b)
                for (const auto& [c, v] : product(offset(i) + a, offset(j) + b))
                    t.push_back({c - offset(k), static_cast<Index>(a * dj + b), v});
    return SparseMatrix::from_triplets(dk, di * dj, std::move(t));
}

bool FiniteGradedAlgebra::has_zero_multiplication() const {
    return std::all_of(products_.begin(), products_.end(), [](const SparseVector& v) { return v.empty(); });
}

void FiniteGradedAlgebra::check_structure() const {
    const std::size_t n = size();
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) {
            const SparseVector& ab = product(a, b);
            const int d = deg_of_[a] + deg_of_[b];
            for (const auto& [c, v] : ab) {
                if (c >= n) throw ValidationError("product outside the algebra");
                if (deg_of_[c] != d)
                    throw ValidationError("product " + labels_[a] + "*" + labels_[b] + " is not homogeneous of degree " +
                                          std::to_string(d));
            }
            if (!(ab == product(b, a)))
                throw ValidationError("multiplication is not commutative on " + labels_[a] + ", " + labels_[b]);
        }
    for (Index a = 0; a < n; ++a)
        for (Index b = a; b < n; ++b) {
            const SparseVector& ab = product(a, b);
            if (deg_of_[a] + deg_of_[b] > q_ && !ab.empty()) throw ValidationError("product beyond the window");
            for (Index c = 0; c < n; ++c) {
                if (deg_of_[a] + deg_of_[b] + deg_of_[c] > q_) continue;
                SparseVector left, right;
                for (const auto& [k, v] : ab) axpy(left, v, product(k, c));
                for (const auto& [k, v] : product(b, c)) axpy(right, v, product(a, k));
                if (!(left == right))
                    throw ValidationError("multiplication is not associative on " + labels_[a] + ", " + labels_[b] +
                                          ", " + labels_[c]);
            }
        }
}

SparseVector AlgebraMap::apply(const SparseVector& x) const {
    SparseVector out;
    for (const auto& [g, c] : x) axpy(out, c, images.at(g));
    return out;
}

void check_homomorphism(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B, const AlgebraMap& f) {
    if (f.images.size() != A.size()) throw ValidationError("map does not cover the source basis");
    for (const auto& img : f.images)
        for (const auto& [c, v] : img)
            if (c >= B.size()) throw ValidationError("map image outside the target algebra");
    for (Index a = 0; a < A.size(); ++a)
        for (Index b = a; b < A.size(); ++b) {
            const SparseVector lhs = f.apply(A.product(a, b));
            const SparseVector rhs = B.multiply(f.images[a], f.images[b]);
            if (!(lhs == rhs))
                throw ValidationError("not a homomorphism: f(" + A.label(a) + "*" + A.label(b) + ") != f(" +
                                      A.label(a) + ")*f(" + A.label(b) + ")");
        }
}

GradedModule GradedModule::regular(const FiniteGradedAlgebra& A) {
    GradedModule M;
    M.degrees = A.degrees();
    M.labels = A.labels();
    M.action.resize(A.size() * A.size());
    for (Index a = 0; a < A.size(); ++a)
        for (Index m = 0; m < A.size(); ++m) M.action[a * A.size() + m] = A.product(a, m);
    return M;
}

GradedModule GradedModule::via_map(const FiniteGradedAlgebra& A, const FiniteGradedAlgebra& B, const AlgebraMap& f) {
    GradedModule M;
    M.degrees = B.degrees();
    M.labels = B.labels();
    M.action.resize(A.size() * B.size());
    for (Index a = 0; a < A.size(); ++a)
        for (Index m = 0; m < B.size(); ++m) {
            SparseVector v;
            for (const auto& [k, c] : f.images.at(a)) axpy(v, c, B.product(k, m));
            M.action[a * B.size() + m] = std::move(v);
        }
    return M;
}

GradedModule GradedModule::trivial(const FiniteGradedAlgebra& A, std::vector<int> degrees) {
    GradedModule M;
    M.degrees = std::move(degrees);
    for (std::size_t i = 0; i < M.degrees.size(); ++i) M.labels.push_back("m" + std::to_string(i));
    M.action.resize(A.size() * M.degrees.size());
    return M;
}

// ---------------------------------------------------------------------------

TruncatedRing::TruncatedRing(const HomIdealPresentation& X, int p, int q) : X_(X) {
    if (p < 0 || p > q) throw ValidationError("window must satisfy 0 <= p <= q");
    std::map<int, std::size_t> dims;
    std::vector<std::string> labels;
    for (int d = p; d <= q; ++d) {
        monomials_.emplace(d, MonomialBasis(X.nvars(), d));
        ideals_.emplace(d, ideal_degree_piece(X, d));
        auto& loc = local_index_[d];
        loc.assign(monomials_.at(d).size(), -1);
        std::int64_t k = 0;
        for (Index c : ideals_.at(d).non_pivots()) {
            loc[c] = k++;
            labels.push_back(to_string(monomials_.at(d)[c]));
        }
        dims[d] = static_cast<std::size_t>(k);
    }
    // Global offsets mirror FiniteGradedAlgebra's numbering.
    std::map<int, Index> offs;
    Index off = 0;
    for (int d = p; d <= q; ++d) {
        offs[d] = off;
        off += static_cast<Index>(dims[d]);
    }
    const std::size_t n = off;
    std::vector<SparseVector> prods(n * n);
    std::vector<Monomial> basis_mon;
    std::vector<int> basis_deg;
    for (int d = p; d <= q; ++d)
        for (Index c : ideals_.at(d).non_pivots()) {
            basis_mon.push_back(monomials_.at(d)[c]);
            basis_deg.push_back(d);
        }
    auto nf = [&](int d, const SparseVector& v) {
        SparseVector r = ideals_.at(d).reduce(v);
        for (auto& e : r) e.first = offs[d] + static_cast<Index>(local_index_[d][e.first]);
        return r;
    };
    std::map<int, std::vector<std::optional<SparseVector>>> cache;
    for (Index a = 0; a < n; ++a)
        for (Index b = a; b < n; ++b) {
            const int d = basis_deg[a] + basis_deg[b];
            if (d > q) continue;
            const Index idx = monomials_.at(d).index_of(basis_mon[a] * basis_mon[b]);
            auto& slot = cache[d];
            if (slot.empty()) slot.resize(monomials_.at(d).size());
            if (!slot[idx]) slot[idx] = nf(d, SparseVector{{idx, Rational(1)}});
            prods[a * n + b] = *slot[idx];
            prods[b * n + a] = *slot[idx];
        }
    algebra_ = FiniteGradedAlgebra(p, q, dims, std::move(prods), std::move(labels));
}

SparseVector TruncatedRing::normal_form(int d, const SparseVector& s_coords) const {
    SparseVector r = ideals_.at(d).reduce(s_coords);
    for (auto& e : r) e.first = algebra_.offset(d) + static_cast<Index>(local_index_.at(d)[e.first]);
    return r;
}

SparseVector TruncatedRing::normal_form(const Polynomial& f) const {
    if (f.is_zero()) return {};
    const int d = f.homogeneous_degree();
    if (d < algebra_.p() || d > algebra_.q()) throw ValidationError("polynomial degree outside the window");
    return normal_form(d, f.coordinates(monomials_.at(d)));
}

FiniteGradedAlgebra coordinate_ring_truncation(const HomIdealPresentation& X, int p, int q) {
    return TruncatedRing(X, p, q).algebra();
}

// ---------------------------------------------------------------------------

Rational HilbertData::evaluate(const Rational& t) const {
    Rational r = 0, pw = 1;
    for (const auto& c : polynomial) {
        r += c * pw;
        pw *= t;
    }
    return r;
}

std::string HilbertData::polynomial_string() const {
    std::string s;
    for (std::size_t k = polynomial.size(); k-- > 0;) {
        const Rational& c = polynomial[k];
        if (c == 0) continue;
        const bool neg = c < 0;
        const Rational a = neg ? Rational(-c) : c;
        s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (k == 0 || a != 1) s += a.get_str() + (k > 0 ? "*" : "");
        if (k >= 1) s += "t";
        if (k >= 2) s += "^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

HilbertData hilbert_data(const HomIdealPresentation& X, int d_max) {
    const int n = static_cast<int>(X.n);
    if (d_max < n + 2)
        throw ValidationError("hilbert_data needs d_max >= n + 2 = " + std::to_string(n + 2) + " to validate a fit");
    HilbertData h;
    for (int d = 0; d <= d_max; ++d)
        h.values[d] = binomial(X.n + d, X.n) - ideal_degree_piece(X, d).dim();
    // Interpolate through the last n+1 values, solving the Vandermonde system exactly.
    const int k = n + 1;
    Subspace sys(static_cast<std::size_t>(k + 1));
    for (int r = 0; r < k; ++r) {
        const int t = d_max - r;
        SparseVector row;
        Rational pw = 1;
        for (int c = 0; c < k; ++c) {
            row.emplace_back(static_cast<Index>(c), pw);
            pw *= t;
        }
        row.emplace_back(static_cast<Index>(k), Rational(static_cast<unsigned long>(h.values[t])));
        sys.add(row);
    }
    h.polynomial.assign(static_cast<std::size_t>(k), Rational(0));
    for (std::size_t r = 0; r < sys.dim(); ++r) {
        for (const auto& [c, v] : sys.basis()[r])
            if (c == static_cast<Index>(k)) h.polynomial[sys.pivots()[r]] = v;
    }
    while (!h.polynomial.empty() && h.polynomial.back() == 0) h.polynomial.pop_back();
    for (int t = d_max - k; t >= d_max - k - 1; --t)
        if (h.evaluate(Rational(t)) != Rational(static_cast<unsigned long>(h.values[t])))
            throw ValidationError("unstable: no polynomial of degree <= " + std::to_string(n) +
                                  " fits the Hilbert function up to degree " + std::to_string(d_max));
    h.stable_from = d_max - k - 1;
    while (h.stable_from > 0 &&
           h.evaluate(Rational(h.stable_from - 1)) == Rational(static_cast<unsigned long>(h.values[h.stable_from - 1])))
        --h.stable_from;
    return h;
}

FiniteGradedAlgebra veronese_truncation(const FiniteGradedAlgebra& A, int step) {
    if (step < 1) throw ValidationError("Veronese step must be positive");
    const int lo = (A.p() + step - 1) / step;
    const int hi = A.q() / step;
    if (lo > hi) throw ValidationError("window contains no multiple of the Veronese step");
    std::map<int, std::size_t> dims;
    std::vector<Index> keep;  // A global index of each B basis element
    std::vector<std::string> labels;
    for (int j = lo; j <= hi; ++j) {
        dims[j] = A.dim(step * j);
        for (std::size_t k = 0; k < A.dim(step * j); ++k) {
            keep.push_back(A.offset(step * j) + static_cast<Index>(k));
            labels.push_back(A.label(keep.back()));
        }
    }
    std::vector<std::int64_t> where(A.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = static_cast<std::int64_t>(i);
    const std::size_t n = keep.size();
    std::vector<SparseVector> prods(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            SparseVector v = A.product(keep[a], keep[b]);
            for (auto& e : v) e.first = static_cast<Index>(where[e.first]);
            prods[a * n + b] = std::move(v);
        }
    return FiniteGradedAlgebra(lo, hi, dims, std::move(prods), std::move(labels));
}

}  // namespace dhilb
