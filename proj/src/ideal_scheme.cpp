#include "dhilb/ideal_scheme.hpp"

#include <random>

#include "dhilb/error.hpp"

namespace dhilb {

namespace {

/// Local coordinates of a homogeneous global vector.
SparseVector to_local(const FiniteGradedAlgebra& A, int d, const SparseVector& v) {
    SparseVector out = v;
    for (auto& e : out) e.first -= A.offset(d);
    return out;
}

SparseVector to_global(const FiniteGradedAlgebra& A, int d, const SparseVector& v) {
    SparseVector out = v;
    for (auto& e : out) e.first += A.offset(d);
    return out;
}

/// Coordinates in a quotient U/W: W's basis and chosen representatives of U/W
/// are stored with tag columns appended, and reduction exposes the tags.
class QuotientCoordinates {
public:
    QuotientCoordinates(std::size_t ambient, const std::vector<SparseVector>& sub,
                        const std::vector<SparseVector>& whole)
        : ambient_(ambient) {
        Subspace w(ambient);
        for (const auto& v : sub) w.add(v);
        for (const auto& v : whole)
            if (w.add(v)) reps_.push_back(v);
        tagged_ = Subspace(ambient + reps_.size());
        for (const auto& v : sub) tagged_.add(v);
        for (std::size_t k = 0; k < reps_.size(); ++k) {
            SparseVector t = v_with_tag(reps_[k], k);
            tagged_.add(t);
        }
    }
    std::size_t dim() const { return reps_.size(); }
    const std::vector<SparseVector>& representatives() const { return reps_; }
    /// Coordinates of x (an element of U) in the representative basis of U/W.
    SparseVector coordinates(const SparseVector& x) const {
        SparseVector r = tagged_.reduce(x);
        SparseVector out;
        for (const auto& [c, v] : r) {
            if (c < ambient_) throw InternalError("quotient coordinates: element outside the subspace");
            out.emplace_back(static_cast<Index>(c - ambient_), -v);
        }
        return out;
    }

private:
    SparseVector v_with_tag(const SparseVector& v, std::size_t k) const {
        SparseVector t = v;
        t.emplace_back(static_cast<Index>(ambient_ + k), Rational(1));
        return t;
    }
    std::size_t ambient_;
    std::vector<SparseVector> reps_;
    Subspace tagged_;
};

}  // namespace

GradedSubspace::GradedSubspace(const FiniteGradedAlgebra& A) {
    for (int d = A.p(); d <= A.q(); ++d) pieces_.emplace(d, Subspace(A.dim(d)));
}

std::map<int, std::size_t> GradedSubspace::dims() const {
    std::map<int, std::size_t> out;
    for (const auto& [d, s] : pieces_) out[d] = s.dim();
    return out;
}

void GradedSubspace::add_global(const FiniteGradedAlgebra& A, const SparseVector& v) {
    if (v.empty()) return;
    const int d = A.degree_of(v.front().first);
    for (const auto& e : v)
        if (A.degree_of(e.first) != d) throw ValidationError("subspace generator is not homogeneous");
    pieces_.at(d).add(to_local(A, d, v));
}

GradedSubspace GradedSubspace::whole(const FiniteGradedAlgebra& A) {
    GradedSubspace V(A);
    for (int d = A.p(); d <= A.q(); ++d)
        for (Index k = 0; k < A.dim(d); ++k) V.piece(d).add({{k, Rational(1)}});
    return V;
}

bool is_graded_ideal(const FiniteGradedAlgebra& A, const GradedSubspace& V) {
    for (int i = A.p(); i <= A.q(); ++i)
        for (int j = A.p(); j <= A.q(); ++j) {
            if (i + j > A.q()) continue;
            const Subspace& target = V.piece(i + j);
            for (const auto& v : V.piece(j).basis()) {
                const SparseVector vg = to_global(A, j, v);
                for (Index a = 0; a < A.dim(i); ++a) {
                    const SparseVector av = A.multiply({{A.offset(i) + a, Rational(1)}}, vg);
                    if (!target.contains(to_local(A, i + j, av))) return false;
                }
            }
        }
    return true;
}

IdealPoint make_ideal_point(const FiniteGradedAlgebra& A, GradedSubspace V) {
    if (!is_graded_ideal(A, V)) throw ValidationError("subspace is not a graded ideal");
    return IdealPoint{std::move(V)};
}

IdealPoint subscheme_to_point(const TruncatedRing& R, const HomIdealPresentation& Z) {
    const HomIdealPresentation& X = R.presentation();
    const FiniteGradedAlgebra& A = R.algebra();
    if (Z.n != X.n) throw ValidationError("Z and X live in different ambient spaces");
    // Containment of ideals is tested on X's generators and on every window degree.
    for (std::size_t k = 0; k < X.gens.size(); ++k) {
        const int e = X.degrees[k];
        const Subspace Iz = ideal_degree_piece(Z, e);
        if (!Iz.contains(X.gens[k].coordinates(MonomialBasis(X.nvars(), e))))
            throw ValidationError("not a subscheme of X: generator " + X.gens[k].to_string() +
                                  " of X is not in the ideal of Z");
    }
    GradedSubspace V(A);
    for (int d = A.p(); d <= A.q(); ++d) {
        const Subspace Iz = ideal_degree_piece(Z, d);
        for (const auto& row : R.ideal(d).basis())
            if (!Iz.contains(row))
                throw ValidationError("not a subscheme of X: ideals fail to nest in degree " + std::to_string(d));
        for (const auto& row : Iz.basis()) {
            const SparseVector img = R.normal_form(d, row);
            if (!img.empty()) V.piece(d).add(to_local(A, d, img));
        }
    }
    IdealPoint I{std::move(V)};
    if (!is_graded_ideal(A, I.subspace)) throw InternalError("image of the ideal of Z is not an ideal");
    return I;
}

IdealPoint subscheme_to_point(const HomIdealPresentation& X, const HomIdealPresentation& Z, int p, int q) {
    return subscheme_to_point(TruncatedRing(X, p, q), Z);
}

namespace {

struct QuotientData {
    std::map<int, std::vector<Index>> kept;      // local indices of A_d surviving as B basis
    std::map<int, std::vector<std::int64_t>> position;  // A_d local index -> B_d local index or -1
};

QuotientData quotient_data(const FiniteGradedAlgebra& A, const IdealPoint& I) {
    QuotientData q;
    for (int d = A.p(); d <= A.q(); ++d) {
        q.kept[d] = I.subspace.piece(d).non_pivots();
        auto& pos = q.position[d];
        pos.assign(A.dim(d), -1);
        for (std::size_t k = 0; k < q.kept[d].size(); ++k) pos[q.kept[d][k]] = static_cast<std::int64_t>(k);
    }
    return q;
}

}  // namespace

AlgebraMap quotient_map(const FiniteGradedAlgebra& A, const IdealPoint& I) {
    const QuotientData qd = quotient_data(A, I);
    std::map<int, Index> offs;
    Index off = 0;
    for (int d = A.p(); d <= A.q(); ++d) {
        offs[d] = off;
        off += static_cast<Index>(qd.kept.at(d).size());
    }
    AlgebraMap f;
    f.images.resize(A.size());
    for (Index g = 0; g < A.size(); ++g) {
        const int d = A.degree_of(g);
        SparseVector r = I.subspace.piece(d).reduce({{g - A.offset(d), Rational(1)}});
        for (auto& e : r) e.first = offs[d] + static_cast<Index>(qd.position.at(d)[e.first]);
        f.images[g] = std::move(r);
    }
    return f;
}

FiniteGradedAlgebra quotient_algebra(const FiniteGradedAlgebra& A, const IdealPoint& I) {
    if (!is_graded_ideal(A, I.subspace)) throw ValidationError("quotient by a subspace that is not an ideal");
    const QuotientData qd = quotient_data(A, I);
    const AlgebraMap pi = quotient_map(A, I);
    std::vector<Index> lift;  // B basis -> A global index
    std::map<int, std::size_t> dims;
    std::vector<std::string> labels;
    for (int d = A.p(); d <= A.q(); ++d) {
        dims[d] = qd.kept.at(d).size();
        for (Index k : qd.kept.at(d)) {
            lift.push_back(A.offset(d) + k);
            labels.push_back(A.label(lift.back()));
        }
    }
    const std::size_t n = lift.size();
    std::vector<SparseVector> prods(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) prods[a * n + b] = pi.apply(A.product(lift[a], lift[b]));
    return FiniteGradedAlgebra(A.p(), A.q(), dims, std::move(prods), std::move(labels));
}

std::size_t classical_tangent_dim(const FiniteGradedAlgebra& A, const IdealPoint& I,
                                  const ClassicalTangentOptions& options) {
    if (!is_graded_ideal(A, I.subspace)) throw ValidationError("classical tangent of a non-ideal");
    const FiniteGradedAlgebra B = quotient_algebra(A, I);
    const AlgebraMap pi = quotient_map(A, I);
    const int p = A.p(), q = A.q();
    std::mt19937_64 rng(options.basis_seed.value_or(0));

    // I_d bases, optionally recombined.
    std::map<int, std::vector<SparseVector>> ibasis;
    for (int d = p; d <= q; ++d) {
        auto rows = I.subspace.piece(d).basis();
        if (options.basis_seed && !rows.empty()) {
            std::shuffle(rows.begin(), rows.end(), rng);
            std::uniform_int_distribution<int> coef(-3, 3);
            // Unitriangular recombination keeps the span.
            for (std::size_t r = rows.size(); r-- > 0;)
                for (std::size_t s = 0; s < r; ++s) axpy(rows[r], Rational(coef(rng)), rows[s]);
        }
        ibasis[d] = std::move(rows);
    }
    // I^2 in each degree, then N = I/I^2.
    std::map<int, QuotientCoordinates> N;
    for (int d = p; d <= q; ++d) {
        std::vector<SparseVector> sq;
        for (int i = p; i <= d - p; ++i) {
            const int j = d - i;
            if (j < i) break;
            for (const auto& u : ibasis[i])
                for (const auto& v : ibasis[j])
                    sq.push_back(to_local(A, d, A.multiply(to_global(A, i, u), to_global(A, j, v))));
        }
        N.emplace(d, QuotientCoordinates(A.dim(d), sq, ibasis[d]));
    }
    // Unknowns phi_d[k][b]: k runs over N_d, b over B_d.
    std::map<int, Index> var_off;
    Index nvars = 0;
    for (int d = p; d <= q; ++d) {
        var_off[d] = nvars;
        nvars += static_cast<Index>(N.at(d).dim() * B.dim(d));
    }
    auto var = [&](int d, std::size_t k, std::size_t b) {
        return var_off[d] + static_cast<Index>(k * B.dim(d) + b);
    };
    std::vector<Triplet> t;
    Index row = 0;
    for (int j = p; j <= q; ++j)
        for (int i = p; i + j <= q; ++i) {
            const int d = i + j;
            const auto& reps = N.at(j).representatives();
            for (Index a = 0; a < A.dim(i); ++a) {
                const Index ag = A.offset(i) + a;
                const SparseVector& pa = pi.images[ag];
                for (std::size_t v = 0; v < reps.size(); ++v) {
                    const SparseVector av = A.multiply({{ag, Rational(1)}}, to_global(A, j, reps[v]));
                    const SparseVector c = N.at(d).coordinates(to_local(A, d, av));
                    // phi_d([a v]) - pi(a) phi_j([v]) = 0, one row per B_d basis element.
                    std::vector<std::vector<std::pair<Index, Rational>>> rows(B.dim(d));
                    for (const auto& [k, ck] : c)
                        for (std::size_t b = 0; b < B.dim(d); ++b) rows[b].emplace_back(var(d, k, b), ck);
                    for (std::size_t b = 0; b < B.dim(j); ++b) {
                        const SparseVector prod = B.multiply(pa, {{B.offset(j) + static_cast<Index>(b), Rational(1)}});
                        for (const auto& [bp, x] : prod) rows[bp - B.offset(d)].emplace_back(var(j, v, b), -x);
                    }
                    for (auto& r : rows) {
                        SparseVector nr = normalize(std::move(r));
                        if (nr.empty()) continue;
                        for (auto& [col, x] : nr) t.push_back({row, col, x});
                        ++row;
                    }
                }
            }
        }
    const SparseMatrix constraints = SparseMatrix::from_triplets(row, nvars, std::move(t));
    return nvars - rank(constraints, options.field);
}

}  // namespace dhilb
