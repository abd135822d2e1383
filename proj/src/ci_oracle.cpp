#include "dhilb/ci_oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dhilb/error.hpp"
#include "dhilb/linalg.hpp"

namespace dhilb {

CIData CIData::from_forms(std::size_t n, std::vector<Polynomial> forms) {
    CIData z;
    z.n = n;
    if (forms.size() > n + 1) throw ValidationError("more forms than variables");
    for (auto& f : forms) {
        if (f.nvars() != n + 1) throw ValidationError("form has the wrong number of variables");
        if (f.is_zero()) throw ValidationError("zero form in a complete intersection");
        const int d = f.homogeneous_degree();
        if (d <= 0) throw ValidationError("constant form in a complete intersection");
        z.degrees.push_back(d);
        z.forms.push_back(std::move(f));
    }
    return z;
}

CIData CIData::parse(std::size_t n, const std::vector<std::string>& forms) {
    std::vector<Polynomial> polys;
    for (const auto& s : forms) polys.push_back(parse_polynomial(s, n + 1));
    return from_forms(n, std::move(polys));
}

namespace {

/// Laurent monomials of degree t with a_i >= 0 off `chart` and a_i >= -N on it.
class LaurentBasis {
public:
    LaurentBasis(std::size_t nvars, unsigned chart, int t, int N) {
        Monomial a(nvars);
        std::vector<int> lo(nvars);
        int lo_sum = 0;
        for (std::size_t i = 0; i < nvars; ++i) {
            lo[i] = (chart >> i) & 1u ? -N : 0;
            lo_sum += lo[i];
        }
        if (t >= lo_sum) fill(a, lo, 0, t - lo_sum);
    }
    std::size_t size() const { return monomials_.size(); }
    const Monomial& operator[](std::size_t k) const { return monomials_[k]; }
    /// Position of m; -1 if absent.
    long find(const Monomial& m) const {
        const auto it = index_.find(m);
        return it == index_.end() ? -1 : static_cast<long>(it->second);
    }

private:
    void fill(Monomial& a, const std::vector<int>& lo, std::size_t i, int rest) {
        if (i + 1 == a.size()) {
            a[i] = lo[i] + rest;
            index_.emplace(a, monomials_.size());
            monomials_.push_back(a);
            return;
        }
        for (int k = rest; k >= 0; --k) {
            a[i] = lo[i] + k;
            fill(a, lo, i + 1, rest - k);
        }
    }
    std::vector<Monomial> monomials_;
    std::map<Monomial, std::size_t> index_;
};

struct Block {
    unsigned chart;   // Cech subset J as a bitmask
    unsigned koszul;  // Koszul subset S as a bitmask
    std::size_t offset;
    LaurentBasis basis;
};

int popcount(unsigned x) { return __builtin_popcount(x); }

/// Sign of removing/inserting element i into the sorted set `s` (elements of s below i).
int position_sign(unsigned s, unsigned i) { return popcount(s & ((1u << i) - 1u)) % 2 ? -1 : 1; }

int twist_of(const CIData& Z, unsigned S, int e) {
    int t = e;
    for (std::size_t j = 0; j < Z.codim(); ++j)
        if ((S >> j) & 1u) t -= Z.degrees[j];
    return t;
}

/// Total complex in cohomological degree r = |J| - 1 - |S|. With `polynomial_only`
/// only J = {} is kept, giving the Koszul complex of polynomial pieces (r = -|S|).
CochainComplex build_total(const CIData& Z, int e, int N, bool polynomial_only) {
    const std::size_t nv = Z.n + 1;
    const std::size_t c = Z.codim();
    std::map<int, std::vector<Block>> by_degree;
    std::map<int, std::size_t> dims;
    const unsigned first_chart = polynomial_only ? 0u : 1u;
    const unsigned last_chart = polynomial_only ? 0u : (1u << nv) - 1u;
    for (unsigned J = first_chart; J <= last_chart; ++J)
        for (unsigned S = 0; S < (1u << c); ++S) {
            const int r = (polynomial_only ? 0 : popcount(J) - 1) - popcount(S);
            LaurentBasis b(nv, J, twist_of(Z, S, e), N);
            const std::size_t off = dims[r];
            dims[r] += b.size();
            by_degree[r].push_back({J, S, off, std::move(b)});
        }
    std::map<Bidegree, std::size_t> cdims;
    std::map<Bidegree, SparseMatrix> diffs;
    for (const auto& [r, d] : dims) cdims[{r, e}] = d;
    for (const auto& [r, blocks] : by_degree) {
        const auto next = by_degree.find(r + 1);
        if (next == by_degree.end()) continue;
        std::map<std::pair<unsigned, unsigned>, const Block*> target;
        for (const auto& b : next->second) target[{b.chart, b.koszul}] = &b;
        std::vector<Triplet> trip;
        for (const auto& b : blocks) {
            const int k = polynomial_only ? 0 : popcount(b.chart) - 1;
            const int ksign = k % 2 ? -1 : 1;
            // Cech part: restriction to J + {i}.
            if (!polynomial_only)
                for (unsigned i = 0; i < nv; ++i) {
                    if ((b.chart >> i) & 1u) continue;
                    const Block* t = target.at({b.chart | (1u << i), b.koszul});
                    const int s = position_sign(b.chart, i);
                    for (std::size_t m = 0; m < b.basis.size(); ++m) {
                        const long pos = t->basis.find(b.basis[m]);
                        if (pos < 0) throw InternalError("Cech restriction left the truncated basis");
                        trip.push_back({static_cast<Index>(t->offset + static_cast<std::size_t>(pos)),
                                        static_cast<Index>(b.offset + m), Rational(s)});
                    }
                }
            // Koszul part: e_S -> sum_j (+-) f_j e_{S - j}.
            for (unsigned j = 0; j < c; ++j) {
                if (!((b.koszul >> j) & 1u)) continue;
                const Block* t = target.at({b.chart, b.koszul & ~(1u << j)});
                const int s = ksign * position_sign(b.koszul, j);
                for (std::size_t m = 0; m < b.basis.size(); ++m)
                    for (const auto& [mono, coeff] : Z.forms[j].terms()) {
                        const long pos = t->basis.find(b.basis[m] * mono);
                        if (pos < 0) throw InternalError("Koszul multiplication left the truncated basis");
                        trip.push_back({static_cast<Index>(t->offset + static_cast<std::size_t>(pos)),
                                        static_cast<Index>(b.offset + m), coeff * s});
                    }
            }
        }
        diffs[{r, e}] = SparseMatrix::from_triplets(dims.at(r + 1), dims.at(r), std::move(trip));
    }
    return CochainComplex(std::move(cdims), std::move(diffs));
}

}  // namespace

void check_regular_sequence(const CIData& Z, int max_degree, const Field& field) {
    if (Z.codim() == 0) return;
    for (int t = 0; t <= max_degree; ++t) {
        const CochainComplex K = build_total(Z, t, 0, true);
        for (int s = 1; s <= static_cast<int>(Z.codim()); ++s)
            if (cohomology_dim(K, -s, t, field) != 0)
                throw ValidationError("not a regular sequence (Koszul homology in homological degree " +
                                      std::to_string(s) + ", polynomial degree " + std::to_string(t) + ")");
    }
}

int sufficient_laurent_bound(const CIData& Z, int e) {
    const int lowest = e - std::accumulate(Z.degrees.begin(), Z.degrees.end(), 0);
    return std::max(0, -lowest - static_cast<int>(Z.n));
}

CochainComplex cech_koszul_complex(const CIData& Z, int e, int laurent_bound) {
    if (laurent_bound < 0) throw ValidationError("Laurent bound must be nonnegative");
    return build_total(Z, e, laurent_bound, false);
}

std::vector<std::size_t> ci_twist_cohomology_all(const CIData& Z, int e, const CIOptions& options) {
    const int sum = std::accumulate(Z.degrees.begin(), Z.degrees.end(), 0);
    if (options.check_regular) check_regular_sequence(Z, sum + static_cast<int>(Z.n), options.field);
    const int N = options.laurent_bound >= 0 ? options.laurent_bound : sufficient_laurent_bound(Z, e);
    const CochainComplex C = cech_koszul_complex(Z, e, N);
    std::vector<std::size_t> out;
    for (int i = 0; i <= static_cast<int>(Z.n); ++i) out.push_back(cohomology_dim(C, i, e, options.field));
    // Degrees -c..-1 of the total complex must be acyclic for a resolution.
    for (int r = -static_cast<int>(Z.codim()); r < 0; ++r)
        if (cohomology_dim(C, r, e, options.field) != 0)
            throw ValidationError("not a regular sequence (total complex not acyclic in degree " + std::to_string(r) + ")");
    return out;
}

std::size_t ci_twist_cohomology(const CIData& Z, int e, int i, const CIOptions& options) {
    if (i < 0 || i > static_cast<int>(Z.n)) throw ValidationError("cohomological degree out of range");
    return ci_twist_cohomology_all(Z, e, options)[static_cast<std::size_t>(i)];
}

std::vector<std::size_t> ci_normal_cohomology_all(const CIData& Z, const CIOptions& options) {
    std::vector<std::size_t> out(Z.n + 1, 0);
    for (int d : Z.degrees) {
        const auto h = ci_twist_cohomology_all(Z, d, options);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += h[i];
    }
    return out;
}

std::size_t ci_normal_cohomology(const CIData& Z, int i, const CIOptions& options) {
    if (i < 0 || i > static_cast<int>(Z.n)) throw ValidationError("cohomological degree out of range");
    return ci_normal_cohomology_all(Z, options)[static_cast<std::size_t>(i)];
}

long long ci_euler_characteristic(const CIData& Z, int e, const CIOptions& options) {
    const auto h = ci_twist_cohomology_all(Z, e, options);
    long long chi = 0;
    for (std::size_t i = 0; i < h.size(); ++i) chi += (i % 2 ? -1 : 1) * static_cast<long long>(h[i]);
    return chi;
}

}  // namespace dhilb
