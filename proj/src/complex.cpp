#include "dhilb/complex.hpp"

#include <algorithm>

#include "dhilb/error.hpp"
#include "dhilb/linalg.hpp"

namespace dhilb {

GradedVectorSpace::GradedVectorSpace(std::map<int, std::size_t> dims, std::map<int, std::vector<std::string>> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    for (const auto& [deg, names] : labels_) {
        if (names.size() != dim(deg))
            throw ValidationError("label count differs from dimension in degree " + std::to_string(deg));
        std::set<std::string> seen(names.begin(), names.end());
        if (seen.size() != names.size())
            throw ValidationError("basis labels repeat in degree " + std::to_string(deg));
    }
}

std::size_t GradedVectorSpace::dim(int degree) const {
    auto it = dims_.find(degree);
    return it == dims_.end() ? 0 : it->second;
}

std::size_t GradedVectorSpace::total_dim() const {
    std::size_t n = 0;
    for (const auto& [d, k] : dims_) n += k;
    return n;
}

std::vector<int> GradedVectorSpace::degrees() const {
    std::vector<int> out;
    for (const auto& [d, k] : dims_) out.push_back(d);
    return out;
}

const std::vector<std::string>& GradedVectorSpace::labels(int degree) const {
    static const std::vector<std::string> none;
    auto it = labels_.find(degree);
    return it == labels_.end() ? none : it->second;
}

CochainComplex::CochainComplex(std::map<Bidegree, std::size_t> dims, std::map<Bidegree, SparseMatrix> differentials,
                               std::optional<int> known_through)
    : dims_(std::move(dims)), diffs_(std::move(differentials)), known_through_(known_through) {
    for (auto it = dims_.begin(); it != dims_.end();) it = it->second == 0 ? dims_.erase(it) : std::next(it);
    for (const auto& [bd, m] : diffs_) {
        const auto [i, j] = bd;
        if (!has_differential(i))
            throw InternalError("differential supplied beyond the built range at degree " + std::to_string(i));
        if (m.cols() != dim(i, j) || m.rows() != dim(i + 1, j))
            throw InternalError("differential shape mismatch at (" + std::to_string(i) + "," + std::to_string(j) +
                                ")");
    }
    for (const auto& [bd, m] : diffs_) {
        const auto [i, j] = bd;
        auto next = diffs_.find({i + 1, j});
        if (next == diffs_.end() || m.is_zero() || next->second.is_zero()) continue;
        ++checks_;
        if (!(next->second * m).is_zero())
            throw InternalError("d*d != 0 at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

std::size_t CochainComplex::dim(int i, int j) const {
    auto it = dims_.find({i, j});
    return it == dims_.end() ? 0 : it->second;
}

SparseMatrix CochainComplex::differential(int i, int j) const {
    if (!has_differential(i))
        throw BudgetError("cohomological degree of built complex", *known_through_ - 1, i);
    auto it = diffs_.find({i, j});
    if (it != diffs_.end()) return it->second;
    return SparseMatrix::zero(dim(i + 1, j), dim(i, j));
}

std::set<int> CochainComplex::internal_degrees() const {
    std::set<int> out;
    for (const auto& [bd, n] : dims_) out.insert(bd.second);
    return out;
}

std::optional<std::pair<int, int>> CochainComplex::cohomological_range() const {
    if (dims_.empty()) return std::nullopt;
    int lo = dims_.begin()->first.first, hi = lo;
    for (const auto& [bd, n] : dims_) {
        lo = std::min(lo, bd.first);
        hi = std::max(hi, bd.first);
    }
    return std::make_pair(lo, hi);
}

CohomologyResult cohomology(const CochainComplex& c, int i, int j, const Field& field, bool representatives) {
    if (!c.has_differential(i))
        throw BudgetError("cohomological degree of built complex", *c.known_through() - 1, i);
    const SparseMatrix out = c.differential(i, j);
    const SparseMatrix in = c.differential(i - 1, j);
    const std::size_t n = c.dim(i, j);
    const std::size_t r_out = rank(out, field), r_in = rank(in, field);
    CohomologyResult res;
    res.dim = n - r_out - r_in;
    if (!representatives) {
        res.representatives = SparseMatrix::zero(n, 0);
        return res;
    }
    // Representatives are always produced over Q.
    const SparseMatrix ker = kernel_basis(out, Field::rationals());
    Subspace span(n);
    const SparseMatrix in_t = in.transpose();
    for (std::size_t k = 0; k < in_t.rows(); ++k) span.add(in_t.row(k));
    const SparseMatrix ker_t = ker.transpose();
    std::vector<Triplet> t;
    Index col = 0;
    for (std::size_t k = 0; k < ker_t.rows(); ++k) {
        SparseVector v = ker_t.row(k);
        if (!span.add(v)) continue;
        for (auto& [r, x] : v) t.push_back({r, col, x});
        ++col;
    }
    res.representatives = SparseMatrix::from_triplets(n, col, std::move(t));
    if (field.is_rational() && res.representatives.cols() != res.dim)
        throw InternalError("cohomology representatives disagree with rank count");
    return res;
}

std::size_t cohomology_dim(const CochainComplex& c, int i, int j, const Field& field) {
    return cohomology(c, i, j, field, false).dim;
}

ChainMap::ChainMap(CochainComplex source, CochainComplex target, std::map<Bidegree, SparseMatrix> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    for (const auto& [bd, m] : components_)
        if (m.cols() != source_.dim(bd.first, bd.second) || m.rows() != target_.dim(bd.first, bd.second))
            throw InternalError("chain map component shape mismatch at degree " + std::to_string(bd.first));
    std::set<Bidegree> degrees;
    for (const auto& [bd, n] : source_.dims()) degrees.insert(bd);
    for (const auto& [bd, n] : source_.dims()) degrees.insert({bd.first - 1, bd.second});
    for (const auto& [i, j] : degrees) {
        if (!source_.has_differential(i) || !target_.has_differential(i)) continue;
        const SparseMatrix lhs = component(i + 1, j) * source_.differential(i, j);
        const SparseMatrix rhs = target_.differential(i, j) * component(i, j);
        if (!(lhs == rhs))
            throw InternalError("map does not commute with differentials at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    }
}

SparseMatrix ChainMap::component(int i, int j) const {
    auto it = components_.find({i, j});
    if (it != components_.end()) return it->second;
    return SparseMatrix::zero(target_.dim(i, j), source_.dim(i, j));
}

CochainComplex mapping_fiber(const ChainMap& f) {
    const CochainComplex& s = f.source();
    const CochainComplex& t = f.target();
    std::optional<int> known;
    if (s.known_through() && t.known_through())
        known = std::min(*s.known_through(), *t.known_through() + 1);
    else if (s.known_through())
        known = s.known_through();
    else if (t.known_through())
        known = *t.known_through() + 1;

    std::map<Bidegree, std::size_t> dims;
    std::set<Bidegree> keys;
    for (const auto& [bd, n] : s.dims()) keys.insert(bd);
    for (const auto& [bd, n] : t.dims()) keys.insert({bd.first + 1, bd.second});
    for (const auto& [k, j] : keys) {
        if (known && k > *known) continue;
        dims[{k, j}] = s.dim(k, j) + t.dim(k - 1, j);
    }
    std::map<Bidegree, SparseMatrix> diffs;
    std::set<Bidegree> sources = keys;
    for (const auto& [k, j] : keys) sources.insert({k - 1, j});
    for (const auto& [k, j] : sources) {
        if (known && k >= *known) continue;
        if (s.dim(k, j) + t.dim(k - 1, j) == 0 && s.dim(k + 1, j) + t.dim(k, j) == 0) continue;
        // [[d_S, 0], [f, -d_T]]
        SparseMatrix ds = s.differential(k, j);
        SparseMatrix fk = f.component(k, j);
        SparseMatrix dt = t.differential(k - 1, j).scaled(Rational(-1));
        SparseMatrix zero = SparseMatrix::zero(s.dim(k + 1, j), t.dim(k - 1, j));
        diffs[{k, j}] = SparseMatrix::block(ds, zero, fk, dt);
    }
    return CochainComplex(std::move(dims), std::move(diffs), known);
}

}  // namespace dhilb
