#include "dhilb/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <queue>
#include <thread>

#include "dhilb/error.hpp"
#include "dhilb/parallel.hpp"

namespace dhilb {

namespace {

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
    Index find(Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// ---------------------------------------------------------------------------
// Row arithmetic policies. Rows are sorted (column, value) lists.

struct IntegerRows {
    using Value = mpz_class;
    using Row = std::vector<std::pair<Index, mpz_class>>;

    static std::size_t size_of(const Value& v) { return mpz_sizeinbase(v.get_mpz_t(), 2); }

    /// Clears denominators and divides out the content.
    static Row from_rational(const SparseVector& v) {
        mpz_class l = 1;
        for (const auto& e : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
        Row r;
        r.reserve(v.size());
        for (const auto& [c, x] : v) r.emplace_back(c, mpz_class(x.get_num() * (l / x.get_den())));
        make_primitive(r);
        return r;
    }

    static void make_primitive(Row& r) {
        if (r.empty()) return;
        mpz_class g = 0;
        for (const auto& e : r) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
            if (g == 1) return;
        }
        if (g > 1)
            for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
    }

    void prepare_pivot(Row&, std::size_t) const {}

    /// target := pv*target - tv*pivot, where pv, tv are the entries at column c.
    template <class OnRemove, class OnAdd>
    void eliminate(Row& target, const Row& pivot, std::size_t pivot_pos, std::size_t target_pos, OnRemove&& removed,
                   OnAdd&& added) const {
        mpz_class pv = pivot[pivot_pos].second;
        mpz_class tv = target[target_pos].second;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), pv.get_mpz_t(), tv.get_mpz_t());
        pv /= g;
        tv /= g;
        Row out;
        out.reserve(target.size() + pivot.size());
        std::size_t i = 0, j = 0;
        while (i < target.size() || j < pivot.size()) {
            if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
                out.emplace_back(target[i].first, pv * target[i].second);
                ++i;
            } else if (i == target.size() || pivot[j].first < target[i].first) {
                out.emplace_back(pivot[j].first, -tv * pivot[j].second);
                added(pivot[j].first);
                ++j;
            } else {
                mpz_class v = pv * target[i].second - tv * pivot[j].second;
                if (v != 0)
                    out.emplace_back(target[i].first, std::move(v));
                else
                    removed(target[i].first);
                ++i;
                ++j;
            }
        }
        make_primitive(out);
        target.swap(out);
    }
};

struct ModularRows {
    using Value = std::uint64_t;
    using Row = std::vector<std::pair<Index, std::uint64_t>>;
    std::uint64_t p;

    static std::size_t size_of(const Value&) { return 1; }

    Row from_rational(const SparseVector& v, const Field& f) const {
        Row r;
        r.reserve(v.size());
        for (const auto& [c, x] : v) {
            std::uint64_t y = f.reduce(x);
            if (y) r.emplace_back(c, y);
        }
        return r;
    }

    void prepare_pivot(Row& row, std::size_t pos) const {
        const std::uint64_t inv = mod_inverse(row[pos].second, p);
        for (auto& e : row) e.second = e.second * inv % p;
    }

    /// target := target - tv*pivot, pivot entry at column c already 1.
    template <class OnRemove, class OnAdd>
    void eliminate(Row& target, const Row& pivot, std::size_t, std::size_t target_pos, OnRemove&& removed,
                   OnAdd&& added) const {
        const std::uint64_t tv = target[target_pos].second;
        const std::uint64_t neg = p - tv;
        Row out;
        out.reserve(target.size() + pivot.size());
        std::size_t i = 0, j = 0;
        while (i < target.size() || j < pivot.size()) {
            if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
                out.push_back(target[i++]);
            } else if (i == target.size() || pivot[j].first < target[i].first) {
                out.emplace_back(pivot[j].first, neg * pivot[j].second % p);
                added(pivot[j].first);
                ++j;
            } else {
                std::uint64_t v = (target[i].second + neg * pivot[j].second) % p;
                if (v)
                    out.emplace_back(target[i].first, v);
                else
                    removed(target[i].first);
                ++i;
                ++j;
            }
        }
        target.swap(out);
    }
};

template <class Row>
std::size_t find_col(const Row& row, Index c) {
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, Index x) { return e.first < x; });
    if (it == row.end() || it->first != c) return row.size();
    return static_cast<std::size_t>(it - row.begin());
}

/// Markowitz-style elimination. With `full` set, pivots are also cleared from
/// rows that already served as pivots, leaving a reduced echelon form; the
/// pivot (row, column) pairs are reported through `pivots`.
template <class Policy>
std::size_t markowitz_eliminate(std::vector<typename Policy::Row>& rows, std::size_t ncols, const Policy& policy,
                                bool full, std::vector<std::pair<Index, Index>>* pivots) {
    const std::size_t nrows = rows.size();
    std::vector<char> active(nrows, 1);
    std::vector<std::vector<Index>> col_rows(ncols);
    std::vector<std::size_t> col_count(ncols, 0);
    using Entry = std::pair<std::size_t, Index>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (Index r = 0; r < nrows; ++r) {
        for (const auto& e : rows[r]) {
            col_rows[e.first].push_back(r);
            ++col_count[e.first];
        }
        heap.emplace(rows[r].size(), r);
    }
    std::size_t rank = 0;
    while (!heap.empty()) {
        auto [len, r] = heap.top();
        heap.pop();
        if (!active[r] || rows[r].size() != len) continue;
        active[r] = 0;
        auto& prow = rows[r];
        if (prow.empty()) continue;
        std::size_t best = 0;
        for (std::size_t k = 1; k < prow.size(); ++k) {
            const Index c = prow[k].first, b = prow[best].first;
            if (col_count[c] != col_count[b] ? col_count[c] < col_count[b]
                                             : Policy::size_of(prow[k].second) < Policy::size_of(prow[best].second))
                best = k;
        }
        const Index c = prow[best].first;
        for (const auto& e : prow) --col_count[e.first];
        policy.prepare_pivot(prow, best);
        ++rank;
        if (pivots) pivots->emplace_back(r, c);
        std::vector<Index> list;
        list.swap(col_rows[c]);
        for (Index t : list) {
            if (t == r) continue;
            if (!active[t] && !full) continue;
            auto& trow = rows[t];
            const std::size_t pos = find_col(trow, c);
            if (pos == trow.size()) continue;
            const std::size_t ppos = find_col(prow, c);
            const bool counted = active[t];
            policy.eliminate(
                trow, prow, ppos, pos,
                [&](Index col) {
                    if (counted) --col_count[col];
                },
                [&](Index col) {
                    col_rows[col].push_back(t);
                    if (counted) ++col_count[col];
                });
            if (counted) heap.emplace(trow.size(), t);
        }
    }
    return rank;
}

/// Incremental echelon form in input order; each row is reduced on its leading entry.
template <class Policy>
std::size_t natural_eliminate(std::vector<typename Policy::Row>& rows, std::size_t ncols, const Policy& policy) {
    std::vector<std::int64_t> pivot_of(ncols, -1);
    std::size_t rank = 0;
    auto noop = [](Index) {};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto& row = rows[r];
        while (!row.empty()) {
            const Index lead = row.front().first;
            if (pivot_of[lead] < 0) {
                policy.prepare_pivot(row, 0);
                pivot_of[lead] = static_cast<std::int64_t>(r);
                ++rank;
                break;
            }
            policy.eliminate(row, rows[static_cast<std::size_t>(pivot_of[lead])], 0, 0, noop, noop);
        }
    }
    return rank;
}

/// Fraction-free Bareiss elimination on a dense integer matrix.
std::size_t bareiss_rank(std::vector<std::vector<mpz_class>> a) {
    const std::size_t nr = a.size();
    if (nr == 0) return 0;
    const std::size_t nc = a.front().size();
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t best = nr;
        for (std::size_t i = r; i < nr; ++i)
            if (a[i][c] != 0 && (best == nr || mpz_sizeinbase(a[i][c].get_mpz_t(), 2) <
                                                   mpz_sizeinbase(a[best][c].get_mpz_t(), 2)))
                best = i;
        if (best == nr) continue;
        std::swap(a[r], a[best]);
        for (std::size_t i = r + 1; i < nr; ++i) {
            for (std::size_t j = c + 1; j < nc; ++j) {
                mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

std::size_t dense_modular_rank(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
    const std::size_t nr = a.size();
    if (nr == 0) return 0;
    const std::size_t nc = a.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = r;
        while (piv < nr && a[piv][c] == 0) ++piv;
        if (piv == nr) continue;
        std::swap(a[r], a[piv]);
        const std::uint64_t inv = mod_inverse(a[r][c], p);
        for (std::size_t j = c; j < nc; ++j) a[r][j] = a[r][j] * inv % p;
        for (std::size_t i = r + 1; i < nr; ++i) {
            const std::uint64_t f = a[i][c];
            if (!f) continue;
            for (std::size_t j = c; j < nc; ++j) a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
        }
        ++r;
    }
    return r;
}

/// Rows of a component with columns renumbered to 0..cols-1.
std::vector<SparseVector> component_rows(const SparseMatrix& m, const Component& comp) {
    std::vector<SparseVector> out;
    out.reserve(comp.rows.size());
    // comp.cols is sorted, so binary search gives the local index.
    for (Index r : comp.rows) {
        SparseVector v;
        v.reserve(m.row_end(r) - m.row_begin(r));
        for (std::size_t k = m.row_begin(r); k < m.row_end(r); ++k) {
            auto it = std::lower_bound(comp.cols.begin(), comp.cols.end(), m.col_at(k));
            v.emplace_back(static_cast<Index>(it - comp.cols.begin()), m.value_at(k));
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::size_t component_rank(const SparseMatrix& m, const Component& comp, const RankOptions& opt) {
    const auto rows = component_rows(m, comp);
    const std::size_t nc = comp.cols.size();
    const bool dense = rows.size() < opt.dense_cutoff && nc < opt.dense_cutoff && opt.order == PivotOrder::markowitz;
    if (opt.field.is_rational()) {
        std::vector<IntegerRows::Row> irows;
        irows.reserve(rows.size());
        for (const auto& v : rows) irows.push_back(IntegerRows::from_rational(v));
        if (dense) {
            std::vector<std::vector<mpz_class>> a(irows.size(), std::vector<mpz_class>(nc));
            for (std::size_t i = 0; i < irows.size(); ++i)
                for (auto& [c, v] : irows[i]) a[i][c] = std::move(v);
            return bareiss_rank(std::move(a));
        }
        IntegerRows pol;
        return opt.order == PivotOrder::markowitz ? markowitz_eliminate(irows, nc, pol, false, nullptr)
                                                  : natural_eliminate(irows, nc, pol);
    }
    ModularRows pol{opt.field.modulus()};
    std::vector<ModularRows::Row> mrows;
    mrows.reserve(rows.size());
    for (const auto& v : rows) mrows.push_back(pol.from_rational(v, opt.field));
    if (dense) {
        std::vector<std::vector<std::uint64_t>> a(mrows.size(), std::vector<std::uint64_t>(nc, 0));
        for (std::size_t i = 0; i < mrows.size(); ++i)
            for (auto& [c, v] : mrows[i]) a[i][c] = v;
        return dense_modular_rank(std::move(a), pol.p);
    }
    return opt.order == PivotOrder::markowitz ? markowitz_eliminate(mrows, nc, pol, false, nullptr)
                                              : natural_eliminate(mrows, nc, pol);
}

// Rational rows for kernels: pivot rows are scaled to a leading 1.
struct RationalRows {
    using Value = Rational;
    using Row = SparseVector;
    static std::size_t size_of(const Value& v) {
        return mpz_sizeinbase(v.get_num_mpz_t(), 2) + mpz_sizeinbase(v.get_den_mpz_t(), 2);
    }
    void prepare_pivot(Row& row, std::size_t pos) const {
        const Rational inv = 1 / row[pos].second;
        for (auto& e : row) e.second *= inv;
    }
    template <class OnRemove, class OnAdd>
    void eliminate(Row& target, const Row& pivot, std::size_t, std::size_t target_pos, OnRemove&& removed,
                   OnAdd&& added) const {
        const Rational tv = target[target_pos].second;
        Row out;
        out.reserve(target.size() + pivot.size());
        std::size_t i = 0, j = 0;
        while (i < target.size() || j < pivot.size()) {
            if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
                out.push_back(std::move(target[i++]));
            } else if (i == target.size() || pivot[j].first < target[i].first) {
                out.emplace_back(pivot[j].first, -tv * pivot[j].second);
                added(pivot[j].first);
                ++j;
            } else {
                Rational v = target[i].second - tv * pivot[j].second;
                if (v != 0)
                    out.emplace_back(target[i].first, std::move(v));
                else
                    removed(target[i].first);
                ++i;
                ++j;
            }
        }
        target.swap(out);
    }
};

/// Kernel vectors of a reduced echelon form, in component-local coordinates.
template <class Row, class ToRational>
std::vector<SparseVector> kernel_from_rref(const std::vector<Row>& rows,
                                           const std::vector<std::pair<Index, Index>>& pivots, std::size_t nc,
                                           ToRational&& negate) {
    std::vector<char> is_pivot(nc, 0);
    for (auto [r, c] : pivots) is_pivot[c] = 1;
    std::vector<std::int64_t> free_slot(nc, -1);
    std::vector<SparseVector> out;
    for (Index c = 0; c < nc; ++c)
        if (!is_pivot[c]) {
            free_slot[c] = static_cast<std::int64_t>(out.size());
            out.push_back({{c, Rational(1)}});
        }
    for (auto [r, c] : pivots)
        for (const auto& [j, v] : rows[r])
            if (j != c) {
                if (free_slot[j] < 0) throw InternalError("kernel: echelon form not fully reduced");
                out[static_cast<std::size_t>(free_slot[j])].emplace_back(c, negate(v));
            }
    for (auto& v : out) v = normalize(std::move(v));
    return out;
}

}  // namespace

std::vector<Component> connected_components(const SparseMatrix& m) {
    const std::size_t nr = m.rows(), nc = m.cols();
    UnionFind uf(nr + nc);
    std::vector<char> col_used(nc, 0);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t k = m.row_begin(r); k < m.row_end(r); ++k) {
            uf.unite(static_cast<Index>(r), static_cast<Index>(nr + m.col_at(k)));
            col_used[m.col_at(k)] = 1;
        }
    std::vector<std::int64_t> slot(nr + nc, -1);
    std::vector<Component> out;
    auto comp_of = [&](Index node) -> Component& {
        const Index root = uf.find(node);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::int64_t>(out.size());
            out.emplace_back();
        }
        return out[static_cast<std::size_t>(slot[root])];
    };
    for (std::size_t r = 0; r < nr; ++r)
        if (m.row_end(r) > m.row_begin(r)) comp_of(static_cast<Index>(r)).rows.push_back(static_cast<Index>(r));
    for (std::size_t c = 0; c < nc; ++c)
        if (col_used[c]) comp_of(static_cast<Index>(nr + c)).cols.push_back(static_cast<Index>(c));
    return out;
}

std::size_t rank(const SparseMatrix& m, const RankOptions& options) {
    if (m.is_zero()) return 0;
    const auto comps = connected_components(m);
    std::vector<std::size_t> ranks(comps.size(), 0);
    parallel_for(comps.size(), [&](std::size_t i) { ranks[i] = component_rank(m, comps[i], options); });
    return std::accumulate(ranks.begin(), ranks.end(), std::size_t{0});
}

SparseMatrix kernel_basis(const SparseMatrix& m, const Field& field) {
    const auto comps = connected_components(m);
    std::vector<std::vector<SparseVector>> pieces(comps.size());
    parallel_for(comps.size(), [&](std::size_t i) {
        const auto& comp = comps[i];
        auto rows = component_rows(m, comp);
        const std::size_t nc = comp.cols.size();
        std::vector<std::pair<Index, Index>> pivots;
        std::vector<SparseVector> local;
        if (field.is_rational()) {
            RationalRows pol;
            markowitz_eliminate(rows, nc, pol, true, &pivots);
            local = kernel_from_rref(rows, pivots, nc, [](const Rational& v) { return Rational(-v); });
        } else {
            ModularRows pol{field.modulus()};
            std::vector<ModularRows::Row> mrows;
            for (const auto& v : rows) mrows.push_back(pol.from_rational(v, field));
            markowitz_eliminate(mrows, nc, pol, true, &pivots);
            const std::uint64_t p = field.modulus();
            local = kernel_from_rref(mrows, pivots, nc, [p](std::uint64_t v) {
                return Rational(mpz_class(static_cast<unsigned long>((p - v) % p)));
            });
        }
        for (auto& v : local)
            for (auto& e : v) e.first = comp.cols[e.first];
        pieces[i] = std::move(local);
    });
    std::vector<char> covered(m.cols(), 0);
    for (const auto& comp : comps)
        for (Index c : comp.cols) covered[c] = 1;
    // Assemble columns ordered by their smallest free coordinate for determinism.
    std::vector<SparseVector> columns;
    for (Index c = 0; c < m.cols(); ++c)
        if (!covered[c]) columns.push_back({{c, Rational(1)}});
    for (auto& p : pieces)
        for (auto& v : p) columns.push_back(std::move(v));
    std::sort(columns.begin(), columns.end(), [](const SparseVector& a, const SparseVector& b) {
        return a.front().first != b.front().first ? a.front().first < b.front().first : a.size() < b.size();
    });
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& [r, v] : columns[j]) t.push_back({r, static_cast<Index>(j), v});
    return SparseMatrix::from_triplets(m.cols(), columns.size(), std::move(t));
}

// ---------------------------------------------------------------------------
// Subspace

bool Subspace::is_pivot(Index c) const { return std::binary_search(pivots_.begin(), pivots_.end(), c); }

std::vector<Index> Subspace::non_pivots() const {
    std::vector<Index> out;
    std::size_t k = 0;
    for (Index c = 0; c < ambient_; ++c) {
        if (k < pivots_.size() && pivots_[k] == c) {
            ++k;
            continue;
        }
        out.push_back(c);
    }
    return out;
}

SparseVector Subspace::reduce(const SparseVector& v) const {
    if (rows_.empty()) return v;
    std::vector<Rational> dense(ambient_);
    for (const auto& [i, x] : v) {
        if (i >= ambient_) throw InternalError("subspace: vector outside ambient space");
        dense[i] = x;
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Rational c = dense[pivots_[k]];
        if (c == 0) continue;
        for (const auto& [j, x] : rows_[k]) dense[j] -= c * x;
    }
    SparseVector out;
    for (Index i = 0; i < ambient_; ++i)
        if (dense[i] != 0) out.emplace_back(i, std::move(dense[i]));
    return out;
}

std::optional<std::vector<Rational>> Subspace::coordinates(const SparseVector& v) const {
    if (!reduce(v).empty()) return std::nullopt;
    std::vector<Rational> coords(rows_.size());
    for (const auto& [i, x] : v) {
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), i);
        if (it != pivots_.end() && *it == i) coords[static_cast<std::size_t>(it - pivots_.begin())] = x;
    }
    return coords;
}

bool Subspace::add(const SparseVector& v) {
    SparseVector r = reduce(v);
    if (r.empty()) return false;
    const Index lead = r.front().first;
    const Rational inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    for (auto& row : rows_) {
        auto it = std::lower_bound(row.begin(), row.end(), lead, [](const auto& e, Index x) { return e.first < x; });
        if (it != row.end() && it->first == lead) {
            const Rational c = it->second;
            axpy(row, -c, r);
        }
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead);
    const auto offset = pos - pivots_.begin();
    pivots_.insert(pos, lead);
    rows_.insert(rows_.begin() + offset, std::move(r));
    return true;
}

bool Subspace::add_dense(const std::vector<Rational>& v) {
    SparseVector s;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) s.emplace_back(static_cast<Index>(i), v[i]);
    return add(s);
}

}  // namespace dhilb
