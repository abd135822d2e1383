#include "dhilb/harrison.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "dhilb/error.hpp"
#include "dhilb/linalg.hpp"
#include "dhilb/parallel.hpp"

namespace dhilb {

namespace {

std::uint64_t encode(const std::vector<std::uint8_t>& w) {
    std::uint64_t code = 0;
    for (std::uint8_t x : w) code = (code << 4) | x;
    return code;
}

/// Calls visit(positions) for every i-subset of {0..n-1}, ascending.
template <class F>
void for_each_subset(int n, int i, F&& visit) {
    std::vector<int> pos(static_cast<std::size_t>(i));
    for (int k = 0; k < i; ++k) pos[static_cast<std::size_t>(k)] = k;
    for (;;) {
        visit(pos);
        int k = i - 1;
        while (k >= 0 && pos[static_cast<std::size_t>(k)] == n - i + k) --k;
        if (k < 0) return;
        ++pos[static_cast<std::size_t>(k)];
        for (int l = k + 1; l < i; ++l) pos[static_cast<std::size_t>(l)] = pos[static_cast<std::size_t>(l - 1)] + 1;
    }
}

}  // namespace

int shuffle_sign(const std::vector<int>& positions) {
    int inversions = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) inversions += positions[k] - static_cast<int>(k);
    return inversions % 2 == 0 ? 1 : -1;
}

Index ShufflePattern::word_index(const std::vector<std::uint8_t>& w) const {
    auto it = index_.find(encode(w));
    if (it == index_.end()) throw InternalError("word outside shuffle pattern");
    return it->second;
}

std::shared_ptr<const ShufflePattern> build_pattern(const std::vector<int>& mult) {
    auto pat = std::make_shared<ShufflePattern>();
    pat->multiplicities = mult;
    std::vector<std::uint8_t> w;
    for (std::size_t l = 0; l < mult.size(); ++l)
        for (int k = 0; k < mult[l]; ++k) w.push_back(static_cast<std::uint8_t>(l));
    const int n = static_cast<int>(w.size());
    if (n > 15) throw BudgetError("Harrison weight", 15, n);
    do {
        pat->index_[encode(w)] = static_cast<Index>(pat->words.size());
        pat->words.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));

    Subspace constraints(pat->words.size());
    std::vector<std::uint8_t> shuffled(static_cast<std::size_t>(n));
    for (const auto& word : pat->words)
        for (int i = 1; i < n; ++i) {
            std::vector<std::pair<Index, Rational>> raw;
            for_each_subset(n, i, [&](const std::vector<int>& pos) {
                std::size_t u = 0, v = static_cast<std::size_t>(i), k = 0;
                for (int slot = 0; slot < n; ++slot) {
                    if (k < pos.size() && pos[k] == slot) {
                        shuffled[static_cast<std::size_t>(slot)] = word[u++];
                        ++k;
                    } else {
                        shuffled[static_cast<std::size_t>(slot)] = word[v++];
                    }
                }
                raw.emplace_back(pat->word_index(shuffled), Rational(shuffle_sign(pos)));
            });
            constraints.add(normalize(std::move(raw)));
        }
    pat->coordinate_words = constraints.non_pivots();
    std::vector<std::int64_t> slot(pat->words.size(), -1);
    for (std::size_t j = 0; j < pat->coordinate_words.size(); ++j)
        slot[pat->coordinate_words[j]] = static_cast<std::int64_t>(j);
    pat->expansion.resize(pat->words.size());
    for (std::size_t j = 0; j < pat->coordinate_words.size(); ++j)
        pat->expansion[pat->coordinate_words[j]] = {{static_cast<Index>(j), Rational(1)}};
    for (std::size_t r = 0; r < constraints.dim(); ++r) {
        const Index piv = constraints.pivots()[r];
        SparseVector e;
        for (const auto& [c, v] : constraints.basis()[r])
            if (c != piv) e.emplace_back(static_cast<Index>(slot[c]), -v);
        pat->expansion[piv] = normalize(std::move(e));
    }
    return pat;
}

std::shared_ptr<const ShufflePattern> ShufflePattern::get(const std::vector<int>& multiplicities) {
    static std::mutex mutex;
    static std::map<std::vector<int>, std::shared_ptr<const ShufflePattern>> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(multiplicities);
        if (it != cache.end()) return it->second;
    }
    auto pat = build_pattern(multiplicities);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(multiplicities, pat).first->second;
}

// ---------------------------------------------------------------------------

namespace {

struct DegreeRange {
    int min = 0, max = 0;
    bool empty = true;
};

DegreeRange algebra_degrees(const FiniteGradedAlgebra& A) {
    DegreeRange r;
    for (int d : A.degrees()) {
        if (r.empty) {
            r.min = r.max = d;
            r.empty = false;
        }
        r.min = std::min(r.min, d);
        r.max = std::max(r.max, d);
    }
    return r;
}

/// Sorted multisets of n letters of A with total degree s.
void enumerate_contents(const FiniteGradedAlgebra& A, int n, int s, std::vector<std::vector<Index>>& out) {
    const DegreeRange dr = algebra_degrees(A);
    if (dr.empty) return;
    std::vector<Index> cur;
    const Index N = static_cast<Index>(A.size());
    auto rec = [&](auto&& self, int k, Index start, int remaining) -> void {
        if (k == n) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        const int left_after = n - k - 1;
        const int need = remaining - left_after * dr.max;  // smallest admissible degree here
        Index g = start;
        if (g < N && A.degree_of(g) < need) {
            const int d0 = std::min(need, dr.max);
            // Jump to the first letter of degree >= d0.
            Index lo = g, hi = N;
            while (lo < hi) {
                const Index mid = lo + (hi - lo) / 2;
                if (A.degree_of(mid) < d0)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            g = lo;
        }
        for (; g < N; ++g) {
            const int d = A.degree_of(g);
            if (d * (n - k) > remaining && d >= 0) break;
            if (left_after == 0 && d != remaining) {
                if (d > remaining) break;
                continue;
            }
            cur.push_back(g);
            self(self, k + 1, g, remaining - d);
            cur.pop_back();
        }
    };
    rec(rec, 0, 0, s);
}

/// rev[a * |M| + m'] = all (m, c) with coefficient c of m' in a . m.
std::vector<std::vector<std::pair<Index, Rational>>> reverse_action(const FiniteGradedAlgebra& A,
                                                                    const GradedModule& M) {
    std::vector<std::vector<std::pair<Index, Rational>>> rev(A.size() * M.size());
    for (Index a = 0; a < A.size(); ++a)
        for (Index m = 0; m < M.size(); ++m)
            for (const auto& [mp, c] : M.act(a, m)) rev[a * M.size() + mp].emplace_back(m, c);
    return rev;
}

}  // namespace

HarrisonSlice::HarrisonSlice(const FiniteGradedAlgebra& A, const GradedModule& M, int weight, int internal_degree)
    : weight_(weight), internal_degree_(internal_degree) {
    if (weight < 1) throw ValidationError("Harrison weight must be at least 1");
    std::map<int, std::vector<Index>> outputs_by_degree;
    for (Index m = 0; m < M.size(); ++m) outputs_by_degree[M.degrees[m]].push_back(m);
    std::map<std::vector<int>, std::shared_ptr<const ShufflePattern>> local_cache;
    Index offset = 0;
    for (const auto& [D, outs] : outputs_by_degree) {
        std::vector<std::vector<Index>> contents;
        enumerate_contents(A, weight, D - internal_degree, contents);
        for (const auto& content : contents) {
            std::vector<Index> distinct;
            std::vector<int> mult;
            for (Index g : content) {
                if (distinct.empty() || distinct.back() != g) {
                    distinct.push_back(g);
                    mult.push_back(0);
                }
                ++mult.back();
            }
            auto& pat = local_cache[mult];
            if (!pat) pat = ShufflePattern::get(mult);
            if (pat->dim() == 0) continue;
            auto& entry = lookup_[content];
            for (Index m : outs) {
                entry.emplace_back(m, blocks_.size());
                blocks_.push_back(Block{content, distinct, m, pat, offset});
                offset += static_cast<Index>(pat->dim());
            }
        }
    }
    dim_ = offset;
}

std::optional<std::size_t> HarrisonSlice::find_block(const std::vector<Index>& sorted_content, Index m) const {
    auto it = lookup_.find(sorted_content);
    if (it == lookup_.end()) return std::nullopt;
    const auto& v = it->second;
    auto jt = std::lower_bound(v.begin(), v.end(), m, [](const auto& e, Index x) { return e.first < x; });
    if (jt == v.end() || jt->first != m) return std::nullopt;
    return jt->second;
}

void HarrisonSlice::evaluate(const std::vector<Index>& word, Index m, const Rational& scale,
                             std::vector<std::pair<Index, Rational>>& out) const {
    if (scale == 0) return;
    std::vector<Index> sorted = word;
    std::sort(sorted.begin(), sorted.end());
    const auto b = find_block(sorted, m);
    if (!b) return;
    const Block& blk = blocks_[*b];
    std::vector<std::uint8_t> local(word.size());
    for (std::size_t k = 0; k < word.size(); ++k)
        local[k] = static_cast<std::uint8_t>(
            std::lower_bound(blk.distinct.begin(), blk.distinct.end(), word[k]) - blk.distinct.begin());
    for (const auto& [j, c] : blk.pattern->expansion[blk.pattern->word_index(local)])
        out.emplace_back(blk.offset + j, scale * c);
}

std::vector<Index> HarrisonSlice::coordinate_word(const Block& b, std::size_t j) const {
    const auto& w = b.pattern->words[b.pattern->coordinate_words[j]];
    std::vector<Index> out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) out[k] = b.distinct[w[k]];
    return out;
}

std::string HarrisonSlice::coordinate_label(Index coord, const FiniteGradedAlgebra& A, const GradedModule& M) const {
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), coord,
                               [](Index c, const Block& b) { return c < b.offset; });
    const Block& b = *std::prev(it);
    std::string s = "f(";
    const auto w = coordinate_word(b, coord - b.offset);
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + A.label(w[k]);
    return s + ")->" + M.labels[b.output];
}

std::size_t HarrisonCochainSpace::dim() const {
    std::size_t n = 0;
    for (const auto& [j, s] : slices) n += s.dim();
    return n;
}

std::vector<int> harrison_internal_degrees(const FiniteGradedAlgebra& A, const GradedModule& M, int n) {
    const DegreeRange dr = algebra_degrees(A);
    std::set<int> out;
    if (dr.empty || M.size() == 0) return {};
    for (int D : std::set<int>(M.degrees.begin(), M.degrees.end()))
        for (int s = n * dr.min; s <= n * dr.max; ++s) out.insert(D - s);
    return {out.begin(), out.end()};
}

HarrisonCochainSpace harrison_space(const FiniteGradedAlgebra& A, const GradedModule& M, int n,
                                    std::optional<int> internal_degree) {
    HarrisonCochainSpace space;
    space.weight = n;
    const std::vector<int> degrees =
        internal_degree ? std::vector<int>{*internal_degree} : harrison_internal_degrees(A, M, n);
    for (int j : degrees) {
        HarrisonSlice s(A, M, n, j);
        if (s.dim() > 0 || internal_degree) space.slices.emplace(j, std::move(s));
    }
    return space;
}

std::optional<int> vanishing_weight(const FiniteGradedAlgebra& A, const GradedModule& M, int internal_degree) {
    const DegreeRange dr = algebra_degrees(A);
    if (dr.empty || M.size() == 0) return 1;
    if (dr.min <= 0) return std::nullopt;
    const int maxM = *std::max_element(M.degrees.begin(), M.degrees.end());
    const int span = maxM - internal_degree;
    if (span < dr.min) return 1;
    return span / dr.min + 1;
}

SparseMatrix harrison_differential(const FiniteGradedAlgebra& A, const GradedModule& M, const HarrisonSlice& source,
                                   const HarrisonSlice& target, const DifferentialOptions& options) {
    const int n = source.weight();
    if (target.weight() != n + 1 || target.internal_degree() != source.internal_degree())
        throw InternalError("Harrison differential between incompatible slices");
    const auto rev = reverse_action(A, M);
    const auto& blocks = target.blocks();
    std::vector<std::vector<SparseVector>> block_rows(blocks.size());

    // delta(f)(w) at the output m, as a combination of source coordinates.
    auto value = [&](const std::vector<Index>& w, Index mp) {
        std::vector<std::pair<Index, Rational>> raw;
        std::vector<Index> tail(w.begin() + 1, w.end());
        for (const auto& [m, c] : rev[w.front() * M.size() + mp]) source.evaluate(tail, m, -c, raw);
        std::vector<Index> merged(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) {
            const Rational sign = (i % 2 == 0) ? Rational(-1) : Rational(1);  // -(-1)^i
            for (int k = 0; k < i - 1; ++k) merged[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)];
            for (int k = i + 1; k <= n; ++k) merged[static_cast<std::size_t>(k - 1)] = w[static_cast<std::size_t>(k)];
            for (const auto& [g, mu] :
                 A.product(w[static_cast<std::size_t>(i - 1)], w[static_cast<std::size_t>(i)])) {
                merged[static_cast<std::size_t>(i - 1)] = g;
                source.evaluate(merged, mp, sign * mu, raw);
            }
        }
        std::vector<Index> head(w.begin(), w.end() - 1);
        const Rational last = ((n + 1) % 2 == 0) ? Rational(-1) : Rational(1);  // -(-1)^(n+1)
        for (const auto& [m, c] : rev[w.back() * M.size() + mp]) source.evaluate(head, m, last * c, raw);
        return normalize(std::move(raw));
    };

    parallel_for(blocks.size(), [&](std::size_t b) {
        const auto& blk = blocks[b];
        auto& rows = block_rows[b];
        for (std::size_t j = 0; j < blk.pattern->dim(); ++j) rows.push_back(value(target.coordinate_word(blk, j), blk.output));
        if (!options.verify_closure) return;
        const auto& pat = *blk.pattern;
        for (std::size_t w = 0; w < pat.words.size(); ++w) {
            std::vector<Index> word(pat.words[w].size());
            for (std::size_t k = 0; k < word.size(); ++k) word[k] = blk.distinct[pat.words[w][k]];
            SparseVector expected;
            for (const auto& [j, c] : pat.expansion[w]) axpy(expected, c, rows[j]);
            if (!(value(word, blk.output) == expected))
                throw InternalError("Harrison differential leaves the shuffle-vanishing subspace (weight " +
                                    std::to_string(n + 1) + ")");
        }
    });
    std::vector<SparseVector> all;
    all.reserve(target.dim());
    for (auto& rows : block_rows)
        for (auto& r : rows) all.push_back(std::move(r));
    return SparseMatrix::from_rows(source.dim(), all);
}

CochainComplex harrison_complex(const FiniteGradedAlgebra& A, const GradedModule& M, int n_max,
                                std::optional<int> internal_degree, const DifferentialOptions& options) {
    if (n_max < 1) throw ValidationError("Harrison complex needs n_max >= 1");
    std::set<int> degrees;
    if (internal_degree)
        degrees.insert(*internal_degree);
    else
        for (int n = 1; n <= n_max; ++n)
            for (int j : harrison_internal_degrees(A, M, n)) degrees.insert(j);
    std::map<Bidegree, std::size_t> dims;
    std::map<Bidegree, SparseMatrix> diffs;
    bool complete = true;
    for (int j : degrees) {
        const auto vw = vanishing_weight(A, M, j);
        const int top = vw ? std::min(n_max, *vw - 1) : n_max;
        if (!vw || *vw > n_max + 1) complete = false;
        std::vector<HarrisonSlice> slices;
        for (int n = 1; n <= top; ++n) {
            slices.emplace_back(A, M, n, j);
            dims[{n, j}] = slices.back().dim();
        }
        for (int n = 1; n < top; ++n)
            diffs[{n, j}] = harrison_differential(A, M, slices[static_cast<std::size_t>(n - 1)],
                                                  slices[static_cast<std::size_t>(n)], options);
        if (vw && top < n_max && top >= 1)
            diffs[{top, j}] = SparseMatrix::zero(0, slices.back().dim());
    }
    if (complete) return CochainComplex(std::move(dims), std::move(diffs));
    // The top weight's differential is unknown for at least one slice; drop stored top maps.
    for (auto it = diffs.begin(); it != diffs.end();) it = it->first.first >= n_max ? diffs.erase(it) : std::next(it);
    return CochainComplex(std::move(dims), std::move(diffs), n_max);
}

HarrisonCohomology harrison_cohomology(const FiniteGradedAlgebra& A, const GradedModule& M, int n,
                                       std::optional<int> internal_degree, const Field& field, bool representatives) {
    const CochainComplex c = harrison_complex(A, M, n + 1, internal_degree);
    HarrisonCohomology h;
    for (int j : c.internal_degrees()) {
        if (internal_degree && j != *internal_degree) continue;
        const auto r = cohomology(c, n, j, field, representatives && internal_degree.has_value());
        if (r.dim) h.by_internal_degree[j] = r.dim;
        h.dim += r.dim;
        if (representatives && internal_degree) h.representatives = r.representatives;
    }
    return h;
}

SparseMatrix harrison_pullback(const AlgebraMap& f, const HarrisonSlice& over_B, const HarrisonSlice& over_A,
                               const FiniteGradedAlgebra& A) {
    (void)A;
    if (over_A.weight() != over_B.weight() || over_A.internal_degree() != over_B.internal_degree())
        throw InternalError("pullback between incompatible slices");
    const auto& blocks = over_A.blocks();
    std::vector<std::vector<SparseVector>> block_rows(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t b) {
        const auto& blk = blocks[b];
        for (std::size_t j = 0; j < blk.pattern->dim(); ++j) {
            const auto w = over_A.coordinate_word(blk, j);
            std::vector<std::pair<Index, Rational>> raw;
            std::vector<Index> bw(w.size());
            auto rec = [&](auto&& self, std::size_t k, const Rational& coef) -> void {
                if (k == w.size()) {
                    over_B.evaluate(bw, blk.output, coef, raw);
                    return;
                }
                for (const auto& [g, c] : f.images[w[k]]) {
                    bw[k] = g;
                    self(self, k + 1, coef * c);
                }
            };
            rec(rec, 0, Rational(1));
            block_rows[b].push_back(normalize(std::move(raw)));
        }
    });
    std::vector<SparseVector> all;
    for (auto& rows : block_rows)
        for (auto& r : rows) all.push_back(std::move(r));
    return SparseMatrix::from_rows(over_B.dim(), all);
}

std::size_t derivation_dim(const FiniteGradedAlgebra& A, const GradedModule& M, std::optional<int> internal_degree,
                           const Field& field) {
    // Unknown D[a][m] allowed when deg m - deg a equals the internal degree (any if unrestricted).
    std::vector<std::int64_t> var(A.size() * M.size(), -1);
    Index nvars = 0;
    for (Index a = 0; a < A.size(); ++a)
        for (Index m = 0; m < M.size(); ++m)
            if (!internal_degree || M.degrees[m] - A.degree_of(a) == *internal_degree)
                var[a * M.size() + m] = nvars++;
    std::vector<Triplet> t;
    Index row = 0;
    for (Index a = 0; a < A.size(); ++a)
        for (Index b = a; b < A.size(); ++b) {
            std::map<Index, std::vector<std::pair<Index, Rational>>> eq;  // output m' -> terms
            for (const auto& [k, mu] : A.product(a, b))
                for (Index mp = 0; mp < M.size(); ++mp)
                    if (var[k * M.size() + mp] >= 0) eq[mp].emplace_back(static_cast<Index>(var[k * M.size() + mp]), mu);
            auto side = [&](Index x, Index y) {  // - x . D(y)
                for (Index m = 0; m < M.size(); ++m) {
                    const auto v = var[y * M.size() + m];
                    if (v < 0) continue;
                    for (const auto& [mp, c] : M.act(x, m)) eq[mp].emplace_back(static_cast<Index>(v), -c);
                }
            };
            side(a, b);
            side(b, a);
            for (auto& [mp, terms] : eq) {
                SparseVector r = normalize(std::move(terms));
                if (r.empty()) continue;
                for (auto& [c, v] : r) t.push_back({row, c, v});
                ++row;
            }
        }
    return nvars - rank(SparseMatrix::from_triplets(row, nvars, std::move(t)), field);
}

}  // namespace dhilb
