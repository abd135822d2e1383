#include "dhilb/operads.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "dhilb/error.hpp"
#include "dhilb/linalg.hpp"
#include "dhilb/polynomial.hpp"

namespace dhilb {

Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation c(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) c[j] = a[static_cast<std::size_t>(b[j])];
    return c;
}

Permutation inverse(const Permutation& a) {
    Permutation c(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) c[static_cast<std::size_t>(a[j])] = static_cast<int>(j);
    return c;
}

int sign(const Permutation& a) {
    int s = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] > a[j]) s = -s;
    return s;
}

std::vector<Permutation> all_permutations(int n) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<Permutation> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Permutation adjacent_transposition(int n, int j) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(j + 1)]);
    return p;
}

namespace {

bool is_identity(const Permutation& p) {
    for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j] != static_cast<int>(j)) return false;
    return true;
}

SparseVector unit(Index b) { return {{b, Rational(1)}}; }

void add_scaled(std::map<Index, Rational>& acc, const SparseVector& v, const Rational& s) {
    for (const auto& [i, c] : v) acc[i] += s * c;
}

SparseVector finish(const std::map<Index, Rational>& acc) {
    SparseVector out;
    for (const auto& [i, c] : acc)
        if (c != 0) out.emplace_back(i, c);
    return out;
}

void check_arity(const Operad& P, int n) {
    if (n < 2) throw ValidationError("arity " + std::to_string(n) + " below 2 for " + P.name());
    if (n > P.max_arity()) throw BudgetError("arity cap of " + P.name(), P.max_arity(), n);
}

}  // namespace

std::string Operad::label(int n, Index b) const { return name() + "(" + std::to_string(n) + ")#" + std::to_string(b); }

SparseVector act(const Operad& P, int n, const Permutation& sigma, const SparseVector& x) {
    std::map<Index, Rational> acc;
    for (const auto& [b, c] : x) add_scaled(acc, P.act(n, sigma, b), c);
    return finish(acc);
}

SparseVector compose(const Operad& P, int m, int i, int k, const SparseVector& a, const SparseVector& b) {
    std::map<Index, Rational> acc;
    for (const auto& [x, cx] : a)
        for (const auto& [y, cy] : b) add_scaled(acc, P.compose(m, i, k, x, y), cx * cy);
    return finish(acc);
}

SparseVector differential(const Operad& P, int n, const SparseVector& x) {
    std::map<Index, Rational> acc;
    for (const auto& [b, c] : x) add_scaled(acc, P.differential(n, b), c);
    return finish(acc);
}

// ---------------------------------------------------------------- S-modules

std::size_t SModule::dim(int n) const {
    if (n < 0 || n > max_arity) return 0;
    return degrees[static_cast<std::size_t>(n)].size();
}

const SparseMatrix& SModule::action(int n, const Permutation& sigma) const {
    if (n < 0 || n > max_arity) throw ValidationError("arity outside the S-module");
    const auto& m = actions[static_cast<std::size_t>(n)];
    const auto it = m.find(sigma);
    if (it == m.end()) throw ValidationError("not a permutation of the arity");
    return it->second;
}

void SModule::check_relations() const {
    for (int n = 2; n <= max_arity; ++n) {
        const std::size_t d = dim(n);
        if (d == 0) continue;
        const SparseMatrix I = SparseMatrix::identity(d);
        Permutation id(static_cast<std::size_t>(n));
        std::iota(id.begin(), id.end(), 0);
        if (!(action(n, id) == I)) throw InternalError("identity acts nontrivially in arity " + std::to_string(n));
        auto fail = [&](const std::string& what) {
            throw InternalError("S-module relation " + what + " fails in arity " + std::to_string(n));
        };
        for (int j = 0; j + 1 < n; ++j) {
            const SparseMatrix& s = action(n, adjacent_transposition(n, j));
            if (!(s * s == I)) fail("s_" + std::to_string(j) + "^2 = 1");
            if (j + 2 < n) {
                const SparseMatrix st = s * action(n, adjacent_transposition(n, j + 1));
                if (!(st * st * st == I)) fail("(s_j s_j+1)^3 = 1");
            }
            for (int l = j + 2; l + 1 < n; ++l) {
                const SparseMatrix sl = s * action(n, adjacent_transposition(n, l));
                if (!(sl * sl == I)) fail("(s_i s_j)^2 = 1");
            }
        }
        // Stored matrices must be the products along the group law.
        for (const auto& [sigma, M] : actions[static_cast<std::size_t>(n)])
            for (int j = 0; j + 1 < n; ++j) {
                const Permutation t = adjacent_transposition(n, j);
                if (!(action(n, compose(t, sigma)) == action(n, t) * M)) fail("homomorphism");
            }
    }
}

SModule SModule::of(const Operad& P) {
    SModule E;
    E.max_arity = P.max_arity();
    E.degrees.resize(static_cast<std::size_t>(E.max_arity + 1));
    E.actions.resize(static_cast<std::size_t>(E.max_arity + 1));
    E.labels.resize(static_cast<std::size_t>(E.max_arity + 1));
    for (int n = 2; n <= E.max_arity; ++n) {
        const std::size_t d = P.dim(n);
        for (Index b = 0; b < d; ++b) {
            E.degrees[static_cast<std::size_t>(n)].push_back(P.degree(n, b));
            E.labels[static_cast<std::size_t>(n)].push_back(P.label(n, b));
        }
        for (const auto& sigma : all_permutations(n)) {
            std::vector<SparseVector> cols;
            for (Index b = 0; b < d; ++b) cols.push_back(P.act(n, sigma, b));
            E.actions[static_cast<std::size_t>(n)][sigma] = SparseMatrix::from_rows(d, cols).transpose();
        }
    }
    return E;
}

namespace {

SModule twist(const SModule& E, int degree_step, bool sign_twist, int constant_shift) {
    SModule S = E;
    for (int n = 0; n <= E.max_arity; ++n) {
        for (auto& d : S.degrees[static_cast<std::size_t>(n)]) d += degree_step * (n - 1) + constant_shift;
        if (sign_twist)
            for (auto& [sigma, M] : S.actions[static_cast<std::size_t>(n)]) M = M.scaled(Rational(sign(sigma)));
    }
    return S;
}

}  // namespace

SModule suspend(const SModule& E) { return twist(E, -1, true, 0); }
SModule desuspend(const SModule& E) { return twist(E, 1, true, 0); }
SModule shift(const SModule& E, int s) { return twist(E, 0, false, s); }

SModule dual(const SModule& E) {
    SModule S = E;
    for (int n = 0; n <= E.max_arity; ++n) {
        for (auto& d : S.degrees[static_cast<std::size_t>(n)]) d = -d;
        for (auto& l : S.labels[static_cast<std::size_t>(n)]) l += "*";
        for (auto& [sigma, M] : S.actions[static_cast<std::size_t>(n)])
            M = E.actions[static_cast<std::size_t>(n)].at(inverse(sigma)).transpose();
    }
    return S;
}

// ---------------------------------------------------------------- Com, Lie, sign

namespace {

class ComOperad final : public Operad {
public:
    explicit ComOperad(int cap) : cap_(cap) {}
    std::string name() const override { return "Com"; }
    int max_arity() const override { return cap_; }
    std::size_t dim(int n) const override { return n >= 2 && n <= cap_ ? 1 : 0; }
    int degree(int, Index) const override { return 0; }
    SparseVector act(int n, const Permutation&, Index b) const override {
        check_arity(*this, n);
        return unit(b);
    }
    SparseVector compose(int m, int, int k, Index, Index) const override {
        check_arity(*this, m + k - 1);
        return unit(0);
    }
    std::string label(int n, Index) const override { return "mu" + std::to_string(n); }

private:
    int cap_;
};

using Word = std::vector<int>;
using WordPoly = std::map<Word, Rational>;

class LieOperad final : public Operad {
public:
    explicit LieOperad(int cap) : cap_(cap), tails_(static_cast<std::size_t>(cap + 1)),
                                   index_(static_cast<std::size_t>(cap + 1)),
                                   expansions_(static_cast<std::size_t>(cap + 1)) {
        for (int n = 2; n <= cap; ++n) {
            Word tail(static_cast<std::size_t>(n - 1));
            std::iota(tail.begin(), tail.end(), 1);
            do {
                index_[static_cast<std::size_t>(n)][tail] = static_cast<Index>(tails_[static_cast<std::size_t>(n)].size());
                tails_[static_cast<std::size_t>(n)].push_back(tail);
                Word w{0};
                w.insert(w.end(), tail.begin(), tail.end());
                expansions_[static_cast<std::size_t>(n)].push_back(left_normed(w));
            } while (std::next_permutation(tail.begin(), tail.end()));
        }
    }
    std::string name() const override { return "Lie"; }
    int max_arity() const override { return cap_; }
    std::size_t dim(int n) const override { return n >= 2 && n <= cap_ ? tails_[static_cast<std::size_t>(n)].size() : 0; }
    int degree(int, Index) const override { return 0; }

    SparseVector act(int n, const Permutation& sigma, Index b) const override {
        check_arity(*this, n);
        WordPoly out;
        for (const auto& [w, c] : expansion(n, b)) {
            Word v(w.size());
            for (std::size_t j = 0; j < w.size(); ++j) v[j] = sigma[static_cast<std::size_t>(w[j])];
            out[v] += c;
        }
        return project(n, out);
    }

    SparseVector compose(int m, int i, int k, Index a, Index b) const override {
        check_arity(*this, m + k - 1);
        WordPoly out;
        for (const auto& [u, cu] : expansion(m, a))
            for (const auto& [v, cv] : expansion(k, b)) {
                Word w;
                for (int x : u) {
                    if (x < i) w.push_back(x);
                    else if (x > i) w.push_back(x + k - 1);
                    else
                        for (int y : v) w.push_back(y + i);
                }
                out[w] += cu * cv;
            }
        return project(m + k - 1, out);
    }

    std::string label(int n, Index b) const override {
        std::string s = "[x1";
        for (int t : tails_[static_cast<std::size_t>(n)][b]) s += ",x" + std::to_string(t + 1);
        return s + "]";
    }

    const WordPoly& expansion(int n, Index b) const { return expansions_[static_cast<std::size_t>(n)][b]; }

    static WordPoly left_normed(const Word& letters) {
        WordPoly p{{{letters[0]}, Rational(1)}};
        for (std::size_t j = 1; j < letters.size(); ++j) {
            WordPoly q;
            for (const auto& [w, c] : p) {
                Word right = w, left{letters[j]};
                right.push_back(letters[j]);
                left.insert(left.end(), w.begin(), w.end());
                q[right] += c;
                q[left] -= c;
            }
            p = std::move(q);
        }
        return p;
    }

private:
    /// Coordinates on the Dynkin basis: only words starting with x1 matter.
    SparseVector project(int n, const WordPoly& p) const {
        std::map<Index, Rational> acc;
        for (const auto& [w, c] : p) {
            if (c == 0 || w[0] != 0) continue;
            acc[index_[static_cast<std::size_t>(n)].at(Word(w.begin() + 1, w.end()))] += c;
        }
        return finish(acc);
    }

    int cap_;
    std::vector<std::vector<Word>> tails_;
    std::vector<std::map<Word, Index>> index_;
    std::vector<std::vector<WordPoly>> expansions_;
};

class SignOperad final : public Operad {
public:
    SignOperad(int cap, int degree_per_input) : cap_(cap), step_(degree_per_input) {}
    std::string name() const override { return step_ > 0 ? "S" : "S^-1"; }
    int max_arity() const override { return cap_; }
    std::size_t dim(int n) const override { return n >= 2 && n <= cap_ ? 1 : 0; }
    int degree(int n, Index) const override { return step_ * (1 - n); }
    SparseVector act(int n, const Permutation& sigma, Index b) const override {
        check_arity(*this, n);
        return {{b, Rational(sign(sigma))}};
    }
    // End of an odd line: e_m o_i e_k = (-1)^{(k-1) i} e_{m+k-1}, the Koszul sign of
    // moving the (k-1)-parity operation past the first i inputs.
    SparseVector compose(int m, int i, int k, Index, Index) const override {
        check_arity(*this, m + k - 1);
        return {{0, Rational(((k - 1) * i) % 2 ? -1 : 1)}};
    }

private:
    int cap_;
    int step_;
};

class HadamardOperad final : public Operad {
public:
    HadamardOperad(OperadPtr P, OperadPtr Q, std::string name)
        : P_(std::move(P)), Q_(std::move(Q)), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    int max_arity() const override { return std::min(P_->max_arity(), Q_->max_arity()); }
    std::size_t dim(int n) const override { return P_->dim(n) * Q_->dim(n); }
    int degree(int n, Index b) const override {
        const auto [p, q] = split(n, b);
        return P_->degree(n, p) + Q_->degree(n, q);
    }
    SparseVector act(int n, const Permutation& sigma, Index b) const override {
        const auto [p, q] = split(n, b);
        return tensor(n, P_->act(n, sigma, p), Q_->act(n, sigma, q), 1);
    }
    SparseVector compose(int m, int i, int k, Index a, Index b) const override {
        const auto [pa, qa] = split(m, a);
        const auto [pb, qb] = split(k, b);
        const int s = (Q_->degree(m, qa) * P_->degree(k, pb)) % 2 ? -1 : 1;
        const int n = m + k - 1;
        return tensor(n, P_->compose(m, i, k, pa, pb), Q_->compose(m, i, k, qa, qb), s);
    }
    bool has_differential() const override { return P_->has_differential() || Q_->has_differential(); }
    SparseVector differential(int n, Index b) const override {
        const auto [p, q] = split(n, b);
        std::map<Index, Rational> acc;
        add_scaled(acc, tensor(n, P_->differential(n, p), unit(q), 1), Rational(1));
        add_scaled(acc, tensor(n, unit(p), Q_->differential(n, q), 1), Rational(P_->degree(n, p) % 2 ? -1 : 1));
        return finish(acc);
    }
    std::string label(int n, Index b) const override {
        const auto [p, q] = split(n, b);
        return P_->label(n, p) + "(x)" + Q_->label(n, q);
    }

private:
    std::pair<Index, Index> split(int n, Index b) const {
        const auto dq = static_cast<Index>(Q_->dim(n));
        return {b / dq, b % dq};
    }
    SparseVector tensor(int n, const SparseVector& x, const SparseVector& y, int s) const {
        const auto dq = static_cast<Index>(Q_->dim(n));
        std::map<Index, Rational> acc;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) acc[i * dq + j] += a * b * s;
        return finish(acc);
    }

    OperadPtr P_, Q_;
    std::string name_;
};

}  // namespace

OperadPtr com_operad(int max_arity) { return std::make_shared<ComOperad>(max_arity); }
OperadPtr lie_operad(int max_arity) { return std::make_shared<LieOperad>(max_arity); }
OperadPtr sign_operad(int max_arity, int degree_per_input) {
    return std::make_shared<SignOperad>(max_arity, degree_per_input);
}
OperadPtr hadamard(OperadPtr P, OperadPtr Q) {
    const std::string name = P->name() + "(x)" + Q->name();
    return std::make_shared<HadamardOperad>(std::move(P), std::move(Q), name);
}
OperadPtr suspend(OperadPtr P) {
    const int cap = P->max_arity();
    const std::string name = "Sigma " + P->name();
    return std::make_shared<HadamardOperad>(std::move(P), sign_operad(cap, 1), name);
}
OperadPtr desuspend(OperadPtr P) {
    const int cap = P->max_arity();
    const std::string name = "Sigma^-1 " + P->name();
    return std::make_shared<HadamardOperad>(std::move(P), sign_operad(cap, -1), name);
}

LieComponent lie_component(int n) {
    if (n < 2 || n > 7) throw ValidationError("Lie component arity must lie in 2..7");
    const LieOperad L(n);
    LieComponent c;
    c.arity = n;
    c.dim = L.dim(n);
    for (Index b = 0; b < c.dim; ++b) c.labels.push_back(L.label(n, b));
    for (int j = 0; j + 1 < n; ++j) {
        std::vector<SparseVector> cols;
        for (Index b = 0; b < c.dim; ++b) cols.push_back(L.act(n, adjacent_transposition(n, j), b));
        c.transpositions.push_back(SparseMatrix::from_rows(c.dim, cols).transpose());
    }
    return c;
}

std::size_t lie_dimension_by_spanning(int n) {
    if (n < 1 || n > 6) throw ValidationError("spanning count arity must lie in 1..6");
    // All bracketings of a word: recursive split into [left, right].
    std::function<std::vector<WordPoly>(const Word&)> brackets = [&](const Word& w) {
        if (w.size() == 1) return std::vector<WordPoly>{{{w, Rational(1)}}};
        std::vector<WordPoly> out;
        for (std::size_t cut = 1; cut < w.size(); ++cut)
            for (const auto& l : brackets(Word(w.begin(), w.begin() + static_cast<long>(cut))))
                for (const auto& r : brackets(Word(w.begin() + static_cast<long>(cut), w.end()))) {
                    WordPoly p;
                    for (const auto& [a, ca] : l)
                        for (const auto& [b, cb] : r) {
                            Word ab = a, ba = b;
                            ab.insert(ab.end(), b.begin(), b.end());
                            ba.insert(ba.end(), a.begin(), a.end());
                            p[ab] += ca * cb;
                            p[ba] -= ca * cb;
                        }
                    out.push_back(std::move(p));
                }
        return out;
    };
    std::map<Word, Index> words;
    for (const auto& p : all_permutations(n)) words.emplace(p, static_cast<Index>(words.size()));
    std::vector<Triplet> trip;
    Index row = 0;
    for (const auto& order : all_permutations(n))
        for (const auto& p : brackets(order)) {
            for (const auto& [w, c] : p)
                if (c != 0) trip.push_back({row, words.at(w), c});
            ++row;
        }
    return rank(SparseMatrix::from_triplets(row, words.size(), std::move(trip)), Field::rationals());
}

// ---------------------------------------------------------------- trees

int Tree::arity() const {
    int n = 0;
    for (const auto& ch : children)
        for (int c : ch) n += c < 0;
    return n;
}

std::string Tree::to_string(const std::function<std::string(int, Index)>& vertex_label) const {
    std::function<std::string(int)> rec = [&](int v) {
        const auto& ch = children[static_cast<std::size_t>(v)];
        std::string s = vertex_label ? vertex_label(static_cast<int>(ch.size()), labels[static_cast<std::size_t>(v)])
                                     : "v" + std::to_string(labels[static_cast<std::size_t>(v)]);
        s += "(";
        for (std::size_t j = 0; j < ch.size(); ++j) {
            if (j) s += " ";
            s += ch[j] < 0 ? std::to_string(-ch[j]) : rec(ch[j]);
        }
        return s + ")";
    };
    return children.empty() ? "|" : rec(0);
}

Index TreeBasis::find(const Tree& t) const {
    const auto it = index.find(t);
    if (it == index.end()) throw InternalError("tree not in basis: " + t.to_string());
    return it->second;
}

namespace {

/// Undecorated canonical shapes on a sorted leaf set.
std::vector<Tree> shapes(const std::vector<int>& leaves, std::map<std::vector<int>, std::vector<Tree>>& memo) {
    if (const auto it = memo.find(leaves); it != memo.end()) return it->second;
    std::vector<Tree> out;
    // Set partitions with blocks ordered by smallest element.
    std::vector<std::vector<int>> blocks;
    std::function<void(std::size_t)> part = [&](std::size_t idx) {
        if (idx == leaves.size()) {
            if (blocks.size() < 2) return;
            std::vector<std::vector<Tree>> options;
            for (const auto& b : blocks) {
                if (b.size() == 1) options.push_back({Tree{}});
                else options.push_back(shapes(b, memo));
            }
            std::vector<std::size_t> pick(blocks.size(), 0);
            while (true) {
                Tree t;
                t.children.push_back({});
                for (std::size_t j = 0; j < blocks.size(); ++j) {
                    if (blocks[j].size() == 1) {
                        t.children[0].push_back(-(blocks[j][0] + 1));
                        continue;
                    }
                    const Tree& sub = options[j][pick[j]];
                    const int off = static_cast<int>(t.children.size());
                    t.children[0].push_back(off);
                    for (auto ch : sub.children) {
                        for (auto& c : ch)
                            if (c >= 0) c += off;
                        t.children.push_back(std::move(ch));
                    }
                }
                t.labels.assign(t.children.size(), 0);
                out.push_back(std::move(t));
                std::size_t j = 0;
                while (j < blocks.size() && ++pick[j] == options[j].size()) pick[j++] = 0;
                if (j == blocks.size()) break;
            }
            return;
        }
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            blocks[j].push_back(leaves[idx]);
            part(idx + 1);
            blocks[j].pop_back();
        }
        blocks.push_back({leaves[idx]});
        part(idx + 1);
        blocks.pop_back();
    };
    part(0);
    memo[leaves] = out;
    return out;
}

/// Tree whose vertex ids give the tensor order of the vertex factors; children in any order.
struct RawTree {
    int root = 0;
    std::vector<std::vector<int>> children;
    std::vector<SparseVector> decorations;  // relative to the listed child order
    std::vector<int> factor_degree;
};

using ActionFn = std::function<SparseVector(int, const Permutation&, const SparseVector&)>;
using TreeVector = std::map<Tree, Rational>;

/// Sorts children by smallest leaf (acting on decorations), renumbers vertices in preorder with the
/// Koszul sign of the factor reordering, and expands the tensor product of decorations.
void canonicalize(const RawTree& r, const ActionFn& act_fn, const Rational& scale, TreeVector& out) {
    const std::size_t V = r.children.size();
    std::vector<int> minleaf(V, -1);
    std::function<int(int)> ml = [&](int v) {
        if (minleaf[static_cast<std::size_t>(v)] >= 0) return minleaf[static_cast<std::size_t>(v)];
        int m = 1 << 30;
        for (int c : r.children[static_cast<std::size_t>(v)]) m = std::min(m, c < 0 ? -(c + 1) : ml(c));
        return minleaf[static_cast<std::size_t>(v)] = m;
    };
    std::vector<std::vector<int>> sorted(V);
    std::vector<SparseVector> deco(V);
    for (std::size_t v = 0; v < V; ++v) {
        const auto& ch = r.children[v];
        Permutation ord(ch.size());
        std::iota(ord.begin(), ord.end(), 0);
        auto key = [&](int c) { return c < 0 ? -(c + 1) : ml(c); };
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            return key(ch[static_cast<std::size_t>(a)]) < key(ch[static_cast<std::size_t>(b)]);
        });
        for (int j : ord) sorted[v].push_back(ch[static_cast<std::size_t>(j)]);
        deco[v] = is_identity(ord) ? r.decorations[v]
                                   : act_fn(static_cast<int>(ch.size()), inverse(ord), r.decorations[v]);
        if (deco[v].empty()) return;
    }
    std::vector<int> order, newid(V, -1);
    std::function<void(int)> pre = [&](int v) {
        newid[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
        order.push_back(v);
        for (int c : sorted[static_cast<std::size_t>(v)])
            if (c >= 0) pre(c);
    };
    pre(r.root);
    int s = 1;
    for (std::size_t a = 0; a < V; ++a)
        for (std::size_t b = a + 1; b < V; ++b)
            if (newid[a] > newid[b] && (r.factor_degree[a] * r.factor_degree[b]) % 2) s = -s;
    Tree t;
    t.children.resize(V);
    for (std::size_t j = 0; j < V; ++j)
        for (int c : sorted[static_cast<std::size_t>(order[j])]) t.children[j].push_back(c < 0 ? c : newid[static_cast<std::size_t>(c)]);
    t.labels.assign(V, 0);
    std::function<void(std::size_t, Rational)> expand = [&](std::size_t j, Rational coeff) {
        if (j == V) {
            out[t] += coeff;
            return;
        }
        for (const auto& [b, c] : deco[static_cast<std::size_t>(order[j])]) {
            t.labels[j] = b;
            expand(j + 1, coeff * c);
        }
    };
    expand(0, scale * s);
}

SparseVector to_vector(const TreeVector& tv, const TreeBasis& basis) {
    std::map<Index, Rational> acc;
    for (const auto& [t, c] : tv)
        if (c != 0) acc[basis.find(t)] += c;
    return finish(acc);
}

int parent_of(const Tree& t, int w, int& slot) {
    for (std::size_t u = 0; u < t.vertices(); ++u)
        for (std::size_t j = 0; j < t.children[u].size(); ++j)
            if (t.children[u][j] == w) {
                slot = static_cast<int>(j);
                return static_cast<int>(u);
            }
    throw InternalError("vertex without parent");
}

}  // namespace

TreeBasis enumerate_trees(int n, const std::function<std::size_t(int)>& vertex_dim,
                          const std::function<int(int, Index)>& vertex_degree) {
    if (n < 2) throw ValidationError("trees need at least two leaves");
    TreeBasis B;
    B.arity = n;
    std::map<std::vector<int>, std::vector<Tree>> memo;
    std::vector<int> leaves(static_cast<std::size_t>(n));
    std::iota(leaves.begin(), leaves.end(), 0);
    for (const Tree& shape : shapes(leaves, memo)) {
        const std::size_t V = shape.vertices();
        std::vector<std::size_t> dims(V);
        bool empty = false;
        for (std::size_t v = 0; v < V; ++v) {
            dims[v] = vertex_dim(static_cast<int>(shape.children[v].size()));
            empty = empty || dims[v] == 0;
        }
        if (empty) continue;
        Tree t = shape;
        while (true) {
            int deg = 0;
            for (std::size_t v = 0; v < V; ++v) deg += vertex_degree(static_cast<int>(t.children[v].size()), t.labels[v]);
            B.index[t] = static_cast<Index>(B.trees.size());
            B.trees.push_back(t);
            B.degrees.push_back(deg);
            std::size_t v = 0;
            while (v < V && ++t.labels[v] == dims[v]) t.labels[v++] = 0;
            if (v == V) break;
        }
    }
    return B;
}

std::size_t count_trees(int n, const std::function<std::size_t(int)>& vertex_dim) {
    // f(s): decorated trees on s leaves; h(s, r): partitions of an s-set into r blocks weighted by f.
    std::vector<std::size_t> f(static_cast<std::size_t>(n + 1), 0);
    f[1] = 1;
    for (int s = 2; s <= n; ++s) {
        std::vector<std::vector<std::size_t>> h(static_cast<std::size_t>(s + 1), std::vector<std::size_t>(static_cast<std::size_t>(s + 1), 0));
        h[0][0] = 1;
        for (int t = 1; t <= s; ++t)
            for (int r = 1; r <= t; ++r)
                for (int first = 1; first <= t; ++first)
                    h[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] +=
                        binomial(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(first - 1)) *
                        (first == s ? 0 : f[static_cast<std::size_t>(first)]) *
                        h[static_cast<std::size_t>(t - first)][static_cast<std::size_t>(r - 1)];
        for (int r = 2; r <= s; ++r) f[static_cast<std::size_t>(s)] += vertex_dim(r) * h[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)];
    }
    return f[static_cast<std::size_t>(n)];
}

// ---------------------------------------------------------------- free operads

FreeOperad::FreeOperad(SModule generators, std::string name)
    : generators_(std::move(generators)), name_(std::move(name)) {
    bases_.resize(static_cast<std::size_t>(generators_.max_arity + 1));
    for (int n = 2; n <= generators_.max_arity; ++n)
        bases_[static_cast<std::size_t>(n)] = enumerate_trees(
            n, [&](int k) { return generators_.dim(k); },
            [&](int k, Index b) { return generators_.degrees[static_cast<std::size_t>(k)][b]; });
}

const TreeBasis& FreeOperad::basis(int n) const {
    check_arity(*this, n);
    return bases_[static_cast<std::size_t>(n)];
}

namespace {

ActionFn smodule_action(const SModule& E) {
    return [&E](int k, const Permutation& sigma, const SparseVector& x) { return E.action(k, sigma).apply(x); };
}

RawTree raw_from(const Tree& t, const std::function<int(int, Index)>& factor_degree) {
    RawTree r;
    r.children = t.children;
    for (std::size_t v = 0; v < t.vertices(); ++v) {
        r.decorations.push_back(unit(t.labels[v]));
        r.factor_degree.push_back(factor_degree(static_cast<int>(t.children[v].size()), t.labels[v]));
    }
    return r;
}

}  // namespace

SparseVector FreeOperad::act(int n, const Permutation& sigma, Index b) const {
    const Tree& t = basis(n).trees[b];
    RawTree r = raw_from(t, [&](int k, Index l) { return generators_.degrees[static_cast<std::size_t>(k)][l]; });
    for (auto& ch : r.children)
        for (auto& c : ch)
            if (c < 0) c = -(sigma[static_cast<std::size_t>(-(c + 1))] + 1);
    TreeVector tv;
    canonicalize(r, smodule_action(generators_), Rational(1), tv);
    return to_vector(tv, basis(n));
}

SparseVector FreeOperad::compose(int m, int i, int k, Index a, Index b) const {
    const int n = m + k - 1;
    const auto deg = [&](int kk, Index l) { return generators_.degrees[static_cast<std::size_t>(kk)][l]; };
    const Tree& t1 = basis(m).trees[a];
    const Tree& t2 = basis(k).trees[b];
    check_arity(*this, n);
    RawTree r = raw_from(t1, deg);
    const int off = static_cast<int>(t1.vertices());
    for (auto& ch : r.children)
        for (auto& c : ch) {
            if (c >= 0) continue;
            const int l = -(c + 1);
            if (l == i) c = off;
            else if (l > i) c = -(l + k - 1 + 1);
        }
    const RawTree r2 = raw_from(t2, deg);
    for (std::size_t v = 0; v < r2.children.size(); ++v) {
        std::vector<int> ch = r2.children[v];
        for (auto& c : ch) c = c >= 0 ? c + off : -(-(c + 1) + i + 1);
        r.children.push_back(std::move(ch));
        r.decorations.push_back(r2.decorations[v]);
        r.factor_degree.push_back(r2.factor_degree[v]);
    }
    TreeVector tv;
    canonicalize(r, smodule_action(generators_), Rational(1), tv);
    return to_vector(tv, basis(n));
}

SparseVector FreeOperad::differential(int n, Index b) const {
    check_arity(*this, n);
    if (differential_.empty()) return {};
    return differential_[static_cast<std::size_t>(n)].row(b);  // stored by source
}

void FreeOperad::set_differential(std::vector<SparseMatrix> per_arity) {
    differential_.assign(static_cast<std::size_t>(max_arity() + 1), SparseMatrix());
    for (int n = 2; n <= max_arity(); ++n) {
        const auto& d = per_arity.at(static_cast<std::size_t>(n));
        if (d.rows() != dim(n) || d.cols() != dim(n)) throw InternalError("differential shape mismatch");
        differential_[static_cast<std::size_t>(n)] = d.transpose();
    }
}

std::string FreeOperad::label(int n, Index b) const {
    return basis(n).trees[b].to_string([&](int k, Index l) {
        const auto& names = generators_.labels[static_cast<std::size_t>(k)];
        return l < names.size() ? names[l] : "e" + std::to_string(l);
    });
}

// ---------------------------------------------------------------- bar / cobar

namespace {

CochainComplex split_by_degree(const std::vector<int>& degrees, const SparseMatrix& total, const std::string& what) {
    std::map<int, std::vector<Index>> by_deg;
    std::vector<Index> local(degrees.size());
    for (Index b = 0; b < degrees.size(); ++b) {
        local[b] = static_cast<Index>(by_deg[degrees[b]].size());
        by_deg[degrees[b]].push_back(b);
    }
    std::map<Bidegree, std::size_t> dims;
    for (const auto& [g, v] : by_deg) dims[{g, 0}] = v.size();
    std::map<int, std::vector<Triplet>> trip;
    for (Index r = 0; r < total.rows(); ++r)
        for (const auto& [c, v] : total.row(r)) {
            if (degrees[r] != degrees[c] + 1)
                throw InternalError(what + ": differential does not raise degree by one");
            trip[degrees[c]].push_back({local[r], local[c], v});
        }
    std::map<Bidegree, SparseMatrix> diffs;
    for (auto& [g, t] : trip)
        diffs[{g, 0}] = SparseMatrix::from_triplets(by_deg.at(g + 1).size(), by_deg.at(g).size(), std::move(t));
    return CochainComplex(std::move(dims), std::move(diffs));
}

}  // namespace

BarComplex bar(const Operad& P, int n) {
    check_arity(P, n);
    BarComplex out;
    out.arity = n;
    const auto fdeg = [&](int k, Index b) { return P.degree(k, b) - 1; };
    out.basis = enumerate_trees(n, [&](int k) { return P.dim(k); }, fdeg);
    const ActionFn act_fn = [&P](int k, const Permutation& s, const SparseVector& x) { return act(P, k, s, x); };
    std::vector<Triplet> trip;
    for (Index col = 0; col < out.basis.size(); ++col) {
        const Tree& t = out.basis.trees[col];
        const std::size_t V = t.vertices();
        std::vector<int> deg(V);
        for (std::size_t v = 0; v < V; ++v) deg[v] = fdeg(static_cast<int>(t.children[v].size()), t.labels[v]);
        std::vector<int> before(V + 1, 0);
        for (std::size_t v = 0; v < V; ++v) before[v + 1] = before[v] + deg[v];
        TreeVector tv;
        // d': contract the edge into vertex w. Move sw next to su, then apply
        // s a (x) s b -> (-1)^{|sa|} s(a o b) behind the factors before u.
        for (std::size_t w = 1; w < V; ++w) {
            int slot = 0;
            const int u = parent_of(t, static_cast<int>(w), slot);
            const std::size_t uu = static_cast<std::size_t>(u);
            const int between = before[w] - before[uu + 1];
            int s = (deg[w] * between) % 2 ? -1 : 1;
            if ((before[uu] + deg[uu]) % 2) s = -s;
            const int ku = static_cast<int>(t.children[uu].size()), kw = static_cast<int>(t.children[w].size());
            RawTree r;
            std::vector<int> id(V, -1);
            for (std::size_t v = 0, next = 0; v < V; ++v)
                if (v != w) id[v] = static_cast<int>(next++);
            for (std::size_t v = 0; v < V; ++v) {
                if (v == w) continue;
                std::vector<int> ch;
                if (v == uu) {
                    for (int j = 0; j < ku; ++j) {
                        const int c = t.children[uu][static_cast<std::size_t>(j)];
                        if (j == slot)
                            for (int cw : t.children[w]) ch.push_back(cw < 0 ? cw : id[static_cast<std::size_t>(cw)]);
                        else ch.push_back(c < 0 ? c : id[static_cast<std::size_t>(c)]);
                    }
                    r.decorations.push_back(P.compose(ku, slot, kw, t.labels[uu], t.labels[w]));
                    r.factor_degree.push_back(deg[uu] + deg[w] + 1);
                } else {
                    for (int c : t.children[v]) ch.push_back(c < 0 ? c : id[static_cast<std::size_t>(c)]);
                    r.decorations.push_back(unit(t.labels[v]));
                    r.factor_degree.push_back(deg[v]);
                }
                r.children.push_back(std::move(ch));
            }
            if (!r.decorations[static_cast<std::size_t>(id[uu])].empty()) canonicalize(r, act_fn, Rational(s), tv);
        }
        // d'': d(s p) = -s(dp), passing the factors before v.
        if (P.has_differential())
            for (std::size_t v = 0; v < V; ++v) {
                RawTree r = raw_from(t, fdeg);
                r.decorations[v] = P.differential(static_cast<int>(t.children[v].size()), t.labels[v]);
                if (r.decorations[v].empty()) continue;
                r.factor_degree[v] += 1;
                canonicalize(r, act_fn, Rational(before[v] % 2 ? 1 : -1), tv);
            }
        for (const auto& [row, c] : to_vector(tv, out.basis)) trip.push_back({row, col, c});
    }
    out.total = SparseMatrix::from_triplets(out.basis.size(), out.basis.size(), std::move(trip));
    out.complex = split_by_degree(out.basis.degrees, out.total, "bar(" + P.name() + ")");
    for (const auto& t : out.basis.trees)
        out.labels.push_back(t.to_string([&](int k, Index l) { return "s" + P.label(k, l); }));
    return out;
}

std::shared_ptr<FreeOperad> cobar_of_dual(OperadPtr P) {
    auto F = std::make_shared<FreeOperad>(shift(dual(SModule::of(*P)), 1), "Cobar(" + P->name() + "^*)");
    std::vector<SparseMatrix> d(static_cast<std::size_t>(P->max_arity() + 1));
    for (int n = 2; n <= P->max_arity(); ++n) {
        const BarComplex B = bar(*P, n);
        if (B.basis.trees != F->basis(n).trees) throw InternalError("cobar and bar tree bases differ");
        d[static_cast<std::size_t>(n)] = B.total.transpose();
    }
    F->set_differential(std::move(d));
    return F;
}

CochainComplex operad_complex(const Operad& P, int n) {
    check_arity(P, n);
    std::vector<int> degrees;
    std::vector<SparseVector> cols;
    for (Index b = 0; b < P.dim(n); ++b) {
        degrees.push_back(P.degree(n, b));
        cols.push_back(P.differential(n, b));
    }
    return split_by_degree(degrees, SparseMatrix::from_rows(P.dim(n), cols).transpose(), P.name());
}

CochainComplex cobar_bar(OperadPtr P, int n) {
    if (n > 3) throw ValidationError("Cobar(Bar(P)) is built only through arity 3");
    auto Q = cobar_of_dual(std::move(P));
    const BarComplex B = bar(*Q, n);
    std::vector<int> degrees;
    for (int g : B.basis.degrees) degrees.push_back(-g);
    return split_by_degree(degrees, B.total.transpose(), "Cobar(Bar)");
}

std::shared_ptr<FreeOperad> small_resolution(int max_arity) { return cobar_of_dual(desuspend(lie_operad(max_arity))); }

std::size_t CohomologyProfile::total() const {
    std::size_t s = 0;
    for (const auto& [g, d] : dims) s += d;
    return s;
}

CohomologyProfile cohomology_profile(const CochainComplex& c, const Field& field) {
    CohomologyProfile p;
    for (const auto& [bd, d] : c.dims()) {
        const std::size_t h = cohomology_dim(c, bd.first, bd.second, field);
        if (h) p.dims[bd.first] += h;
    }
    return p;
}

DgOperadReport check_dg_operad(const Operad& P, int max_arity) {
    DgOperadReport rep;
    auto fail = [&](bool& flag, const std::string& what) {
        if (rep.first_failure.empty()) rep.first_failure = what;
        flag = false;
    };
    const int cap = std::min(max_arity, P.max_arity());
    for (int n = 2; n <= cap; ++n)
        for (Index b = 0; b < P.dim(n); ++b) {
            const SparseVector db = P.differential(n, b);
            if (!differential(P, n, db).empty()) fail(rep.d_squared_zero, "d^2 on " + P.label(n, b));
            for (int j = 0; j + 1 < n; ++j) {
                const Permutation t = adjacent_transposition(n, j);
                if (differential(P, n, P.act(n, t, b)) != act(P, n, t, db))
                    fail(rep.equivariant, "d(s_" + std::to_string(j) + " x) on " + P.label(n, b));
            }
        }
    for (int m = 2; m <= cap; ++m)
        for (int k = 2; m + k - 1 <= cap; ++k)
            for (int i = 0; i < m; ++i)
                for (Index a = 0; a < P.dim(m); ++a)
                    for (Index b = 0; b < P.dim(k); ++b) {
                        ++rep.pairs_checked;
                        const SparseVector lhs = differential(P, m + k - 1, P.compose(m, i, k, a, b));
                        std::map<Index, Rational> acc;
                        add_scaled(acc, compose(P, m, i, k, P.differential(m, a), unit(b)), Rational(1));
                        add_scaled(acc, compose(P, m, i, k, unit(a), P.differential(k, b)),
                                   Rational(P.degree(m, a) % 2 ? -1 : 1));
                        if (lhs != finish(acc))
                            fail(rep.derivation, "d(" + P.label(m, a) + " o_" + std::to_string(i + 1) + " " +
                                                     P.label(k, b) + ")");
                    }
    return rep;
}

}  // namespace dhilb
