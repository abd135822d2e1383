#include "dhilb/scenario.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dhilb/c_infinity.hpp"
#include "dhilb/ci_oracle.hpp"
#include "dhilb/derived_tangent.hpp"
#include "dhilb/error.hpp"
#include "dhilb/harrison.hpp"
#include "dhilb/ideal_scheme.hpp"
#include "dhilb/operads.hpp"
#include "dhilb/parallel.hpp"

#ifndef DHILB_VERSION
#define DHILB_VERSION "0.0.0"
#endif

namespace dhilb {

const char* tool_version() { return DHILB_VERSION; }

namespace {

using nlohmann::json;

const std::vector<std::string> kTasks = {"truncate", "tangent", "sweep", "harrison",
                                         "operad",   "oracle",  "rmap",  "compare"};

/// Field access with diagnostics that carry the source position.
class Reader {
public:
    Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
        const YAML::Mark mark = at.Mark();
        std::string where = source_;
        if (!mark.is_null()) where += ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
        throw ValidationError(where + ": " + message);
    }

    YAML::Node require(const YAML::Node& map, const std::string& key) const {
        const YAML::Node v = map[key];
        if (!v) fail(map, "missing required key '" + key + "'");
        return v;
    }

    int to_int(const YAML::Node& v, const std::string& what) const {
        if (!v.IsScalar()) fail(v, what + " must be an integer");
        try {
            std::size_t used = 0;
            const std::string s = v.Scalar();
            const long x = std::stol(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return static_cast<int>(x);
        } catch (const std::exception&) {
            fail(v, what + " must be an integer, got '" + v.Scalar() + "'");
        }
    }

    int get_int(const YAML::Node& map, const std::string& key, std::optional<int> fallback = std::nullopt) const {
        const YAML::Node v = map[key];
        if (!v) {
            if (fallback) return *fallback;
            fail(map, "missing required key '" + key + "'");
        }
        return to_int(v, "'" + key + "'");
    }

    std::string get_string(const YAML::Node& map, const std::string& key,
                           std::optional<std::string> fallback = std::nullopt) const {
        const YAML::Node v = map[key];
        if (!v) {
            if (fallback) return *fallback;
            fail(map, "missing required key '" + key + "'");
        }
        if (!v.IsScalar()) fail(v, "'" + key + "' must be a string");
        return v.Scalar();
    }

    std::vector<int> int_list(const YAML::Node& v, const std::string& what) const {
        if (v.IsScalar()) return {to_int(v, what)};
        if (!v.IsSequence() || v.size() == 0) fail(v, what + " must be an integer or a non-empty list");
        std::vector<int> out;
        for (const auto& x : v) out.push_back(to_int(x, what));
        return out;
    }

    std::vector<std::string> string_list(const YAML::Node& map, const std::string& key) const {
        const YAML::Node v = map[key];
        if (!v) return {};
        if (v.IsScalar()) return {v.Scalar()};
        if (!v.IsSequence()) fail(v, "'" + key + "' must be a list of polynomials");
        std::vector<std::string> out;
        for (const auto& x : v) {
            if (!x.IsScalar()) fail(x, "'" + key + "' entries must be polynomial strings");
            out.push_back(x.Scalar());
        }
        return out;
    }

    /// Parses the generators one at a time so a bad one is reported at its own position.
    HomIdealPresentation ideal(const YAML::Node& map, const std::string& key, std::size_t n) const {
        const YAML::Node v = map[key];
        const std::vector<std::string> gens = string_list(map, key);
        for (std::size_t k = 0; k < gens.size(); ++k) {
            try {
                HomIdealPresentation::parse(n, {gens[k]});
            } catch (const ValidationError& e) {
                fail(v.IsSequence() ? v[k] : v, "generator '" + gens[k] + "': " + e.what());
            }
        }
        return HomIdealPresentation::parse(n, gens);
    }

    void check_keys(const YAML::Node& map, const std::vector<std::string>& allowed) const {
        if (!map.IsMap()) fail(map, "expected a mapping");
        for (const auto& kv : map) {
            const std::string k = kv.first.Scalar();
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
                fail(kv.first, "unknown key '" + k + "'");
        }
    }

private:
    std::string source_;
};

struct Ambient {
    std::size_t n = 0;
    std::optional<std::pair<int, int>> segre;
    std::vector<std::string> segre_equations;
};

/// 2x2 minors of the (a+1) x (b+1) matrix z_ij = x_{i(b+1)+j}.
std::vector<std::string> segre_minors(int a, int b) {
    std::vector<std::string> out;
    auto var = [&](int i, int j) { return "x" + std::to_string(i * (b + 1) + j); };
    for (int i = 0; i <= a; ++i)
        for (int k = i + 1; k <= a; ++k)
            for (int j = 0; j <= b; ++j)
                for (int l = j + 1; l <= b; ++l)
                    out.push_back(var(i, j) + "*" + var(k, l) + "-" + var(i, l) + "*" + var(k, j));
    return out;
}

Ambient read_ambient(const Reader& r, const YAML::Node& root) {
    const YAML::Node a = r.require(root, "ambient");
    r.check_keys(a, {"n", "segre"});
    Ambient out;
    if (a["segre"]) {
        if (a["n"]) r.fail(a, "give either 'n' or 'segre', not both");
        const std::vector<int> ab = r.int_list(a["segre"], "'segre'");
        if (ab.size() != 2 || ab[0] < 1 || ab[1] < 1) r.fail(a["segre"], "'segre' must be [a, b] with a, b >= 1");
        out.segre = std::make_pair(ab[0], ab[1]);
        out.n = static_cast<std::size_t>((ab[0] + 1) * (ab[1] + 1) - 1);
        out.segre_equations = segre_minors(ab[0], ab[1]);
    } else {
        const int n = r.get_int(a, "n");
        if (n < 1 || n > 8) r.fail(a["n"], "'n' must lie in 1..8");
        out.n = static_cast<std::size_t>(n);
    }
    return out;
}

/// X from the ambient (Segre equations) plus any listed generators.
HomIdealPresentation read_X(const Reader& r, const YAML::Node& root, const Ambient& amb) {
    HomIdealPresentation X = r.ideal(root, "X", amb.n);
    if (!amb.segre_equations.empty()) {
        HomIdealPresentation S = HomIdealPresentation::parse(amb.n, amb.segre_equations);
        for (std::size_t k = 0; k < X.gens.size(); ++k) {
            S.gens.push_back(X.gens[k]);
            S.degrees.push_back(X.degrees[k]);
        }
        return S;
    }
    return X;
}

/// Z from its listed generators; on a Segre ambient the Segre equations are implicit.
HomIdealPresentation read_Z(const Reader& r, const YAML::Node& root, const Ambient& amb) {
    HomIdealPresentation Z = r.ideal(root, "Z", amb.n);
    if (Z.gens.empty()) r.fail(root, "'Z' needs at least one generator");
    if (!amb.segre_equations.empty()) {
        HomIdealPresentation S = HomIdealPresentation::parse(amb.n, amb.segre_equations);
        for (std::size_t k = 0; k < Z.gens.size(); ++k) {
            S.gens.push_back(Z.gens[k]);
            S.degrees.push_back(Z.degrees[k]);
        }
        return S;
    }
    return Z;
}

std::pair<int, int> read_window(const Reader& r, const YAML::Node& root) {
    const YAML::Node w = r.require(root, "window");
    r.check_keys(w, {"p", "q"});
    const int p = r.get_int(w, "p");
    const int q = r.get_int(w, "q");
    if (p < 1) r.fail(w["p"], "window needs p >= 1");
    if (p > q) r.fail(w, "window needs p <= q");
    return {p, q};
}

json gens_json(const HomIdealPresentation& P) {
    json a = json::array();
    for (const auto& g : P.gens) a.push_back(g.to_string());
    return a;
}

json dims_json(const std::vector<std::size_t>& v) { return json(v); }

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v[k]);
    return s;
}

struct Context {
    Reader reader;
    YAML::Node root;
    Field field;
    std::ostringstream text;
    bool mismatch = false;
};

// ---- tasks ----------------------------------------------------------------------------------

json task_truncate(Context& c) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "ambient", "X", "window"});
    const Ambient amb = read_ambient(r, c.root);
    const HomIdealPresentation X = read_X(r, c.root, amb);
    const auto [p, q] = read_window(r, c.root);
    const FiniteGradedAlgebra A = coordinate_ring_truncation(X, p, q);
    json dims = json::object();
    for (int d = p; d <= q; ++d) dims[std::to_string(d)] = A.dim(d);
    json res = {{"dims", dims}, {"total_dim", A.size()}, {"zero_multiplication", A.has_zero_multiplication()}};
    c.text << "A_[" << p << "," << q << "] of X = V(" << gens_json(X).dump() << ") in P^" << amb.n << "\n";
    for (int d = p; d <= q; ++d) c.text << "  dim A_" << d << " = " << A.dim(d) << "\n";
    c.text << "  total " << A.size() << "\n";
    try {
        const HilbertData h = hilbert_data(X, std::max(q, static_cast<int>(2 * amb.n + 4)));
        res["hilbert_polynomial"] = h.polynomial_string();
        res["hilbert_stable_from"] = h.stable_from;
        c.text << "  Hilbert polynomial " << h.polynomial_string() << " (from degree " << h.stable_from << ")\n";
    } catch (const ValidationError&) {
        res["hilbert_polynomial"] = nullptr;
    }
    return res;
}

TangentOptions tangent_options(Context& c) {
    TangentOptions o;
    o.field = c.field;
    o.n_max = c.reader.get_int(c.root, "n_max", 4);
    if (o.n_max < 1) c.reader.fail(c.root["n_max"], "'n_max' must be positive");
    return o;
}

int read_m(Context& c) {
    const int m = c.reader.get_int(c.root, "m", 1);
    if (m < 0) c.reader.fail(c.root["m"], "'m' must be non-negative");
    return m;
}

json tangent_json(const TangentReport& t) {
    json j = {{"p", t.p},
              {"q", t.q},
              {"m", t.m},
              {"H", dims_json(t.dims)},
              {"classical_dim", t.classical_dim},
              {"classical_consistent", !t.dims.empty() && t.dims[0] == t.classical_dim},
              {"euler_checked", t.euler_checked},
              {"weight_dims_source", dims_json(t.weight_dims_source)},
              {"weight_dims_target", dims_json(t.weight_dims_target)}};
    if (t.euler_checked) j["euler_ok"] = t.euler_ok;
    return j;
}

void tangent_text(std::ostringstream& out, const TangentReport& t) {
    out << "window (" << t.p << "," << t.q << "), m = " << t.m << "\n";
    for (std::size_t i = 0; i < t.dims.size(); ++i) out << "  H^" << i << " = " << t.dims[i] << "\n";
    out << "  classical tangent = " << t.classical_dim << (t.dims[0] == t.classical_dim ? " (= H^0)" : " (differs from H^0)")
        << "\n";
    if (t.euler_checked) out << "  Euler check " << (t.euler_ok ? "ok" : "FAILED") << "\n";
}

json task_tangent(Context& c, bool rmap) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "ambient", "X", "Z", "window", "m", "n_max", "derived"});
    const Ambient amb = read_ambient(r, c.root);
    if (rmap && !amb.segre) r.fail(c.root["ambient"], "rmap needs a Segre ambient");
    const HomIdealPresentation X = read_X(r, c.root, amb);
    const HomIdealPresentation Z = read_Z(r, c.root, amb);
    const auto [p, q] = read_window(r, c.root);
    const std::string derived = r.get_string(c.root, "derived", std::string("true"));
    if (derived != "true" && derived != "false") r.fail(c.root["derived"], "'derived' must be true or false");
    if (derived == "false") {
        // Classical tangent Hom_A(I, A/I)_0 only.
        const FiniteGradedAlgebra A = coordinate_ring_truncation(X, p, q);
        ClassicalTangentOptions o;
        o.field = c.field;
        const std::size_t dim = classical_tangent_dim(A, subscheme_to_point(X, Z, p, q), o);
        c.text << "window (" << p << "," << q << ")\n  classical tangent = " << dim << "\n";
        return {{"p", p}, {"q", q}, {"classical_dim", dim}};
    }
    const int m = read_m(c);
    const TangentOptions o = tangent_options(c);
    const TangentReport t = rmap ? rmap_tangent(X, Z, p, q, m, o) : derived_tangent(X, Z, p, q, m, o);
    if (t.euler_checked && !t.euler_ok) throw InternalError("Euler characteristic check of the fiber failed");
    tangent_text(c.text, t);
    return tangent_json(t);
}

json task_sweep(Context& c) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "ambient", "X", "Z", "window", "m", "n_max"});
    const Ambient amb = read_ambient(r, c.root);
    const HomIdealPresentation X = read_X(r, c.root, amb);
    const HomIdealPresentation Z = read_Z(r, c.root, amb);
    const YAML::Node w = r.require(c.root, "window");
    r.check_keys(w, {"p", "q"});
    const std::vector<int> ps = r.int_list(r.require(w, "p"), "'p'");
    const std::vector<int> qs = r.int_list(r.require(w, "q"), "'q'");
    for (int p : ps)
        if (p < 1) r.fail(w["p"], "window needs p >= 1");
    const int m = read_m(c);
    const SweepTable s = stabilization_sweep(X, Z, m, ps, qs, tangent_options(c));
    json entries = json::array();
    for (const SweepEntry& e : s.entries) {
        json j = {{"p", e.p}, {"q", e.q}};
        if (e.report) {
            j["H"] = dims_json(e.report->dims);
            j["classical_dim"] = e.report->classical_dim;
        } else {
            j["error"] = e.error;
        }
        entries.push_back(j);
    }
    json stable = json::array(), corners = json::array(), values = json::array();
    for (std::size_t i = 0; i < s.stable.size(); ++i) {
        stable.push_back(static_cast<bool>(s.stable[i]));
        corners.push_back(s.stable_corner[i] ? json::array({s.stable_corner[i]->first, s.stable_corner[i]->second})
                                             : json(nullptr));
        values.push_back(s.stable_value[i] ? json(*s.stable_value[i]) : json(nullptr));
    }
    c.text << "sweep p in " << json(ps).dump() << ", q in " << json(qs).dump() << ", m = " << m << "\n";
    for (const SweepEntry& e : s.entries) {
        c.text << "  (" << e.p << "," << e.q << "): ";
        if (e.report)
            c.text << "H = (" << join(e.report->dims) << "), classical " << e.report->classical_dim << "\n";
        else
            c.text << e.error << "\n";
    }
    for (std::size_t i = 0; i < s.stable.size(); ++i) {
        c.text << "  H^" << i << ": " << (s.stable[i] ? "stable" : "not stable");
        if (s.stable_value[i])
            c.text << ", value " << *s.stable_value[i] << " from (" << s.stable_corner[i]->first << ","
                   << s.stable_corner[i]->second << ")";
        c.text << "\n";
    }
    return {{"m", m},
            {"p_values", ps},
            {"q_values", qs},
            {"entries", entries},
            {"stable", stable},
            {"stable_corner", corners},
            {"stable_value", values},
            {"classical_consistent", s.classical_consistent}};
}

/// Algebra from a structure table (degree 0) or a truncated coordinate ring, optionally modulo Z.
FiniteGradedAlgebra read_algebra(Context& c, const YAML::Node& node, json& echo) {
    const Reader& r = c.reader;
    r.check_keys(node, {"table", "ambient", "X", "Z", "window"});
    if (node["table"]) {
        const YAML::Node t = node["table"];
        if (!t.IsSequence()) r.fail(t, "'table' must be a list: table[a][b] = coefficients of e_a e_b");
        std::vector<std::vector<std::vector<Rational>>> table;
        for (const auto& row : t) {
            if (!row.IsSequence()) r.fail(row, "table rows must be lists");
            auto& out_row = table.emplace_back();
            for (const auto& entry : row) {
                if (!entry.IsSequence()) r.fail(entry, "table entries must be coefficient lists");
                auto& coeffs = out_row.emplace_back();
                for (const auto& x : entry) {
                    try {
                        coeffs.emplace_back(x.Scalar());
                        coeffs.back().canonicalize();
                    } catch (const std::exception&) {
                        r.fail(x, "bad rational '" + x.Scalar() + "'");
                    }
                }
            }
        }
        echo["table_dim"] = table.size();
        try {
            return FiniteGradedAlgebra::ungraded(table);
        } catch (const ValidationError& e) {
            r.fail(t, e.what());
        }
    }
    const Ambient amb = read_ambient(r, node);
    const HomIdealPresentation X = read_X(r, node, amb);
    const auto [p, q] = read_window(r, node);
    echo["X"] = gens_json(X);
    echo["window"] = {p, q};
    const FiniteGradedAlgebra A = coordinate_ring_truncation(X, p, q);
    if (!node["Z"]) return A;
    const HomIdealPresentation Z = read_Z(r, node, amb);
    echo["Z"] = gens_json(Z);
    return quotient_algebra(A, subscheme_to_point(X, Z, p, q));
}

json task_harrison(Context& c) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "algebra", "weights"});
    json echo = json::object();
    const FiniteGradedAlgebra A = read_algebra(c, r.require(c.root, "algebra"), echo);
    const int weights = r.get_int(c.root, "weights", 3);
    if (weights < 1 || weights > 6) r.fail(c.root["weights"], "'weights' must lie in 1..6");
    const GradedModule M = GradedModule::regular(A);
    const std::size_t before = CochainComplex::checks_performed();
    const CochainComplex cx = harrison_complex(A, M, weights + 1);
    json per_weight = json::array();
    c.text << "Harrison cohomology of A (dim " << A.size() << ") with coefficients in A\n";
    for (int n = 1; n <= weights; ++n) {
        std::size_t cochains = 0, h = 0;
        for (int j : cx.internal_degrees()) {
            cochains += cx.dim(n, j);
            h += cohomology_dim(cx, n, j, c.field);
        }
        per_weight.push_back({{"weight", n}, {"cochain_dim", cochains}, {"H", h}});
        c.text << "  weight " << n << ": cochains " << cochains << ", H = " << h << "\n";
    }
    const std::size_t der = derivation_dim(A, M, std::nullopt, c.field);
    c.text << "  Der(A, A) by direct solve = " << der << "\n";
    return {{"algebra", echo},
            {"algebra_dim", A.size()},
            {"weights", per_weight},
            {"derivations", der},
            {"H1_equals_derivations", per_weight[0]["H"].get<std::size_t>() == der},
            {"d_squared_checks", CochainComplex::checks_performed() - before}};
}

OperadPtr named_operad(Context& c, const YAML::Node& at, const std::string& name, int cap) {
    if (name == "com") return com_operad(cap);
    if (name == "lie") return lie_operad(cap);
    if (name == "suspended_com") return suspend(com_operad(cap));
    if (name == "suspended_lie") return suspend(lie_operad(cap));
    if (name == "lambda") return small_resolution(cap);
    c.reader.fail(at, "unknown operad '" + name + "' (com, lie, suspended_com, suspended_lie, lambda)");
}

json complex_json(const CochainComplex& cx, const Field& field, std::ostringstream& text, int n) {
    json terms = json::object(), h = json::object();
    for (const auto& [bd, d] : cx.dims()) terms[std::to_string(bd.first)] = d;
    const CohomologyProfile prof = cohomology_profile(cx, field);
    for (const auto& [g, d] : prof.dims) h[std::to_string(g)] = d;
    text << "  arity " << n << ": terms";
    for (const auto& [bd, d] : cx.dims()) text << " [" << bd.first << "]" << d;
    text << "; H";
    if (prof.dims.empty()) text << " 0";
    for (const auto& [g, d] : prof.dims) text << " [" << g << "]" << d;
    text << "\n";
    return {{"arity", n}, {"terms", terms}, {"cohomology", h}, {"total", prof.total()}};
}

json task_operad(Context& c) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "operad", "construction", "max_arity", "dim_w", "weight_cap", "algebra", "m"});
    const std::string construction = r.get_string(c.root, "construction", "components");
    json res = {{"construction", construction}};
    if (construction == "coordinate_dga") {
        const int dim_w = r.get_int(c.root, "dim_w", 2);
        const int cap = r.get_int(c.root, "weight_cap", 4);
        if (dim_w < 1) r.fail(c.root["dim_w"], "'dim_w' must be positive");
        const CoordinateDgaReport d = coordinate_dga_check(static_cast<std::size_t>(dim_w), cap);
        json gens = json::object();
        for (const auto& [w, k] : d.generators) gens[std::to_string(w)] = k;
        c.text << "coordinate dg-algebra of RCA(W), dim W = " << dim_w << ", weights <= " << cap << "\n";
        for (const auto& [w, k] : d.generators) c.text << "  weight " << w << ": " << k << " generators\n";
        c.text << "  d^2 = 0: " << (d.d_squared_zero ? "yes" : "NO, " + d.first_failure) << "\n";
        if (!d.d_squared_zero) throw InternalError("coordinate dg-algebra: " + d.first_failure);
        res.update({{"dim_w", dim_w}, {"weight_cap", cap}, {"generators", gens},
                    {"monomials_checked", d.monomials_checked}, {"d_squared_zero", d.d_squared_zero}});
        return res;
    }
    if (construction == "rca") {
        json echo = json::object();
        const FiniteGradedAlgebra W = read_algebra(c, r.require(c.root, "algebra"), echo);
        const int m = read_m(c);
        const RcaTangentReport t = rca_tangent(W, m);
        c.text << "tangent of RCA(W) at its product, dim W = " << W.size() << "\n";
        for (std::size_t i = 0; i < t.dims.size(); ++i)
            c.text << "  H^" << i << " = " << t.dims[i] << " (Harrison " << t.harrison_dims[i] << ")\n";
        c.text << "  Euler check " << (t.euler_ok ? "ok" : "FAILED") << "\n";
        res.update({{"algebra", echo}, {"m", m}, {"H", dims_json(t.dims)}, {"harrison_H", dims_json(t.harrison_dims)},
                    {"terms", dims_json(t.term_dims)}, {"euler_ok", t.euler_ok}});
        return res;
    }
    const std::string name = r.get_string(c.root, "operad");
    const int cap = r.get_int(c.root, "max_arity", 4);
    if (cap < 2) r.fail(c.root["max_arity"], "'max_arity' must be at least 2");
    if (cap > kDefaultArityCap) throw BudgetError("operad arity", kDefaultArityCap, cap);
    const OperadPtr P = named_operad(c, c.root["operad"], name, cap);
    res["operad"] = name;
    res["max_arity"] = cap;
    json arities = json::array();
    if (construction == "components") {
        c.text << P->name() << " components\n";
        for (int n = 2; n <= cap; ++n) arities.push_back(complex_json(operad_complex(*P, n), c.field, c.text, n));
        const DgOperadReport dg = check_dg_operad(*P, std::min(cap, 4));
        if (!dg.ok()) throw InternalError("dg-operad check failed: " + dg.first_failure);
        res["dg_pairs_checked"] = dg.pairs_checked;
    } else if (construction == "bar") {
        c.text << "Bar(" << P->name() << ")\n";
        for (int n = 2; n <= cap; ++n) arities.push_back(complex_json(bar(*P, n).complex, c.field, c.text, n));
    } else if (construction == "cobar") {
        const auto F = cobar_of_dual(P);
        c.text << F->name() << "\n";
        for (int n = 2; n <= cap; ++n) arities.push_back(complex_json(operad_complex(*F, n), c.field, c.text, n));
    } else if (construction == "cobar_bar") {
        if (cap > 3) throw BudgetError("Cobar(Bar(P)) arity", 3, cap);
        c.text << "Cobar(Bar(" << P->name() << "))\n";
        for (int n = 2; n <= cap; ++n) arities.push_back(complex_json(cobar_bar(P, n), c.field, c.text, n));
    } else {
        r.fail(c.root["construction"], "unknown construction '" + construction +
                                           "' (components, bar, cobar, cobar_bar, coordinate_dga, rca)");
    }
    res["arities"] = arities;
    return res;
}

struct OracleSpec {
    CIData Z;
    std::string sheaf = "normal";
    int e = 0;
};

OracleSpec read_oracle(const Reader& r, const YAML::Node& node, std::size_t default_n) {
    OracleSpec o;
    std::size_t n = default_n;
    if (node["n"]) {
        const int v = r.get_int(node, "n");
        if (v < 1 || v > 8) r.fail(node["n"], "'n' must lie in 1..8");
        n = static_cast<std::size_t>(v);
    }
    const HomIdealPresentation forms = r.ideal(node, node["forms"] ? "forms" : "Z", n);
    try {
        o.Z = CIData::from_forms(n, forms.gens);
    } catch (const ValidationError& e) {
        r.fail(node, e.what());
    }
    o.sheaf = r.get_string(node, "sheaf", std::string("normal"));
    if (o.sheaf != "normal" && o.sheaf != "twist") r.fail(node["sheaf"], "'sheaf' must be normal or twist");
    o.e = r.get_int(node, "e", 0);
    return o;
}

std::vector<std::size_t> oracle_dims(const OracleSpec& o, const Field& field) {
    CIOptions opt;
    opt.field = field;
    return o.sheaf == "normal" ? ci_normal_cohomology_all(o.Z, opt) : ci_twist_cohomology_all(o.Z, o.e, opt);
}

std::string oracle_name(const OracleSpec& o) {
    return o.sheaf == "normal" ? "N_Z" : "O_Z(" + std::to_string(o.e) + ")";
}

json task_oracle(Context& c) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "ambient", "Z", "sheaf", "e"});
    const Ambient amb = read_ambient(r, c.root);
    if (amb.segre) r.fail(c.root["ambient"], "the oracle works in P^n");
    const OracleSpec o = read_oracle(r, c.root, amb.n);
    const std::vector<std::size_t> h = oracle_dims(o, c.field);
    c.text << "complete intersection of codimension " << o.Z.codim() << " in P^" << o.Z.n << ", sheaf " << oracle_name(o)
           << "\n";
    for (std::size_t i = 0; i < h.size(); ++i) c.text << "  h^" << i << " = " << h[i] << "\n";
    json res = {{"sheaf", o.sheaf}, {"h", dims_json(h)}, {"codim", o.Z.codim()}};
    if (o.sheaf == "twist") {
        res["e"] = o.e;
        CIOptions opt;
        opt.field = c.field;
        res["euler_characteristic"] = ci_euler_characteristic(o.Z, o.e, opt);
    }
    return res;
}

json task_compare(Context& c) {
    const Reader& r = c.reader;
    r.check_keys(c.root, {"task", "field", "ambient", "X", "Z", "window", "m", "n_max", "oracle"});
    const Ambient amb = read_ambient(r, c.root);
    const HomIdealPresentation X = read_X(r, c.root, amb);
    const HomIdealPresentation Z = read_Z(r, c.root, amb);
    const auto [p, q] = read_window(r, c.root);
    const int m = read_m(c);
    OracleSpec o;
    if (c.root["oracle"]) {
        const YAML::Node on = c.root["oracle"];
        r.check_keys(on, {"n", "forms", "sheaf", "e"});
        o = read_oracle(r, on, amb.n);
    } else {
        if (!X.gens.empty())
            r.fail(c.root, "Z sits in a proper subvariety X; give an 'oracle' section for the comparison");
        o = read_oracle(r, c.root, amb.n);
    }
    const TangentOptions opts = tangent_options(c);
    const TangentReport t = amb.segre ? rmap_tangent(X, Z, p, q, m, opts) : derived_tangent(X, Z, p, q, m, opts);
    const std::vector<std::size_t> h = oracle_dims(o, c.field);
    json rows = json::array();
    c.text << "derived tangent at (" << t.p << "," << t.q << ") vs oracle " << oracle_name(o) << "\n";
    for (int i = 0; i <= m; ++i) {
        const std::size_t a = t.dims[static_cast<std::size_t>(i)];
        const std::size_t b = static_cast<std::size_t>(i) < h.size() ? h[static_cast<std::size_t>(i)] : 0;
        const bool match = a == b;
        c.mismatch = c.mismatch || !match;
        rows.push_back({{"i", i}, {"derived", a}, {"oracle", b}, {"match", match}});
        c.text << "  H^" << i << ": derived " << a << ", oracle " << b << " " << (match ? "MATCH" : "MISMATCH") << "\n";
    }
    const bool classical = t.dims[0] == t.classical_dim;
    c.mismatch = c.mismatch || !classical;
    c.text << "  classical " << t.classical_dim << " " << (classical ? "MATCH" : "MISMATCH") << "\n";
    return {{"tangent", tangent_json(t)}, {"oracle", {{"sheaf", o.sheaf}, {"h", dims_json(h)}}},
            {"comparisons", rows}, {"classical_match", classical}, {"all_match", !c.mismatch}};
}

json error_json(ErrorKind kind, const std::string& message) {
    static const std::map<ErrorKind, std::string> names = {{ErrorKind::validation, "validation"},
                                                           {ErrorKind::budget, "budget"},
                                                           {ErrorKind::mismatch, "mismatch"},
                                                           {ErrorKind::internal, "internal"}};
    return {{"kind", names.at(kind)}, {"message", message}, {"exit_code", static_cast<int>(kind)}};
}

}  // namespace

RunOutcome run_scenario(const std::string& yaml_text, const std::string& source_name, const RunOptions& options) {
    RunOutcome out;
    json report = {{"schema", kReportSchema},
                   {"tool", {{"name", "dhilb"}, {"version", tool_version()}}},
                   {"scenario", source_name}};
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream text;
    try {
        YAML::Node root;
        try {
            root = YAML::Load(yaml_text);
        } catch (const YAML::ParserException& e) {
            throw ValidationError(source_name + ":" + std::to_string(e.mark.line + 1) + ":" +
                                  std::to_string(e.mark.column + 1) + ": " + e.msg);
        }
        Context c{Reader(source_name), root, Field::rationals(), {}, false};
        if (!root.IsMap()) c.reader.fail(root, "scenario must be a mapping");
        std::string task = root["task"] ? c.reader.get_string(root, "task") : options.task.value_or("");
        if (task.empty()) c.reader.fail(root, "missing required key 'task'");
        if (options.task && task != *options.task)
            c.reader.fail(root["task"], "scenario task '" + task + "' does not match subcommand '" + *options.task + "'");
        if (std::find(kTasks.begin(), kTasks.end(), task) == kTasks.end())
            c.reader.fail(root["task"], "unknown task '" + task + "'");
        report["task"] = task;
        const std::string field_text = options.field.value_or(c.reader.get_string(root, "field", std::string("q")));
        try {
            c.field = Field::parse(field_text);
        } catch (const ValidationError& e) {
            if (options.field) throw;
            c.reader.fail(root["field"], e.what());
        }
        report["field"] = c.field.name();
        set_max_threads(std::max(1u, options.threads));

        json result;
        if (task == "truncate") result = task_truncate(c);
        else if (task == "tangent") result = task_tangent(c, false);
        else if (task == "rmap") result = task_tangent(c, true);
        else if (task == "sweep") result = task_sweep(c);
        else if (task == "harrison") result = task_harrison(c);
        else if (task == "operad") result = task_operad(c);
        else if (task == "oracle") result = task_oracle(c);
        else result = task_compare(c);

        report["result"] = result;
        report["status"] = c.mismatch ? "mismatch" : "ok";
        out.exit_code = c.mismatch ? static_cast<int>(ErrorKind::mismatch) : 0;
        text << "[" << task << ", field " << c.field.name() << "]\n" << c.text.str();
        if (c.mismatch) text << "status: MISMATCH\n";
    } catch (const Error& e) {
        report["status"] = "error";
        report["error"] = error_json(e.kind(), e.what());
        out.exit_code = static_cast<int>(e.kind());
        text << "error (" << report["error"]["kind"].get<std::string>() << "): " << e.what() << "\n";
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["error"] = error_json(ErrorKind::internal, e.what());
        out.exit_code = static_cast<int>(ErrorKind::internal);
        text << "error (internal): " << e.what() << "\n";
    }
    if (options.timing) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        report["timing_ms"] = ms.count();
        text << "time " << ms.count() << " ms\n";
    }
    out.report = std::move(report);
    out.text = text.str();
    return out;
}

RunOutcome run_scenario_file(const std::string& path, const RunOptions& options) {
    std::ifstream in(path);
    if (!in) {
        RunOutcome out;
        out.report = {{"schema", kReportSchema},
                      {"tool", {{"name", "dhilb"}, {"version", tool_version()}}},
                      {"status", "error"},
                      {"error", error_json(ErrorKind::validation, "cannot open scenario file '" + path + "'")}};
        out.text = "error (validation): cannot open scenario file '" + path + "'\n";
        out.exit_code = static_cast<int>(ErrorKind::validation);
        return out;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return run_scenario(buf.str(), path, options);
}

}  // namespace dhilb
