#pragma once

// The unital associative algebra spanned by a matrix tuple, its Jacobson
// radical, semisimplicity of the natural module, centralizers, and the
// brute-force subspace oracles used to cross-check the exact methods.
//
// The radical is computed by the trace form over Q and by the layered
// characteristic-coefficient method over F_{p^k} (valid for every p,
// including p <= n where the plain trace form degenerates).  Either way the
// result is post-verified to be a nilpotent two-sided ideal, so a wrong
// radical can never leave this translation unit silently.

#include "orbitlab/tuple.hpp"

#include <queue>
#include <set>

namespace orbitlab {

/// The spanned algebra: basis closed under multiplication, one generating
/// word per basis element, and the radical.
struct AlgebraHandle {
    MatrixTuple generators;
    std::vector<Matrix> basis;              // identity first
    std::vector<std::vector<int>> words;    // word in generator indices per basis element
    std::vector<Matrix> radical_basis;

    int dim() const { return static_cast<int>(basis.size()); }
    int ambient() const { return generators.dim(); }
    const FieldSpec& spec() const { return generators.spec(); }
    bool semisimple() const { return radical_basis.empty(); }
};

namespace detail {

inline Matrix vec_row(const Matrix& m) { return m.vectorized_row(); }

/// evaluate a word (sequence of generator indices) in the tuple
inline Matrix eval_word(const MatrixTuple& t, const std::vector<int>& word) {
    Matrix acc = Matrix::identity(t.dim(), t.spec());
    for (int g : word) acc = acc * t.entries[g];
    return acc;
}

std::vector<Matrix> radical_of_basis(const std::vector<Matrix>& basis, const FieldSpec& F, int n);

}  // namespace detail

/// Breadth-first span of the unital algebra generated by the tuple entries.
/// Deterministic: words explored in length-lexicographic order.
inline AlgebraHandle span_algebra(const MatrixTuple& t) {
    if (t.empty()) throw domain_error("span_algebra: empty tuple");
    const int n = t.dim();
    const FieldSpec& F = t.spec();

    AlgebraHandle h;
    h.generators = t;
    RowSpanAccumulator span(n * n, F);

    std::queue<std::pair<Matrix, std::vector<int>>> frontier;
    Matrix id = Matrix::identity(n, F);
    span.add(detail::vec_row(id));
    h.basis.push_back(id);
    h.words.push_back({});
    frontier.push({id, {}});

    while (!frontier.empty()) {
        auto [m, word] = frontier.front();
        frontier.pop();
        for (size_t gi = 0; gi < t.size(); ++gi) {
            Matrix cand = m * t.entries[gi];
            std::vector<int> w = word;
            w.push_back(static_cast<int>(gi));
            if (span.add(detail::vec_row(cand))) {
                h.basis.push_back(cand);
                h.words.push_back(w);
                frontier.push({cand, w});
            }
        }
    }

    // closure sanity: products of basis elements stay in the span
    for (const Matrix& a : h.basis)
        for (const Matrix& b : h.basis)
            if (!span.contains(detail::vec_row(a * b))) throw internal_error("algebra span not closed");

    h.radical_basis = detail::radical_of_basis(h.basis, F, n);
    return h;
}

inline bool algebra_contains(const AlgebraHandle& h, const Matrix& m) {
    RowSpanAccumulator span(h.ambient() * h.ambient(), h.spec());
    for (const Matrix& b : h.basis) span.add(detail::vec_row(b));
    return span.contains(detail::vec_row(m));
}

namespace detail {

/// span of a list of matrices as a RowSpanAccumulator
inline RowSpanAccumulator matrix_span(const std::vector<Matrix>& ms, int n, const FieldSpec& F) {
    RowSpanAccumulator span(n * n, F);
    for (const Matrix& m : ms) span.add(vec_row(m));
    return span;
}

/// is the span of `ideal` a nilpotent two-sided ideal of the algebra spanned by `basis`?
inline bool verify_nilpotent_ideal(const std::vector<Matrix>& ideal, const std::vector<Matrix>& basis,
                                   int n, const FieldSpec& F) {
    if (ideal.empty()) return true;
    RowSpanAccumulator ispan = matrix_span(ideal, n, F);
    for (const Matrix& r : ideal)
        for (const Matrix& b : basis)
            if (!ispan.contains(vec_row(r * b)) || !ispan.contains(vec_row(b * r))) return false;
    // power the ideal span until zero or stabilization
    std::vector<Matrix> current = ideal;
    for (int step = 0; step < n * n + 1; ++step) {
        std::vector<Matrix> next;
        RowSpanAccumulator nspan(n * n, F);
        for (const Matrix& a : current)
            for (const Matrix& r : ideal) {
                Matrix prod = a * r;
                if (nspan.add(vec_row(prod))) next.push_back(prod);
            }
        if (next.empty()) return true;
        if (next.size() == current.size()) {
            RowSpanAccumulator cspan = matrix_span(current, n, F);
            bool same = true;
            for (const Matrix& m : next)
                if (!cspan.contains(vec_row(m))) same = false;
            if (same) return false;  // stabilized nonzero
        }
        current = std::move(next);
    }
    return false;
}

/// radical over Q: kernel of the trace form on the algebra (Dickson)
inline std::vector<Matrix> radical_char0(const std::vector<Matrix>& basis, int n, const FieldSpec& F) {
    int d = static_cast<int>(basis.size());
    Matrix gram(d, d, F);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram(i, j) = (basis[i] * basis[j]).trace();
    std::vector<Matrix> out;
    for (const Matrix& k : kernel_basis(gram)) {
        Matrix r(n, n, F);
        for (int i = 0; i < d; ++i)
            if (!k(i, 0).is_zero()) r = r + basis[i].scaled(k(i, 0));
        out.push_back(r);
    }
    return out;
}

/// Radical over F_{p^k}: layered method using the characteristic-polynomial
/// coefficients sigma_{p^i}.  Layer i solves a p^i-semilinear system, made
/// linear by the substitution eta = xi^{p^i} and undone by Frobenius roots.
inline std::vector<Matrix> radical_charp(const std::vector<Matrix>& basis, int n, const FieldSpec& F) {
    const int p = F.p();
    std::vector<Matrix> layer = basis;
    long long pi = 1;
    for (int i = 0; pi <= n; ++i, pi *= p) {
        if (layer.empty()) break;
        int d = static_cast<int>(layer.size());
        // rows: one per (layer basis element b); cols: unknowns eta_j
        Matrix sys(d, d, F);
        for (int bi = 0; bi < d; ++bi)
            for (int j = 0; j < d; ++j) {
                std::vector<FieldElement> cp = charpoly(layer[j] * layer[bi]);
                sys(bi, j) = charpoly_sigma(cp, static_cast<int>(pi));
            }
        std::vector<Matrix> next;
        for (const Matrix& eta : kernel_basis(sys)) {
            Matrix r(n, n, F);
            for (int j = 0; j < d; ++j) {
                FieldElement xi = eta(j, 0).frobenius_root(i);
                if (!xi.is_zero()) r = r + layer[j].scaled(xi);
            }
            next.push_back(r);
        }
        // re-echelonize to keep a clean independent basis
        RowSpanAccumulator span(n * n, F);
        std::vector<Matrix> cleaned;
        for (const Matrix& m : next)
            if (span.add(vec_row(m))) cleaned.push_back(m);
        layer = std::move(cleaned);
    }
    return layer;
}

inline std::vector<Matrix> radical_of_basis(const std::vector<Matrix>& basis, const FieldSpec& F, int n) {
    std::vector<Matrix> rad = F.is_rationals() ? radical_char0(basis, n, F) : radical_charp(basis, n, F);
    // canonical echelon basis
    RowSpanAccumulator span(n * n, F);
    std::vector<Matrix> cleaned;
    for (const Matrix& m : rad)
        if (span.add(vec_row(m))) cleaned.push_back(m);
    for (size_t i = 0; i < cleaned.size(); ++i)
        cleaned[i] = Matrix::from_vectorized_row(span.rows().row(static_cast<int>(i)), n, n);
    if (!verify_nilpotent_ideal(cleaned, basis, n, F)) throw internal_error("computed radical fails the ideal check");
    return cleaned;
}

}  // namespace detail

inline std::vector<Matrix> radical(const AlgebraHandle& a) { return a.radical_basis; }

/// closed conjugation orbit for GL_n <=> the natural module is semisimple
/// <=> the spanned algebra has zero radical
inline bool is_semisimple_module(const MatrixTuple& t) {
    if (t.empty()) return true;
    return span_algebra(t).semisimple();
}

/// basis of {z : z t_i = t_i z for all i}; the unit group of this algebra is
/// the computational stand-in for the centralizer subgroup
inline AlgebraHandle centralizer_algebra(const MatrixTuple& t) {
    if (t.empty()) throw domain_error("centralizer_algebra: empty tuple");
    const int n = t.dim();
    const FieldSpec& F = t.spec();
    // unknown z, equations z t - t z = 0 per tuple entry
    Matrix sys(static_cast<int>(t.size()) * n * n, n * n, F);
    for (size_t e = 0; e < t.size(); ++e) {
        const Matrix& m = t.entries[e];
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < n; ++j) {
                int row = static_cast<int>(e) * n * n + a * n + j;
                // (z m)_{aj} = sum_b z_{ab} m_{bj};  (m z)_{aj} = sum_b m_{ab} z_{bj}
                for (int b = 0; b < n; ++b) {
                    sys(row, a * n + b) += m(b, j);
                    sys(row, b * n + j) -= m(a, b);
                }
            }
    }
    std::vector<Matrix> zs;
    for (const Matrix& k : kernel_basis(sys)) {
        Matrix z(n, n, F);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) z(a, b) = k(a * n + b, 0);
        zs.push_back(z);
    }
    // the centralizer is an algebra already; wrap it as a handle with itself as generators
    AlgebraHandle h;
    h.generators = MatrixTuple::make(zs.empty() ? std::vector<Matrix>{Matrix::identity(n, F)} : zs);
    h.basis = zs;
    for (size_t i = 0; i < zs.size(); ++i) h.words.push_back({static_cast<int>(i)});
    h.radical_basis = detail::radical_of_basis(h.basis, F, n);
    return h;
}

// ---------------------------------------------------------------------------
// generic tuples

struct GenericTuple {
    MatrixTuple tuple;
    std::vector<std::vector<int>> words;
};

/// Smallest tuple of group elements (words in the generators, breadth-first
/// length-lexicographic order) spanning the same algebra as the generators.
inline GenericTuple generic_tuple(const MatrixTuple& generators) {
    if (generators.empty()) throw domain_error("generic_tuple: empty generators");
    for (const Matrix& g : generators.entries)
        if (!invert(g)) throw domain_error("generic_tuple: generators must be invertible");
    AlgebraHandle full = span_algebra(generators);
    const int n = generators.dim();
    const FieldSpec& F = generators.spec();

    GenericTuple out;
    std::vector<Matrix> chosen;
    RowSpanAccumulator span(n * n, F);

    std::queue<std::pair<Matrix, std::vector<int>>> frontier;
    frontier.push({Matrix::identity(n, F), {}});
    while (!frontier.empty() && span.dim() < full.dim()) {
        auto [m, word] = frontier.front();
        frontier.pop();
        if (span.add(detail::vec_row(m))) {
            chosen.push_back(m);
            out.words.push_back(word);
        }
        if (span.dim() >= full.dim()) break;
        if (static_cast<int>(word.size()) >= full.dim() + 1) continue;  // depth guard
        for (size_t gi = 0; gi < generators.size(); ++gi) {
            std::vector<int> w = word;
            w.push_back(static_cast<int>(gi));
            frontier.push({m * generators.entries[gi], w});
        }
    }
    if (span.dim() < full.dim()) throw internal_error("generic tuple search did not reach full span");
    out.tuple = MatrixTuple::make(std::move(chosen), generators.sl_constraint);
    return out;
}

// ---------------------------------------------------------------------------
// brute-force oracles (independent of the radical machinery)

/// all subspaces of F^n of dimension d, as rref ROW bases; enumeration order
/// is pivot-combination then free-entry odometer
inline std::vector<Matrix> enumerate_subspaces(const FieldSpec& F, int n, int d) {
    if (!F.is_finite()) throw domain_error("subspace enumeration requires a finite field");
    std::vector<FieldElement> elems = all_field_elements(F);
    std::vector<Matrix> out;
    std::vector<int> pivots(d);
    // iterate over pivot column combinations
    std::function<void(int, int)> choose = [&](int start, int idx) {
        if (idx == d) {
            // free positions: (i, j) with j not a pivot and j > pivots[i]
            std::vector<std::pair<int, int>> free_pos;
            std::set<int> pivset(pivots.begin(), pivots.end());
            for (int i = 0; i < d; ++i)
                for (int j = pivots[i] + 1; j < n; ++j)
                    if (!pivset.count(j)) free_pos.emplace_back(i, j);
            size_t total = 1;
            for (size_t k = 0; k < free_pos.size(); ++k) {
                total *= elems.size();
                if (total > 4000000) throw domain_error("subspace enumeration too large");
            }
            for (size_t code = 0; code < total; ++code) {
                Matrix b(d, n, F);
                for (int i = 0; i < d; ++i) b(i, pivots[i]) = FieldElement::one(F);
                size_t v = code;
                for (const auto& [i, j] : free_pos) {
                    b(i, j) = elems[v % elems.size()];
                    v /= elems.size();
                }
                out.push_back(b);
            }
            return;
        }
        for (int c = start; c < n; ++c) {
            pivots[idx] = c;
            choose(c + 1, idx + 1);
        }
    };
    choose(0, 0);
    return out;
}

/// invariance of a column-span subspace under every tuple entry; basis rows
/// are vectors of the module (columns written as rows)
inline bool subspace_invariant(const Matrix& basis_rows, const MatrixTuple& t) {
    Subspace s = Subspace::span_rows(basis_rows);
    for (const Matrix& m : t.entries)
        for (int r = 0; r < basis_rows.rows(); ++r) {
            Matrix v = m * basis_rows.row(r).transpose();
            if (!s.contains_row(v.transpose())) return false;
        }
    return true;
}

/// brute-force search for an invariant complement to the invariant subspace W
inline std::optional<Matrix> invariant_complement_bruteforce(const Matrix& w_rows, const MatrixTuple& t) {
    const int n = t.dim();
    int d = Subspace::span_rows(w_rows).dim();
    if (d == 0 || d == n) return Matrix::identity(n, t.spec()).submatrix(0, 0, n - d, n);
    for (const Matrix& cand : enumerate_subspaces(t.spec(), n, n - d)) {
        if (!subspace_invariant(cand, t)) continue;
        if (rref(Matrix::vcat(w_rows, cand)).rank == n) return cand;
    }
    return std::nullopt;
}

/// Exhaustive semisimplicity: every invariant subspace admits an invariant
/// complement.  Guarded by the subspace-count cap rather than a fixed field
/// list; intended range is F_2/F_3/F_4 with n <= 4.
inline bool brute_force_semisimple(const MatrixTuple& t) {
    if (t.empty()) return true;
    const int n = t.dim();
    if (!t.spec().is_finite()) throw domain_error("brute_force_semisimple requires a finite field");
    if (n > 4 || t.spec().order() > 4) throw domain_error("brute_force_semisimple out of supported range");
    for (int d = 1; d < n; ++d)
        for (const Matrix& w : enumerate_subspaces(t.spec(), n, d)) {
            if (!subspace_invariant(w, t)) continue;
            if (!invariant_complement_bruteforce(w, t)) return false;
        }
    return true;
}

}  // namespace orbitlab
