#pragma once

// Module isomorphism (= simultaneous conjugacy of matrix tuples), full
// decomposition of semisimple modules into irreducible summands, and the
// isotypic decomposition.
//
// The isomorphism decision is sound in both directions:
//  - a returned witness is verified by substitution;
//  - "not isomorphic" comes either from an isomorphism invariant, from the
//    isotypic comparison of semisimple modules, or from an exhausted
//    coefficient grid whose size exceeds the per-variable degree of the
//    relevant determinant (so the generic intertwiner is singular over the
//    algebraic closure, and Nakayama's lemma transfers that to the base).

#include "orbitlab/algebra.hpp"

namespace orbitlab {

/// basis of {P : P s_i = t_i P for all i}
inline std::vector<Matrix> hom_space(const MatrixTuple& s, const MatrixTuple& t) {
    if (s.size() != t.size()) throw domain_error("hom_space: tuple length mismatch");
    if (s.dim() != t.dim() || s.spec() != t.spec()) throw domain_error("hom_space: shape/field mismatch");
    const int n = s.dim();
    const FieldSpec& F = s.spec();
    Matrix sys(static_cast<int>(s.size()) * n * n, n * n, F);
    for (size_t e = 0; e < s.size(); ++e) {
        const Matrix& S = s.entries[e];
        const Matrix& T = t.entries[e];
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < n; ++j) {
                int row = static_cast<int>(e) * n * n + a * n + j;
                // (P S)_{aj} - (T P)_{aj} = 0
                for (int b = 0; b < n; ++b) {
                    sys(row, a * n + b) += S(b, j);
                    sys(row, b * n + j) -= T(a, b);
                }
            }
    }
    std::vector<Matrix> out;
    for (const Matrix& k : kernel_basis(sys)) {
        Matrix p(n, n, F);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) p(a, b) = k(a * n + b, 0);
        out.push_back(p);
    }
    return out;
}

namespace detail {

/// column span of rad(span(t)) . F^n, as a canonical row-basis subspace
inline Subspace module_radical_subspace(const AlgebraHandle& h) {
    const int n = h.ambient();
    Matrix rows(0, n, h.spec());
    for (const Matrix& r : h.radical_basis) rows = Matrix::vcat(rows, r.transpose());
    if (rows.rows() == 0) return Subspace::zero(n, h.spec());
    return Subspace::span_rows(rows);
}

/// dims of the chain M >= rM >= r^2 M >= ...
inline std::vector<int> radical_chain_dims(const AlgebraHandle& h) {
    const int n = h.ambient();
    std::vector<int> dims{n};
    Subspace cur = Subspace::full(n, h.spec());
    while (true) {
        // r . cur
        Matrix rows(0, n, h.spec());
        for (const Matrix& r : h.radical_basis)
            for (int i = 0; i < cur.dim(); ++i)
                rows = Matrix::vcat(rows, (r * cur.basis().row(i).transpose()).transpose());
        Subspace next = rows.rows() ? Subspace::span_rows(rows) : Subspace::zero(n, h.spec());
        if (next.dim() == 0) {
            dims.push_back(0);
            break;
        }
        dims.push_back(next.dim());
        if (next.dim() == cur.dim()) break;  // cannot happen for a nilpotent ideal
        cur = next;
    }
    return dims;
}

/// projection onto a complement of the row-space `rad`, expressed in the
/// non-pivot standard coordinates; returns an (n - dim) x n matrix
inline Matrix quotient_projection(const Subspace& rad, int n, const FieldSpec& F) {
    std::vector<bool> is_pivot(n, false);
    {
        RrefResult rr = rref(rad.basis());
        for (int c : rr.pivots) is_pivot[c] = true;
    }
    int nbar = n - rad.dim();
    Matrix proj(nbar, n, F);
    // reduce each standard basis vector modulo rad, read off non-pivot coords
    for (int j = 0; j < n; ++j) {
        Matrix v(1, n, F);
        v(0, j) = FieldElement::one(F);
        // eliminate pivot coordinates with the rad basis rows
        for (int r = 0; r < rad.dim(); ++r) {
            // rad basis is rref: row r has a 1 in its pivot column
            int pc = -1;
            for (int c = 0; c < n; ++c)
                if (!rad.basis()(r, c).is_zero()) {
                    pc = c;
                    break;
                }
            FieldElement f = v(0, pc);
            if (f.is_zero()) continue;
            for (int c = 0; c < n; ++c) v(0, c) = v(0, c) - f * rad.basis()(r, c);
        }
        int out_row = 0;
        for (int c = 0; c < n; ++c) {
            if (is_pivot[c]) continue;
            proj(out_row, j) = v(0, c);
            ++out_row;
        }
    }
    return proj;
}

/// grid of n+1 distinct scalars used by the deterministic coefficient sweep
inline std::vector<FieldElement> grid_scalars(const FieldSpec& F, int count) {
    std::vector<FieldElement> out;
    if (F.is_rationals()) {
        for (int i = 0; i < count; ++i) out.push_back(FieldElement::from_int(F, i));
        return out;
    }
    if (F.order() < count) throw domain_error("field too small for the requested grid");
    std::vector<FieldElement> all = all_field_elements(F);
    out.assign(all.begin(), all.begin() + count);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// decomposition of semisimple modules

struct IrreducibleSummand {
    Matrix basis_cols;       // n x d, columns span the summand
    MatrixTuple restricted;  // action matrices on the summand in that basis
};

namespace detail {

/// restriction of the action to an invariant column span
inline MatrixTuple restrict_action(const MatrixTuple& t, const Matrix& cols) {
    const int d = cols.cols();
    std::vector<Matrix> out;
    for (const Matrix& m : t.entries) {
        Matrix r(d, d, t.spec());
        for (int j = 0; j < d; ++j) {
            auto sol = solve_linear(cols, m * cols.col(j));
            if (!sol) throw internal_error("restrict_action: subspace not invariant");
            for (int i = 0; i < d; ++i) r(i, j) = sol->particular(i, 0);
        }
        out.push_back(r);
    }
    return MatrixTuple::make(std::move(out), t.sl_constraint);
}

/// column basis of the submodule generated by the given columns
inline Matrix spin_columns(const MatrixTuple& t, const AlgebraHandle& alg, const Matrix& seed_cols) {
    const int n = t.dim();
    RowSpanAccumulator acc(n, t.spec());
    std::vector<Matrix> kept;
    for (int j = 0; j < seed_cols.cols(); ++j)
        for (const Matrix& b : alg.basis) {
            Matrix v = b * seed_cols.col(j);
            if (acc.add(v.transpose())) kept.push_back(v);
        }
    Matrix cols(n, static_cast<int>(kept.size()), t.spec());
    for (size_t j = 0; j < kept.size(); ++j)
        for (int i = 0; i < n; ++i) cols(i, static_cast<int>(j)) = kept[j](i, 0);
    return cols;
}

inline Matrix subspace_rows_to_cols(const Subspace& s) { return s.basis().transpose(); }

/// e = theta^j idempotent for the first j with theta^j = theta^{2j} (finite
/// fields; powers of a matrix are eventually periodic)
inline std::optional<Matrix> power_idempotent(const Matrix& theta, int cap = 200000) {
    Matrix tort = theta, hare = theta * theta;
    for (int j = 1; j <= cap; ++j) {
        if (tort == hare) return tort;
        tort = tort * theta;
        hare = hare * theta * theta;
    }
    return std::nullopt;
}

struct EigenvalueSearch {
    std::vector<FieldElement> roots;
    bool complete = false;  // true when `roots` provably lists every root in the field
};

/// roots of charpoly(theta) in the base field: complete enumeration over
/// small finite fields, rational root theorem over Q (complete while the
/// divisor enumeration stays small)
inline EigenvalueSearch eigenvalue_candidates(const Matrix& theta) {
    const FieldSpec& F = theta.spec();
    std::vector<FieldElement> cp = charpoly(theta);
    EigenvalueSearch out;
    auto eval = [&](const FieldElement& x) {
        FieldElement v = FieldElement::zero(F), pw = FieldElement::one(F);
        for (const FieldElement& c : cp) {
            v += c * pw;
            pw = pw * x;
        }
        return v;
    };
    if (F.is_finite()) {
        if (F.order() > 4096) return out;
        for (const FieldElement& x : all_field_elements(F))
            if (eval(x).is_zero()) out.roots.push_back(x);
        out.complete = true;
        return out;
    }
    // integer-scale the polynomial for the rational root theorem
    BigInt lcm = 1;
    for (const FieldElement& c : cp) {
        BigInt den = denominator(c.rational());
        lcm = lcm / gcd(lcm, den) * den;
    }
    std::vector<BigInt> ic;
    for (const FieldElement& c : cp) ic.push_back(static_cast<BigInt>(numerator(c.rational() * Rational(lcm))));
    while (!ic.empty() && ic.back() == 0) ic.pop_back();
    if (ic.size() <= 1) return out;
    if (ic.front() == 0) out.roots.push_back(FieldElement::zero(F));
    while (ic.front() == 0) ic.erase(ic.begin());
    auto abs_big = [](BigInt v) { return v < 0 ? -v : v; };
    BigInt a0 = abs_big(ic.front()), an = abs_big(ic.back());
    if (a0 > 1000000 || an > 1000000) return out;  // incomplete: divisors too many
    std::vector<BigInt> ps, qs;
    for (BigInt d = 1; d <= a0; ++d)
        if (a0 % d == 0) ps.push_back(d);
    for (BigInt d = 1; d <= an; ++d)
        if (an % d == 0) qs.push_back(d);
    for (const BigInt& p : ps)
        for (const BigInt& q : qs)
            for (int sign : {1, -1}) {
                FieldElement cand = FieldElement::from_rational(Rational(sign * p, q));
                if (eval(cand).is_zero() &&
                    std::find(out.roots.begin(), out.roots.end(), cand) == out.roots.end())
                    out.roots.push_back(cand);
            }
    out.complete = true;
    return out;
}

/// search for a proper nonzero submodule, as a column basis; nullopt means
/// none was found by the deterministic sweeps
inline std::optional<Matrix> find_proper_submodule(const MatrixTuple& t, const AlgebraHandle& alg) {
    const int n = t.dim();
    const FieldSpec& F = t.spec();
    auto proper = [&](const Matrix& cols) { return cols.cols() > 0 && cols.cols() < n; };

    // spin closures of standard basis vectors
    for (int i = 0; i < n; ++i) {
        Matrix seed(n, 1, F);
        seed(i, 0) = FieldElement::one(F);
        Matrix w = spin_columns(t, alg, seed);
        if (proper(w)) return w;
    }
    // spin closures of images and kernels of algebra elements
    for (const Matrix& a : alg.basis) {
        if (a.is_identity()) continue;
        Matrix w = spin_columns(t, alg, a);  // closure of the column space of a
        if (proper(w)) return w;
        auto kb = kernel_basis(a);
        if (!kb.empty() && static_cast<int>(kb.size()) < n) {
            Matrix seed(n, static_cast<int>(kb.size()), F);
            for (size_t j = 0; j < kb.size(); ++j)
                for (int i = 0; i < n; ++i) seed(i, static_cast<int>(j)) = kb[j](i, 0);
            Matrix wk = spin_columns(t, alg, seed);
            if (proper(wk)) return wk;
        }
    }
    // endomorphism sweeps: kernels, eigenspaces, power idempotents
    std::vector<Matrix> ends = hom_space(t, t);
    std::vector<Matrix> sweep = ends;
    for (size_t i = 0; i < ends.size() && sweep.size() < 80; ++i)
        for (size_t j = i + 1; j < ends.size() && sweep.size() < 80; ++j) sweep.push_back(ends[i] + ends[j]);
    for (const Matrix& theta : sweep) {
        if (theta.is_zero()) continue;
        auto kb = kernel_basis(theta);
        if (!kb.empty() && static_cast<int>(kb.size()) < n) {
            Matrix cols(n, static_cast<int>(kb.size()), F);
            for (size_t j = 0; j < kb.size(); ++j)
                for (int i = 0; i < n; ++i) cols(i, static_cast<int>(j)) = kb[j](i, 0);
            return cols;  // kernels of endomorphisms are submodules
        }
        for (const FieldElement& lam : eigenvalue_candidates(theta).roots) {
            Matrix shifted = theta - Matrix::identity(n, F).scaled(lam);
            auto eb = kernel_basis(shifted);
            if (!eb.empty() && static_cast<int>(eb.size()) < n) {
                Matrix cols(n, static_cast<int>(eb.size()), F);
                for (size_t j = 0; j < eb.size(); ++j)
                    for (int i = 0; i < n; ++i) cols(i, static_cast<int>(j)) = eb[j](i, 0);
                return cols;
            }
        }
        if (F.is_finite()) {
            auto e = power_idempotent(theta);
            if (e && !e->is_zero() && !e->is_identity() && (*e) * (*e) == *e) {
                RrefResult rr = rref(e->transpose());
                if (rr.rank > 0 && rr.rank < n)
                    return rr.matrix.submatrix(0, 0, rr.rank, n).transpose();  // im(e)
            }
        }
    }
    return std::nullopt;
}

/// invariant complement of the invariant column span W (pre: semisimple module)
inline Matrix invariant_complement(const MatrixTuple& t, const Matrix& w_cols) {
    const int n = t.dim();
    const FieldSpec& F = t.spec();
    const int d = w_cols.cols();
    // unknown endomorphism e with: e in End, e w = w for w in W, im(e) in W
    // rows collect all three linear condition families on vec(e)
    std::vector<Matrix> end_basis = hom_space(t, t);
    // param: e = sum x_k E_k over End basis; conditions: e*w_j = w_j ; im(e) subset W
    int m = static_cast<int>(end_basis.size());
    Subspace w_rows = Subspace::span_rows(w_cols.transpose());
    Matrix proj = quotient_projection(w_rows, n, F);  // vanishes exactly on W
    // equations: for each W column j: e w_j - w_j = 0  (n rows each)
    //            for each standard basis vector v: proj * (e v) = 0  ((n-d) rows each)
    int rows = d * n + n * proj.rows();
    Matrix sys(rows, m, F);
    Matrix rhs(rows, 1, F);
    int r0 = 0;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < m; ++k) {
            Matrix img = end_basis[k] * w_cols.col(j);
            for (int i = 0; i < n; ++i) sys(r0 + i, k) = img(i, 0);
        }
        for (int i = 0; i < n; ++i) rhs(r0 + i, 0) = w_cols(i, j);
        r0 += n;
    }
    for (int v = 0; v < n; ++v) {
        for (int k = 0; k < m; ++k) {
            Matrix img = proj * end_basis[k].col(v);
            for (int i = 0; i < proj.rows(); ++i) sys(r0 + i, k) = img(i, 0);
        }
        r0 += proj.rows();
    }
    auto sol = solve_linear(sys, rhs);
    if (!sol) throw internal_error("no invariant complement (module not semisimple?)");
    Matrix e(n, n, F);
    for (int k = 0; k < m; ++k)
        if (!sol->particular(k, 0).is_zero()) e = e + end_basis[k].scaled(sol->particular(k, 0));
    auto kb = kernel_basis(e);
    if (static_cast<int>(kb.size()) != n - d) throw internal_error("complement dimension mismatch");
    Matrix cols(n, n - d, F);
    for (size_t j = 0; j < kb.size(); ++j)
        for (int i = 0; i < n; ++i) cols(i, static_cast<int>(j)) = kb[j](i, 0);
    return cols;
}

inline bool end_ring_is_division_enumerable(const MatrixTuple& t) {
    std::vector<Matrix> ends = hom_space(t, t);
    const FieldSpec& F = t.spec();
    if (!F.is_finite()) return false;
    double total = 1;
    for (size_t i = 0; i < ends.size(); ++i) {
        total *= static_cast<double>(F.order());
        if (total > 200000) return false;
    }
    // enumerate all End elements; division <=> every nonzero one invertible
    std::vector<FieldElement> elems = all_field_elements(F);
    std::vector<size_t> idx(ends.size(), 0);
    long long count = 1;
    for (size_t i = 0; i < ends.size(); ++i) count *= F.order();
    for (long long code = 1; code < count; ++code) {
        long long v = code;
        Matrix theta(t.dim(), t.dim(), F);
        for (size_t i = 0; i < ends.size(); ++i) {
            const FieldElement& c = elems[v % F.order()];
            v /= F.order();
            if (!c.is_zero()) theta = theta + ends[i].scaled(c);
        }
        if (theta.is_zero()) continue;
        if (!invert(theta)) return false;
    }
    return true;
}

std::vector<IrreducibleSummand> decompose_cols(const MatrixTuple& t);

}  // namespace detail

/// Full decomposition of a semisimple module into irreducible summands.
/// Deterministic; throws internal_error if the sweep cannot certify a split
/// (not reachable on the supported instance classes).
inline std::vector<IrreducibleSummand> decompose_irreducible_summands(const MatrixTuple& t) {
    if (!is_semisimple_module(t)) throw domain_error("decompose: module is not semisimple");
    return detail::decompose_cols(t);
}

namespace detail {

inline std::vector<IrreducibleSummand> decompose_cols(const MatrixTuple& t) {
    const int n = t.dim();
    const FieldSpec& F = t.spec();
    if (n == 1) return {{Matrix::identity(1, F), t}};
    AlgebraHandle alg = span_algebra(t);
    if (alg.dim() == n * n) return {{Matrix::identity(n, F), t}};  // full matrix algebra acts irreducibly

    std::optional<Matrix> w = find_proper_submodule(t, alg);
    if (!w) {
        // certify irreducibility where we can
        std::vector<Matrix> ends = hom_space(t, t);
        if (ends.size() == 1) return {{Matrix::identity(n, F), t}};  // End = scalars
        if (end_ring_is_division_enumerable(t)) return {{Matrix::identity(n, F), t}};
        // cyclic algebra element with irreducible characteristic polynomial:
        // any proper submodule would force a proper factor (degree <= 3 over Q,
        // where the rational root test decides irreducibility)
        if (n <= 3) {
            for (const Matrix& a : alg.basis) {
                RowSpanAccumulator pw(n * n, F);
                Matrix acc = Matrix::identity(n, F);
                int mindeg = 0;
                while (pw.add(acc.vectorized_row())) {
                    ++mindeg;
                    acc = acc * a;
                }
                if (mindeg != n) continue;
                EigenvalueSearch ev = eigenvalue_candidates(a);
                if (ev.complete && ev.roots.empty()) return {{Matrix::identity(n, F), t}};
            }
        }
        throw internal_error("decompose: cannot certify irreducibility");
    }
    Matrix comp = invariant_complement(t, *w);
    std::vector<IrreducibleSummand> out;
    for (const Matrix& part : {*w, comp}) {
        MatrixTuple rest = restrict_action(t, part);
        for (const IrreducibleSummand& sub : decompose_cols(rest)) {
            IrreducibleSummand lifted;
            lifted.basis_cols = part * sub.basis_cols;
            lifted.restricted = sub.restricted;
            out.push_back(lifted);
        }
    }
    return out;
}

}  // namespace detail

struct IsotypicSummand {
    int irreducible_dim = 0;
    int multiplicity = 0;
    Matrix basis_cols;  // n x (dim*mult)
};

struct IsotypicDecomposition {
    std::vector<IsotypicSummand> summands;
    Matrix change_of_basis;  // n x n, columns adapted to the decomposition
    std::vector<IrreducibleSummand> irreducibles;
};

/// MeatAxe-style decomposition grouped by isomorphism type (deterministic sweeps)
inline IsotypicDecomposition isotypic_decomposition(const MatrixTuple& t) {
    std::vector<IrreducibleSummand> parts = decompose_irreducible_summands(t);
    const int n = t.dim();
    const FieldSpec& F = t.spec();
    IsotypicDecomposition out;
    std::vector<bool> used(parts.size(), false);
    for (size_t i = 0; i < parts.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> cls{i};
        used[i] = true;
        for (size_t j = i + 1; j < parts.size(); ++j) {
            if (used[j]) continue;
            if (parts[i].restricted.dim() != parts[j].restricted.dim()) continue;
            if (!hom_space(parts[i].restricted, parts[j].restricted).empty()) {
                cls.push_back(j);
                used[j] = true;
            }
        }
        IsotypicSummand s;
        s.irreducible_dim = parts[i].restricted.dim();
        s.multiplicity = static_cast<int>(cls.size());
        Matrix cols(n, 0, F);
        for (size_t j : cls) cols = Matrix::hcat(cols, parts[j].basis_cols);
        s.basis_cols = cols;
        out.summands.push_back(std::move(s));
    }
    Matrix cb(n, 0, F);
    for (const auto& s : out.summands) cb = Matrix::hcat(cb, s.basis_cols);
    if (!invert(cb)) throw internal_error("isotypic change of basis is singular");
    out.change_of_basis = cb;
    out.irreducibles = std::move(parts);
    return out;
}

// ---------------------------------------------------------------------------
// module isomorphism

struct IsoOutcome {
    std::optional<Matrix> witness;
    std::string reason;          // populated when not isomorphic
    long long combos_tried = 0;
    bool extended_field = false;

    bool isomorphic() const { return witness.has_value(); }
};

namespace detail {

inline IsoOutcome modules_isomorphic_impl(const MatrixTuple& s, const MatrixTuple& t, bool allow_extend);

/// the semisimple branch: compare isotypic structure and build a block witness
inline IsoOutcome isomorphic_semisimple(const MatrixTuple& s, const MatrixTuple& t) {
    IsoOutcome out;
    std::vector<IrreducibleSummand> ds = decompose_irreducible_summands(s);
    std::vector<IrreducibleSummand> dt = decompose_irreducible_summands(t);
    if (ds.size() != dt.size()) {
        out.reason = "different number of irreducible summands";
        return out;
    }
    const int n = s.dim();
    const FieldSpec& F = s.spec();
    std::vector<bool> used(dt.size(), false);
    std::vector<int> match(ds.size(), -1);
    std::vector<Matrix> blocks;
    for (size_t i = 0; i < ds.size(); ++i) {
        for (size_t j = 0; j < dt.size(); ++j) {
            if (used[j] || ds[i].restricted.dim() != dt[j].restricted.dim()) continue;
            std::vector<Matrix> hom = hom_space(ds[i].restricted, dt[j].restricted);
            if (hom.empty()) continue;
            Matrix h = hom[0];
            if (!invert(h)) throw internal_error("nonzero hom between irreducibles is singular");
            used[j] = true;
            match[i] = static_cast<int>(j);
            blocks.push_back(h);
            break;
        }
        if (match[i] < 0) {
            out.reason = "composition factors differ";
            return out;
        }
    }
    // assemble the witness: P maps s-adapted coordinates through the blocks
    Matrix xs(n, 0, F), xt(n, 0, F);
    for (size_t i = 0; i < ds.size(); ++i) {
        xs = Matrix::hcat(xs, ds[i].basis_cols);
        xt = Matrix::hcat(xt, dt[match[i]].basis_cols * blocks[i]);
    }
    auto xsi = invert(xs);
    if (!xsi) throw internal_error("adapted basis singular");
    Matrix P = xt * *xsi;
    for (size_t e = 0; e < s.size(); ++e)
        if (P * s.entries[e] != t.entries[e] * P) throw internal_error("assembled witness fails to intertwine");
    if (!invert(P)) throw internal_error("assembled witness singular");
    out.witness = P;
    return out;
}

inline IsoOutcome modules_isomorphic_impl(const MatrixTuple& s, const MatrixTuple& t, bool allow_extend) {
    IsoOutcome out;
    const int n = s.dim();
    const FieldSpec& F = s.spec();

    if (s == t) {
        out.witness = Matrix::identity(n, F);
        return out;
    }
    std::vector<Matrix> W = hom_space(s, t);
    if (W.empty()) {
        out.reason = "hom space is zero";
        return out;
    }
    // isomorphism invariants (sound quick negatives)
    size_t es = hom_space(s, s).size(), et = hom_space(t, t).size(), dts = hom_space(t, s).size();
    if (W.size() != es || es != et || dts != es) {
        out.reason = "hom dimension invariants differ";
        return out;
    }
    AlgebraHandle as = span_algebra(s), at = span_algebra(t);
    if (as.dim() != at.dim()) {
        out.reason = "spanned algebra dimensions differ";
        return out;
    }
    if (radical_chain_dims(as) != radical_chain_dims(at)) {
        out.reason = "radical series of the modules differ";
        return out;
    }

    if (as.semisimple()) return isomorphic_semisimple(s, t);

    // Nakayama reduction: phi invertible <=> phi surjective onto N/rad.N
    Subspace radN = module_radical_subspace(at);
    int nbar = n - radN.dim();
    Matrix proj = quotient_projection(radN, n, F);
    std::vector<Matrix> pullback;
    {
        RowSpanAccumulator acc(nbar * n, F);
        for (const Matrix& P : W)
            if (acc.add((proj * P).vectorized_row())) pullback.push_back(P);
    }
    int dhat = static_cast<int>(pullback.size());
    if (dhat == 0) {
        out.reason = "no intertwiner survives modulo the radical";
        return out;
    }

    // grid sweep with n̄+1 scalars per coordinate
    if (F.is_finite() && F.order() < nbar + 1) {
        if (!allow_extend) throw internal_error("field too small and extension disabled");
        int m = 1;
        long long q = F.order();
        while (q < nbar + 1) {
            q *= F.order();
            ++m;
        }
        FieldSpec ext = FieldSpec::finite(F.p(), F.k() * m);
        IsoOutcome sub = modules_isomorphic_impl(s.embedded(ext), t.embedded(ext), false);
        sub.extended_field = true;
        return sub;
    }
    std::vector<FieldElement> S = grid_scalars(F, nbar + 1);
    double budget = 1;
    for (int i = 0; i < dhat; ++i) {
        budget *= static_cast<double>(S.size());
        if (budget > 2000000.0)
            throw internal_error("isomorphism search budget exceeded (instance beyond supported scale)");
    }
    long long total = 1;
    for (int i = 0; i < dhat; ++i) total *= static_cast<long long>(S.size());
    for (long long code = 1; code < total; ++code) {
        long long v = code;
        Matrix phi(n, n, F);
        for (int i = 0; i < dhat; ++i) {
            const FieldElement& c = S[v % S.size()];
            v /= S.size();
            if (!c.is_zero()) phi = phi + pullback[i].scaled(c);
        }
        ++out.combos_tried;
        if (rank(proj * phi) != nbar) continue;
        auto phii = invert(phi);
        if (!phii) throw internal_error("Nakayama lift failed to be invertible");
        for (size_t e = 0; e < s.size(); ++e)
            if (phi * s.entries[e] != t.entries[e] * phi) throw internal_error("witness fails to intertwine");
        out.witness = phi;
        return out;
    }
    out.reason = "no invertible intertwiner over the closure (coefficient grid exhausted)";
    return out;
}

}  // namespace detail

/// Decide simultaneous conjugacy of two tuples and produce a witness or a
/// sound non-isomorphism record.  The witness may live in a field extension
/// when the base field is too small for the deterministic grid.
inline IsoOutcome modules_isomorphic(const MatrixTuple& s, const MatrixTuple& t) {
    if (s.size() != t.size()) throw domain_error("modules_isomorphic: tuple length mismatch");
    if (s.empty()) throw domain_error("modules_isomorphic: empty tuples");
    if (s.dim() != t.dim() || s.spec() != t.spec()) throw domain_error("modules_isomorphic: shape/field mismatch");
    return detail::modules_isomorphic_impl(s, t, true);
}

}  // namespace orbitlab
