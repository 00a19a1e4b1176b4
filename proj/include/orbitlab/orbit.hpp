#pragma once

// Closed-orbit decisions with self-checkable certificates.
//
// Conjugation by the full group is decided exactly: the orbit is closed iff
// the natural module of the spanned algebra is semisimple, and a failure is
// certified by a destabilizing cocharacter read off the radical series of
// the module (the limit is the associated graded module, which is semisimple
// and therefore never conjugate to a non-semisimple point).
//
// Subgroup actions use a bounded Hilbert-Mumford search over a torus of the
// subgroup: for every candidate cocharacter whose limit exists, conjugacy
// back to the point is tested inside R_u(P_lambda) ∩ H by an exact affine
// solve.  Exhaustion yields the explicit NoDestabilizerUpToBound verdict,
// never Closed.

#include "orbitlab/cochar.hpp"
#include "orbitlab/module_iso.hpp"
#include "orbitlab/torus.hpp"

namespace orbitlab {

// ---------------------------------------------------------------------------
// subgroups with decidable membership

struct SubgroupSpec {
    enum class Kind { FullGL, FullSL, DiagonalTorus, BlockSubgroup, CentralizerUnits, FiniteList };

    Kind kind = Kind::FullGL;
    std::vector<int> block_sizes;        // BlockSubgroup
    std::optional<MatrixTuple> tuple;    // CentralizerUnits
    std::vector<Matrix> elements;        // FiniteList

    static SubgroupSpec full_gl() { return {}; }
    static SubgroupSpec full_sl() {
        SubgroupSpec s;
        s.kind = Kind::FullSL;
        return s;
    }
    static SubgroupSpec diagonal_torus() {
        SubgroupSpec s;
        s.kind = Kind::DiagonalTorus;
        return s;
    }
    static SubgroupSpec block(std::vector<int> sizes) {
        SubgroupSpec s;
        s.kind = Kind::BlockSubgroup;
        s.block_sizes = std::move(sizes);
        return s;
    }
    static SubgroupSpec centralizer_units(MatrixTuple t) {
        SubgroupSpec s;
        s.kind = Kind::CentralizerUnits;
        s.tuple = std::move(t);
        return s;
    }
    static SubgroupSpec finite_list(std::vector<Matrix> xs) {
        SubgroupSpec s;
        s.kind = Kind::FiniteList;
        s.elements = std::move(xs);
        return s;
    }

    bool contains(const Matrix& g) const {
        if (!g.is_square() || !invert(g)) return false;
        switch (kind) {
            case Kind::FullGL:
                return true;
            case Kind::FullSL:
                return det(g).is_one();
            case Kind::DiagonalTorus:
                for (int i = 0; i < g.rows(); ++i)
                    for (int j = 0; j < g.cols(); ++j)
                        if (i != j && !g(i, j).is_zero()) return false;
                return true;
            case Kind::BlockSubgroup:
                return matrix_is_block_diagonal(g, block_sizes);
            case Kind::CentralizerUnits:
                for (const Matrix& m : tuple->entries)
                    if (g * m != m * g) return false;
                return true;
            case Kind::FiniteList:
                return std::find(elements.begin(), elements.end(), g) != elements.end();
        }
        return false;
    }

    std::string name() const {
        switch (kind) {
            case Kind::FullGL: return "GL";
            case Kind::FullSL: return "SL";
            case Kind::DiagonalTorus: return "diagonal-torus";
            case Kind::BlockSubgroup: return "block-subgroup";
            case Kind::CentralizerUnits: return "centralizer-units";
            case Kind::FiniteList: return "finite-list";
        }
        return "?";
    }
};

/// symbolic membership of a cocharacter image in a subgroup: decided on the
/// weight projectors, never by sampling t-values
inline bool subgroup_contains_cocharacter(const SubgroupSpec& H, const Cocharacter& lam) {
    switch (H.kind) {
        case SubgroupSpec::Kind::FullGL:
            return true;
        case SubgroupSpec::Kind::FullSL:
            return lam.weight_sum() == 0;
        case SubgroupSpec::Kind::DiagonalTorus: {
            for (const auto& [d, c] : lam.component_matrices())
                for (int i = 0; i < c.rows(); ++i)
                    for (int j = 0; j < c.cols(); ++j)
                        if (i != j && !c(i, j).is_zero()) return false;
            return true;
        }
        case SubgroupSpec::Kind::BlockSubgroup:
            return cocharacter_in_block_subgroup(lam, H.block_sizes);
        case SubgroupSpec::Kind::CentralizerUnits: {
            for (const auto& [d, c] : lam.component_matrices())
                for (const Matrix& m : H.tuple->entries)
                    if (c * m != m * c) return false;
            return true;
        }
        case SubgroupSpec::Kind::FiniteList:
            return lam.is_trivial();
    }
    return false;
}

// ---------------------------------------------------------------------------
// tori inside subgroups

/// A split torus given by a shared eigenbasis and integer weight rows; the
/// lattice vector w yields the cocharacter with ambient weights sum_c w_c row_c.
struct TorusOfSubgroup {
    Matrix base_change;                            // n x n invertible
    std::vector<std::vector<long long>> weight_rows;  // rank rows of length n
    std::string description;

    int rank() const { return static_cast<int>(weight_rows.size()); }
    int ambient() const { return base_change.rows(); }

    std::vector<long long> ambient_weights(const std::vector<long long>& w) const {
        if (static_cast<int>(w.size()) != rank()) throw domain_error("torus lattice vector of wrong rank");
        std::vector<long long> out(ambient(), 0);
        for (int c = 0; c < rank(); ++c)
            for (int i = 0; i < ambient(); ++i) out[i] += w[c] * weight_rows[c][i];
        return out;
    }

    Cocharacter combine(const std::vector<long long>& w) const {
        return Cocharacter(base_change, ambient_weights(w));
    }

    /// true when the scalar cocharacter (all ambient weights 1) lies in the lattice
    bool contains_center() const {
        std::vector<long long> ones(rank(), 1);
        std::vector<long long> amb = ambient_weights(ones);
        return std::all_of(amb.begin(), amb.end(), [](long long v) { return v == 1; });
    }
};

/// standard diagonal torus of GL_n
inline TorusOfSubgroup standard_diagonal_torus(int n, const FieldSpec& F) {
    TorusOfSubgroup t;
    t.base_change = Matrix::identity(n, F);
    for (int i = 0; i < n; ++i) {
        std::vector<long long> row(n, 0);
        row[i] = 1;
        t.weight_rows.push_back(row);
    }
    t.description = "standard diagonal torus";
    return t;
}

/// Maximal split torus of the centralizer of a semisimple tuple: one
/// cocharacter scaling each irreducible summand of the module.
inline TorusOfSubgroup torus_of_centralizer(const MatrixTuple& t) {
    if (!is_semisimple_module(t)) throw domain_error("torus_of_centralizer: module not semisimple");
    IsotypicDecomposition dec = isotypic_decomposition(t);
    const int n = t.dim();
    TorusOfSubgroup torus;
    torus.base_change = Matrix(n, 0, t.spec());
    int col = 0;
    std::vector<std::pair<int, int>> ranges;
    for (const IrreducibleSummand& s : dec.irreducibles) {
        torus.base_change = Matrix::hcat(torus.base_change, s.basis_cols);
        ranges.emplace_back(col, s.basis_cols.cols());
        col += s.basis_cols.cols();
    }
    if (!invert(torus.base_change)) throw internal_error("torus base change singular");
    for (const auto& [start, len] : ranges) {
        std::vector<long long> row(n, 0);
        for (int i = 0; i < len; ++i) row[start + i] = 1;
        torus.weight_rows.push_back(row);
    }
    torus.description = "maximal split torus of the centralizer (one factor per irreducible summand)";
    // each basis cocharacter centralizes the tuple (symbolic check)
    SubgroupSpec C = SubgroupSpec::centralizer_units(t);
    for (int c = 0; c < torus.rank(); ++c) {
        std::vector<long long> e(torus.rank(), 0);
        e[c] = 1;
        if (!subgroup_contains_cocharacter(C, torus.combine(e)))
            throw internal_error("centralizer torus fails to centralize");
    }
    return torus;
}

/// default torus used by searches for a given subgroup
inline TorusOfSubgroup default_torus(const SubgroupSpec& H, int n, const FieldSpec& F) {
    switch (H.kind) {
        case SubgroupSpec::Kind::FullGL:
        case SubgroupSpec::Kind::FullSL:
        case SubgroupSpec::Kind::DiagonalTorus:
        case SubgroupSpec::Kind::BlockSubgroup:
            return standard_diagonal_torus(n, F);
        case SubgroupSpec::Kind::CentralizerUnits:
            return torus_of_centralizer(*H.tuple);
        case SubgroupSpec::Kind::FiniteList: {
            TorusOfSubgroup t;
            t.base_change = Matrix::identity(n, F);
            t.description = "trivial torus (finite subgroup)";
            return t;
        }
    }
    throw domain_error("unknown subgroup kind");
}

// ---------------------------------------------------------------------------
// certificates

enum class Verdict { Closed, NotClosed, NoDestabilizerUpToBound };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Closed: return "Closed";
        case Verdict::NotClosed: return "NotClosed";
        case Verdict::NoDestabilizerUpToBound: return "NoDestabilizerUpToBound";
    }
    return "?";
}

struct SemisimplicityRecord {
    int algebra_dim = 0;
    int radical_dim = 0;
};

struct NonConjugacyRecord {
    std::string kind;    // "module-non-isomorphism" or "unipotent-system-inconsistent"
    std::string detail;
};

struct Certificate {
    Verdict verdict = Verdict::Closed;
    ActionInstance instance;
    std::optional<SubgroupSpec> subgroup;  // absent = full group of the instance
    std::optional<Cocharacter> destabilizer;
    std::optional<Point> limit_value;
    std::optional<NonConjugacyRecord> nonconjugacy;
    std::optional<SemisimplicityRecord> semisimplicity;
    std::optional<int> search_bound;
    std::optional<TorusOfSubgroup> torus_used;
    long long seed = 0;
};

// ---------------------------------------------------------------------------
// conjugacy back under R_u(P_lambda) ∩ H

namespace detail {

/// basis of the allowed strictly-upper directions for u = 1 + N in lambda's
/// eigenbasis, intersected with the linear conditions of H
inline std::vector<Matrix> ru_direction_basis(const Cocharacter& lam, const SubgroupSpec& H) {
    const int n = lam.ambient();
    const FieldSpec& F = lam.spec();
    std::vector<Matrix> dirs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (lam.weights()[i] > lam.weights()[j]) {
                Matrix e(n, n, F);
                e(i, j) = FieldElement::one(F);
                dirs.push_back(lam.base_change() * e * lam.base_change_inverse());
            }
    if (dirs.empty()) return dirs;
    // subgroup linear conditions on N
    std::vector<std::function<Matrix(const Matrix&)>> conds;  // must map N to zero
    switch (H.kind) {
        case SubgroupSpec::Kind::FullGL:
        case SubgroupSpec::Kind::FullSL:
            break;
        case SubgroupSpec::Kind::DiagonalTorus:
            conds.push_back([](const Matrix& N) {
                Matrix off = N;
                for (int i = 0; i < N.rows(); ++i) off(i, i) = FieldElement::zero(N.spec());
                return off;  // off-diagonal part must vanish
            });
            break;
        case SubgroupSpec::Kind::BlockSubgroup: {
            std::vector<int> sizes = H.block_sizes;
            conds.push_back([sizes](const Matrix& N) {
                Matrix out = N;
                int r0 = 0;
                for (int s : sizes) {
                    for (int i = r0; i < r0 + s; ++i)
                        for (int j = r0; j < r0 + s; ++j) out(i, j) = FieldElement::zero(N.spec());
                    r0 += s;
                }
                return out;  // entries outside the blocks must vanish
            });
            break;
        }
        case SubgroupSpec::Kind::CentralizerUnits: {
            MatrixTuple t = *H.tuple;
            for (const Matrix& m : t.entries)
                conds.push_back([m](const Matrix& N) { return N * m - m * N; });
            break;
        }
        case SubgroupSpec::Kind::FiniteList:
            throw domain_error("finite-list subgroups are handled by enumeration");
    }
    if (conds.empty()) return dirs;
    const int d = static_cast<int>(dirs.size());
    int rows_per = n * n;
    Matrix sys(static_cast<int>(conds.size()) * rows_per, d, F);
    for (size_t ci = 0; ci < conds.size(); ++ci)
        for (int k = 0; k < d; ++k) {
            Matrix img = conds[ci](dirs[k]);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    sys(static_cast<int>(ci) * rows_per + i * n + j, k) = img(i, j);
        }
    std::vector<Matrix> out;
    for (const Matrix& kvec : kernel_basis(sys)) {
        Matrix N(n, n, F);
        for (int k = 0; k < d; ++k)
            if (!kvec(k, 0).is_zero()) N = N + dirs[k].scaled(kvec(k, 0));
        out.push_back(N);
    }
    return out;
}

/// collect the linear equations "apply(1+N, x) = target" on the coefficient
/// vector of N over the direction basis
inline void linearize_transport(const Point& x, const Point& target, const std::vector<Matrix>& dirs,
                                std::vector<std::vector<FieldElement>>& rows, std::vector<FieldElement>& rhs) {
    const FieldSpec& F = point_spec(x);
    if (x.is_vector()) {
        // (1+N)v = v'  =>  N v = v' - v
        const Matrix& v = x.as_vector();
        const Matrix& vp = target.as_vector();
        for (int i = 0; i < v.rows(); ++i) {
            std::vector<FieldElement> row;
            row.reserve(dirs.size());
            for (const Matrix& d : dirs) row.push_back((d * v)(i, 0));
            rows.push_back(std::move(row));
            rhs.push_back(vp(i, 0) - v(i, 0));
        }
    } else if (x.is_tuple()) {
        // (1+N) m = m' (1+N)  =>  N m - m' N = m' - m
        const MatrixTuple& t = x.as_tuple();
        const MatrixTuple& tp = target.as_tuple();
        for (size_t e = 0; e < t.size(); ++e) {
            const Matrix& m = t.entries[e];
            const Matrix& mp = tp.entries[e];
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) {
                    std::vector<FieldElement> row;
                    row.reserve(dirs.size());
                    for (const Matrix& d : dirs) row.push_back((d * m - mp * d)(i, j));
                    rows.push_back(std::move(row));
                    rhs.push_back(mp(i, j) - m(i, j));
                }
        }
    } else {
        linearize_transport(x.left(), target.left(), dirs, rows, rhs);
        linearize_transport(x.right(), target.right(), dirs, rows, rhs);
    }
    (void)F;
}

}  // namespace detail

/// Witness u in R_u(P_lambda) ∩ H with u . x = lim_{t->0} lambda(t).x, or
/// nullopt when the affine system is inconsistent.
inline std::optional<Matrix> ru_conjugacy_back(const ActionInstance& x, const Cocharacter& lam,
                                               const SubgroupSpec& H) {
    LimitOutcome lo = limit(x, lam);
    if (!lo.exists) throw domain_error("ru_conjugacy_back: limit does not exist");
    const Point& target = *lo.value;
    const int n = lam.ambient();
    const FieldSpec& F = lam.spec();

    if (H.kind == SubgroupSpec::Kind::FiniteList) {
        for (const Matrix& u : H.elements)
            if (ru_p_lambda_contains(u, lam) && apply_group(u, x.point) == target) return u;
        return std::nullopt;
    }

    std::vector<Matrix> dirs = detail::ru_direction_basis(lam, H);
    if (dirs.empty()) {
        if (x.point == target) return Matrix::identity(n, F);
        return std::nullopt;
    }
    std::vector<std::vector<FieldElement>> rows;
    std::vector<FieldElement> rhs;
    detail::linearize_transport(x.point, target, dirs, rows, rhs);
    Matrix sys(static_cast<int>(rows.size()), static_cast<int>(dirs.size()), F);
    Matrix b(static_cast<int>(rows.size()), 1, F);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < dirs.size(); ++j) sys(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
        b(static_cast<int>(i), 0) = rhs[i];
    }
    auto sol = solve_linear(sys, b);
    if (!sol) return std::nullopt;
    Matrix N(n, n, F);
    for (size_t k = 0; k < dirs.size(); ++k)
        if (!sol->particular(static_cast<int>(k), 0).is_zero())
            N = N + dirs[k].scaled(sol->particular(static_cast<int>(k), 0));
    Matrix u = Matrix::identity(n, F) + N;
    if (!ru_p_lambda_contains(u, lam)) throw internal_error("transport witness left R_u(P_lambda)");
    if (!H.contains(u)) throw internal_error("transport witness left the subgroup");
    if (apply_group(u, x.point) != target) throw internal_error("transport witness fails to move x to the limit");
    // cross-check via the fixed-point criterion
    auto [lhs, rhs_flag] = check_conjfixed(x, lam, u);
    if (!lhs || !rhs_flag) throw internal_error("fixed-point criterion violated by transport witness");
    return u;
}

// ---------------------------------------------------------------------------
// exact decision for full-group conjugation

namespace detail {

/// extend the row-space basis `inner` to `outer`, returning only the new rows
inline std::vector<Matrix> extend_basis_rows(const Subspace& inner, const Subspace& outer) {
    RowSpanAccumulator acc(inner.ambient(), inner.spec());
    for (int i = 0; i < inner.dim(); ++i) acc.add(inner.basis().row(i));
    std::vector<Matrix> added;
    for (int i = 0; i < outer.dim(); ++i) {
        Matrix r = outer.basis().row(i);
        if (acc.add(r)) added.push_back(r);
    }
    return added;
}

/// destabilizer from the radical series flag of a non-semisimple module:
/// deeper radical layers get larger weights, normalized to a primitive
/// zero-sum vector (central shifts act trivially on conjugation instances)
inline Cocharacter radical_flag_destabilizer(const MatrixTuple& t, const AlgebraHandle& alg) {
    const int n = t.dim();
    const FieldSpec& F = t.spec();
    // chain of column spans r^k . M, stored as row spaces
    std::vector<Subspace> chain{Subspace::full(n, F)};
    while (true) {
        const Subspace& cur = chain.back();
        Matrix rows(0, n, F);
        for (const Matrix& r : alg.radical_basis)
            for (int i = 0; i < cur.dim(); ++i)
                rows = Matrix::vcat(rows, (r * cur.basis().row(i).transpose()).transpose());
        Subspace next = rows.rows() ? Subspace::span_rows(rows) : Subspace::zero(n, F);
        if (next.dim() == 0) break;
        chain.push_back(next);
    }
    const int s = static_cast<int>(chain.size());  // layers 0..s-1, deeper = larger index
    if (s < 2) throw internal_error("radical flag trivial for a non-semisimple module");
    // adapted basis columns with per-column layer index
    std::vector<Matrix> cols;
    std::vector<int> layer_of;
    for (int ell = s - 1; ell >= 0; --ell) {
        Subspace inner = (ell + 1 < s) ? chain[ell + 1] : Subspace::zero(n, F);
        for (const Matrix& row : extend_basis_rows(inner, chain[ell])) {
            cols.push_back(row.transpose());
            layer_of.push_back(ell);
        }
    }
    Matrix g(n, n, F);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = cols[j](i, 0);
    // weights: layer ell gets 2*ell - (s-1); then shift to zero sum and make primitive
    std::vector<long long> w(n);
    long long sum = 0;
    for (int j = 0; j < n; ++j) {
        w[j] = 2LL * layer_of[j] - (s - 1);
        sum += w[j];
    }
    for (auto& v : w) v = static_cast<long long>(n) * v - sum;
    long long gcd_all = 0;
    for (long long v : w) gcd_all = std::gcd(gcd_all, v < 0 ? -v : v);
    if (gcd_all > 1)
        for (auto& v : w) v /= gcd_all;
    return Cocharacter(g, w);
}

}  // namespace detail

/// Exact closed-orbit decision for the conjugation action of the full group.
inline Certificate is_orbit_closed_full(const MatrixTuple& t) {
    Certificate cert;
    if (t.empty()) {
        cert.verdict = Verdict::Closed;
        cert.instance.ambient_dim = 0;
        cert.instance.point = Point::tuple(MatrixTuple{});
        cert.semisimplicity = SemisimplicityRecord{0, 0};
        return cert;
    }
    cert.instance = ActionInstance::conjugation(t);
    AlgebraHandle alg = span_algebra(t);
    if (alg.semisimple()) {
        cert.verdict = Verdict::Closed;
        cert.semisimplicity = SemisimplicityRecord{alg.dim(), 0};
        return cert;
    }
    Cocharacter lam = detail::radical_flag_destabilizer(t, alg);
    if (t.sl_constraint && lam.weight_sum() != 0) throw internal_error("flag destabilizer not in SL");
    LimitOutcome lo = limit(cert.instance, lam);
    if (!lo.exists) throw internal_error("flag destabilizer limit does not exist");
    IsoOutcome iso = modules_isomorphic(t, lo.value->as_tuple());
    if (iso.isomorphic()) throw internal_error("graded limit is conjugate to a non-semisimple point");
    cert.verdict = Verdict::NotClosed;
    cert.destabilizer = lam;
    cert.limit_value = lo.value;
    cert.nonconjugacy = NonConjugacyRecord{"module-non-isomorphism", iso.reason};
    cert.semisimplicity = SemisimplicityRecord{alg.dim(), static_cast<int>(alg.radical_basis.size())};
    return cert;
}

// ---------------------------------------------------------------------------
// bounded destabilizer search over a torus

namespace detail {

/// primitive lattice vectors with linf norm <= bound, ordered by norm layer
/// then descending lexicographic order (deterministic first-hit selection)
inline std::vector<std::vector<long long>> candidate_lattice_vectors(int rank, int bound) {
    std::vector<std::vector<long long>> out;
    if (rank == 0) return out;
    for (int layer = 1; layer <= bound; ++layer) {
        std::vector<std::vector<long long>> in_layer;
        std::vector<long long> v(rank, -layer);
        while (true) {
            long long linf = 0, g = 0;
            for (long long c : v) {
                linf = std::max(linf, c < 0 ? -c : c);
                g = std::gcd(g, c < 0 ? -c : c);
            }
            if (linf == layer && g == 1) in_layer.push_back(v);
            int i = rank - 1;
            while (i >= 0 && v[i] == layer) {
                v[i] = -layer;
                --i;
            }
            if (i < 0) break;
            ++v[i];
        }
        std::sort(in_layer.begin(), in_layer.end(),
                  [](const auto& a, const auto& b) { return a > b; });
        out.insert(out.end(), in_layer.begin(), in_layer.end());
    }
    return out;
}

}  // namespace detail

/// Bounded Hilbert-Mumford search: enumerate primitive lattice vectors in the
/// torus up to the bound; the first cocharacter whose limit exists and cannot
/// be conjugated back inside R_u(P_lambda) ∩ H certifies NotClosed.
inline Certificate destabilizer_search(const ActionInstance& x, const SubgroupSpec& H,
                                       const TorusOfSubgroup& torus, int bound) {
    if (bound < 1) throw domain_error("destabilizer_search: bound must be >= 1");
    if (torus.ambient() != x.ambient_dim) throw domain_error("destabilizer_search: torus/instance mismatch");
    // torus cocharacters must lie in the subgroup (SL sum constraints are
    // enforced per candidate below, so check against the GL form here)
    SubgroupSpec Hcheck = H.kind == SubgroupSpec::Kind::FullSL ? SubgroupSpec::full_gl() : H;
    for (int c = 0; c < torus.rank(); ++c) {
        std::vector<long long> e(torus.rank(), 0);
        e[c] = 1;
        if (!subgroup_contains_cocharacter(Hcheck, torus.combine(e)))
            throw domain_error("torus does not lie in the subgroup");
    }

    Certificate cert;
    cert.instance = x;
    cert.subgroup = H;
    cert.search_bound = bound;
    cert.torus_used = torus;

    const bool conjugation_like = x.kind() != ActionKind::LinearOnVector;
    const bool quotient_center = conjugation_like && torus.contains_center();

    for (const auto& w : detail::candidate_lattice_vectors(torus.rank(), bound)) {
        std::vector<long long> amb = torus.ambient_weights(w);
        if (std::all_of(amb.begin(), amb.end(), [](long long v) { return v == 0; })) continue;
        long long amb_sum = std::accumulate(amb.begin(), amb.end(), 0LL);
        if (x.sl_constraint && amb_sum != 0) continue;            // must land in SL
        if (!x.sl_constraint && quotient_center && amb_sum != 0) continue;  // canonical rep mod center
        Cocharacter lam = torus.combine(w);
        LimitOutcome lo = limit(x, lam);
        if (!lo.exists) continue;
        if (*lo.value == x.point) continue;  // lambda fixes x
        std::optional<Matrix> u = ru_conjugacy_back(x, lam, H);
        if (u) continue;
        cert.verdict = Verdict::NotClosed;
        cert.destabilizer = lam;
        cert.limit_value = lo.value;
        cert.nonconjugacy = NonConjugacyRecord{
            "unipotent-system-inconsistent",
            "no u in R_u(P_lambda) ∩ " + H.name() + " solves u.x = limit"};
        return cert;
    }
    cert.verdict = Verdict::NoDestabilizerUpToBound;
    return cert;
}

// ---------------------------------------------------------------------------
// theorem-level checks

struct TwoVarietiesReport {
    Certificate hx;      // H.x with H = centralizer units of y
    Certificate ky;      // K.y with K = centralizer units of x
    Certificate joint;   // G.(x,y) as the concatenated tuple
    bool contradiction = false;
    std::string note;
};

/// Consistency of the three closedness statements attached to a pair of
/// points with closed full-group orbits.  Bounded searches give
/// semi-decisions; only a certified disagreement counts as a contradiction.
inline TwoVarietiesReport two_varieties_check(const MatrixTuple& x, const MatrixTuple& y, int bound) {
    Certificate cx = is_orbit_closed_full(x);
    Certificate cy = is_orbit_closed_full(y);
    if (cx.verdict != Verdict::Closed || cy.verdict != Verdict::Closed)
        throw domain_error("two_varieties_check: both full orbits must be closed");

    TwoVarietiesReport rep;
    SubgroupSpec H = SubgroupSpec::centralizer_units(y);
    SubgroupSpec K = SubgroupSpec::centralizer_units(x);
    rep.hx = destabilizer_search(ActionInstance::conjugation(x), H, torus_of_centralizer(y), bound);
    rep.ky = destabilizer_search(ActionInstance::conjugation(y), K, torus_of_centralizer(x), bound);
    rep.joint = is_orbit_closed_full(MatrixTuple::concat(x, y));

    const bool joint_closed = rep.joint.verdict == Verdict::Closed;
    const bool hx_not = rep.hx.verdict == Verdict::NotClosed;
    const bool ky_not = rep.ky.verdict == Verdict::NotClosed;
    if (joint_closed && (hx_not || ky_not)) {
        rep.contradiction = true;
        rep.note = "joint orbit closed but a side search certified NotClosed";
    } else if (!joint_closed && !hx_not && !ky_not) {
        rep.note = "joint not closed; side searches inconclusive at this bound";
    } else {
        rep.note = "consistent";
    }
    return rep;
}

struct HtoGReport {
    Certificate full;                    // exact verdict for G.x
    std::optional<Certificate> search;   // search in the centralizer torus when G.x is not closed
    bool applicable = false;             // G.x not closed, so the theorem predicts a destabilizer
    bool found = false;
};

/// Contrapositive check of "H.x closed => G.x closed" for H containing the
/// centralizer of a completely reducible A inside the stabilizer: when G.x is
/// not closed, a destabilizer must exist inside Y(C_G(A)); a miss at the
/// bound is reported as inconclusive, never as a refutation.
inline HtoGReport htog_check(const MatrixTuple& x, const MatrixTuple& a, int bound) {
    for (const Matrix& g : a.entries) {
        if (!invert(g)) throw domain_error("htog_check: stabilizer tuple must consist of group elements");
        for (const Matrix& m : x.entries)
            if (g * m != m * g) throw domain_error("htog_check: tuple a must fix x");
    }
    if (!is_semisimple_module(a)) throw domain_error("htog_check: a must generate a semisimple module");
    HtoGReport rep;
    rep.full = is_orbit_closed_full(x);
    if (rep.full.verdict == Verdict::Closed) return rep;
    rep.applicable = true;
    SubgroupSpec G = x.sl_constraint ? SubgroupSpec::full_sl() : SubgroupSpec::full_gl();
    rep.search = destabilizer_search(ActionInstance::conjugation(x), G, torus_of_centralizer(a), bound);
    rep.found = rep.search->verdict == Verdict::NotClosed;
    return rep;
}

/// Orbit of a tuple whose stabilizer contains a maximal torus is closed:
/// checked exactly; a failure would be an invariant breach.
inline bool kraft_check(const MatrixTuple& t, const std::optional<Matrix>& conjugator = std::nullopt) {
    MatrixTuple d = t;
    if (conjugator) {
        auto gi = invert(*conjugator);
        if (!gi) throw domain_error("kraft_check: singular conjugator");
        d = t.conjugated(*gi);
    }
    for (const Matrix& m : d.entries)
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (i != j && !m(i, j).is_zero())
                    throw domain_error("kraft_check: tuple is not diagonal (after the conjugator)");
    Certificate c = is_orbit_closed_full(t);
    if (c.verdict != Verdict::Closed) throw internal_error("diagonal tuple with a non-closed orbit");
    return true;
}

// ---------------------------------------------------------------------------
// certificate verification

/// Re-check a certificate from scratch; returns false (with a reason) on any
/// mismatch.  Closed and NotClosed verdicts re-verify their evidence; the
/// bounded verdict re-runs the search.
inline bool verify_certificate(const Certificate& cert, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    try {
        switch (cert.verdict) {
            case Verdict::Closed: {
                if (cert.instance.kind() != ActionKind::ConjugationOnTuple)
                    return fail("Closed verdicts are only issued for conjugation instances");
                const MatrixTuple& t = cert.instance.point.as_tuple();
                if (!cert.semisimplicity) return fail("Closed certificate lacks semisimplicity data");
                if (t.empty()) return cert.semisimplicity->algebra_dim == 0 || fail("empty tuple record");
                AlgebraHandle alg = span_algebra(t);
                if (!alg.semisimple()) return fail("module is not semisimple");
                if (alg.dim() != cert.semisimplicity->algebra_dim) return fail("algebra dimension mismatch");
                if (cert.semisimplicity->radical_dim != 0) return fail("Closed verdict with nonzero radical");
                return true;
            }
            case Verdict::NotClosed: {
                if (!cert.destabilizer || !cert.limit_value) return fail("NotClosed certificate incomplete");
                LimitOutcome lo = limit(cert.instance, *cert.destabilizer);
                if (!lo.exists) return fail("recorded destabilizer has no limit");
                if (*lo.value != *cert.limit_value) return fail("recorded limit value mismatch");
                if (*lo.value == cert.instance.point) return fail("limit equals the point itself");
                if (cert.instance.sl_constraint && cert.destabilizer->weight_sum() != 0)
                    return fail("destabilizer violates the SL constraint");
                SubgroupSpec H = cert.subgroup ? *cert.subgroup
                                               : (cert.instance.sl_constraint ? SubgroupSpec::full_sl()
                                                                              : SubgroupSpec::full_gl());
                if (ru_conjugacy_back(cert.instance, *cert.destabilizer, H))
                    return fail("limit is conjugate back to the point inside R_u ∩ H");
                // full-group conjugation instances: independent module route
                if ((H.kind == SubgroupSpec::Kind::FullGL || H.kind == SubgroupSpec::Kind::FullSL) &&
                    cert.instance.kind() == ActionKind::ConjugationOnTuple) {
                    IsoOutcome iso = modules_isomorphic(cert.instance.point.as_tuple(),
                                                        cert.limit_value->as_tuple());
                    if (iso.isomorphic()) return fail("limit is module-isomorphic to the point");
                }
                return true;
            }
            case Verdict::NoDestabilizerUpToBound: {
                if (!cert.subgroup || !cert.search_bound || !cert.torus_used)
                    return fail("bounded verdict lacks search parameters");
                Certificate rerun =
                    destabilizer_search(cert.instance, *cert.subgroup, *cert.torus_used, *cert.search_bound);
                if (rerun.verdict != Verdict::NoDestabilizerUpToBound)
                    return fail("re-run search found a destabilizer");
                return true;
            }
        }
    } catch (const std::exception& e) {
        return fail(std::string("verification raised: ") + e.what());
    }
    return fail("unknown verdict");
}

}  // namespace orbitlab
