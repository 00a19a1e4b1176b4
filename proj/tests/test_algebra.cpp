#include <catch2/catch_amalgamated.hpp>

#include "orbitlab/algebra.hpp"

#include <random>

using namespace orbitlab;

namespace {

const FieldSpec Q = FieldSpec::rationals();

FieldElement rand_elem(const FieldSpec& F, std::mt19937_64& rng) {
    if (F.is_rationals()) return FieldElement::from_int(F, static_cast<long long>(rng() % 11) - 5);
    std::uniform_int_distribution<long long> idx(0, F.order() - 1);
    long long v = idx(rng);
    std::vector<int> c(F.k());
    for (int i = 0; i < F.k(); ++i) {
        c[i] = static_cast<int>(v % F.p());
        v /= F.p();
    }
    return FieldElement::from_coeffs(F, c);
}

Matrix rand_matrix(const FieldSpec& F, int n, std::mt19937_64& rng) {
    Matrix m(n, n, F);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rand_elem(F, rng);
    return m;
}

Matrix rand_invertible(const FieldSpec& F, int n, std::mt19937_64& rng) {
    for (int tries = 0; tries < 400; ++tries) {
        Matrix m = rand_matrix(F, n, rng);
        if (invert(m)) return m;
    }
    throw internal_error("no invertible sample");
}

MatrixTuple rand_tuple(const FieldSpec& F, int n, int len, std::mt19937_64& rng) {
    std::vector<Matrix> es;
    for (int i = 0; i < len; ++i) es.push_back(rand_matrix(F, n, rng));
    return MatrixTuple::make(std::move(es));
}

/// adjoint action of SL_2 on its Lie algebra in the ordered basis (e, h, f);
/// valid in any characteristic (computed by conjugating basis matrices)
Matrix adjoint_rep(const Matrix& g) {
    const FieldSpec& F = g.spec();
    Matrix gi = *invert(g);
    auto basis = std::vector<Matrix>{Matrix::from_ints(F, {{0, 1}, {0, 0}}),
                                     Matrix::from_ints(F, {{1, 0}, {0, -1}}),
                                     Matrix::from_ints(F, {{0, 0}, {1, 0}})};
    Matrix rho(3, 3, F);
    for (int j = 0; j < 3; ++j) {
        Matrix img = g * basis[j] * gi;
        // coordinates of img in the (e,h,f) basis: e = E12, h = E11-E22, f = E21
        rho(0, j) = img(0, 1);
        rho(1, j) = img(0, 0);
        rho(2, j) = img(1, 0);
    }
    return rho;
}

MatrixTuple sl2_adjoint_image_tuple(const FieldSpec& F) {
    std::vector<Matrix> gens;
    std::vector<Matrix> sl2;
    sl2.push_back(Matrix::from_ints(F, {{1, 1}, {0, 1}}));
    sl2.push_back(Matrix::from_ints(F, {{1, 0}, {1, 1}}));
    if (F.is_finite() && F.k() >= 2) {
        FieldElement a = FieldElement::generator(F);
        Matrix ua = Matrix::identity(2, F);
        ua(0, 1) = a;
        sl2.push_back(ua);
        Matrix la = Matrix::identity(2, F);
        la(1, 0) = a;
        sl2.push_back(la);
        Matrix da(2, 2, F);
        da(0, 0) = a;
        da(1, 1) = a.inverse();
        sl2.push_back(da);
    }
    for (const Matrix& g : sl2) gens.push_back(adjoint_rep(g));
    return MatrixTuple::make(std::move(gens), true);
}

}  // namespace

TEST_CASE("span_algebra basics") {
    MatrixTuple ident = MatrixTuple::make({Matrix::identity(3, Q)});
    AlgebraHandle h = span_algebra(ident);
    REQUIRE(h.dim() == 1);
    REQUIRE(h.basis[0].is_identity());

    // 2x2 Jordan block: algebra = span{I, J} of dimension 2
    MatrixTuple jordan = MatrixTuple::make({Matrix::from_ints(Q, {{1, 1}, {0, 1}})});
    AlgebraHandle hj = span_algebra(jordan);
    REQUIRE(hj.dim() == 2);
    REQUIRE(algebra_contains(hj, Matrix::from_ints(Q, {{0, 1}, {0, 0}})));
}

TEST_CASE("span dimension invariant under permutation and conjugation") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 15; ++trial) {
        FieldSpec F = (trial % 2) ? Q : FieldSpec::finite(3);
        MatrixTuple t = rand_tuple(F, 3, 3, rng);
        AlgebraHandle h = span_algebra(t);

        MatrixTuple perm = MatrixTuple::make({t.entries[2], t.entries[0], t.entries[1]});
        REQUIRE(span_algebra(perm).dim() == h.dim());

        Matrix g = rand_invertible(F, 3, rng);
        REQUIRE(span_algebra(t.conjugated(g)).dim() == h.dim());
    }
}

TEST_CASE("radical examples") {
    // semisimple diagonal algebra
    MatrixTuple diag = MatrixTuple::make(
        {Matrix::from_ints(Q, {{1, 0}, {0, 2}}), Matrix::from_ints(Q, {{3, 0}, {0, 1}})});
    REQUIRE(span_algebra(diag).radical_basis.empty());
    REQUIRE(is_semisimple_module(diag));

    // Jordan block algebra: radical = span{N}
    MatrixTuple jordan = MatrixTuple::make({Matrix::from_ints(Q, {{1, 1}, {0, 1}})});
    AlgebraHandle hj = span_algebra(jordan);
    REQUIRE(hj.radical_basis.size() == 1);
    REQUIRE(!is_semisimple_module(jordan));

    // same over F_2 (trace form alone would degenerate here)
    FieldSpec F2 = FieldSpec::finite(2);
    MatrixTuple j2 = MatrixTuple::make({Matrix::from_ints(F2, {{1, 1}, {0, 1}})});
    REQUIRE(span_algebra(j2).radical_basis.size() == 1);

    // scalar algebra over F_2 in even dimension is semisimple although all traces vanish
    MatrixTuple scal = MatrixTuple::make({Matrix::identity(2, F2)});
    REQUIRE(span_algebra(scal).radical_basis.empty());
}

TEST_CASE("gl2 example tuples: x not semisimple, y and joint semisimple") {
    Matrix a1 = Matrix::from_ints(Q, {{1, 0}, {0, 2}});
    Matrix a2 = Matrix::from_ints(Q, {{1, 1}, {0, 1}});
    Matrix b1 = Matrix::from_ints(Q, {{1, 0}, {1, 1}});
    MatrixTuple x = MatrixTuple::make({a1, a2});
    MatrixTuple y = MatrixTuple::make({b1, a2});
    REQUIRE(!is_semisimple_module(x));
    REQUIRE(is_semisimple_module(y));
    REQUIRE(is_semisimple_module(MatrixTuple::concat(x, y)));
}

TEST_CASE("sl2 adjoint image in characteristic 2") {
    FieldSpec F4 = FieldSpec::finite(2, 2);
    // displayed matrix shape: rho(a,b;c,d) = (a^2,0,b^2; ac,1,bd; c^2,0,d^2)
    FieldElement a = FieldElement::generator(F4);
    Matrix g(2, 2, F4);
    g(0, 0) = a;
    g(1, 1) = a.inverse();
    Matrix rho = adjoint_rep(g);
    REQUIRE(rho(0, 0) == a * a);
    REQUIRE(rho(1, 1) == FieldElement::one(F4));
    REQUIRE(rho(2, 2) == a.inverse() * a.inverse());
    REQUIRE(rho(0, 1).is_zero());
    REQUIRE(rho(2, 1).is_zero());

    // homomorphism and determinant-1 checks on samples
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix s = rand_invertible(F4, 2, rng);
        FieldElement ds = det(s);
        Matrix sn = s;
        sn(0, 0) = s(0, 0) / ds;  // scale a row to land in SL_2
        sn(0, 1) = s(0, 1) / ds;
        Matrix t = rand_invertible(F4, 2, rng);
        FieldElement dt = det(t);
        Matrix tn = t;
        tn(0, 0) = t(0, 0) / dt;
        tn(0, 1) = t(0, 1) / dt;
        REQUIRE(det(sn).is_one());
        REQUIRE(adjoint_rep(sn * tn) == adjoint_rep(sn) * adjoint_rep(tn));
        REQUIRE(det(adjoint_rep(sn)).is_one());
    }

    MatrixTuple img = sl2_adjoint_image_tuple(F4);
    AlgebraHandle h = span_algebra(img);
    REQUIRE(!h.radical_basis.empty());          // not semisimple in characteristic 2
    REQUIRE(!is_semisimple_module(img));

    // h-vector (0,1,0) is fixed by the image
    Matrix hv = Matrix::from_ints(F4, {{0}, {1}, {0}});
    for (const Matrix& m : img.entries) REQUIRE(m * hv == hv);

    // centralizer of the image is the scalars
    AlgebraHandle c = centralizer_algebra(img);
    REQUIRE(c.dim() == 1);

    // stable under generator reordering
    MatrixTuple perm = MatrixTuple::make({img.entries[2], img.entries[0], img.entries[1], img.entries[3], img.entries[4]}, true);
    REQUIRE(span_algebra(perm).dim() == h.dim());
}

TEST_CASE("sl2 adjoint is semisimple away from characteristic 2") {
    FieldSpec F3 = FieldSpec::finite(3);
    MatrixTuple img = sl2_adjoint_image_tuple(F3);
    REQUIRE(is_semisimple_module(img));
    REQUIRE(brute_force_semisimple(img));
    // no nonzero fixed vector: solve (m - I) v = 0 across entries
    Matrix stack(0, 3, F3);
    for (const Matrix& m : img.entries) stack = Matrix::vcat(stack, m - Matrix::identity(3, F3));
    REQUIRE(kernel_basis(stack).empty());
}

TEST_CASE("brute force semisimple oracle examples") {
    FieldSpec F2 = FieldSpec::finite(2);
    REQUIRE(brute_force_semisimple(MatrixTuple::make({Matrix::identity(2, F2)})));

    // Over F_2 the tuple only generates SL_2(F_2) = S_3 and the module splits;
    // the characteristic-2 failure needs the F_4 points.
    MatrixTuple img2 = sl2_adjoint_image_tuple(F2);
    REQUIRE(brute_force_semisimple(img2));

    FieldSpec F4 = FieldSpec::finite(2, 2);
    MatrixTuple img4 = sl2_adjoint_image_tuple(F4);
    REQUIRE(!brute_force_semisimple(img4));
    Matrix hrow = Matrix::from_ints(F4, {{0, 1, 0}});
    REQUIRE(subspace_invariant(hrow, img4));
    REQUIRE(!invariant_complement_bruteforce(hrow, img4));

    // block diagonal of two distinct 1-dim representations over F_3
    FieldSpec F3 = FieldSpec::finite(3);
    MatrixTuple blocks = MatrixTuple::make({Matrix::from_ints(F3, {{1, 0}, {0, 2}})});
    REQUIRE(brute_force_semisimple(blocks));
}

TEST_CASE("radical agrees with brute force on random small tuples") {
    std::mt19937_64 rng(777);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        FieldSpec F = (trial % 2) ? FieldSpec::finite(2) : FieldSpec::finite(3);
        int n = 2 + static_cast<int>(rng() % 2);
        MatrixTuple t = rand_tuple(F, n, 1 + static_cast<int>(rng() % 2), rng);
        REQUIRE(is_semisimple_module(t) == brute_force_semisimple(t));
        ++checked;
    }
    REQUIRE(checked == 120);
}

TEST_CASE("radical elements are nilpotent and semisimplicity is conjugation invariant") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        FieldSpec F = (trial % 3 == 0) ? Q : (trial % 3 == 1 ? FieldSpec::finite(2) : FieldSpec::finite(5));
        int n = 2 + static_cast<int>(rng() % 2);
        MatrixTuple t = rand_tuple(F, n, 2, rng);
        AlgebraHandle h = span_algebra(t);
        for (const Matrix& r : h.radical_basis) REQUIRE(r.pow(n).is_zero());
        Matrix g = rand_invertible(F, n, rng);
        REQUIRE(is_semisimple_module(t) == is_semisimple_module(t.conjugated(g)));
    }
}

TEST_CASE("generic tuple spans the algebra of the generators") {
    // single diagonal generator of multiplicative order >= 2
    MatrixTuple g = MatrixTuple::make({Matrix::from_ints(Q, {{1, 0}, {0, 2}})});
    GenericTuple gt = generic_tuple(g);
    REQUIRE(gt.tuple.size() == 2);
    REQUIRE(gt.tuple.entries[0].is_identity());
    REQUIRE(gt.tuple.entries[1] == g.entries[0]);
    REQUIRE(gt.words == std::vector<std::vector<int>>({{}, {0}}));

    MatrixTuple ident = MatrixTuple::make({Matrix::identity(2, Q)});
    GenericTuple gi = generic_tuple(ident);
    REQUIRE(gi.tuple.size() == 1);
    REQUIRE(gi.tuple.entries[0].is_identity());

    // adjoint image generators: span equals the generated algebra, stable size
    FieldSpec F4 = FieldSpec::finite(2, 2);
    MatrixTuple img = sl2_adjoint_image_tuple(F4);
    AlgebraHandle h = span_algebra(img);
    GenericTuple gim = generic_tuple(img);
    REQUIRE(static_cast<int>(gim.tuple.size()) == h.dim());
    AlgebraHandle h2 = span_algebra(gim.tuple);
    REQUIRE(h2.dim() == h.dim());
    for (const Matrix& m : gim.tuple.entries) REQUIRE(algebra_contains(h, m));
}

TEST_CASE("centralizer examples") {
    // tuple spanning the full matrix algebra: centralizer = scalars
    MatrixTuple full = MatrixTuple::make({Matrix::from_ints(Q, {{1, 0}, {1, 1}}), Matrix::from_ints(Q, {{1, 1}, {0, 1}})});
    REQUIRE(span_algebra(full).dim() == 4);
    REQUIRE(centralizer_algebra(full).dim() == 1);

    MatrixTuple ident = MatrixTuple::make({Matrix::identity(2, Q)});
    REQUIRE(centralizer_algebra(ident).dim() == 4);

    // intertwiner-style check: centralizer elements commute by construction
    std::mt19937_64 rng(9);
    MatrixTuple t = rand_tuple(FieldSpec::finite(5), 3, 2, rng);
    AlgebraHandle c = centralizer_algebra(t);
    for (const Matrix& z : c.basis)
        for (const Matrix& m : t.entries) REQUIRE(z * m == m * z);
}
