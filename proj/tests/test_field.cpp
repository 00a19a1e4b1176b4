#include <catch2/catch_amalgamated.hpp>

#include "orbitlab/matrix.hpp"

#include <random>

using namespace orbitlab;

namespace {

FieldElement rand_elem(const FieldSpec& F, std::mt19937_64& rng) {
    if (F.is_rationals()) {
        std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
        return FieldElement::from_rational(Rational(num(rng), den(rng)));
    }
    std::uniform_int_distribution<long long> idx(0, F.order() - 1);
    long long v = idx(rng);
    std::vector<int> c(F.k());
    for (int i = 0; i < F.k(); ++i) {
        c[i] = static_cast<int>(v % F.p());
        v /= F.p();
    }
    return FieldElement::from_coeffs(F, c);
}

Matrix rand_matrix(const FieldSpec& F, int r, int c, std::mt19937_64& rng) {
    Matrix m(r, c, F);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rand_elem(F, rng);
    return m;
}

}  // namespace

TEST_CASE("modulus table entries are monic irreducible") {
    for (int p : {2, 3, 5, 7}) {
        for (int k = 1; k <= (p == 2 ? 8 : 4); ++k) {
            const auto& f = detail::modulus_table(p, k);
            REQUIRE(static_cast<int>(f.size()) == k + 1);
            REQUIRE(f.back() == 1);
            REQUIRE(detail::poly_irreducible(f, p));
        }
    }
    // F_4 uses x^2 + x + 1
    REQUIRE(detail::modulus_table(2, 2) == detail::PolyFp({1, 1, 1}));
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(20250809);
    for (const FieldSpec& F : {FieldSpec::rationals(), FieldSpec::finite(2), FieldSpec::finite(2, 2),
                               FieldSpec::finite(7), FieldSpec::finite(2, 4)}) {
        for (int trial = 0; trial < 60; ++trial) {
            FieldElement a = rand_elem(F, rng), b = rand_elem(F, rng), c = rand_elem(F, rng);
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(a + (-a) == FieldElement::zero(F));
            if (!a.is_zero()) REQUIRE(a * a.inverse() == FieldElement::one(F));
        }
    }
}

TEST_CASE("rationals stay in lowest terms with positive denominator") {
    FieldElement x = FieldElement::parse(FieldSpec::rationals(), "2/-4");
    REQUIRE(x.to_string() == "-1/2");
    FieldElement y = FieldElement::parse(FieldSpec::rationals(), "6/4");
    REQUIRE(y.to_string() == "3/2");
    REQUIRE((x + y).to_string() == "1");
}

TEST_CASE("finite field parse/format round trip") {
    FieldSpec F4 = FieldSpec::finite(2, 2);
    FieldElement g = FieldElement::generator(F4);
    REQUIRE(g.to_string() == "[0,1]");
    REQUIRE(FieldElement::parse(F4, "[0,1]") == g);
    REQUIRE(FieldElement::parse(F4, "1") == FieldElement::one(F4));
    REQUIRE(g.multiplicative_order() == 3);
    REQUIRE((g * g) == g.inverse());
}

TEST_CASE("rref examples") {
    FieldSpec Q = FieldSpec::rationals();
    auto id = Matrix::identity(3, Q);
    RrefResult r = rref(id);
    REQUIRE(r.matrix == id);
    REQUIRE(r.pivots == std::vector<int>({0, 1, 2}));
    REQUIRE(r.rank == 3);

    Matrix dep = Matrix::from_ints(Q, {{1, 2}, {2, 4}});
    RrefResult r2 = rref(dep);
    REQUIRE(r2.rank == 1);
    REQUIRE(r2.pivots == std::vector<int>({0}));

    FieldSpec F2 = FieldSpec::finite(2);
    Matrix m = Matrix::from_ints(F2, {{1, 1}, {1, 0}});
    REQUIRE(rref(m).rank == 2);
}

TEST_CASE("rref is idempotent on random matrices") {
    std::mt19937_64 rng(7);
    for (const FieldSpec& F : {FieldSpec::rationals(), FieldSpec::finite(3), FieldSpec::finite(2, 2)}) {
        for (int trial = 0; trial < 25; ++trial) {
            Matrix m = rand_matrix(F, 4, 5, rng);
            Matrix r = rref(m).matrix;
            REQUIRE(rref(r).matrix == r);
        }
    }
}

TEST_CASE("invert examples and random round trips") {
    FieldSpec Q = FieldSpec::rationals();
    Matrix d = Matrix::from_ints(Q, {{2, 0}, {0, 3}});
    auto inv = invert(d);
    REQUIRE(inv);
    REQUIRE((*inv)(0, 0).to_string() == "1/2");
    REQUIRE((*inv)(1, 1).to_string() == "1/3");

    FieldSpec F2 = FieldSpec::finite(2);
    Matrix u = Matrix::from_ints(F2, {{1, 1}, {0, 1}});
    REQUIRE(*invert(u) == u);

    REQUIRE(!invert(Matrix::from_ints(Q, {{1, 2}, {2, 4}})));

    std::mt19937_64 rng(99);
    for (const FieldSpec& F : {FieldSpec::rationals(), FieldSpec::finite(5)}) {
        for (int trial = 0; trial < 30; ++trial) {
            Matrix m = rand_matrix(F, 4, 4, rng);
            auto mi = invert(m);
            if (mi)
                REQUIRE((*mi * m).is_identity());
            else
                REQUIRE(rank(m) < 4);
        }
    }
}

TEST_CASE("solve_linear full solution set") {
    FieldSpec Q = FieldSpec::rationals();
    Matrix a = Matrix::identity(3, Q);
    Matrix b = Matrix::from_ints(Q, {{1}, {2}, {3}});
    auto s = solve_linear(a, b);
    REQUIRE(s);
    REQUIRE(s->particular == b);
    REQUIRE(s->kernel.empty());

    Matrix zero = Matrix(2, 2, Q);
    Matrix b2 = Matrix::from_ints(Q, {{1}, {0}});
    REQUIRE(!solve_linear(zero, b2));

    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        FieldSpec F = trial % 2 ? FieldSpec::rationals() : FieldSpec::finite(7);
        Matrix m = rand_matrix(F, 3, 4, rng);
        Matrix x = rand_matrix(F, 4, 1, rng);
        Matrix rhs = m * x;
        auto sol = solve_linear(m, rhs);
        REQUIRE(sol);
        REQUIRE(m * sol->particular == rhs);
        for (const Matrix& k : sol->kernel) REQUIRE((m * k).is_zero());
        // residual x - particular must lie in the kernel span
        Matrix diff = x - sol->particular;
        if (sol->kernel.empty()) {
            REQUIRE(diff.is_zero());
        } else {
            Matrix gen(static_cast<int>(sol->kernel.size()), 4, F);
            for (size_t i = 0; i < sol->kernel.size(); ++i)
                for (int j = 0; j < 4; ++j) gen(static_cast<int>(i), j) = sol->kernel[i](j, 0);
            REQUIRE(Subspace::span_rows(gen).contains_row(diff.transpose()));
        }
    }
}

TEST_CASE("charpoly and det") {
    FieldSpec Q = FieldSpec::rationals();
    Matrix d = Matrix::from_ints(Q, {{2, 0}, {0, 3}});
    auto cp = charpoly(d);  // (x-2)(x-3) = x^2 - 5x + 6
    REQUIRE(cp.size() == 3);
    REQUIRE(cp[2].to_string() == "1");
    REQUIRE(cp[1].to_string() == "-5");
    REQUIRE(cp[0].to_string() == "6");
    REQUIRE(det(d).to_string() == "6");
    REQUIRE(charpoly_sigma(cp, 1).to_string() == "5");
    REQUIRE(charpoly_sigma(cp, 2).to_string() == "6");

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = rand_matrix(FieldSpec::finite(5), 4, 4, rng);
        auto c = charpoly(m);
        // Cayley-Hamilton
        Matrix acc = Matrix(4, 4, m.spec());
        Matrix pw = Matrix::identity(4, m.spec());
        for (size_t i = 0; i < c.size(); ++i) {
            acc = acc + pw.scaled(c[i]);
            pw = pw * m;
        }
        REQUIRE(acc.is_zero());
        // det consistency with invertibility
        REQUIRE(det(m).is_zero() == (rank(m) < 4));
    }
}

TEST_CASE("embedding examples") {
    FieldSpec F2 = FieldSpec::finite(2), F4 = FieldSpec::finite(2, 2), F16 = FieldSpec::finite(2, 4);
    REQUIRE(embed_extension(FieldElement::one(F2), F4) == FieldElement::one(F4));
    REQUIRE(embed_extension(FieldElement::zero(F2), F16) == FieldElement::zero(F16));
    FieldElement g4 = FieldElement::generator(F4);
    FieldElement img = embed_extension(g4, F16);
    REQUIRE(img.multiplicative_order() == 3);
    // embedding is a ring homomorphism on samples
    FieldElement h = g4 * g4 + FieldElement::one(F4);
    REQUIRE(embed_extension(h, F16) == img * img + FieldElement::one(F16));
    REQUIRE_THROWS_AS(embed_extension(g4, FieldSpec::finite(2, 3)), domain_error);
}

TEST_CASE("subspace calculus") {
    FieldSpec F3 = FieldSpec::finite(3);
    Matrix g1 = Matrix::from_ints(F3, {{1, 0, 1}, {0, 1, 0}});
    Matrix g2 = Matrix::from_ints(F3, {{1, 1, 1}});
    Subspace a = Subspace::span_rows(g1), b = Subspace::span_rows(g2);
    REQUIRE(a.dim() == 2);
    REQUIRE(b.dim() == 1);
    REQUIRE(a.contains(b));
    REQUIRE(a.intersect(b) == b);
    REQUIRE(a.sum(b) == a);
    REQUIRE(a.contains_row(Matrix::from_ints(F3, {{2, 1, 2}})));
    REQUIRE(!a.contains_row(Matrix::from_ints(F3, {{0, 0, 1}})));
}
