#pragma once

// Dense exact matrices over one FieldSpec, with the elimination-based
// operations the rest of the library is built on: rref, affine solve,
// inversion, kernels, Berkowitz characteristic polynomial, canonical
// subspaces, and the table embedding F_{p^k} -> F_{p^{k'}}.

#include "orbitlab/field.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>

namespace orbitlab {

class Matrix {
public:
    Matrix() : rows_(0), cols_(0), spec_(FieldSpec::rationals()) {}

    Matrix(int rows, int cols, const FieldSpec& spec)
        : rows_(rows), cols_(cols), spec_(spec), e_(static_cast<size_t>(rows) * cols, FieldElement::zero(spec)) {
        if (rows < 0 || cols < 0) throw domain_error("negative matrix dimension");
    }

    static Matrix zero(int rows, int cols, const FieldSpec& spec) { return Matrix(rows, cols, spec); }

    static Matrix identity(int n, const FieldSpec& spec) {
        Matrix m(n, n, spec);
        for (int i = 0; i < n; ++i) m(i, i) = FieldElement::one(spec);
        return m;
    }

    static Matrix diagonal(const std::vector<FieldElement>& d) {
        if (d.empty()) throw domain_error("empty diagonal");
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()), d[0].spec());
        for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    /// rows given as integer literals; convenience for tests and the zoo
    static Matrix from_ints(const FieldSpec& spec, const std::vector<std::vector<long long>>& rows) {
        if (rows.empty()) throw domain_error("empty matrix literal");
        Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), spec);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) throw domain_error("ragged matrix literal");
            for (size_t j = 0; j < rows[i].size(); ++j)
                m(static_cast<int>(i), static_cast<int>(j)) = FieldElement::from_int(spec, rows[i][j]);
        }
        return m;
    }

    static Matrix column(const std::vector<FieldElement>& v) {
        if (v.empty()) throw domain_error("empty column");
        Matrix m(static_cast<int>(v.size()), 1, v[0].spec());
        for (size_t i = 0; i < v.size(); ++i) m(static_cast<int>(i), 0) = v[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const FieldSpec& spec() const { return spec_; }
    bool is_square() const { return rows_ == cols_; }

    FieldElement& operator()(int i, int j) {
        range_check(i, j);
        return e_[static_cast<size_t>(i) * cols_ + j];
    }
    const FieldElement& operator()(int i, int j) const {
        range_check(i, j);
        return e_[static_cast<size_t>(i) * cols_ + j];
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && spec_ == o.spec_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](const FieldElement& x) { return x.is_zero(); });
    }

    bool is_identity() const {
        if (!is_square()) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if ((i == j) ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
        return true;
    }

    Matrix operator+(const Matrix& o) const {
        shape_check(o);
        Matrix r = *this;
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        shape_check(o);
        Matrix r = *this;
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
        return r;
    }

    Matrix operator-() const { return Matrix(rows_, cols_, spec_) - *this; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_ || spec_ != o.spec_) throw domain_error("matrix product shape/field mismatch");
        Matrix r(rows_, o.cols_, spec_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const FieldElement& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    const FieldElement& b = o(k, j);
                    if (!b.is_zero()) r(i, j) += a * b;
                }
            }
        return r;
    }

    Matrix scaled(const FieldElement& c) const {
        Matrix r = *this;
        for (auto& x : r.e_) x = x * c;
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_, spec_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    FieldElement trace() const {
        if (!is_square()) throw domain_error("trace of non-square matrix");
        FieldElement t = FieldElement::zero(spec_);
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    Matrix pow(long long e) const {
        if (!is_square()) throw domain_error("power of non-square matrix");
        if (e < 0) throw domain_error("negative matrix power");
        Matrix acc = identity(rows_, spec_), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    Matrix submatrix(int r0, int c0, int nrows, int ncols) const {
        Matrix r(nrows, ncols, spec_);
        for (int i = 0; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    Matrix row(int i) const { return submatrix(i, 0, 1, cols_); }
    Matrix col(int j) const { return submatrix(0, j, rows_, 1); }

    static Matrix hcat(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.spec_ != b.spec_) throw domain_error("hcat mismatch");
        Matrix r(a.rows_, a.cols_ + b.cols_, a.spec_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
            for (int j = 0; j < b.cols_; ++j) r(i, a.cols_ + j) = b(i, j);
        }
        return r;
    }

    static Matrix vcat(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_ || a.spec_ != b.spec_) throw domain_error("vcat mismatch");
        Matrix r(a.rows_ + b.rows_, a.cols_, a.spec_);
        for (int j = 0; j < a.cols_; ++j) {
            for (int i = 0; i < a.rows_; ++i) r(i, j) = a(i, j);
            for (int i = 0; i < b.rows_; ++i) r(a.rows_ + i, j) = b(i, j);
        }
        return r;
    }

    /// row-major flattening as a 1 x (rows*cols) matrix
    Matrix vectorized_row() const {
        Matrix r(1, rows_ * cols_, spec_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(0, i * cols_ + j) = (*this)(i, j);
        return r;
    }

    static Matrix from_vectorized_row(const Matrix& v, int rows, int cols) {
        if (v.rows() != 1 || v.cols() != rows * cols) throw domain_error("bad vectorized shape");
        Matrix r(rows, cols, v.spec());
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r(i, j) = v(0, i * cols + j);
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < rows_; ++i) {
            if (i) os << "; ";
            for (int j = 0; j < cols_; ++j) {
                if (j) os << " ";
                os << (*this)(i, j).to_string();
            }
        }
        os << "]";
        return os.str();
    }

private:
    void range_check(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw domain_error("matrix index out of range");
    }
    void shape_check(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_ || spec_ != o.spec_) throw domain_error("matrix shape/field mismatch");
    }

    int rows_, cols_;
    FieldSpec spec_;
    std::vector<FieldElement> e_;
};

struct RrefResult {
    Matrix matrix;
    std::vector<int> pivots;
    int rank = 0;
};

/// reduced row echelon form; exact over the field, first-nonzero pivoting
inline RrefResult rref(const Matrix& m) {
    RrefResult res{m, {}, 0};
    Matrix& a = res.matrix;
    int r = 0;
    for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < a.rows(); ++i)
            if (!a(i, c).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
        FieldElement inv = a(r, c).inverse();
        for (int j = 0; j < a.cols(); ++j) a(r, j) = a(r, j) * inv;
        for (int i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            FieldElement f = a(i, c);
            for (int j = 0; j < a.cols(); ++j) a(i, j) = a(i, j) - f * a(r, j);
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline int rank(const Matrix& m) { return rref(m).rank; }

/// basis of the right kernel {x : m x = 0}, as column vectors
inline std::vector<Matrix> kernel_basis(const Matrix& m) {
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : rr.pivots) is_pivot[c] = true;
    std::vector<Matrix> out;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        Matrix v(m.cols(), 1, m.spec());
        v(c, 0) = FieldElement::one(m.spec());
        for (size_t pi = 0; pi < rr.pivots.size(); ++pi) v(rr.pivots[pi], 0) = -rr.matrix(static_cast<int>(pi), c);
        out.push_back(v);
    }
    return out;
}

/// Full affine solution set of a x = b (b a column vector):
/// particular solution plus kernel basis.  Inconsistency is a normal
/// nullopt return, not an error.
struct LinearSolution {
    Matrix particular;            // cols(a) x 1
    std::vector<Matrix> kernel;   // basis of {x : a x = 0}
};

inline std::optional<LinearSolution> solve_linear(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw domain_error("solve_linear: row mismatch");
    if (b.cols() != 1) throw domain_error("solve_linear: b must be a column vector");
    if (a.spec() != b.spec()) throw domain_error("solve_linear: field mismatch");
    RrefResult rr = rref(Matrix::hcat(a, b));
    for (int c : rr.pivots)
        if (c == a.cols()) return std::nullopt;  // pivot in the rhs column
    Matrix x(a.cols(), 1, a.spec());
    for (size_t pi = 0; pi < rr.pivots.size(); ++pi) x(rr.pivots[pi], 0) = rr.matrix(static_cast<int>(pi), a.cols());
    return LinearSolution{x, kernel_basis(a)};
}

/// exact inverse, or nullopt when singular
inline std::optional<Matrix> invert(const Matrix& m) {
    if (!m.is_square()) throw domain_error("invert: non-square matrix");
    int n = m.rows();
    RrefResult rr = rref(Matrix::hcat(m, Matrix::identity(n, m.spec())));
    if (rr.rank < n || rr.pivots[n - 1] >= n) return std::nullopt;
    return rr.matrix.submatrix(0, n, n, n);
}

/// coefficients of det(lambda I - m), index i = coefficient of lambda^i
/// (Samuelson-Berkowitz; division-free, valid over any field)
inline std::vector<FieldElement> charpoly(const Matrix& m) {
    if (!m.is_square()) throw domain_error("charpoly: non-square matrix");
    int n = m.rows();
    const FieldSpec& F = m.spec();
    FieldElement one = FieldElement::one(F), zero = FieldElement::zero(F);
    if (n == 0) return {one};
    // vector of coefficients, highest degree first; start with (1)
    std::vector<FieldElement> poly{one};
    for (int k = 0; k < n; ++k) {
        // principal leading (k+1)x(k+1) block, partitioned around entry (k,k)
        Matrix A = m.submatrix(0, 0, k, k);
        Matrix R = k > 0 ? m.submatrix(k, 0, 1, k) : Matrix(1, 0, F);
        Matrix C = k > 0 ? m.submatrix(0, k, k, 1) : Matrix(0, 1, F);
        FieldElement d = m(k, k);
        // Toeplitz column: t_0 = 1, t_1 = -d, t_{j+2} = -(R A^j C)
        std::vector<FieldElement> t(k + 2, zero);
        t[0] = one;
        t[1] = -d;
        if (k > 0) {
            Matrix acc = R;  // R A^j accumulated
            for (int j = 0; j + 2 <= k + 1; ++j) {
                Matrix val = acc * C;
                t[j + 2] = -val(0, 0);
                if (j + 3 <= k + 1) acc = acc * A;
            }
        }
        // poly <- Toeplitz(t) * poly  (lower triangular convolution)
        std::vector<FieldElement> next(poly.size() + 1, zero);
        for (size_t i = 0; i < next.size(); ++i)
            for (size_t j = 0; j <= i && j < t.size(); ++j)
                if (i - j < poly.size()) next[i] += t[j] * poly[i - j];
        poly = std::move(next);
    }
    // poly holds coefficients highest-first: lambda^n ... lambda^0
    std::vector<FieldElement> out(poly.rbegin(), poly.rend());
    return out;
}

inline FieldElement det(const Matrix& m) {
    std::vector<FieldElement> cp = charpoly(m);
    FieldElement d = cp[0];  // det(-m) = cp(0) => det(m) = (-1)^n cp_0
    if (m.rows() % 2 == 1) d = -d;
    return d;
}

/// j-th elementary symmetric function of the eigenvalues (sigma_j), from charpoly
inline FieldElement charpoly_sigma(const std::vector<FieldElement>& cp, int j) {
    int n = static_cast<int>(cp.size()) - 1;
    if (j < 0 || j > n) throw domain_error("sigma index out of range");
    FieldElement c = cp[n - j];
    if (j % 2 == 1) c = -c;
    return c;
}

/// Canonical subspace of F^n given by the rref basis of its row span.
class Subspace {
public:
    Subspace() = default;

    /// span of the rows of `gen`
    static Subspace span_rows(const Matrix& gen) {
        RrefResult rr = rref(gen);
        Subspace s;
        s.n_ = gen.cols();
        s.spec_ = gen.spec();
        s.basis_ = rr.rank > 0 ? rr.matrix.submatrix(0, 0, rr.rank, gen.cols()) : Matrix(0, gen.cols(), gen.spec());
        return s;
    }

    static Subspace zero(int n, const FieldSpec& spec) { return span_rows(Matrix(1, n, spec)); }

    static Subspace full(int n, const FieldSpec& spec) { return span_rows(Matrix::identity(n, spec)); }

    int dim() const { return basis_.rows(); }
    int ambient() const { return n_; }
    const Matrix& basis() const { return basis_; }
    const FieldSpec& spec() const { return spec_; }

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    /// does the row vector v lie in this subspace?
    bool contains_row(const Matrix& v) const {
        if (dim() == 0) return v.is_zero();
        return rref(Matrix::vcat(basis_, v)).rank == dim();
    }

    bool contains(const Subspace& o) const {
        if (o.dim() == 0) return true;
        return rref(Matrix::vcat(basis_, o.basis_)).rank == dim();
    }

    Subspace sum(const Subspace& o) const {
        if (dim() == 0) return o;
        if (o.dim() == 0) return *this;
        return span_rows(Matrix::vcat(basis_, o.basis_));
    }

    Subspace intersect(const Subspace& o) const {
        if (dim() == 0 || o.dim() == 0) return zero(n_, spec_);
        // kernel of [basis^T | -obasis^T]: coefficient pairs describing one vector two ways
        Matrix sys = Matrix::hcat(basis_.transpose(), o.basis_.transpose().scaled(-FieldElement::one(spec_)));
        auto kb = kernel_basis(sys);
        if (kb.empty()) return zero(n_, spec_);
        Matrix rows(static_cast<int>(kb.size()), n_, spec_);
        for (size_t r = 0; r < kb.size(); ++r) {
            // first dim() coords give coefficients in our basis
            for (int j = 0; j < n_; ++j) {
                FieldElement v = FieldElement::zero(spec_);
                for (int i = 0; i < dim(); ++i) v += kb[r](i, 0) * basis_(i, j);
                rows(static_cast<int>(r), j) = v;
            }
        }
        return span_rows(rows);
    }

private:
    int n_ = 0;
    FieldSpec spec_;
    Matrix basis_{0, 0, FieldSpec::rationals()};
};

/// Incremental row-span tracker in reduced echelon form; used for algebra
/// spans and submodule spin-ups.
class RowSpanAccumulator {
public:
    RowSpanAccumulator(int width, const FieldSpec& spec) : width_(width), spec_(spec), rows_(0, width, spec) {}

    int dim() const { return rows_.rows(); }
    int width() const { return width_; }

    /// reduce v against the current rows; residual is zero iff v is contained
    Matrix reduce(Matrix v) const {
        for (int r = 0; r < rows_.rows(); ++r) {
            const FieldElement& lead = v(0, pivots_[r]);
            if (lead.is_zero()) continue;
            FieldElement f = lead;
            for (int j = 0; j < width_; ++j) v(0, j) = v(0, j) - f * rows_(r, j);
        }
        return v;
    }

    bool contains(const Matrix& v) const { return reduce(v).is_zero(); }

    /// add v to the span; returns true when the dimension grew
    bool add(const Matrix& v) {
        Matrix red = reduce(v);
        int piv = -1;
        for (int j = 0; j < width_; ++j)
            if (!red(0, j).is_zero()) {
                piv = j;
                break;
            }
        if (piv < 0) return false;
        FieldElement inv = red(0, piv).inverse();
        for (int j = 0; j < width_; ++j) red(0, j) = red(0, j) * inv;
        // back-substitute into existing rows
        for (int r = 0; r < rows_.rows(); ++r) {
            FieldElement f = rows_(r, piv);
            if (f.is_zero()) continue;
            for (int j = 0; j < width_; ++j) rows_(r, j) = rows_(r, j) - f * red(0, j);
        }
        rows_ = Matrix::vcat(rows_, red);
        pivots_.push_back(piv);
        return true;
    }

    const Matrix& rows() const { return rows_; }

private:
    int width_;
    FieldSpec spec_;
    Matrix rows_;
    std::vector<int> pivots_;
};

// ---------------------------------------------------------------------------
// embedding of finite fields along the fixed modulus table

namespace detail {

/// matrix of x -> x^p on F_{p^k} over F_p, columns = images of the power basis
inline Matrix frobenius_matrix(const FieldSpec& s) {
    FieldSpec fp = FieldSpec::finite(s.p(), 1);
    Matrix phi(s.k(), s.k(), fp);
    FieldElement alpha = s.k() >= 2 ? FieldElement::generator(s) : FieldElement::one(s);
    for (int j = 0; j < s.k(); ++j) {
        FieldElement img = alpha.pow(j).frobenius();
        const std::vector<int>& c = img.coeffs();
        for (int i = 0; i < s.k(); ++i)
            phi(i, j) = FieldElement::from_int(fp, i < static_cast<int>(c.size()) ? c[i] : 0);
    }
    return phi;
}

/// image of the source generator inside the target field (lex-least root of
/// the source modulus in the degree-k subfield of the target)
inline const FieldElement& embedding_generator_image(const FieldSpec& src, const FieldSpec& tgt) {
    static std::map<std::tuple<int, int, int>, FieldElement> cache;
    auto key = std::make_tuple(src.p(), src.k(), tgt.k());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // subfield F_{p^k} = ker(Frob^k - id) as an F_p-subspace of the target
    Matrix phi = frobenius_matrix(tgt);
    Matrix phik = phi.pow(src.k());
    Matrix sys = phik - Matrix::identity(tgt.k(), phi.spec());
    std::vector<Matrix> kb = kernel_basis(sys);
    if (static_cast<int>(kb.size()) != src.k()) throw internal_error("subfield dimension mismatch");

    const PolyFp& mod = src.modulus();
    long long combos = 1;
    for (int i = 0; i < src.k(); ++i) combos *= src.p();
    std::optional<FieldElement> best;
    for (long long idx = 0; idx < combos; ++idx) {
        std::vector<int> tc(tgt.k(), 0);
        long long v = idx;
        for (int i = 0; i < src.k(); ++i) {
            int ci = static_cast<int>(v % src.p());
            v /= src.p();
            if (ci == 0) continue;
            for (int r = 0; r < tgt.k(); ++r) {
                // kb entries live over F_p
                int base = kb[i](r, 0).coeffs().empty() ? 0 : kb[i](r, 0).coeffs()[0];
                tc[r] = (tc[r] + ci * base) % src.p();
            }
        }
        FieldElement cand = FieldElement::from_coeffs(tgt, tc);
        // evaluate the source modulus at cand
        FieldElement val = FieldElement::zero(tgt);
        FieldElement pw = FieldElement::one(tgt);
        for (size_t d = 0; d < mod.size(); ++d) {
            if (mod[d] != 0) val += pw * FieldElement::from_int(tgt, mod[d]);
            pw = pw * cand;
        }
        if (!val.is_zero()) continue;
        auto pad = [&](const FieldElement& e) {
            std::vector<int> c = e.coeffs();
            c.resize(tgt.k(), 0);
            return c;
        };
        if (!best || pad(cand) < pad(*best)) best = cand;
    }
    if (!best) throw internal_error("no root of source modulus in target subfield");
    return cache.emplace(key, *best).first->second;
}

}  // namespace detail

/// canonical embedding determined by the fixed modulus table
inline FieldElement embed_extension(const FieldElement& e, const FieldSpec& target) {
    if (e.spec() == target) return e;
    if (!e.spec().embeds_into(target)) throw domain_error("incompatible field specs for embedding");
    if (e.spec().k() == 1) {
        const std::vector<int>& c = e.coeffs();
        return FieldElement::from_int(target, c.empty() ? 0 : c[0]);
    }
    const FieldElement& beta = detail::embedding_generator_image(e.spec(), target);
    FieldElement out = FieldElement::zero(target);
    FieldElement pw = FieldElement::one(target);
    const std::vector<int>& c = e.coeffs();
    for (size_t d = 0; d < c.size(); ++d) {
        if (c[d] != 0) out += pw * FieldElement::from_int(target, c[d]);
        pw = pw * beta;
    }
    return out;
}

inline Matrix embed_matrix(const Matrix& m, const FieldSpec& target) {
    Matrix r(m.rows(), m.cols(), target);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = embed_extension(m(i, j), target);
    return r;
}

}  // namespace orbitlab
