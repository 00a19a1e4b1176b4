#pragma once

// Cocharacters lambda(t) = g diag(t^{w_1},...,t^{w_n}) g^{-1}, exact weight
// gradings of group actions, limits t -> 0, and the associated subgroups
// P_lambda, L_lambda, R_u(P_lambda) as membership tests.
//
// Limits are never taken numerically: a point is decomposed into its integer
// weight components, and the limit exists exactly when no negative component
// is present.

#include "orbitlab/tuple.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <variant>

namespace orbitlab {

class Cocharacter {
public:
    /// canonical form: weights sorted non-increasing (stable), base change
    /// columns permuted to match
    Cocharacter(Matrix base_change, std::vector<long long> weights) {
        if (!base_change.is_square() || base_change.rows() != static_cast<int>(weights.size()))
            throw domain_error("cocharacter: base change / weight size mismatch");
        std::vector<int> order(weights.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weights[a] > weights[b]; });
        weights_.resize(weights.size());
        Matrix g(base_change.rows(), base_change.cols(), base_change.spec());
        for (size_t j = 0; j < order.size(); ++j) {
            weights_[j] = weights[order[j]];
            for (int i = 0; i < base_change.rows(); ++i) g(i, static_cast<int>(j)) = base_change(i, order[j]);
        }
        auto gi = invert(g);
        if (!gi) throw domain_error("cocharacter base change must be invertible");
        base_change_ = std::move(g);
        base_change_inv_ = std::move(*gi);
    }

    static Cocharacter diagonal(const FieldSpec& spec, std::vector<long long> weights) {
        int n = static_cast<int>(weights.size());
        return Cocharacter(Matrix::identity(n, spec), std::move(weights));
    }

    int ambient() const { return base_change_.rows(); }
    const FieldSpec& spec() const { return base_change_.spec(); }
    const Matrix& base_change() const { return base_change_; }
    const Matrix& base_change_inverse() const { return base_change_inv_; }
    const std::vector<long long>& weights() const { return weights_; }

    bool is_trivial() const {
        return std::all_of(weights_.begin(), weights_.end(), [](long long w) { return w == 0; });
    }

    long long weight_sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0LL); }

    /// lambda(t0) for a concrete invertible t0
    Matrix evaluate(const FieldElement& t0) const {
        if (t0.is_zero()) throw domain_error("cocharacter evaluated at 0");
        std::vector<FieldElement> d;
        d.reserve(weights_.size());
        for (long long w : weights_) d.push_back(t0.pow(w));
        return base_change_ * Matrix::diagonal(d) * base_change_inv_;
    }

    /// weight-v projector images: v -> g E_v g^{-1}; determines lambda as a map
    std::map<long long, Matrix> component_matrices() const {
        std::map<long long, Matrix> out;
        for (long long v : weights_) {
            if (out.count(v)) continue;
            Matrix e(ambient(), ambient(), spec());
            for (size_t i = 0; i < weights_.size(); ++i)
                if (weights_[i] == v) e(static_cast<int>(i), static_cast<int>(i)) = FieldElement::one(spec());
            out.emplace(v, base_change_ * e * base_change_inv_);
        }
        return out;
    }

    /// equality as homomorphisms k* -> GL_n
    bool operator==(const Cocharacter& o) const {
        if (ambient() != o.ambient() || spec() != o.spec()) return false;
        return component_matrices() == o.component_matrices();
    }
    bool operator!=(const Cocharacter& o) const { return !(*this == o); }

private:
    Matrix base_change_;
    Matrix base_change_inv_;
    std::vector<long long> weights_;
};

/// (g . lambda)(t) = g lambda(t) g^{-1}
inline Cocharacter act_on_cocharacter(const Matrix& g, const Cocharacter& lam) {
    if (!invert(g)) throw domain_error("act_on_cocharacter: singular g");
    return Cocharacter(g * lam.base_change(), lam.weights());
}

// ---------------------------------------------------------------------------
// points and actions

struct Point;
using PointPtr = std::shared_ptr<const Point>;

/// A point of the acted-on variety: a vector, a matrix tuple, or a pair.
struct Point {
    std::variant<Matrix, MatrixTuple, std::pair<PointPtr, PointPtr>> v;

    static Point vector(Matrix col) {
        if (col.cols() != 1) throw domain_error("vector point must be a column");
        return Point{col};
    }
    static Point tuple(MatrixTuple t) { return Point{std::move(t)}; }
    static Point product(Point a, Point b) {
        return Point{std::make_pair(std::make_shared<const Point>(std::move(a)),
                                    std::make_shared<const Point>(std::move(b)))};
    }

    bool is_vector() const { return std::holds_alternative<Matrix>(v); }
    bool is_tuple() const { return std::holds_alternative<MatrixTuple>(v); }
    bool is_pair() const { return std::holds_alternative<std::pair<PointPtr, PointPtr>>(v); }

    const Matrix& as_vector() const { return std::get<Matrix>(v); }
    const MatrixTuple& as_tuple() const { return std::get<MatrixTuple>(v); }
    const Point& left() const { return *std::get<std::pair<PointPtr, PointPtr>>(v).first; }
    const Point& right() const { return *std::get<std::pair<PointPtr, PointPtr>>(v).second; }

    bool operator==(const Point& o) const {
        if (v.index() != o.v.index()) return false;
        if (is_vector()) return as_vector() == o.as_vector();
        if (is_tuple()) return as_tuple() == o.as_tuple();
        return left() == o.left() && right() == o.right();
    }
    bool operator!=(const Point& o) const { return !(*this == o); }
};

inline int point_ambient(const Point& p) {
    if (p.is_vector()) return p.as_vector().rows();
    if (p.is_tuple()) return p.as_tuple().dim();
    return point_ambient(p.left());
}

inline const FieldSpec& point_spec(const Point& p) {
    if (p.is_vector()) return p.as_vector().spec();
    if (p.is_tuple()) return p.as_tuple().spec();
    return point_spec(p.left());
}

inline Point zero_like(const Point& p) {
    if (p.is_vector()) return Point::vector(Matrix(p.as_vector().rows(), 1, p.as_vector().spec()));
    if (p.is_tuple()) {
        std::vector<Matrix> z(p.as_tuple().size(), Matrix(p.as_tuple().dim(), p.as_tuple().dim(), p.as_tuple().spec()));
        return Point::tuple(MatrixTuple::make(std::move(z), p.as_tuple().sl_constraint));
    }
    return Point::product(zero_like(p.left()), zero_like(p.right()));
}

inline Point point_add(const Point& a, const Point& b) {
    if (a.v.index() != b.v.index()) throw domain_error("point shape mismatch");
    if (a.is_vector()) return Point::vector(a.as_vector() + b.as_vector());
    if (a.is_tuple()) {
        if (a.as_tuple().size() != b.as_tuple().size()) throw domain_error("tuple length mismatch");
        std::vector<Matrix> out;
        for (size_t i = 0; i < a.as_tuple().size(); ++i) out.push_back(a.as_tuple().entries[i] + b.as_tuple().entries[i]);
        return Point::tuple(MatrixTuple::make(std::move(out), a.as_tuple().sl_constraint));
    }
    return Point::product(point_add(a.left(), b.left()), point_add(a.right(), b.right()));
}

inline bool point_is_zero(const Point& p) {
    if (p.is_vector()) return p.as_vector().is_zero();
    if (p.is_tuple())
        return std::all_of(p.as_tuple().entries.begin(), p.as_tuple().entries.end(),
                           [](const Matrix& m) { return m.is_zero(); });
    return point_is_zero(p.left()) && point_is_zero(p.right());
}

/// g . p: matrix product for vectors, simultaneous conjugation for tuples,
/// diagonal action on pairs
inline Point apply_group(const Matrix& g, const Point& p) {
    if (p.is_vector()) return Point::vector(g * p.as_vector());
    if (p.is_tuple()) return Point::tuple(p.as_tuple().conjugated(g));
    return Point::product(apply_group(g, p.left()), apply_group(g, p.right()));
}

enum class ActionKind { LinearOnVector, ConjugationOnTuple, DiagonalProduct };

/// A group action datum: the acting GL_n / SL_n, the shape of the action and
/// the concrete point.
struct ActionInstance {
    int ambient_dim = 0;
    bool sl_constraint = false;
    Point point;

    static ActionInstance linear(Matrix col, bool sl = false) {
        ActionInstance a;
        a.ambient_dim = col.rows();
        a.sl_constraint = sl;
        a.point = Point::vector(std::move(col));
        return a;
    }
    static ActionInstance conjugation(MatrixTuple t) {
        ActionInstance a;
        a.ambient_dim = t.dim();
        a.sl_constraint = t.sl_constraint;
        a.point = Point::tuple(std::move(t));
        return a;
    }
    static ActionInstance product(const ActionInstance& x, const ActionInstance& y) {
        if (x.ambient_dim != y.ambient_dim) throw domain_error("product action: ambient mismatch");
        ActionInstance a;
        a.ambient_dim = x.ambient_dim;
        a.sl_constraint = x.sl_constraint || y.sl_constraint;
        a.point = Point::product(x.point, y.point);
        return a;
    }

    ActionKind kind() const {
        if (point.is_vector()) return ActionKind::LinearOnVector;
        if (point.is_tuple()) return ActionKind::ConjugationOnTuple;
        return ActionKind::DiagonalProduct;
    }
    const FieldSpec& spec() const { return point_spec(point); }
};

// ---------------------------------------------------------------------------
// gradings and limits

/// decomposition of a point into weight components under a cocharacter;
/// applying lambda(t) multiplies the weight-d component by t^d
struct WeightGrading {
    std::map<long long, Point> components;

    Point sum(const Point& shape) const {
        Point acc = zero_like(shape);
        for (const auto& [w, c] : components) acc = point_add(acc, c);
        return acc;
    }
};

struct LimitOutcome {
    bool exists = false;
    std::optional<Point> value;                 // the weight-0 component, when exists
    std::vector<long long> negative_support;    // negative weights with nonzero component
};

namespace detail {

inline void grade_point(const Point& p, const Cocharacter& lam, std::map<long long, Point>& out,
                        const std::function<Point(const Point&, long long)>& lift);

/// components of one matrix under conjugation weights w_i - w_j, in lambda's eigenbasis
inline std::map<long long, Matrix> grade_conjugation_entry(const Matrix& m, const Cocharacter& lam) {
    Matrix y = lam.base_change_inverse() * m * lam.base_change();
    const auto& w = lam.weights();
    std::map<long long, Matrix> buckets;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (y(i, j).is_zero()) continue;
            long long d = w[i] - w[j];
            auto it = buckets.find(d);
            if (it == buckets.end()) it = buckets.emplace(d, Matrix(m.rows(), m.cols(), m.spec())).first;
            it->second(i, j) = y(i, j);
        }
    std::map<long long, Matrix> out;
    for (auto& [d, b] : buckets) out.emplace(d, lam.base_change() * b * lam.base_change_inverse());
    return out;
}

}  // namespace detail

/// exact weight decomposition of x under lambda
inline WeightGrading grade(const ActionInstance& x, const Cocharacter& lam) {
    if (lam.ambient() != x.ambient_dim) throw domain_error("grade: ambient dimension mismatch");
    if (lam.spec() != x.spec()) throw domain_error("grade: field mismatch");
    WeightGrading g;

    std::function<std::map<long long, Point>(const Point&)> rec = [&](const Point& p) {
        std::map<long long, Point> comps;
        if (p.is_vector()) {
            Matrix y = lam.base_change_inverse() * p.as_vector();
            std::map<long long, Matrix> buckets;
            for (int i = 0; i < y.rows(); ++i) {
                if (y(i, 0).is_zero()) continue;
                long long d = lam.weights()[i];
                auto it = buckets.find(d);
                if (it == buckets.end()) it = buckets.emplace(d, Matrix(y.rows(), 1, y.spec())).first;
                it->second(i, 0) = y(i, 0);
            }
            for (auto& [d, b] : buckets) comps.emplace(d, Point::vector(lam.base_change() * b));
        } else if (p.is_tuple()) {
            const MatrixTuple& t = p.as_tuple();
            std::vector<std::map<long long, Matrix>> per_entry;
            std::set<long long> weights;
            for (const Matrix& m : t.entries) {
                per_entry.push_back(detail::grade_conjugation_entry(m, lam));
                for (const auto& [d, _] : per_entry.back()) weights.insert(d);
            }
            for (long long d : weights) {
                std::vector<Matrix> entries;
                for (size_t i = 0; i < t.size(); ++i) {
                    auto it = per_entry[i].find(d);
                    entries.push_back(it != per_entry[i].end() ? it->second : Matrix(t.dim(), t.dim(), t.spec()));
                }
                comps.emplace(d, Point::tuple(MatrixTuple::make(std::move(entries), t.sl_constraint)));
            }
        } else {
            auto lmap = rec(p.left());
            auto rmap = rec(p.right());
            std::set<long long> weights;
            for (const auto& [d, _] : lmap) weights.insert(d);
            for (const auto& [d, _] : rmap) weights.insert(d);
            for (long long d : weights) {
                auto li = lmap.find(d);
                auto ri = rmap.find(d);
                Point lpart = li != lmap.end() ? li->second : zero_like(p.left());
                Point rpart = ri != rmap.end() ? ri->second : zero_like(p.right());
                comps.emplace(d, Point::product(std::move(lpart), std::move(rpart)));
            }
        }
        return comps;
    };

    g.components = rec(x.point);
    return g;
}

/// lim_{t->0} lambda(t) . x, via the grading
inline LimitOutcome limit(const ActionInstance& x, const Cocharacter& lam) {
    WeightGrading g = grade(x, lam);
    LimitOutcome out;
    for (const auto& [d, c] : g.components)
        if (d < 0) out.negative_support.push_back(d);
    out.exists = out.negative_support.empty();
    if (out.exists) {
        auto it = g.components.find(0);
        out.value = it != g.components.end() ? it->second : zero_like(x.point);
    }
    return out;
}

/// P_lambda membership: the conjugation limit lambda(t) g lambda(t)^{-1} exists
inline bool p_lambda_contains(const Matrix& g, const Cocharacter& lam) {
    if (!invert(g)) throw domain_error("p_lambda_contains: singular matrix");
    auto comps = detail::grade_conjugation_entry(g, lam);
    for (const auto& [d, c] : comps)
        if (d < 0) return false;
    return true;
}

/// L_lambda membership: the conjugation limit equals g itself
inline bool l_lambda_contains(const Matrix& g, const Cocharacter& lam) {
    if (!invert(g)) throw domain_error("l_lambda_contains: singular matrix");
    auto comps = detail::grade_conjugation_entry(g, lam);
    return comps.size() == 1 && comps.count(0) == 1;
}

/// R_u(P_lambda) membership: the conjugation limit equals the identity
inline bool ru_p_lambda_contains(const Matrix& g, const Cocharacter& lam) {
    if (!invert(g)) throw domain_error("ru_p_lambda_contains: singular matrix");
    auto comps = detail::grade_conjugation_entry(g, lam);
    for (const auto& [d, c] : comps) {
        if (d < 0) return false;
        if (d == 0 && !c.is_identity()) return false;
    }
    return comps.count(0) == 1;
}

/// does lambda fix x?  (all of x sits in weight 0)
inline bool cocharacter_fixes(const ActionInstance& x, const Cocharacter& lam) {
    WeightGrading g = grade(x, lam);
    for (const auto& [d, c] : g.components)
        if (d != 0 && !point_is_zero(c)) return false;
    return true;
}

/// Both sides of the fixed-point criterion for limits: given u in R_u(P_lambda)
/// and an existing limit x', returns (x' == u.x, (u^{-1}.lambda) fixes x).
/// The two flags agree on every instance.
inline std::pair<bool, bool> check_conjfixed(const ActionInstance& x, const Cocharacter& lam, const Matrix& u) {
    if (!ru_p_lambda_contains(u, lam)) throw domain_error("check_conjfixed: u not in R_u(P_lambda)");
    LimitOutcome lo = limit(x, lam);
    if (!lo.exists) throw domain_error("check_conjfixed: limit does not exist");
    bool lhs = *lo.value == apply_group(u, x.point);
    Cocharacter mu = act_on_cocharacter(*invert(u), lam);
    bool rhs = cocharacter_fixes(x, mu);
    return {lhs, rhs};
}

/// Limit transport along conjugate cocharacters: with mu = u.lambda, the limit
/// of x along mu exists and equals u.x'.  Returns whether that holds.
inline bool check_conjlim(const ActionInstance& x, const Cocharacter& lam, const Matrix& u) {
    if (!ru_p_lambda_contains(u, lam)) throw domain_error("check_conjlim: u not in R_u(P_lambda)");
    LimitOutcome lo = limit(x, lam);
    if (!lo.exists) throw domain_error("check_conjlim: limit does not exist");
    Cocharacter mu = act_on_cocharacter(u, lam);
    LimitOutcome lm = limit(x, mu);
    return lm.exists && *lm.value == apply_group(u, *lo.value);
}

// ---------------------------------------------------------------------------
// structured subgroup membership for cocharacters

inline bool matrix_is_block_diagonal(const Matrix& m, const std::vector<int>& sizes) {
    int total = std::accumulate(sizes.begin(), sizes.end(), 0);
    if (total != m.rows() || !m.is_square()) throw domain_error("block sizes do not match matrix");
    int r0 = 0;
    for (int s : sizes) {
        for (int i = r0; i < r0 + s; ++i)
            for (int j = 0; j < m.cols(); ++j)
                if ((j < r0 || j >= r0 + s) && !m(i, j).is_zero()) return false;
        r0 += s;
    }
    return true;
}

/// lambda lies in the block subgroup GL_{a} x GL_{b} x ... iff every weight
/// projector is block-diagonal
inline bool cocharacter_in_block_subgroup(const Cocharacter& lam, const std::vector<int>& sizes) {
    for (const auto& [d, c] : lam.component_matrices())
        if (!matrix_is_block_diagonal(c, sizes)) return false;
    return true;
}

}  // namespace orbitlab
