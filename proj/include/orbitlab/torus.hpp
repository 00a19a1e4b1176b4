#pragma once

// Exact convex geometry for torus actions: closedness of T-orbits via the
// relative-interior criterion (0 in relint of the weight polytope <=> orbit
// closed), separating and supporting hyperplanes as integer certificates, and
// the optimal destabilizing direction as the min-norm point of the weight
// hull.  Everything runs over rationals; no tolerances anywhere.
//
// Sign convention, fixed across the library: a coordinate of weight chi
// scales by t^{<chi,lambda>} under lambda(t), so a limit at t -> 0 exists
// iff <chi,lambda> >= 0 on the support, and an unstable point is driven to 0
// by any lambda with <chi,lambda> > 0 throughout.

#include "orbitlab/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace orbitlab {

struct WeightSupport {
    int rank = 0;
    std::vector<std::vector<long long>> weights;  // duplicates collapsed

    static WeightSupport make(int rank, std::vector<std::vector<long long>> ws) {
        WeightSupport s;
        s.rank = rank;
        for (auto& w : ws) {
            if (static_cast<int>(w.size()) != rank) throw domain_error("weight vector of wrong rank");
            if (std::find(s.weights.begin(), s.weights.end(), w) == s.weights.end()) s.weights.push_back(w);
        }
        return s;
    }

    bool empty() const { return weights.empty(); }
};

enum class ConvexKind { InRelativeInterior, OnBoundary, Outside };

struct ConvexCertificate {
    ConvexKind kind = ConvexKind::InRelativeInterior;
    std::vector<long long> normal;       // supporting (OnBoundary) or strictly separating (Outside)
    std::vector<Rational> barycentric;   // positive, sums to 1, weighted sum 0 (InRelativeInterior)
};

// ---------------------------------------------------------------------------
// exact LP: max c^T x  s.t.  A x = b, x >= 0   (two-phase simplex, Bland's rule)

namespace lp {

struct Result {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Optimal;
    std::vector<Rational> x;
    Rational value;
};

class Tableau {
public:
    // rows of [A | b] with b >= 0 enforced by row negation
    Tableau(std::vector<std::vector<Rational>> a, std::vector<Rational> b) : a_(std::move(a)), b_(std::move(b)) {
        m_ = static_cast<int>(a_.size());
        n_ = m_ ? static_cast<int>(a_[0].size()) : 0;
        for (int i = 0; i < m_; ++i)
            if (b_[i] < 0) {
                for (auto& v : a_[i]) v = -v;
                b_[i] = -b_[i];
            }
    }

    Result solve(const std::vector<Rational>& cost) {
        // phase 1: artificial basis
        basis_.resize(m_);
        tab_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) tab_[i][j] = a_[i][j];
            tab_[i][n_ + i] = 1;
            tab_[i][n_ + m_] = b_[i];
            basis_[i] = n_ + i;
        }
        std::vector<Rational> phase1(n_ + m_, Rational(0));
        for (int i = 0; i < m_; ++i) phase1[n_ + i] = -1;  // maximize -(sum of artificials)
        run(phase1, n_ + m_);
        Rational art_sum = 0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_) art_sum += tab_[i][n_ + m_];
        if (art_sum != 0) return {Result::Status::Infeasible, {}, Rational(0)};
        // drive remaining artificials out of the basis
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            int piv = -1;
            for (int j = 0; j < n_; ++j)
                if (tab_[i][j] != 0) {
                    piv = j;
                    break;
                }
            if (piv >= 0) pivot(i, piv);
        }
        // phase 2 on the original columns only
        std::vector<Rational> cost2(n_ + m_, Rational(0));
        for (int j = 0; j < n_; ++j) cost2[j] = cost[j];
        bool bounded = run(cost2, n_);
        if (!bounded) return {Result::Status::Unbounded, {}, Rational(0)};
        std::vector<Rational> x(n_, Rational(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = tab_[i][n_ + m_];
        Rational val = 0;
        for (int j = 0; j < n_; ++j) val += cost[j] * x[j];
        return {Result::Status::Optimal, x, val};
    }

private:
    // returns false when unbounded
    bool run(const std::vector<Rational>& cost, int allowed_cols) {
        while (true) {
            // reduced costs: cost_j - c_B^T B^{-1} A_j, computed from the tableau
            int entering = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                bool basic = std::find(basis_.begin(), basis_.end(), j) != basis_.end();
                if (basic) continue;
                Rational red = cost[j];
                for (int i = 0; i < m_; ++i) red -= cost[basis_[i]] * tab_[i][j];
                if (red > 0) {
                    entering = j;  // Bland: smallest index
                    break;
                }
            }
            if (entering < 0) return true;
            int leave = -1;
            Rational best_ratio = 0;
            for (int i = 0; i < m_; ++i) {
                if (tab_[i][entering] <= 0) continue;
                Rational ratio = tab_[i][n_ + m_] / tab_[i][entering];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;  // unbounded direction
            pivot(leave, entering);
        }
    }

    void pivot(int row, int col) {
        Rational p = tab_[row][col];
        for (auto& v : tab_[row]) v /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == row || tab_[i][col] == 0) continue;
            Rational f = tab_[i][col];
            for (int j = 0; j <= n_ + m_; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        basis_[row] = col;
    }

    std::vector<std::vector<Rational>> a_;
    std::vector<Rational> b_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<int> basis_;
    int m_ = 0, n_ = 0;
};

inline Result solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational> c) {
    return Tableau(std::move(a), std::move(b)).solve(c);
}

}  // namespace lp

namespace detail {

inline std::vector<long long> primitive_integer(const std::vector<Rational>& v) {
    BigInt lcm = 1;
    for (const Rational& r : v) {
        BigInt den = denominator(r);
        lcm = lcm / gcd(lcm, den) * den;
    }
    std::vector<BigInt> ints;
    for (const Rational& r : v) ints.push_back(static_cast<BigInt>(numerator(r * Rational(lcm))));
    BigInt g = 0;
    for (const BigInt& x : ints) g = gcd(g, x < 0 ? BigInt(-x) : x);
    std::vector<long long> out;
    for (const BigInt& x : ints) out.push_back(static_cast<long long>(g == 0 ? x : x / g));
    return out;
}

/// does {n : <w_i, n> >= 1 for i not in zero_set, <w_i, n> = 0 for i in zero_set} have a solution?
inline std::optional<std::vector<long long>> separating_normal(const WeightSupport& s,
                                                               const std::vector<bool>& zero_set) {
    const int r = s.rank;
    const int m = static_cast<int>(s.weights.size());
    // variables: n+ (r), n- (r), slack per strict row
    int strict = 0;
    for (int i = 0; i < m; ++i)
        if (!zero_set[i]) ++strict;
    int cols = 2 * r + strict;
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    int slack = 0;
    for (int i = 0; i < m; ++i) {
        std::vector<Rational> row(cols, Rational(0));
        for (int j = 0; j < r; ++j) {
            row[j] = s.weights[i][j];
            row[r + j] = -Rational(s.weights[i][j]);
        }
        if (zero_set[i]) {
            A.push_back(row);
            b.push_back(0);
        } else {
            row[2 * r + slack] = -1;
            ++slack;
            A.push_back(row);
            b.push_back(1);
        }
    }
    lp::Result res = lp::solve(A, b, std::vector<Rational>(cols, Rational(0)));
    if (res.status != lp::Result::Status::Optimal) return std::nullopt;
    std::vector<Rational> n(r);
    for (int j = 0; j < r; ++j) n[j] = res.x[j] - res.x[r + j];
    return primitive_integer(n);
}

}  // namespace detail

/// Closedness certificate for the torus orbit with the given weight support:
/// InRelativeInterior (closed), OnBoundary (limit along the supporting normal
/// lands in a smaller stratum), or Outside (0 in the orbit closure).
inline ConvexCertificate torus_orbit_closed(const WeightSupport& s) {
    ConvexCertificate cert;
    if (s.empty()) {
        cert.kind = ConvexKind::InRelativeInterior;  // x = 0: fixed point
        return cert;
    }
    const int r = s.rank;
    const int m = static_cast<int>(s.weights.size());

    // Outside test: a strictly separating normal exists iff 0 is not in the hull
    if (auto normal = detail::separating_normal(s, std::vector<bool>(m, false))) {
        cert.kind = ConvexKind::Outside;
        cert.normal = *normal;
        return cert;
    }

    // relative interior: maximize eps with c_i = d_i + eps, sum c = 1, sum c w = 0
    {
        int cols = m + 2;  // d_i, eps+, eps-
        std::vector<std::vector<Rational>> A;
        std::vector<Rational> b;
        for (int j = 0; j < r; ++j) {
            std::vector<Rational> row(cols, Rational(0));
            long long wsum = 0;
            for (int i = 0; i < m; ++i) {
                row[i] = s.weights[i][j];
                wsum += s.weights[i][j];
            }
            row[m] = wsum;
            row[m + 1] = -Rational(wsum);
            A.push_back(row);
            b.push_back(0);
        }
        std::vector<Rational> row(cols, Rational(1));
        row[m] = m;
        row[m + 1] = -Rational(m);
        A.push_back(row);
        b.push_back(1);
        std::vector<Rational> cost(cols, Rational(0));
        cost[m] = 1;
        cost[m + 1] = -1;
        lp::Result res = lp::solve(A, b, cost);
        if (res.status != lp::Result::Status::Optimal) throw internal_error("relint LP must be feasible here");
        if (res.value > 0) {
            cert.kind = ConvexKind::InRelativeInterior;
            Rational eps = res.x[m] - res.x[m + 1];
            for (int i = 0; i < m; ++i) cert.barycentric.push_back(res.x[i] + eps);
            return cert;
        }
    }

    // boundary: find the indices that can carry positive mass, then support there
    std::vector<bool> in_face(m, false);
    for (int i = 0; i < m; ++i) {
        int cols = m;
        std::vector<std::vector<Rational>> A;
        std::vector<Rational> b;
        for (int j = 0; j < r; ++j) {
            std::vector<Rational> row(cols, Rational(0));
            for (int k = 0; k < m; ++k) row[k] = s.weights[k][j];
            A.push_back(row);
            b.push_back(0);
        }
        A.push_back(std::vector<Rational>(cols, Rational(1)));
        b.push_back(1);
        std::vector<Rational> cost(cols, Rational(0));
        cost[i] = 1;
        lp::Result res = lp::solve(A, b, cost);
        if (res.status == lp::Result::Status::Optimal && res.value > 0) in_face[i] = true;
    }
    auto normal = detail::separating_normal(s, in_face);
    if (!normal) throw internal_error("no supporting normal for a boundary point");
    cert.kind = ConvexKind::OnBoundary;
    cert.normal = *normal;
    return cert;
}

// ---------------------------------------------------------------------------
// min-norm point (Wolfe's algorithm over exact rationals)

namespace detail {

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational v = 0;
    for (size_t i = 0; i < a.size(); ++i) v += a[i] * b[i];
    return v;
}

/// min-norm point of the affine hull of the given points: solve the KKT
/// system [2G 1; 1^T 0] [mu; lambda] = [0; 1]
inline std::optional<std::vector<Rational>> affine_min_norm(const std::vector<std::vector<Rational>>& pts) {
    const int k = static_cast<int>(pts.size());
    FieldSpec Q = FieldSpec::rationals();
    Matrix sys(k + 1, k + 1, Q);
    Matrix rhs(k + 1, 1, Q);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) sys(i, j) = FieldElement::from_rational(2 * dot(pts[i], pts[j]));
        sys(i, k) = FieldElement::one(Q);
    }
    for (int j = 0; j < k; ++j) sys(k, j) = FieldElement::one(Q);
    rhs(k, 0) = FieldElement::one(Q);
    auto sol = solve_linear(sys, rhs);
    if (!sol) return std::nullopt;
    std::vector<Rational> mu(k);
    for (int i = 0; i < k; ++i) mu[i] = sol->particular(i, 0).rational();
    return mu;
}

}  // namespace detail

/// exact min-norm point of conv(points); returns the point (not the direction)
inline std::vector<Rational> min_norm_point(const std::vector<std::vector<long long>>& points) {
    if (points.empty()) throw domain_error("min_norm_point: empty set");
    const int r = static_cast<int>(points[0].size());
    const int m = static_cast<int>(points.size());
    std::vector<std::vector<Rational>> pts(m, std::vector<Rational>(r));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) pts[i][j] = points[i][j];

    auto point_of = [&](const std::vector<int>& corral, const std::vector<Rational>& mu) {
        std::vector<Rational> x(r, Rational(0));
        for (size_t i = 0; i < corral.size(); ++i)
            for (int j = 0; j < r; ++j) x[j] += mu[i] * pts[corral[i]][j];
        return x;
    };

    // start with the smallest-norm point (smallest index on ties)
    int start = 0;
    for (int i = 1; i < m; ++i)
        if (detail::dot(pts[i], pts[i]) < detail::dot(pts[start], pts[start])) start = i;
    std::vector<int> corral{start};
    std::vector<Rational> mu{Rational(1)};
    std::vector<Rational> x = pts[start];

    for (int guard = 0; guard < 10000; ++guard) {
        // optimality: <w_j, x> >= <x, x> for all j
        Rational xx = detail::dot(x, x);
        int entering = -1;
        for (int j = 0; j < m; ++j) {
            if (std::find(corral.begin(), corral.end(), j) != corral.end()) continue;
            if (detail::dot(pts[j], x) < xx) {
                entering = j;  // Bland: smallest index
                break;
            }
        }
        if (entering < 0) return x;
        corral.push_back(entering);
        mu.push_back(Rational(0));

        // minor cycles
        for (int minor = 0; minor < 10000; ++minor) {
            std::vector<std::vector<Rational>> cpts;
            for (int idx : corral) cpts.push_back(pts[idx]);
            auto nu = detail::affine_min_norm(cpts);
            if (!nu) {
                // affinely dependent corral: drop the smallest-index zero-weight point
                int drop = -1;
                for (size_t i = 0; i < mu.size(); ++i)
                    if (mu[i] == 0 && (drop < 0 || corral[i] < corral[drop])) drop = static_cast<int>(i);
                if (drop < 0) throw internal_error("Wolfe: singular corral without droppable point");
                corral.erase(corral.begin() + drop);
                mu.erase(mu.begin() + drop);
                continue;
            }
            bool interior = std::all_of(nu->begin(), nu->end(), [](const Rational& v) { return v > 0; });
            if (interior) {
                mu = *nu;
                x = point_of(corral, mu);
                break;
            }
            // step towards nu until a coefficient hits zero
            Rational theta = 1;
            for (size_t i = 0; i < mu.size(); ++i) {
                if ((*nu)[i] <= 0 && mu[i] > (*nu)[i]) {
                    Rational cand = mu[i] / (mu[i] - (*nu)[i]);
                    if (cand < theta) theta = cand;
                }
            }
            std::vector<Rational> mixed(mu.size());
            for (size_t i = 0; i < mu.size(); ++i) mixed[i] = (1 - theta) * mu[i] + theta * (*nu)[i];
            // drop zero coefficients (keep at least one point)
            std::vector<int> ncorral;
            std::vector<Rational> nmu;
            for (size_t i = 0; i < mixed.size(); ++i)
                if (mixed[i] > 0) {
                    ncorral.push_back(corral[i]);
                    nmu.push_back(mixed[i]);
                }
            if (ncorral.empty()) throw internal_error("Wolfe: empty corral");
            corral = std::move(ncorral);
            mu = std::move(nmu);
            x = point_of(corral, mu);
        }
    }
    throw internal_error("Wolfe iteration guard exceeded");
}

/// Optimal destabilizing direction for an unstable support: the primitive
/// integer vector along the min-norm point m of the hull (<w, m> >= |m|^2 > 0
/// on the support, so the limit along it exists and is 0; among all
/// directions it maximizes the normalized minimal pairing)
inline std::vector<long long> optimal_destabilizer(const WeightSupport& s) {
    ConvexCertificate cert = torus_orbit_closed(s);
    if (cert.kind != ConvexKind::Outside) throw domain_error("optimal_destabilizer: orbit closure does not contain 0");
    std::vector<Rational> mnp = min_norm_point(s.weights);
    Rational mm = detail::dot(mnp, mnp);
    if (mm == 0) throw internal_error("min-norm point is zero for an unstable support");
    // global optimality certificate
    for (const auto& w : s.weights) {
        std::vector<Rational> wr(w.begin(), w.end());
        if (detail::dot(wr, mnp) < mm) throw internal_error("min-norm optimality certificate failed");
    }
    return detail::primitive_integer(mnp);
}

// ---------------------------------------------------------------------------
// limits in torus coordinates

struct TorusLimitOutcome {
    bool exists = false;
    std::vector<size_t> kept;                  // indices with <weight, w> = 0
    std::vector<long long> negative_support;   // distinct negative pairings
};

/// limit of a point with the given support along the lattice vector w
inline TorusLimitOutcome limit_along(const WeightSupport& s, const std::vector<long long>& w) {
    if (static_cast<int>(w.size()) != s.rank) throw domain_error("limit_along: rank mismatch");
    TorusLimitOutcome out;
    for (size_t i = 0; i < s.weights.size(); ++i) {
        long long pairing = 0;
        for (int j = 0; j < s.rank; ++j) pairing += s.weights[i][j] * w[j];
        if (pairing < 0) {
            if (std::find(out.negative_support.begin(), out.negative_support.end(), pairing) ==
                out.negative_support.end())
                out.negative_support.push_back(pairing);
        } else if (pairing == 0) {
            out.kept.push_back(i);
        }
    }
    out.exists = out.negative_support.empty();
    return out;
}

/// exact Kempf ratio comparison: ratio(w) = min_i <chi_i, w> / |w|;
/// returns -1, 0, +1 comparing ratio(a) against ratio(b)
inline int compare_kempf_ratio(const WeightSupport& s, const std::vector<long long>& a,
                               const std::vector<long long>& b) {
    auto min_pairing = [&](const std::vector<long long>& w) {
        long long best = 0;
        bool first = true;
        for (const auto& chi : s.weights) {
            long long p = 0;
            for (int j = 0; j < s.rank; ++j) p += chi[j] * w[j];
            if (first || p < best) best = p;
            first = false;
        }
        return best;
    };
    auto norm2 = [](const std::vector<long long>& w) {
        BigInt v = 0;
        for (long long c : w) v += BigInt(c) * c;
        return v;
    };
    BigInt ma = min_pairing(a), mb = min_pairing(b);
    // signed comparison of ma/sqrt(|a|^2) vs mb/sqrt(|b|^2)
    int sa = ma > 0 ? 1 : (ma == 0 ? 0 : -1);
    int sb = mb > 0 ? 1 : (mb == 0 ? 0 : -1);
    if (sa != sb) return sa < sb ? -1 : 1;
    BigInt lhs = ma * ma * norm2(b), rhs = mb * mb * norm2(a);
    if (sa < 0) std::swap(lhs, rhs);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

}  // namespace orbitlab
