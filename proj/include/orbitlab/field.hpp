#pragma once

// Exact scalar arithmetic over Q and F_{p^k}.
//
// Rationals are arbitrary-precision (boost cpp_rational keeps them in lowest
// terms with positive denominator).  Finite-field elements are polynomial
// residues modulo a monic irreducible taken from a fixed table, so serialized
// data is portable between runs and machines.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Precondition violation; the CLI maps this to exit code 2.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invariant breach / self-check failure; the CLI maps this to exit code 3.
struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

enum class FieldKind { Rationals, FiniteField };

namespace detail {

// Dense polynomials over F_p, coefficients in [0,p), trailing zeros trimmed.
using PolyFp = std::vector<int>;

inline void poly_trim(PolyFp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyFp poly_add(const PolyFp& a, const PolyFp& b, int p) {
    PolyFp r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        int v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = v % p;
    }
    poly_trim(r);
    return r;
}

inline PolyFp poly_sub(const PolyFp& a, const PolyFp& b, int p) {
    PolyFp r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        int v = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
        r[i] = ((v % p) + p) % p;
    }
    poly_trim(r);
    return r;
}

inline PolyFp poly_mul(const PolyFp& a, const PolyFp& b, int p) {
    if (a.empty() || b.empty()) return {};
    PolyFp r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    poly_trim(r);
    return r;
}

inline int inv_mod_p(int a, int p) {
    a = ((a % p) + p) % p;
    if (a == 0) throw domain_error("division by zero in F_p");
    int t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        int q = r / newr;
        int tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    return ((t % p) + p) % p;
}

// divides a by b; returns (quotient, remainder)
inline std::pair<PolyFp, PolyFp> poly_divmod(PolyFp a, const PolyFp& b, int p) {
    if (b.empty()) throw domain_error("polynomial division by zero");
    PolyFp q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    int lead_inv = inv_mod_p(b.back(), p);
    for (int shift = static_cast<int>(a.size()) - static_cast<int>(b.size()); shift >= 0; --shift) {
        size_t top = shift + b.size() - 1;
        int c = (a[top] * lead_inv) % p;
        if (c != 0) {
            q[shift] = c;
            for (size_t i = 0; i < b.size(); ++i)
                a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        }
    }
    poly_trim(a);
    poly_trim(q);
    return {q, a};
}

inline PolyFp poly_mod(const PolyFp& a, const PolyFp& m, int p) { return poly_divmod(a, m, p).second; }

// extended gcd: returns (g, s, t) with s*a + t*b = g, g monic
inline std::tuple<PolyFp, PolyFp, PolyFp> poly_egcd(PolyFp a, PolyFp b, int p) {
    PolyFp s0{1}, s1{}, t0{}, t1{1};
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b, p);
        a = b;
        b = r;
        PolyFp s2 = poly_sub(s0, poly_mul(q, s1, p), p);
        s0 = s1;
        s1 = s2;
        PolyFp t2 = poly_sub(t0, poly_mul(q, t1, p), p);
        t0 = t1;
        t1 = t2;
    }
    if (!a.empty() && a.back() != 1) {
        int inv = inv_mod_p(a.back(), p);
        for (auto& c : a) c = (c * inv) % p;
        for (auto& c : s0) c = (c * inv) % p;
        for (auto& c : t0) c = (c * inv) % p;
    }
    return {a, s0, t0};
}

inline bool is_prime_small(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Irreducibility over F_p by trial division against every monic divisor of
// degree <= deg/2.  Feasible for the table range (p <= 7, k <= 8).
inline bool poly_irreducible(const PolyFp& f, int p) {
    int deg = static_cast<int>(f.size()) - 1;
    if (deg <= 0) return false;
    if (deg == 1) return true;
    for (int d = 1; d <= deg / 2; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long idx = 0; idx < count; ++idx) {
            PolyFp g(d + 1, 0);
            g[d] = 1;
            long long v = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = static_cast<int>(v % p);
                v /= p;
            }
            if (poly_divmod(f, g, p).second.empty()) return false;
        }
    }
    return true;
}

// The fixed modulus table: for each (p,k) the first monic irreducible of
// degree k over F_p in base-p counting order of the low coefficients.
inline const PolyFp& modulus_table(int p, int k) {
    static std::map<std::pair<int, int>, PolyFp> cache;
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (!is_prime_small(p) || p > 7) throw domain_error("field characteristic must be a prime in {2,3,5,7}");
    if (k < 1 || k > 8) throw domain_error("extension degree must satisfy 1 <= k <= 8");
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long long idx = 0; idx < count; ++idx) {
        PolyFp f(k + 1, 0);
        f[k] = 1;
        long long v = idx;
        for (int i = 0; i < k; ++i) {
            f[i] = static_cast<int>(v % p);
            v /= p;
        }
        if (poly_irreducible(f, p)) return cache.emplace(key, f).first->second;
    }
    throw internal_error("no irreducible polynomial found");  // unreachable
}

}  // namespace detail

/// Identifies a coefficient field: Q, or F_{p^k} with the table modulus.
class FieldSpec {
public:
    FieldSpec() : kind_(FieldKind::Rationals) {}

    static FieldSpec rationals() { return FieldSpec(); }

    static FieldSpec finite(int p, int k = 1) {
        FieldSpec s;
        s.kind_ = FieldKind::FiniteField;
        s.p_ = p;
        s.k_ = k;
        s.modulus_ = &detail::modulus_table(p, k);
        return s;
    }

    FieldKind kind() const { return kind_; }
    bool is_rationals() const { return kind_ == FieldKind::Rationals; }
    bool is_finite() const { return kind_ == FieldKind::FiniteField; }
    int p() const { return p_; }
    int k() const { return k_; }
    const detail::PolyFp& modulus() const {
        if (!is_finite()) throw domain_error("modulus only defined for finite fields");
        return *modulus_;
    }
    /// number of field elements; only valid for finite fields
    long long order() const {
        if (!is_finite()) throw domain_error("order only defined for finite fields");
        long long q = 1;
        for (int i = 0; i < k_; ++i) q *= p_;
        return q;
    }

    bool operator==(const FieldSpec& o) const { return kind_ == o.kind_ && p_ == o.p_ && k_ == o.k_; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    /// true when `ext` is an extension of this field reachable by the table embedding
    bool embeds_into(const FieldSpec& ext) const {
        if (is_rationals() || ext.is_rationals()) return *this == ext;
        return p_ == ext.p_ && ext.k_ % k_ == 0;
    }

    std::string to_string() const {
        if (is_rationals()) return "Q";
        std::ostringstream os;
        os << "F_" << p_;
        if (k_ > 1) os << "^" << k_;
        return os.str();
    }

private:
    FieldKind kind_;
    int p_ = 0;
    int k_ = 1;
    const detail::PolyFp* modulus_ = nullptr;
};

/// One exact scalar.  Value semantics, immutable in spirit; all arithmetic
/// checks that both operands live in the same field.
class FieldElement {
public:
    FieldElement() : spec_(FieldSpec::rationals()), rat_(0) {}

    static FieldElement zero(const FieldSpec& s) { return from_int(s, 0); }
    static FieldElement one(const FieldSpec& s) { return from_int(s, 1); }

    static FieldElement from_int(const FieldSpec& s, long long v) {
        FieldElement e;
        e.spec_ = s;
        if (s.is_rationals()) {
            e.rat_ = v;
        } else {
            long long r = ((v % s.p()) + s.p()) % s.p();
            if (r != 0) e.poly_ = {static_cast<int>(r)};
        }
        return e;
    }

    static FieldElement from_rational(const Rational& r) {
        FieldElement e;
        e.spec_ = FieldSpec::rationals();
        e.rat_ = r;
        return e;
    }

    /// residue-class element from low-order coefficients (finite fields)
    static FieldElement from_coeffs(const FieldSpec& s, std::vector<int> coeffs) {
        if (!s.is_finite()) throw domain_error("coefficient constructor requires a finite field");
        for (auto& c : coeffs) c = ((c % s.p()) + s.p()) % s.p();
        detail::poly_trim(coeffs);
        if (static_cast<int>(coeffs.size()) > s.k()) coeffs = detail::poly_mod(coeffs, s.modulus(), s.p());
        FieldElement e;
        e.spec_ = s;
        e.poly_ = std::move(coeffs);
        return e;
    }

    /// the residue class of x (requires k >= 2)
    static FieldElement generator(const FieldSpec& s) {
        if (!s.is_finite() || s.k() < 2) throw domain_error("generator requires an extension field");
        return from_coeffs(s, {0, 1});
    }

    const FieldSpec& spec() const { return spec_; }
    bool is_zero() const { return spec_.is_rationals() ? rat_ == 0 : poly_.empty(); }
    bool is_one() const {
        return spec_.is_rationals() ? rat_ == 1 : (poly_.size() == 1 && poly_[0] == 1);
    }

    const Rational& rational() const {
        if (!spec_.is_rationals()) throw domain_error("not a rational element");
        return rat_;
    }
    const std::vector<int>& coeffs() const {
        if (!spec_.is_finite()) throw domain_error("not a finite-field element");
        return poly_;
    }

    FieldElement operator+(const FieldElement& o) const {
        check(o);
        FieldElement r;
        r.spec_ = spec_;
        if (spec_.is_rationals())
            r.rat_ = rat_ + o.rat_;
        else
            r.poly_ = detail::poly_add(poly_, o.poly_, spec_.p());
        return r;
    }

    FieldElement operator-(const FieldElement& o) const {
        check(o);
        FieldElement r;
        r.spec_ = spec_;
        if (spec_.is_rationals())
            r.rat_ = rat_ - o.rat_;
        else
            r.poly_ = detail::poly_sub(poly_, o.poly_, spec_.p());
        return r;
    }

    FieldElement operator-() const { return zero(spec_) - *this; }

    FieldElement operator*(const FieldElement& o) const {
        check(o);
        FieldElement r;
        r.spec_ = spec_;
        if (spec_.is_rationals())
            r.rat_ = rat_ * o.rat_;
        else
            r.poly_ = detail::poly_mod(detail::poly_mul(poly_, o.poly_, spec_.p()), spec_.modulus(), spec_.p());
        return r;
    }

    FieldElement inverse() const {
        if (is_zero()) throw domain_error("inverse of zero");
        FieldElement r;
        r.spec_ = spec_;
        if (spec_.is_rationals()) {
            r.rat_ = Rational(1) / rat_;
        } else {
            auto [g, s, t] = detail::poly_egcd(poly_, spec_.modulus(), spec_.p());
            (void)t;
            if (g.size() != 1) throw internal_error("modulus not coprime to element");
            r.poly_ = detail::poly_mod(s, spec_.modulus(), spec_.p());
        }
        return r;
    }

    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    bool operator==(const FieldElement& o) const {
        if (spec_ != o.spec_) return false;
        return spec_.is_rationals() ? rat_ == o.rat_ : poly_ == o.poly_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        FieldElement acc = one(spec_), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    /// x -> x^p (finite fields)
    FieldElement frobenius() const {
        if (!spec_.is_finite()) throw domain_error("frobenius requires a finite field");
        return pow(spec_.p());
    }

    /// inverse of x -> x^{p^i}
    FieldElement frobenius_root(int i) const {
        if (!spec_.is_finite()) throw domain_error("frobenius_root requires a finite field");
        int e = spec_.k();
        int j = ((e - (i % e)) % e);
        FieldElement r = *this;
        for (int s = 0; s < j; ++s) r = r.frobenius();
        return r;
    }

    /// order in the multiplicative group; small-field use only
    long long multiplicative_order() const {
        if (is_zero()) throw domain_error("order of zero");
        FieldElement acc = *this;
        long long ord = 1;
        while (!acc.is_one()) {
            acc = acc * *this;
            ++ord;
            if (ord > 100000000) throw internal_error("order loop overflow");
        }
        return ord;
    }

    /// canonical text form: "a/b" over Q (plain "a" for integers), "[c0,c1,...]" over F_{p^k}
    std::string to_string() const {
        std::ostringstream os;
        if (spec_.is_rationals()) {
            os << numerator(rat_);
            if (denominator(rat_) != 1) os << "/" << denominator(rat_);
        } else {
            os << "[";
            for (int i = 0; i < spec_.k(); ++i) {
                if (i) os << ",";
                os << (i < static_cast<int>(poly_.size()) ? poly_[i] : 0);
            }
            os << "]";
        }
        return os.str();
    }

    static FieldElement parse(const FieldSpec& s, const std::string& text);

private:
    void check(const FieldElement& o) const {
        if (spec_ != o.spec_) throw domain_error("field mismatch: " + spec_.to_string() + " vs " + o.spec_.to_string());
    }

    FieldSpec spec_;
    Rational rat_;
    std::vector<int> poly_;
};

inline FieldElement FieldElement::parse(const FieldSpec& s, const std::string& text) {
    auto fail = [&]() { throw domain_error("cannot parse field element '" + text + "' over " + s.to_string()); };
    std::string t;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) fail();
    if (t.front() == '[') {
        if (!s.is_finite() || t.back() != ']') fail();
        std::vector<int> coeffs;
        std::string cur;
        for (size_t i = 1; i + 1 < t.size(); ++i) {
            if (t[i] == ',') {
                coeffs.push_back(std::stoi(cur));
                cur.clear();
            } else
                cur += t[i];
        }
        if (!cur.empty()) coeffs.push_back(std::stoi(cur));
        return from_coeffs(s, coeffs);
    }
    // integer or a/b
    auto slash = t.find('/');
    if (slash == std::string::npos) {
        BigInt n(t);
        if (s.is_rationals()) return from_rational(Rational(n));
        long long r = static_cast<long long>(n % s.p());
        return from_int(s, r);
    }
    if (!s.is_rationals()) fail();
    BigInt n(t.substr(0, slash)), d(t.substr(slash + 1));
    if (d == 0) fail();
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return from_rational(Rational(n, d));
}

/// all elements of a finite field in a fixed order (coefficient odometer)
inline std::vector<FieldElement> all_field_elements(const FieldSpec& s) {
    if (!s.is_finite()) throw domain_error("cannot enumerate Q");
    std::vector<FieldElement> out;
    long long q = s.order();
    out.reserve(static_cast<size_t>(q));
    std::vector<int> coeffs(s.k(), 0);
    for (long long idx = 0; idx < q; ++idx) {
        long long v = idx;
        for (int i = 0; i < s.k(); ++i) {
            coeffs[i] = static_cast<int>(v % s.p());
            v /= s.p();
        }
        out.push_back(FieldElement::from_coeffs(s, coeffs));
    }
    return out;
}

}  // namespace orbitlab
