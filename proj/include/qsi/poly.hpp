#pragma once
// Dense univariate polynomials over an exact field K.
// Coefficients are stored low degree first and kept trimmed.

#include <gmpxx.h>

#include <stdexcept>
#include <utility>
#include <vector>

namespace qsi {

using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

template <class K>
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<K> c) : c_(std::move(c)) { trim(); }
    UPoly(const K& c) {  // NOLINT: constants convert implicitly
        if (!is_zero(c)) c_.push_back(c);
    }

    static UPoly monomial(const K& c, int deg) {
        if (is_zero(c)) return UPoly();
        std::vector<K> v(deg + 1, K(0));
        v[deg] = c;
        return UPoly(std::move(v));
    }
    static UPoly x() { return monomial(K(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool zero() const { return c_.empty(); }
    const K& lead() const { return c_.back(); }
    K coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : K(0); }
    const std::vector<K>& coeffs() const { return c_; }
    bool is_constant() const { return c_.size() <= 1; }

    bool operator==(const UPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UPoly& o) const { return !(*this == o); }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& a : r.c_) a = -a;
        return r;
    }
    UPoly& operator+=(const UPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UPoly& operator-=(const UPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.zero() || b.zero()) return UPoly();
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return UPoly(std::move(r));
    }
    UPoly scaled(const K& s) const {
        if (is_zero(s)) return UPoly();
        UPoly r = *this;
        for (auto& a : r.c_) a *= s;
        return r;
    }
    UPoly monic() const {
        if (zero()) return *this;
        K inv = K(1) / lead();
        return scaled(inv);
    }

    // Quotient and remainder by a nonzero divisor.
    static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
        if (b.zero()) throw std::domain_error("polynomial division by zero");
        if (a.degree() < b.degree()) return {UPoly(), a};
        std::vector<K> r = a.c_;
        std::vector<K> q(a.c_.size() - b.c_.size() + 1, K(0));
        K inv = K(1) / b.lead();
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            K t = r[k + b.degree()] * inv;
            if (is_zero(t)) continue;
            q[k] = t;
            for (int j = 0; j <= b.degree(); ++j) r[k + j] -= t * b.c_[j];
        }
        r.resize(b.c_.size() - 1);
        return {UPoly(std::move(q)), UPoly(std::move(r))};
    }
    friend UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }
    friend UPoly operator/(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }

    static UPoly gcd(UPoly a, UPoly b) {
        while (!b.zero()) {
            UPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // Returns (g, s) with s*a = g mod m, g = gcd(a, m) monic.
    static std::pair<UPoly, UPoly> inverse_mod(const UPoly& a, const UPoly& m) {
        UPoly r0 = m, r1 = a % m, s0, s1 = UPoly(K(1));
        while (!r1.zero()) {
            auto [qq, rr] = divmod(r0, r1);
            UPoly s2 = s0 - qq * s1;
            r0 = std::move(r1);
            r1 = std::move(rr);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (r0.zero()) return {r0, UPoly()};
        K inv = K(1) / r0.lead();
        return {r0.scaled(inv), s0.scaled(inv)};
    }

    template <class V>
    V eval(const V& x) const {
        V acc = V(0);
        for (int i = degree(); i >= 0; --i) acc = acc * x + V(c_[i]);
        return acc;
    }

    UPoly derivative() const {
        if (c_.size() <= 1) return UPoly();
        std::vector<K> r(c_.size() - 1, K(0));
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * K(static_cast<long>(i));
        return UPoly(std::move(r));
    }

private:
    void trim() {
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }
    std::vector<K> c_;
};

using QPoly = UPoly<Rational>;

}  // namespace qsi
