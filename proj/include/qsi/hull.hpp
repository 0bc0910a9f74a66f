#pragma once
// The qsi field C(t) with sigma(t) = qt, its universal Hopf morphism into
// twisted series over C(t, Q) (Q standing for n -> q^n), Galois-hull
// stability checks and non-commutative deformation witnesses.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "qsi/matrix.hpp"
#include "qsi/poly.hpp"
#include "qsi/report.hpp"
#include "qsi/scalar.hpp"
#include "qsi/series.hpp"

namespace qsi {

// Rational functions in one variable over an exact field K, kept as num/den with
// gcd removed and monic denominator. The optional multiplier c records the
// substitution x -> c x used as the difference operator.
template <class K>
class RatFunc {
public:
    using Poly = UPoly<K>;
    RatFunc() : den_(K(1)) {}
    RatFunc(int c) : num_(K(c)), den_(K(1)) {}          // NOLINT
    RatFunc(const K& c) : num_(c), den_(K(1)) {}        // NOLINT
    RatFunc(Poly n, Poly d, std::optional<Scalar> mult = {}) : num_(std::move(n)), den_(std::move(d)), mult_(mult) {
        normalize();
    }
    static RatFunc var(const Scalar& mult) { return RatFunc(Poly::x(), Poly(K(1)), mult); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const std::optional<Scalar>& multiplier() const { return mult_; }
    RatFunc with_multiplier(const Scalar& m) const {
        RatFunc r = *this;
        r.mult_ = m;
        return r;
    }
    bool is_zero() const { return num_.zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    // Henrici: only gcds of the smaller factors are needed when inputs are reduced.
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        auto m = join(a, b);
        if (a.is_zero()) return b.with_mult(m);
        if (b.is_zero()) return a.with_mult(m);
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_, m);
        Poly g = Poly::gcd(a.den_, b.den_);
        if (g.degree() <= 0) return reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, m);
        Poly ad = a.den_ / g, bd = b.den_ / g;
        Poly n = a.num_ * bd + b.num_ * ad;
        if (n.zero()) return RatFunc(Poly(), Poly(K(1)), m);
        Poly h = Poly::gcd(n, g);
        if (h.degree() > 0) return reduced(n / h, ad * (b.den_ / h), m);
        return reduced(std::move(n), ad * b.den_, m);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        auto m = join(a, b);
        if (a.is_zero() || b.is_zero()) return RatFunc(Poly(), Poly(K(1)), m);
        Poly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
        if (bd.degree() > 0 && an.degree() > 0) {
            Poly g = Poly::gcd(an, bd);
            if (g.degree() > 0) an = an / g, bd = bd / g;
        }
        if (ad.degree() > 0 && bn.degree() > 0) {
            Poly g = Poly::gcd(bn, ad);
            if (g.degree() > 0) bn = bn / g, ad = ad / g;
        }
        return reduced(an * bn, ad * bd, m);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_, join(a, b));
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc inv() const { return RatFunc(den_, num_, mult_); }
    RatFunc pow(long e) const {
        if (e < 0) return inv().pow(-e);
        RatFunc r(Poly(K(1)), Poly(K(1)), mult_), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }
    RatFunc scaled(const K& c) const { return RatFunc(num_.scaled(c), den_, mult_); }

    // x -> c x
    RatFunc substitute_scaled(const K& c) const {
        return RatFunc(scale_var(num_, c), scale_var(den_, c), mult_);
    }
    // x -> mult^k x
    RatFunc shift(int k) const {
        if (k == 0 || is_constant()) return *this;
        if (!mult_) throw std::logic_error("rational function without a difference multiplier");
        return substitute_scaled(K(mult_->pow(k)));
    }
    // d/dx in the own variable
    RatFunc derivative() const {
        return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_, mult_);
    }
    // Extends a derivation d of K (commuting with x) by the quotient rule.
    template <class D>
    RatFunc derive_coefficients(const D& d) const {
        Poly dn = map_coeffs(num_, d), dd = map_coeffs(den_, d);
        return RatFunc(dn * den_ - num_ * dd, den_ * den_, mult_);
    }
    template <class V>
    V eval(const V& x) const {
        V dv = den_.template eval<V>(x);
        if (is_zero_value(dv)) throw std::domain_error("evaluation at a pole");
        return num_.template eval<V>(x) / dv;
    }

    std::string str() const {
        Poly n = num_, d = den_;
        if constexpr (!std::is_same_v<K, Scalar>) {
            // print with polynomial coefficients: scale both parts by the lcm of inner denominators
            typename K::Poly L(Scalar(1));
            for (const Poly* p : {&num_, &den_})
                for (auto& c : p->coeffs())
                    if (c.den().degree() > 0) L = L * (c.den() / K::Poly::gcd(L, c.den()));
            if (L.degree() > 0) {
                K l(L, typename K::Poly(Scalar(1)));
                n = n.scaled(l), d = d.scaled(l);
            }
        }
        std::string ns = poly_str(n);
        if (d.degree() == 0 && d.coeff(0) == K(1)) return ns;
        return wrap(ns) + "/" + wrap(poly_str(d));
    }

private:
    RatFunc with_mult(const std::optional<Scalar>& m) const {
        RatFunc r = *this;
        r.mult_ = m;
        return r;
    }
    // num/den already coprime: only make den monic.
    static RatFunc reduced(Poly n, Poly d, std::optional<Scalar> m) {
        RatFunc r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        r.mult_ = m;
        r.make_monic();
        return r;
    }
    void make_monic() {
        if (num_.zero()) {
            den_ = Poly(K(1));
            return;
        }
        K lc = den_.lead();
        if (!(lc == K(1))) {
            K inv = K(1) / lc;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }
    static std::optional<Scalar> join(const RatFunc& a, const RatFunc& b) {
        if (a.mult_ && b.mult_ && !(*a.mult_ == *b.mult_))
            throw std::invalid_argument("rational functions with different difference multipliers");
        return a.mult_ ? a.mult_ : b.mult_;
    }
    template <class V>
    static bool is_zero_value(const V& v) {
        using qsi::is_zero;
        return is_zero(v);
    }
    static Poly scale_var(const Poly& p, const K& c) {
        std::vector<K> v = p.coeffs();
        K pw(1);
        for (auto& x : v) {
            x = x * pw;
            pw = pw * c;
        }
        return Poly(std::move(v));
    }
    template <class D>
    static Poly map_coeffs(const Poly& p, const D& d) {
        std::vector<K> v;
        for (auto& x : p.coeffs()) v.push_back(d(x));
        return Poly(std::move(v));
    }
    void normalize() {
        if (den_.zero()) throw std::domain_error("rational function with zero denominator");
        if (num_.zero()) {
            den_ = Poly(K(1));
            return;
        }
        if (den_.degree() > 0) {
            Poly g = Poly::gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
        }
        make_monic();
    }
    static const char* var_name() { return std::is_same_v<K, Scalar> ? "t" : "Q"; }
    static std::string wrap(const std::string& s) {
        return s.find_first_of(" +/") == std::string::npos && s.find('-', 1) == std::string::npos ? s : "(" + s + ")";
    }
    static std::string poly_str(const Poly& p) {
        if (p.zero()) return "0";
        std::string out;
        for (int i = p.degree(); i >= 0; --i) {
            K c = p.coeff(i);
            if (is_zero_value(c)) continue;
            std::string cs = c.str();
            bool neg = !cs.empty() && cs[0] == '-' && wrap(cs.substr(1)) == cs.substr(1);
            if (neg) cs = cs.substr(1);
            std::string mono = i == 0 ? "" : (i == 1 ? std::string(var_name()) : std::string(var_name()) + "^" + std::to_string(i));
            std::string term;
            if (mono.empty()) term = cs;
            else if (cs == "1") term = mono;
            else term = wrap(cs) + "*" + mono;
            if (out.empty()) out = neg ? "-" + term : term;
            else out += neg ? " - " + term : " + " + term;
        }
        return out;
    }

    Poly num_, den_;
    std::optional<Scalar> mult_;
};

template <class K>
bool is_zero(const RatFunc<K>& r) {
    return r.is_zero();
}

using RatFunc1 = RatFunc<Scalar>;    // C(t), sigma: t -> q t
using RatFunc2 = RatFunc<RatFunc1>;  // C(t)(Q), Sigma: Q -> q Q

template <>
struct CoeffTraits<RatFunc2> {
    static RatFunc2 shift(const RatFunc2& a, int k) { return a.shift(k); }
    static RatFunc2 scale(const Scalar& c, const RatFunc2& a) { return a.scaled(RatFunc1(c)); }
    static bool is_zero(const RatFunc2& a) { return a.is_zero(); }
    static std::optional<RatFunc2> inverse(const RatFunc2& a) {
        if (a.is_zero()) return std::nullopt;
        return a.inv();
    }
    static std::string str(const RatFunc2& a) { return a.str(); }
};

using HullElement = TwistedSeries<RatFunc2>;
using HullMatrix = SeriesMat<RatFunc2>;

RatFunc1 rf_t(const Field& f);
RatFunc1 rf_const(const Field& f, const Scalar& c);
RatFunc2 rf2_Q(const Field& f);
RatFunc2 rf2_const(const Field& f, const RatFunc1& c);
// "(t^2+1)/(t-1)"; identifiers t, q and extra names.
RatFunc1 parse_ratfunc(const std::string& text, const Field& f, const std::map<std::string, Scalar>& extra = {});
// t -> tQ
RatFunc2 substitute_tQ(const RatFunc1& a, const Field& f);
// Q -> value
RatFunc1 evaluate_Q(const RatFunc2& a, const Scalar& value);
RatFunc2 d_dt(const RatFunc2& a);
HullElement d_dt(const HullElement& s);

// (C(t), sigma: t -> qt, theta^(1)(f) = (f(qt) - f(t)) / ((q - 1) t)); the derivative when q = 1.
class RationalQsiField {
public:
    explicit RationalQsiField(Field f) : f_(std::move(f)) {}
    const Field& field() const { return f_; }
    RatFunc1 sigma(const RatFunc1& a, int power = 1) const;
    RatFunc1 theta1(const RatFunc1& a) const;
    RatFunc1 theta(int n, const RatFunc1& a) const;  // Refusal if [n]_q! = 0
private:
    Field f_;
};

// a -> sum_{i <= D} X^i theta^(i)(a)(tQ)
HullElement universal_hopf(const Field& f, const RatFunc1& a, int D);
HullElement hull_X(const Field& f);
HullElement hull_Q(const Field& f);
// (c + tQ + X)^-1 through X^D
HullElement hull_inverse_generator(const Field& f, const Scalar& c, int D);

// Multiplicativity and equivariance (sigma-hat, theta-hat^(i), i <= 3) through order D.
Report verify_qsi_morphism(const Field& f, const RatFunc1& a, const RatFunc1& b, int D);
// Sigma-hat, theta-hat^(1) and d/dt on X, Q, (c + tQ + X)^-1 re-expressed in the hull.
Report hull_stability_check(const Field& f, const Scalar& c, int D);

// Pair (e, f) in a finite-dimensional algebra given by matrices: Q -> eQ, X -> X + fQ.
struct DeformationWitness {
    Mat<Scalar> e, f;
    static DeformationWitness identity(int n);
};
// ef = qfe, e - 1 and f nilpotent, e invertible.
Report deformation_preconditions(const Field& field, const DeformationWitness& w);
// Preconditions plus: the extension to X, Q, (c + tQ + X)^-1 respects QX = qXQ and commutes with
// sigma-hat and theta-hat^(1) through order D.
Report deformation_witness(const Field& field, const DeformationWitness& w, const Scalar& c, int D);
// [[e1, f1], [0, 1]] [[e2, f2], [0, 1]]; the pairs must commute with each other.
DeformationWitness deformation_compose(const DeformationWitness& w1, const DeformationWitness& w2);
// Left-regular representation from structure constants: b_i b_j = sum_k table[i][j][k] b_k.
std::vector<Mat<Scalar>> regular_representation(const std::vector<std::vector<std::vector<Scalar>>>& table);

}  // namespace qsi
