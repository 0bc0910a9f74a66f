#pragma once
// Truncated twisted power series sum X^i a_i over a difference ring with
// a X = X sigma(a), and the operators hat-sigma and hat-theta^(l).

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsi/matrix.hpp"
#include "qsi/scalar.hpp"
#include "qsi/seq.hpp"

namespace qsi {

// Coefficient ring interface: shift (sigma^k), scalar scaling, zero test,
// inverse (optional), printing.
template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<CFiniteSeq> {
    static CFiniteSeq shift(const CFiniteSeq& a, int k) { return a.shift(k); }
    static CFiniteSeq scale(const Scalar& c, const CFiniteSeq& a) { return c * a; }
    static bool is_zero(const CFiniteSeq& a) { return a.is_zero(); }
    static std::optional<CFiniteSeq> inverse(const CFiniteSeq& a) { return a.pointwise_inverse(); }
    static std::string str(const CFiniteSeq& a) { return a.str(); }
};

constexpr int kExact = INT_MAX / 4;

template <class C>
class TwistedSeries {
public:
    using Traits = CoeffTraits<C>;

    TwistedSeries() = default;  // exact zero
    TwistedSeries(int c) : TwistedSeries(C(c)) {}  // NOLINT
    TwistedSeries(const C& c) {                    // NOLINT
        if (!Traits::is_zero(c)) a_.push_back(c);
    }
    // Coefficients a_0..a_k, known through X^prec (kExact: higher coefficients are zero).
    TwistedSeries(std::vector<C> coeffs, int prec) : a_(std::move(coeffs)), prec_(prec) { trim(); }

    static TwistedSeries X(int power = 1) {
        std::vector<C> v(power + 1, C(0));
        v[power] = C(1);
        return TwistedSeries(v, kExact);
    }

    int precision() const { return prec_; }
    bool exact() const { return prec_ >= kExact; }
    int degree() const { return static_cast<int>(a_.size()) - 1; }
    C coeff(int i) const { return (i >= 0 && i < static_cast<int>(a_.size())) ? a_[i] : C(0); }
    const std::vector<C>& coeffs() const { return a_; }
    bool is_zero() const { return a_.empty(); }

    TwistedSeries truncated(int prec) const {
        TwistedSeries r = *this;
        r.prec_ = std::min(prec_, prec);
        r.trim();
        return r;
    }

    TwistedSeries operator-() const {
        TwistedSeries r = *this;
        for (auto& c : r.a_) c = -c;
        return r;
    }
    friend TwistedSeries operator+(const TwistedSeries& x, const TwistedSeries& y) {
        TwistedSeries r;
        r.prec_ = std::min(x.prec_, y.prec_);
        size_t n = std::max(x.a_.size(), y.a_.size());
        r.a_.assign(n, C(0));
        for (size_t i = 0; i < n; ++i) r.a_[i] = x.coeff(static_cast<int>(i)) + y.coeff(static_cast<int>(i));
        r.trim();
        return r;
    }
    friend TwistedSeries operator-(const TwistedSeries& x, const TwistedSeries& y) { return x + (-y); }
    TwistedSeries& operator+=(const TwistedSeries& o) { return *this = *this + o; }
    TwistedSeries& operator-=(const TwistedSeries& o) { return *this = *this - o; }

    // (X^i a)(X^j b) = X^(i+j) sigma^j(a) b
    friend TwistedSeries operator*(const TwistedSeries& x, const TwistedSeries& y) {
        TwistedSeries r;
        r.prec_ = std::min(x.prec_, y.prec_);
        if (x.is_zero() || y.is_zero()) return r;
        int top = x.degree() + y.degree();
        if (!r.exact()) top = std::min(top, r.prec_);
        r.a_.assign(top + 1, C(0));
        for (int j = 0; j <= y.degree() && j <= top; ++j) {
            if (Traits::is_zero(y.a_[j])) continue;
            for (int i = 0; i <= x.degree() && i + j <= top; ++i) {
                if (Traits::is_zero(x.a_[i])) continue;
                r.a_[i + j] += Traits::shift(x.a_[i], j) * y.a_[j];
            }
        }
        r.trim();
        return r;
    }
    TwistedSeries& operator*=(const TwistedSeries& o) { return *this = *this * o; }
    friend TwistedSeries operator*(const Scalar& c, const TwistedSeries& x) {
        TwistedSeries r = x;
        for (auto& a : r.a_) a = Traits::scale(c, a);
        r.trim();
        return r;
    }

    // Equality of known coefficients through the common precision.
    bool operator==(const TwistedSeries& o) const {
        int p = std::min(prec_, o.prec_);
        int top = std::max(degree(), o.degree());
        if (p < kExact) top = std::min(top, p);
        for (int i = 0; i <= top; ++i)
            if (!(coeff(i) == o.coeff(i))) return false;
        return true;
    }
    bool operator!=(const TwistedSeries& o) const { return !(*this == o); }

    // Lowest index where the two series differ through common precision, or -1.
    int first_difference(const TwistedSeries& o) const {
        int p = std::min(prec_, o.prec_);
        int top = std::max(degree(), o.degree());
        if (p < kExact) top = std::min(top, p);
        for (int i = 0; i <= top; ++i)
            if (!(coeff(i) == o.coeff(i))) return i;
        return -1;
    }

    std::string str(const std::function<std::string(const C&)>& show = Traits::str) const {
        std::string s;
        for (int i = 0; i <= degree(); ++i) {
            if (Traits::is_zero(a_[i])) continue;
            std::string c = show(a_[i]);
            std::string x = i == 0 ? "" : (i == 1 ? "X" : "X^" + std::to_string(i));
            std::string term;
            if (x.empty()) term = c;
            else if (c == "1") term = x;
            else if (c == "-1") term = "-" + x;
            else {
                bool compound = c.find_first_of(" ") != std::string::npos;
                term = x + "*" + (compound ? "(" + c + ")" : c);
            }
            if (s.empty()) s = term;
            else if (term[0] == '-') s += " - " + term.substr(1);
            else s += " + " + term;
        }
        if (s.empty()) s = "0";
        if (!exact()) s += " + O(X^" + std::to_string(prec_ + 1) + ")";
        return s;
    }

private:
    void trim() {
        if (!exact() && static_cast<int>(a_.size()) > prec_ + 1) a_.resize(std::max(prec_ + 1, 0));
        while (!a_.empty() && Traits::is_zero(a_.back())) a_.pop_back();
    }
    std::vector<C> a_;
    int prec_ = kExact;
};

template <class C>
bool is_zero(const TwistedSeries<C>& s) {
    return s.is_zero();
}

// Hat-sigma: sum X^i q^i sigma(a_i).
template <class C>
TwistedSeries<C> hat_sigma(const TwistedSeries<C>& s, const Field& f) {
    std::vector<C> out;
    for (int i = 0; i <= s.degree(); ++i)
        out.push_back(CoeffTraits<C>::scale(f.q().pow(i), CoeffTraits<C>::shift(s.coeff(i), 1)));
    return TwistedSeries<C>(out, s.precision());
}

// Hat-theta^(l): sum X^i binom(i+l, l)_q a_(i+l); precision drops by l.
template <class C>
TwistedSeries<C> hat_theta(int l, const TwistedSeries<C>& s, const Field& f) {
    std::vector<C> out;
    for (int i = 0; i + l <= s.degree(); ++i)
        out.push_back(CoeffTraits<C>::scale(q_binomial(i + l, l, f), s.coeff(i + l)));
    int p = s.exact() ? kExact : s.precision() - l;
    return TwistedSeries<C>(out, p);
}

// Two-sided inverse modulo X^(D+1); the constant term must be a unit.
template <class C>
TwistedSeries<C> series_invert(const TwistedSeries<C>& s, int D) {
    auto inv0 = CoeffTraits<C>::inverse(s.coeff(0));
    if (!inv0) throw std::domain_error("series has a non-invertible constant term");
    int prec = std::min(D, s.precision());
    TwistedSeries<C> b0(*inv0);
    TwistedSeries<C> n = (s - TwistedSeries<C>(s.coeff(0))).truncated(prec);
    // s = a0 (1 + a0^-1 n); s^-1 = sum_k (-a0^-1 n)^k a0^-1
    TwistedSeries<C> u = -(b0 * n);
    TwistedSeries<C> term = TwistedSeries<C>(C(1)).truncated(prec), acc = term;
    for (int k = 1; k <= prec; ++k) {
        term = (term * u).truncated(prec);
        if (term.is_zero()) break;
        acc += term;
    }
    return (acc * b0).truncated(prec);
}

// Matrices of twisted series.
template <class C>
using SeriesMat = Mat<TwistedSeries<C>>;

template <class C>
SeriesMat<C> map_entries(const SeriesMat<C>& m, const std::function<TwistedSeries<C>(const TwistedSeries<C>&)>& f) {
    SeriesMat<C> r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = f(m(i, j));
    return r;
}

template <class C>
SeriesMat<C> truncate_entries(const SeriesMat<C>& m, int prec) {
    return map_entries<C>(m, [prec](const TwistedSeries<C>& s) { return s.truncated(prec); });
}

// Inverse of a series matrix whose constant term is invertible (entrywise ring C),
// expanded through X^D. inv0 is the inverse of the constant-term matrix.
template <class C>
SeriesMat<C> series_matrix_invert(const SeriesMat<C>& m, const Mat<C>& inv0, int D) {
    int n = m.rows();
    SeriesMat<C> b0(n, n), nil(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            b0(i, j) = TwistedSeries<C>(inv0(i, j));
            nil(i, j) = (m(i, j) - TwistedSeries<C>(m(i, j).coeff(0))).truncated(D);
        }
    SeriesMat<C> u = -(b0 * nil);
    SeriesMat<C> id = SeriesMat<C>::identity(n);
    SeriesMat<C> term = truncate_entries<C>(id, D), acc = term;
    for (int k = 1; k <= D; ++k) {
        term = truncate_entries<C>(term * u, D);
        if (term.is_zero()) break;
        acc = acc + term;
    }
    return truncate_entries<C>(acc * b0, D);
}

}  // namespace qsi
