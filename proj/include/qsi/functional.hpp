#pragma once
// Linear functionals on the quantum plane Hopf algebra, stored by their values
// on the basis v_{m,n} = s^m t^n / [n]_q!: finitely many t-degrees n, each a
// bilateral C-finite sequence in m.

#include <map>
#include <optional>
#include <string>

#include "qsi/ncalg.hpp"
#include "qsi/scalar.hpp"
#include "qsi/seq.hpp"

namespace qsi {

class Functional {
public:
    Functional() = default;                  // zero
    Functional(int c);                       // NOLINT: c * counit
    Functional(const Field& f, std::map<int, CFiniteSeq> comps);

    static Functional counit(const Field& f);
    static Functional grouplike(const Field& f, const Scalar& ratio);  // <x, v_{m,n}> = ratio^m delta_{n,0}
    static Functional index_like(const Field& f);                     // m delta_{n,0}
    static Functional delta(const Field& f, int n);                    // delta_{n,k}

    const std::optional<Field>& field() const { return f_; }
    const std::map<int, CFiniteSeq>& components() const { return c_; }
    CFiniteSeq component(int n) const;
    Scalar operator()(int m, int n) const;
    bool is_zero() const { return c_.empty(); }
    int max_degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }
    int min_degree() const { return c_.empty() ? -1 : c_.begin()->first; }

    Functional operator-() const;
    friend Functional operator+(const Functional& a, const Functional& b);
    friend Functional operator-(const Functional& a, const Functional& b);
    friend Functional operator*(const Scalar& c, const Functional& a);
    // Convolution: <x y, v_{m,n}> = sum_{i+j=n} <x, v_{m+j,i}> <y, v_{m,j}>.
    friend Functional operator*(const Functional& a, const Functional& b);
    Functional& operator+=(const Functional& o) { return *this = *this + o; }
    Functional& operator-=(const Functional& o) { return *this = *this - o; }
    Functional& operator*=(const Functional& o) { return *this = *this * o; }
    bool operator==(const Functional& o) const { return c_ == o.c_; }
    bool operator!=(const Functional& o) const { return !(*this == o); }

    std::string str(const SeqNaming& names) const;
    std::string str() const;

private:
    void trim();
    std::optional<Field> f_;
    std::map<int, CFiniteSeq> c_;
};

inline bool is_zero(const Functional& x) { return x.is_zero(); }

Functional convolve(const Functional& a, const Functional& b);
// <S(x), v> = <x, S(v)> and the inverse transform.
Functional antipode_functional(const Functional& x);
Functional antipode_inverse_functional(const Functional& x);
// Right translation (h -> x)(v) = x(v h) by a generator of the quantum plane Hopf algebra.
enum class HqGen { S, SInv, T };
Functional translate(HqGen g, const Functional& x);
// Right translation by an element of the quantum plane Hopf algebra (generators s, s^-1, t).
Functional translate(const NCElement& h, const Functional& x);
// Pairing with an element of the quantum plane Hopf algebra.
Scalar pair(const Functional& x, const NCElement& h);

}  // namespace qsi
