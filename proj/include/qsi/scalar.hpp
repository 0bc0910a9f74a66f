#pragma once
// Exact scalars: rationals with a designated rational q, the cyclotomic field
// Q(zeta_N) with q = zeta_N, or rational functions in an indeterminate q.

#include <map>
#include <ostream>
#include <optional>
#include <string>

#include "qsi/poly.hpp"

namespace qsi {

enum class FieldKind { Rationals, Cyclotomic, RationalFunctions };

struct FieldData;  // interned, lives for the whole process

class Scalar;

class Field {
public:
    Field();  // rationals with q = 1
    static Field rationals(const Rational& q);
    static Field cyclotomic(int n);
    static Field rational_functions();
    // "2", "3/2", "indeterminate", "zeta3" / "root_of_unity:3"
    static Field from_descriptor(const std::string& desc);

    FieldKind kind() const;
    int cyclotomic_order() const;
    const Rational& q_rational() const;
    Scalar q() const;
    std::optional<int> root_of_unity_order() const;
    std::string describe() const;
    const FieldData* data() const { return d_; }
    bool operator==(const Field& o) const { return d_ == o.d_; }
    bool operator!=(const Field& o) const { return d_ != o.d_; }

private:
    explicit Field(const FieldData* d) : d_(d) {}
    const FieldData* d_;
    friend class Scalar;
};

class Scalar {
public:
    Scalar() = default;
    Scalar(int v) : num_(Rational(v)) {}     // NOLINT
    Scalar(long v) : num_(Rational(v)) {}    // NOLINT
    Scalar(const Rational& v) : num_(canonical(v)) {}   // NOLINT

    // Builds num/den in the given field and canonicalizes.
    static Scalar make(const Field& f, const QPoly& num, const QPoly& den = QPoly(Rational(1)));

    bool is_zero() const { return num_.zero(); }
    bool is_one() const { return f_ == nullptr && num_ == QPoly(Rational(1)); }
    bool is_rational() const { return f_ == nullptr; }
    Rational to_rational() const;  // throws unless is_rational()
    const FieldData* field() const { return f_; }
    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    bool operator==(const Scalar& o) const { return f_ == o.f_ && num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar inv() const;
    Scalar pow(long e) const;
    std::string str() const;
    size_t hash() const;

private:
    static Rational canonical(Rational v) {
        v.canonicalize();
        return v;
    }
    void canonicalize();
    static const FieldData* common(const Scalar& a, const Scalar& b);

    const FieldData* f_ = nullptr;  // null: plain rational, valid in every field
    QPoly num_;
    QPoly den_ = QPoly(Rational(1));
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

// Parse a literal in the field; extra binds additional names (e.g. "l").
Scalar parse_scalar(const std::string& text, const Field& f, const std::map<std::string, Scalar>& extra = {});

// q-combinatorics
Scalar q_integer(int n, const Field& f);
Scalar q_factorial(int n, const Field& f);
QPoly gaussian_binomial_poly(int m, int n);
Scalar q_binomial(int m, int n, const Field& f);
std::optional<int> is_root_of_unity(const Field& f);
bool q_pascal_identity_check(int m, int l, const Field& f);

// Cyclotomic polynomial Phi_n with rational coefficients.
QPoly cyclotomic_poly(int n);

}  // namespace qsi
