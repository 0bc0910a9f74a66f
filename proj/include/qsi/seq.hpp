#pragma once
// Bilateral C-finite sequences Z -> C: a constant-coefficient recurrence with
// nonzero leading and trailing coefficients plus a window of initial values.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsi/matrix.hpp"
#include "qsi/scalar.hpp"

namespace qsi {

using SPoly = UPoly<Scalar>;

class CFiniteSeq {
public:
    CFiniteSeq() = default;  // zero sequence
    CFiniteSeq(int c) : CFiniteSeq(constant(Scalar(c))) {}        // NOLINT
    CFiniteSeq(const Scalar& c) : CFiniteSeq(constant(c)) {}      // NOLINT
    // Recurrence sum_k rec_k a(n+k) = 0 plus values at start .. start+deg-1.
    CFiniteSeq(const SPoly& rec, int start, const std::vector<Scalar>& values);

    static CFiniteSeq constant(const Scalar& c);
    static CFiniteSeq geometric(const Scalar& ratio, const Scalar& at_zero = Scalar(1));  // c r^n
    static CFiniteSeq index();  // n -> n
    // Minimal sequence through values at lo, lo+1, ...; exact if the true order is <= values.size()/2.
    static CFiniteSeq from_values(int lo, const std::vector<Scalar>& values);

    int order() const { return static_cast<int>(win_.size()); }
    const SPoly& recurrence() const { return rec_; }
    int window_start() const { return start_; }
    const std::vector<Scalar>& window() const { return win_; }

    Scalar operator()(int n) const;
    std::vector<Scalar> values(int lo, int count) const;

    CFiniteSeq shift(int k = 1) const;  // n -> a(n+k)
    CFiniteSeq operator-() const;
    friend CFiniteSeq operator+(const CFiniteSeq& a, const CFiniteSeq& b);
    friend CFiniteSeq operator-(const CFiniteSeq& a, const CFiniteSeq& b);
    friend CFiniteSeq operator*(const CFiniteSeq& a, const CFiniteSeq& b);  // pointwise
    friend CFiniteSeq operator*(const Scalar& c, const CFiniteSeq& a);
    CFiniteSeq& operator+=(const CFiniteSeq& o) { return *this = *this + o; }
    CFiniteSeq& operator-=(const CFiniteSeq& o) { return *this = *this - o; }
    CFiniteSeq& operator*=(const CFiniteSeq& o) { return *this = *this * o; }
    friend CFiniteSeq operator/(const CFiniteSeq& a, const CFiniteSeq& b);  // pointwise, b must be a unit
    bool operator==(const CFiniteSeq& o) const;
    bool operator!=(const CFiniteSeq& o) const { return !(*this == o); }
    bool is_zero() const { return win_.empty(); }
    bool is_constant() const;

    // Pointwise inverse if it is again C-finite (verified exactly).
    std::optional<CFiniteSeq> pointwise_inverse() const;

    std::string str() const;

private:
    void normalize();  // minimal recurrence, centered window
    void recenter();   // centered window, recurrence already minimal
    static CFiniteSeq raw(const SPoly& rec, int start, std::vector<Scalar> values);
    SPoly rec_ = SPoly(Scalar(1));
    int start_ = 0;
    std::vector<Scalar> win_;
};

inline bool is_zero(const CFiniteSeq& a) { return a.is_zero(); }
std::ostream& operator<<(std::ostream& os, const CFiniteSeq& a);

// Closed form sum c * n^k * prod base_i^(e_i n) over named bases, e.g. {"Q", q}, {"L", l};
// the index sequence n is written Z.
struct SeqNaming {
    std::vector<std::pair<std::string, Scalar>> bases;
    int max_exponent = 4;
    static SeqNaming standard(const Field& f);
};
struct SeqTerm {
    Scalar coeff;
    int index_power = 0;
    std::vector<int> exponents;
};
std::optional<std::vector<SeqTerm>> closed_form(const CFiniteSeq& a, const SeqNaming& names);
std::string seq_str(const CFiniteSeq& a, const SeqNaming& names);
// Parses "q^-1*Z*Q + 3", "L*Q", "2" into a sequence using the naming bases.
CFiniteSeq parse_seq(const std::string& text, const Field& f, const SeqNaming& names);

// n -> A^n entrywise, with A invertible.
Mat<CFiniteSeq> matrix_power_sequence(const Mat<Scalar>& A);
Mat<Scalar> evaluate(const Mat<CFiniteSeq>& m, int n);
// Cofactor determinant and adjugate inverse (entries must form a pointwise unit determinant).
CFiniteSeq seq_det(const Mat<CFiniteSeq>& m);
std::optional<Mat<CFiniteSeq>> seq_matrix_inverse(const Mat<CFiniteSeq>& m);

}  // namespace qsi
