#pragma once
// Dense matrices over an exact field with Gauss-Jordan based rank, kernel,
// inverse and characteristic polynomial.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsi/poly.hpp"

namespace qsi {

namespace detail {
// Unqualified call so argument-dependent lookup finds is_zero for the entry type.
template <class K>
bool zero_of(const K& x) {
    return is_zero(x);
}
}  // namespace detail

template <class K>
class Mat {
public:
    Mat() = default;
    Mat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c, K(0)) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = K(1);
        return m;
    }
    static Mat unit(int n, int i, int j) {
        Mat m(n, n);
        m(i, j) = K(1);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    K& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const K& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }
    bool is_zero() const {
        for (auto& x : a_)
            if (!detail::zero_of(x)) return false;
        return true;
    }

    Mat operator+(const Mat& o) const {
        check_same(o);
        Mat m = *this;
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
        return m;
    }
    Mat operator-(const Mat& o) const {
        check_same(o);
        Mat m = *this;
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
        return m;
    }
    Mat operator-() const {
        Mat m = *this;
        for (auto& x : m.a_) x = -x;
        return m;
    }
    Mat operator*(const Mat& o) const {
        if (c_ != o.r_) throw std::invalid_argument("matrix shape mismatch in product");
        Mat m(r_, o.c_);
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < c_; ++k) {
                const K& x = (*this)(i, k);
                if (detail::zero_of(x)) continue;
                for (int j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
            }
        return m;
    }
    Mat scaled(const K& s) const {
        Mat m = *this;
        for (auto& x : m.a_) x *= s;
        return m;
    }
    Mat transpose() const {
        Mat m(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Mat kron(const Mat& o) const {
        Mat m(r_ * o.r_, c_ * o.c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j)
                for (int k = 0; k < o.r_; ++k)
                    for (int l = 0; l < o.c_; ++l) m(i * o.r_ + k, j * o.c_ + l) = (*this)(i, j) * o(k, l);
        return m;
    }
    Mat pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        Mat r = identity(r_), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    // Reduced row echelon form in place; returns pivot columns.
    std::vector<int> rref() {
        std::vector<int> piv;
        int row = 0;
        for (int col = 0; col < c_ && row < r_; ++col) {
            int p = -1;
            for (int i = row; i < r_; ++i)
                if (!detail::zero_of((*this)(i, col))) {
                    p = i;
                    break;
                }
            if (p < 0) continue;
            if (p != row)
                for (int j = 0; j < c_; ++j) std::swap((*this)(p, j), (*this)(row, j));
            K inv = K(1) / (*this)(row, col);
            for (int j = col; j < c_; ++j) (*this)(row, j) *= inv;
            for (int i = 0; i < r_; ++i) {
                if (i == row) continue;
                K f = (*this)(i, col);
                if (detail::zero_of(f)) continue;
                for (int j = col; j < c_; ++j) {
                    const K& x = (*this)(row, j);
                    if (!detail::zero_of(x)) (*this)(i, j) -= f * x;
                }
            }
            piv.push_back(col);
            ++row;
        }
        return piv;
    }

    int rank() const {
        Mat m = *this;
        return static_cast<int>(m.rref().size());
    }

    // Basis of the right kernel {x : M x = 0}, as column vectors.
    std::vector<std::vector<K>> kernel() const {
        Mat m = *this;
        auto piv = m.rref();
        std::vector<bool> is_piv(c_, false);
        for (int p : piv) is_piv[p] = true;
        std::vector<std::vector<K>> basis;
        for (int free = 0; free < c_; ++free) {
            if (is_piv[free]) continue;
            std::vector<K> v(c_, K(0));
            v[free] = K(1);
            for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(static_cast<int>(r), free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Solves M x = b; returns false if inconsistent.
    bool solve(const std::vector<K>& b, std::vector<K>& x) const {
        Mat aug(r_, c_ + 1);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_) = b[i];
        }
        auto piv = aug.rref();
        if (!piv.empty() && piv.back() == c_) return false;
        x.assign(c_, K(0));
        for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(static_cast<int>(r), c_);
        return true;
    }

    Mat inverse() const {
        if (r_ != c_) throw std::invalid_argument("inverse of non-square matrix");
        Mat aug(r_, 2 * c_);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_ + i) = K(1);
        }
        auto piv = aug.rref();
        if (static_cast<int>(piv.size()) < r_ || piv[r_ - 1] >= c_) throw std::domain_error("singular matrix");
        Mat inv(r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) inv(i, j) = aug(i, c_ + j);
        return inv;
    }

    K det() const {
        if (r_ != c_) throw std::invalid_argument("det of non-square matrix");
        Mat m = *this;
        K d(1);
        for (int col = 0; col < c_; ++col) {
            int p = -1;
            for (int i = col; i < r_; ++i)
                if (!detail::zero_of(m(i, col))) {
                    p = i;
                    break;
                }
            if (p < 0) return K(0);
            if (p != col) {
                for (int j = 0; j < c_; ++j) std::swap(m(p, j), m(col, j));
                d = -d;
            }
            d *= m(col, col);
            K inv = K(1) / m(col, col);
            for (int i = col + 1; i < r_; ++i) {
                K f = m(i, col) * inv;
                if (detail::zero_of(f)) continue;
                for (int j = col; j < c_; ++j) m(i, j) -= f * m(col, j);
            }
        }
        return d;
    }

    // det(x I - M) via Faddeev-LeVerrier (characteristic zero).
    UPoly<K> charpoly() const {
        int n = r_;
        std::vector<K> c(n + 1, K(0));
        c[n] = K(1);
        Mat mk = identity(n);  // M_k
        Mat am;
        for (int k = 1; k <= n; ++k) {
            am = (*this) * mk;
            K tr(0);
            for (int i = 0; i < n; ++i) tr += am(i, i);
            c[n - k] = -tr / K(static_cast<long>(k));
            mk = am + identity(n).scaled(c[n - k]);
        }
        return UPoly<K>(c);
    }

    // Smallest k with M^k = 0, or -1 if not nilpotent.
    int nilpotency_index() const {
        Mat p = identity(r_);
        for (int k = 0; k <= r_; ++k) {
            if (p.is_zero()) return k;
            p = p * (*this);
        }
        return -1;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < r_; ++i) {
            os << (i ? ", [" : "[");
            for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    void check_same(const Mat& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
    }
    int r_ = 0, c_ = 0;
    std::vector<K> a_;
};

}  // namespace qsi
