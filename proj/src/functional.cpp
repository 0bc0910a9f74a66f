#include "qsi/functional.hpp"

#include <sstream>

namespace qsi {

namespace {

// m -> a(-m-k)
CFiniteSeq reflect(const CFiniteSeq& a, int k) {
    if (a.is_zero()) return a;
    int d = a.order() + 1;
    std::vector<Scalar> vals;
    for (int m = -d; m <= d; ++m) vals.push_back(a(-m - k));
    return CFiniteSeq::from_values(-d, vals);
}

Field field_of(const Functional& x) { return x.field() ? *x.field() : Field(); }

std::optional<Field> common(const Functional& a, const Functional& b) { return a.field() ? a.field() : b.field(); }

Scalar sign(int n) { return n % 2 ? Scalar(-1) : Scalar(1); }

}  // namespace

Functional::Functional(int c) {
    if (c != 0) c_[0] = CFiniteSeq(c);
}

Functional::Functional(const Field& f, std::map<int, CFiniteSeq> comps) : f_(f), c_(std::move(comps)) {
    for (auto& [n, s] : c_)
        if (n < 0) throw std::invalid_argument("functional component with negative t-degree");
    trim();
}

void Functional::trim() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second.is_zero()) it = c_.erase(it);
        else ++it;
    }
}

Functional Functional::counit(const Field& f) { return Functional(f, {{0, CFiniteSeq(1)}}); }
Functional Functional::grouplike(const Field& f, const Scalar& ratio) {
    return Functional(f, {{0, CFiniteSeq::geometric(ratio)}});
}
Functional Functional::index_like(const Field& f) { return Functional(f, {{0, CFiniteSeq::index()}}); }
Functional Functional::delta(const Field& f, int n) { return Functional(f, {{n, CFiniteSeq(1)}}); }

CFiniteSeq Functional::component(int n) const {
    auto it = c_.find(n);
    return it == c_.end() ? CFiniteSeq() : it->second;
}

Scalar Functional::operator()(int m, int n) const {
    auto it = c_.find(n);
    return it == c_.end() ? Scalar(0) : it->second(m);
}

Functional Functional::operator-() const {
    Functional r = *this;
    for (auto& [n, s] : r.c_) s = -s;
    return r;
}

Functional operator+(const Functional& a, const Functional& b) {
    Functional r = a;
    r.f_ = common(a, b);
    for (auto& [n, s] : b.c_) r.c_[n] += s;
    r.trim();
    return r;
}

Functional operator-(const Functional& a, const Functional& b) { return a + (-b); }

Functional operator*(const Scalar& c, const Functional& a) {
    Functional r = a;
    for (auto& [n, s] : r.c_) s = c * s;
    r.trim();
    return r;
}

Functional operator*(const Functional& a, const Functional& b) {
    Functional r;
    r.f_ = common(a, b);
    for (auto& [i, x] : a.c_)
        for (auto& [j, y] : b.c_) r.c_[i + j] += x.shift(j) * y;
    r.trim();
    return r;
}

Functional convolve(const Functional& a, const Functional& b) { return a * b; }

std::string Functional::str(const SeqNaming& names) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [n, s] : c_) {
        os << (first ? "" : ", ") << "n=" << n << ": " << seq_str(s, names);
        first = false;
    }
    os << "}";
    return os.str();
}

std::string Functional::str() const { return str(SeqNaming::standard(field_of(*this))); }

// S(v_{m,n}) = (-1)^n q^{n(n+1)/2 - n(m+n)} v_{-(m+n),n}
Functional antipode_functional(const Functional& x) {
    Field f = field_of(x);
    std::map<int, CFiniteSeq> out;
    for (auto& [n, s] : x.components()) {
        Scalar c = sign(n) * f.q().pow(n * (n + 1) / 2 - n * n);
        out[n] = CFiniteSeq::geometric(f.q().pow(-n), c) * reflect(s, n);
    }
    return Functional(f, out);
}

Functional antipode_inverse_functional(const Functional& x) {
    Field f = field_of(x);
    std::map<int, CFiniteSeq> out;
    for (auto& [n, s] : x.components()) {
        Scalar c = sign(n) * f.q().pow(-(n * (n + 1) / 2));
        out[n] = CFiniteSeq::geometric(f.q().pow(-n), c) * reflect(s, n);
    }
    return Functional(f, out);
}

// v_{m,n} s = q^n v_{m+1,n}; v_{m,n} t = [n+1]_q v_{m,n+1}
Functional translate(HqGen g, const Functional& x) {
    Field f = field_of(x);
    std::map<int, CFiniteSeq> out;
    for (auto& [n, s] : x.components()) {
        switch (g) {
            case HqGen::S: out[n] = f.q().pow(n) * s.shift(1); break;
            case HqGen::SInv: out[n] = f.q().pow(-n) * s.shift(-1); break;
            case HqGen::T:
                if (n > 0) out[n - 1] = q_integer(n, f) * s;
                break;
        }
    }
    return Functional(f, out);
}

namespace {

HqGen hq_letter(const Presentation& p, Letter l) {
    const std::string& nm = p.name(l);
    if (nm == "s") return HqGen::S;
    if (nm == "s^-1") return HqGen::SInv;
    if (nm == "t") return HqGen::T;
    throw std::invalid_argument("generator " + nm + " is not one of s, s^-1, t");
}

}  // namespace

Functional translate(const NCElement& h, const Functional& x) {
    Functional r;
    for (auto& [w, c] : h.terms()) {
        Functional y = x;
        for (auto it = w.rbegin(); it != w.rend(); ++it) y = translate(hq_letter(*h.pres(), *it), y);
        r += c * y;
    }
    return r;
}

Scalar pair(const Functional& x, const NCElement& h) {
    Field f = field_of(x);
    Scalar r(0);
    for (auto& [w, c] : h.terms()) {
        int m = 0, n = 0;
        for (Letter l : w) {
            HqGen g = hq_letter(*h.pres(), l);
            if (g == HqGen::T) ++n;
            else if (n > 0) throw std::invalid_argument("pairing expects normal-form words s^m t^n");
            else m += g == HqGen::S ? 1 : -1;
        }
        r += c * q_factorial(n, f) * x(m, n);
    }
    return r;
}

}  // namespace qsi
