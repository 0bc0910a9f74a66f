#include "qsi/seq.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qsi/expr_parser.hpp"

namespace qsi {

namespace {

// Berlekamp-Massey: monic characteristic polynomial of the shortest recurrence.
SPoly berlekamp_massey(const std::vector<Scalar>& s) {
    std::vector<Scalar> C{Scalar(1)}, B{Scalar(1)};
    int L = 0, m = 1;
    Scalar b(1);
    for (size_t n = 0; n < s.size(); ++n) {
        Scalar d = s[n];
        for (int i = 1; i <= L; ++i)
            if (i < static_cast<int>(C.size())) d += C[i] * s[n - i];
        if (d.is_zero()) {
            ++m;
            continue;
        }
        std::vector<Scalar> T = C;
        Scalar coef = d / b;
        if (C.size() < B.size() + m) C.resize(B.size() + m, Scalar(0));
        for (size_t i = 0; i < B.size(); ++i) C[i + m] -= coef * B[i];
        if (2 * L <= static_cast<int>(n)) {
            L = static_cast<int>(n) + 1 - L;
            B = T;
            b = d;
            m = 1;
        } else {
            ++m;
        }
    }
    C.resize(L + 1, Scalar(0));
    std::vector<Scalar> p(L + 1, Scalar(0));
    for (int k = 0; k <= L; ++k) p[k] = C[L - k];
    return SPoly(p);
}

}  // namespace

CFiniteSeq::CFiniteSeq(const SPoly& rec, int start, const std::vector<Scalar>& values) {
    if (rec.zero()) throw std::invalid_argument("zero recurrence");
    if (static_cast<int>(values.size()) != rec.degree())
        throw std::invalid_argument("window size must equal the recurrence order");
    if (rec.degree() > 0 && rec.coeff(0).is_zero())
        throw std::invalid_argument("recurrence must have a nonzero constant term (bilateral sequence)");
    rec_ = rec.monic();
    start_ = start;
    win_ = values;
    normalize();
}

CFiniteSeq CFiniteSeq::constant(const Scalar& c) {
    CFiniteSeq a;
    if (c.is_zero()) return a;
    a.rec_ = SPoly(std::vector<Scalar>{Scalar(-1), Scalar(1)});
    a.start_ = 0;
    a.win_ = {c};
    return a;
}

CFiniteSeq CFiniteSeq::geometric(const Scalar& ratio, const Scalar& at_zero) {
    if (ratio.is_zero()) throw std::invalid_argument("geometric ratio must be nonzero");
    CFiniteSeq a;
    if (at_zero.is_zero()) return a;
    a.rec_ = SPoly(std::vector<Scalar>{-ratio, Scalar(1)});
    a.start_ = 0;
    a.win_ = {at_zero};
    return a;
}

CFiniteSeq CFiniteSeq::index() {
    // (x-1)^2
    return CFiniteSeq(SPoly(std::vector<Scalar>{Scalar(1), Scalar(-2), Scalar(1)}), -1, {Scalar(-1), Scalar(0)});
}

CFiniteSeq CFiniteSeq::from_values(int lo, const std::vector<Scalar>& values) {
    SPoly p = berlekamp_massey(values);
    int r = p.degree();
    if (r == 0) return CFiniteSeq();
    if (p.coeff(0).is_zero())
        throw std::domain_error("values do not determine a bilateral C-finite sequence (need more terms)");
    std::vector<Scalar> w(values.begin(), values.begin() + r);
    return raw(p, lo, std::move(w));
}

CFiniteSeq CFiniteSeq::raw(const SPoly& rec, int start, std::vector<Scalar> values) {
    CFiniteSeq a;
    a.rec_ = rec;
    a.start_ = start;
    a.win_ = std::move(values);
    if (a.win_.empty()) a.rec_ = SPoly(Scalar(1));
    a.recenter();
    return a;
}

void CFiniteSeq::recenter() {
    int target = -(order() / 2);
    if (start_ != target) {
        win_ = values(target, order());
        start_ = target;
    }
}

void CFiniteSeq::normalize() {
    int r = order();
    if (r == 0) {
        rec_ = SPoly(Scalar(1));
        start_ = 0;
        return;
    }
    auto vals = values(start_, 2 * r);
    SPoly p = berlekamp_massey(vals);
    int s = p.degree();
    int lo = start_;
    if (s == 0) {
        win_.clear();
        rec_ = SPoly(Scalar(1));
        start_ = 0;
        return;
    }
    if (s < r) {
        rec_ = p;
        win_.assign(vals.begin(), vals.begin() + s);
        start_ = lo;
    }
    recenter();
}

std::vector<Scalar> CFiniteSeq::values(int lo, int count) const {
    std::vector<Scalar> out;
    if (count <= 0) return out;
    int r = order();
    if (r == 0) return std::vector<Scalar>(count, Scalar(0));
    int a = std::min(lo, start_), b = std::max(lo + count, start_ + r);  // [a, b)
    std::vector<Scalar> buf(b - a, Scalar(0));
    for (int i = 0; i < r; ++i) buf[start_ + i - a] = win_[i];
    const auto& p = rec_.coeffs();
    // forward: a(n+r) = -sum_{k<r} p_k a(n+k)
    for (int n = start_ + r; n < b; ++n) {
        Scalar v(0);
        for (int k = 0; k < r; ++k)
            if (!p[k].is_zero()) v -= p[k] * buf[n - r + k - a];
        buf[n - a] = v;
    }
    // backward: a(n) = -sum_{k>=1} p_k a(n+k) / p_0
    Scalar inv0 = p[0].inv();
    for (int n = start_ - 1; n >= a; --n) {
        Scalar v(0);
        for (int k = 1; k <= r; ++k)
            if (!p[k].is_zero()) v -= p[k] * buf[n + k - a];
        buf[n - a] = v * inv0;
    }
    out.assign(buf.begin() + (lo - a), buf.begin() + (lo - a) + count);
    return out;
}

Scalar CFiniteSeq::operator()(int n) const { return values(n, 1)[0]; }

CFiniteSeq CFiniteSeq::shift(int k) const {
    if (is_zero() || k == 0) return *this;
    return raw(rec_, start_, values(start_ + k, order()));
}

CFiniteSeq CFiniteSeq::operator-() const {
    CFiniteSeq r = *this;
    for (auto& v : r.win_) v = -v;
    return r;
}

CFiniteSeq operator*(const Scalar& c, const CFiniteSeq& a) {
    if (c.is_zero()) return CFiniteSeq();
    CFiniteSeq r = a;
    for (auto& v : r.win_) v = c * v;
    return r;
}

CFiniteSeq operator+(const CFiniteSeq& a, const CFiniteSeq& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.rec_ == b.rec_) {
        auto va = a.values(a.start_, a.order()), vb = b.values(a.start_, a.order());
        for (size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
        return CFiniteSeq(a.rec_, a.start_, va);
    }
    int bound = a.order() + b.order();
    int lo = -bound;
    auto va = a.values(lo, 2 * bound), vb = b.values(lo, 2 * bound);
    for (size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
    return CFiniteSeq::from_values(lo, va);
}

CFiniteSeq operator-(const CFiniteSeq& a, const CFiniteSeq& b) { return a + (-b); }

CFiniteSeq operator*(const CFiniteSeq& a, const CFiniteSeq& b) {
    if (a.is_zero() || b.is_zero()) return CFiniteSeq();
    if (a.is_constant()) return a.win_[0] * b;
    if (b.is_constant()) return b.win_[0] * a;
    int bound = a.order() * b.order();
    int lo = -bound;
    auto va = a.values(lo, 2 * bound), vb = b.values(lo, 2 * bound);
    for (size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
    return CFiniteSeq::from_values(lo, va);
}

CFiniteSeq operator/(const CFiniteSeq& a, const CFiniteSeq& b) {
    auto inv = b.pointwise_inverse();
    if (!inv) throw std::domain_error("sequence " + b.str() + " is not invertible");
    return a * *inv;
}

bool CFiniteSeq::operator==(const CFiniteSeq& o) const {
    int k = order() + o.order();
    if (k == 0) return true;
    int lo = -k / 2;
    return values(lo, k) == o.values(lo, k);
}

bool CFiniteSeq::is_constant() const { return order() == 1 && rec_.coeff(0) == Scalar(-1); }

std::optional<CFiniteSeq> CFiniteSeq::pointwise_inverse() const {
    if (is_zero()) return std::nullopt;
    if (is_constant()) return constant(win_[0].inv());
    if (order() == 1) return geometric(-rec_.coeff(0).inv(), win_[0].inv());
    int bound = 2 * order() + 4;
    int lo = -bound;
    auto v = values(lo, 2 * bound);
    for (auto& x : v) {
        if (x.is_zero()) return std::nullopt;
        x = x.inv();
    }
    CFiniteSeq cand;
    try {
        cand = from_values(lo, v);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    if (*this * cand != CFiniteSeq(1)) return std::nullopt;
    return cand;
}

std::string CFiniteSeq::str() const {
    if (is_zero()) return "0";
    if (is_constant()) return win_[0].str();
    std::ostringstream os;
    os << "seq{rec: [";
    for (int k = 0; k <= rec_.degree(); ++k) os << (k ? ", " : "") << rec_.coeff(k).str();
    os << "], window: {";
    for (int i = 0; i < order(); ++i) os << (i ? ", " : "") << (start_ + i) << ": " << win_[i].str();
    os << "}}";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const CFiniteSeq& a) { return os << a.str(); }

// ---------------------------------------------------------------- closed forms

SeqNaming SeqNaming::standard(const Field& f) {
    SeqNaming n;
    if (f.q() != Scalar(1) && f.q() != Scalar(-1)) n.bases.emplace_back("Q", f.q());
    return n;
}

std::optional<std::vector<SeqTerm>> closed_form(const CFiniteSeq& a, const SeqNaming& names) {
    std::vector<SeqTerm> out;
    if (a.is_zero()) return out;
    size_t nb = names.bases.size();
    // candidate ratios ordered by total exponent size
    std::vector<std::pair<Scalar, std::vector<int>>> cands;
    std::vector<int> e(nb, -names.max_exponent);
    std::function<void(size_t)> gen = [&](size_t i) {
        if (i == nb) {
            Scalar r(1);
            for (size_t j = 0; j < nb; ++j) r *= names.bases[j].second.pow(e[j]);
            cands.emplace_back(r, e);
            return;
        }
        for (int x = -names.max_exponent; x <= names.max_exponent; ++x) {
            e[i] = x;
            gen(i + 1);
        }
    };
    gen(0);
    auto weight = [](const std::vector<int>& v) {
        int w = 0;
        for (int x : v) w += std::abs(x);
        return w;
    };
    std::stable_sort(cands.begin(), cands.end(),
                     [&](auto& x, auto& y) { return weight(x.second) < weight(y.second); });
    SPoly p = a.recurrence();
    struct Root {
        Scalar r;
        int mult;
        std::vector<int> exps;
    };
    std::vector<Root> roots;
    std::vector<Scalar> seen;
    for (auto& [r, ex] : cands) {
        if (p.degree() == 0) break;
        if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
        seen.push_back(r);
        int mult = 0;
        SPoly lin(std::vector<Scalar>{-r, Scalar(1)});
        while (p.degree() > 0 && p.eval<Scalar>(r).is_zero()) {
            p = SPoly::divmod(p, lin).first;
            ++mult;
        }
        if (mult) roots.push_back({r, mult, ex});
    }
    if (p.degree() > 0) return std::nullopt;
    int n = a.order();
    std::vector<std::pair<int, int>> basis;  // (root index, power of n)
    for (size_t i = 0; i < roots.size(); ++i)
        for (int k = 0; k < roots[i].mult; ++k) basis.emplace_back(static_cast<int>(i), k);
    Mat<Scalar> M(n, n);
    std::vector<Scalar> rhs = a.values(a.window_start(), n), sol;
    for (int row = 0; row < n; ++row) {
        int idx = a.window_start() + row;
        for (int c = 0; c < n; ++c) {
            auto [ri, k] = basis[c];
            M(row, c) = Scalar(static_cast<long>(idx)).pow(k) * roots[ri].r.pow(idx);
        }
    }
    if (!M.solve(rhs, sol)) return std::nullopt;
    for (int c = 0; c < n; ++c) {
        if (sol[c].is_zero()) continue;
        auto [ri, k] = basis[c];
        out.push_back({sol[c], k, roots[ri].exps});
    }
    return out;
}

std::string seq_str(const CFiniteSeq& a, const SeqNaming& names) {
    auto cf = closed_form(a, names);
    if (!cf) return a.str();
    if (cf->empty()) return "0";
    std::string s;
    for (size_t t = 0; t < cf->size(); ++t) {
        const SeqTerm& term = (*cf)[t];
        std::vector<std::string> factors;
        if (term.index_power == 1) factors.push_back("Z");
        else if (term.index_power > 1) factors.push_back("Z^" + std::to_string(term.index_power));
        for (size_t j = 0; j < term.exponents.size(); ++j) {
            int x = term.exponents[j];
            if (x == 0) continue;
            factors.push_back(names.bases[j].first + (x == 1 ? "" : "^" + std::to_string(x)));
        }
        std::string body;
        for (size_t i = 0; i < factors.size(); ++i) body += (i ? "*" : "") + factors[i];
        Scalar c = term.coeff;
        bool neg = false;
        std::string cs = c.str();
        if (!body.empty() && c.is_rational() && c.to_rational() < 0) {
            neg = true;
            c = -c;
            cs = c.str();
        }
        std::string piece;
        if (body.empty()) piece = cs;
        else if (c == Scalar(1)) piece = body;
        else {
            if (cs.find_first_of(" /") != std::string::npos) cs = "(" + cs + ")";
            piece = cs + "*" + body;
        }
        if (!neg && piece[0] == '-' && t > 0) {
            neg = true;
            piece = piece.substr(1);
        }
        if (t == 0) s = neg ? "-" + piece : piece;
        else s += (neg ? " - " : " + ") + piece;
    }
    return s;
}

CFiniteSeq parse_seq(const std::string& text, const Field& f, const SeqNaming& names) {
    std::vector<std::pair<std::string, std::function<CFiniteSeq()>>> ids;
    for (auto& [n, r] : names.bases) ids.emplace_back(n, [r] { return CFiniteSeq::geometric(r); });
    ids.emplace_back("Z", [] { return CFiniteSeq::index(); });
    ids.emplace_back("q", [f] { return CFiniteSeq(f.q()); });
    if (f.kind() == FieldKind::Cyclotomic) ids.emplace_back("zeta", [f] { return CFiniteSeq(f.q()); });
    std::sort(ids.begin(), ids.end(), [](auto& a, auto& b) { return a.first.size() > b.first.size(); });
    ExprRules<CFiniteSeq> rules;
    rules.number = [](const Rational& r) { return CFiniteSeq(Scalar(r)); };
    rules.ident = [ids](const std::string& id) -> std::optional<CFiniteSeq> {
        CFiniteSeq acc(1);
        size_t i = 0;
        while (i < id.size()) {
            bool found = false;
            for (auto& [n, mk] : ids)
                if (id.compare(i, n.size(), n) == 0) {
                    acc = acc * mk();
                    i += n.size();
                    found = true;
                    break;
                }
            if (!found) return std::nullopt;
        }
        return acc;
    };
    rules.divide = [](const CFiniteSeq& a, const CFiniteSeq& b) { return a / b; };
    rules.power = [](const CFiniteSeq& a, long e) {
        CFiniteSeq base = a;
        if (e < 0) {
            auto inv = a.pointwise_inverse();
            if (!inv) throw ParseError("negative power of a non-invertible sequence");
            base = *inv;
            e = -e;
        }
        CFiniteSeq r(1);
        for (long i = 0; i < e; ++i) r = r * base;
        return r;
    };
    return parse_expr(text, rules);
}

// ---------------------------------------------------------------- matrices

Mat<CFiniteSeq> matrix_power_sequence(const Mat<Scalar>& A) {
    int n = A.rows();
    if (n != A.cols()) throw std::invalid_argument("matrix power sequence needs a square matrix");
    SPoly chi = A.charpoly();
    if (chi.coeff(0).is_zero()) throw std::domain_error("matrix power sequence needs an invertible matrix");
    int start = -(n / 2);
    std::vector<Mat<Scalar>> powers;
    Mat<Scalar> P = A.pow(start);
    for (int k = 0; k < n; ++k) {
        powers.push_back(P);
        P = P * A;
    }
    Mat<CFiniteSeq> out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Scalar> w;
            for (auto& M : powers) w.push_back(M(i, j));
            out(i, j) = CFiniteSeq(chi, start, w);
        }
    return out;
}

Mat<Scalar> evaluate(const Mat<CFiniteSeq>& m, int n) {
    Mat<Scalar> out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j)(n);
    return out;
}

namespace {

Mat<CFiniteSeq> minor_of(const Mat<CFiniteSeq>& m, int r, int c) {
    int n = m.rows();
    Mat<CFiniteSeq> out(n - 1, n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
        if (i == r) continue;
        for (int j = 0, jj = 0; j < n; ++j) {
            if (j == c) continue;
            out(ii, jj++) = m(i, j);
        }
        ++ii;
    }
    return out;
}

}  // namespace

CFiniteSeq seq_det(const Mat<CFiniteSeq>& m) {
    int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    if (n == 0) return CFiniteSeq(1);
    if (n == 1) return m(0, 0);
    CFiniteSeq d;
    for (int j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        CFiniteSeq t = m(0, j) * seq_det(minor_of(m, 0, j));
        d = (j % 2) ? d - t : d + t;
    }
    return d;
}

std::optional<Mat<CFiniteSeq>> seq_matrix_inverse(const Mat<CFiniteSeq>& m) {
    int n = m.rows();
    auto dinv = seq_det(m).pointwise_inverse();
    if (!dinv) return std::nullopt;
    Mat<CFiniteSeq> out(n, n);
    if (n == 1) {
        out(0, 0) = *dinv;
        return out;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CFiniteSeq c = seq_det(minor_of(m, j, i)) * *dinv;
            out(i, j) = ((i + j) % 2) ? -c : c;
        }
    return out;
}

}  // namespace qsi
