#include "qsi/qsimod.hpp"

#include <cctype>
#include <sstream>

namespace qsi {

namespace {

std::string mat_shape(const Mat<Scalar>& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

YMat constant_ymat(const Mat<Scalar>& m) {
    YMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = TwistedSeries<CFiniteSeq>(CFiniteSeq(m(i, j)));
    return r;
}

SeqMat scalar_times(const Mat<Scalar>& c, const SeqMat& a) {
    SeqMat r(c.rows(), a.cols());
    for (int i = 0; i < c.rows(); ++i)
        for (int k = 0; k < c.cols(); ++k) {
            if (c(i, k).is_zero()) continue;
            for (int j = 0; j < a.cols(); ++j) r(i, j) += c(i, k) * a(k, j);
        }
    return r;
}

YMat hat_sigma_m(const YMat& y, const Field& f) {
    return map_entries<CFiniteSeq>(y, [&](const TwistedSeries<CFiniteSeq>& s) { return hat_sigma(s, f); });
}
YMat hat_theta_m(const YMat& y, const Field& f) {
    return map_entries<CFiniteSeq>(y, [&](const TwistedSeries<CFiniteSeq>& s) { return hat_theta(1, s, f); });
}

// Entrywise comparison; records the first differing entry and X-degree.
bool compare(const YMat& lhs, const YMat& rhs, const std::string& what, Report& rep) {
    ++rep.checked;
    for (int i = 0; i < lhs.rows(); ++i)
        for (int j = 0; j < lhs.cols(); ++j) {
            int k = lhs(i, j).first_difference(rhs(i, j));
            if (k >= 0) {
                rep.fail(what + " fails at entry (" + std::to_string(i) + "," + std::to_string(j) +
                         "), coefficient of X^" + std::to_string(k));
                return false;
            }
        }
    return true;
}

int min_precision(const YMat& y) {
    int p = kExact;
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) p = std::min(p, y(i, j).precision());
    return p;
}

Report check_system(const Mat<Scalar>& A, const Mat<Scalar>& B, const YMat& Y, const Field& f) {
    Report rep;
    compare(hat_sigma_m(Y, f), constant_ymat(A) * Y, "Sigma-hat Y = A Y", rep);
    compare(hat_theta_m(Y, f), constant_ymat(B) * Y, "Theta-hat Y = B Y", rep);
    return rep;
}

Report check_trivializing(const Mat<Scalar>& A, const Mat<Scalar>& B, const YMat& Z, const Field& f) {
    Report rep;
    Mat<Scalar> Ainv = A.inverse();
    compare(hat_sigma_m(Z, f), Z * constant_ymat(Ainv), "sigma(Z) = Z A^-1", rep);
    compare(hat_theta_m(Z, f), -(Z * constant_ymat(Ainv * B)), "theta(Z) = -Z A^-1 B", rep);
    // Row i of Z is the coordinate vector of c_i = sum_j Z_ij m_j with sigma(m) = A m, theta(m) = B m.
    YMat zero(1, Z.cols());
    for (int i = 0; i < Z.rows(); ++i) {
        YMat z(1, Z.cols());
        for (int j = 0; j < Z.cols(); ++j) z(0, j) = Z(i, j);
        YMat sz = hat_sigma_m(z, f);
        std::string tag = "c_" + std::to_string(i + 1);
        compare(sz * constant_ymat(A), z, tag + " fixed by sigma", rep);
        compare(sz * constant_ymat(B) + hat_theta_m(z, f), zero, tag + " killed by theta", rep);
    }
    return rep;
}

std::optional<YMat> invert(const YMat& y, int D) {
    SeqMat y0(y.rows(), y.cols());
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) y0(i, j) = y(i, j).coeff(0);
    auto inv0 = seq_matrix_inverse(y0);
    if (!inv0) return std::nullopt;
    return series_matrix_invert<CFiniteSeq>(y, *inv0, D);
}

}  // namespace

QsiModuleSpec QsiModuleSpec::make(const Field& f, const Mat<Scalar>& A, const Mat<Scalar>& B, Convention conv,
                                  std::map<std::string, Scalar> params) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("module matrices must be square of equal size, got " + mat_shape(A) + " and " +
                                    mat_shape(B));
    QsiModuleSpec m;
    m.field = f;
    m.A = conv == Convention::DifferenceSystem ? A.transpose() : A;
    m.B = conv == Convention::DifferenceSystem ? B.transpose() : B;
    m.params = std::move(params);
    return m;
}

QsiModuleSpec QsiModuleSpec::trivial(const Field& f, int n) {
    QsiModuleSpec m = make(f, Mat<Scalar>::identity(n), Mat<Scalar>(n, n));
    m.name = "trivial";
    return m;
}

SeqNaming QsiModuleSpec::naming() const {
    SeqNaming s = SeqNaming::standard(field);
    for (auto& [k, v] : params) {
        if (v == Scalar(1) || v == Scalar(-1) || v.is_zero()) continue;
        std::string b = k;
        for (auto& ch : b) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        s.bases.emplace_back(b, v);
    }
    return s;
}

Report validate(const QsiModuleSpec& m) {
    Report rep;
    const Scalar q = m.field.q();
    ++rep.checked;
    if (m.A.rows() != m.A.cols() || m.B.rows() != m.B.cols() || m.A.rows() != m.B.rows()) {
        rep.fail("A and B must be square of equal size (" + mat_shape(m.A) + ", " + mat_shape(m.B) + ")");
        return rep;
    }
    ++rep.checked;
    if (m.A.det().is_zero()) rep.fail("A is not invertible (det A = 0)");
    ++rep.checked;
    if (m.B * m.A == m.A * m.B.scaled(q)) {
        rep.note("convention: B A = q A B (module form)");
    } else if (m.A * m.B == m.B * m.A.scaled(q)) {
        rep.fail("B A = q A B fails; the matrices satisfy A B = q B A, use the difference-system convention");
    } else {
        rep.fail("B A = q A B fails (and A B = q B A fails too)");
    }
    return rep;
}

QsiModuleSpec tensor(const QsiModuleSpec& a, const QsiModuleSpec& b) {
    if (a.field != b.field) throw std::invalid_argument("tensor of modules over different fields");
    QsiModuleSpec r;
    r.field = a.field;
    r.A = a.A.kron(b.A);
    r.B = a.A.kron(b.B) + a.B.kron(Mat<Scalar>::identity(b.dim()));
    r.params = a.params;
    r.params.insert(b.params.begin(), b.params.end());
    r.name = a.name.empty() || b.name.empty() ? "" : "(" + a.name + ")⊗(" + b.name + ")";
    return r;
}

QsiModuleSpec dual(const QsiModuleSpec& m) {
    QsiModuleSpec r = m;
    Mat<Scalar> Ainv = m.A.inverse();
    r.A = Ainv.transpose();
    r.B = (m.B * Ainv).scaled(-m.field.q()).transpose();
    r.name = m.name.empty() ? "" : m.name + "*";
    return r;
}

Mat<Scalar> represent(const QsiModuleSpec& m, const NCElement& x) {
    const PresPtr& p = x.pres();
    std::vector<Mat<Scalar>> img(p->num_generators());
    for (int g = 0; g < p->num_generators(); ++g) {
        const std::string& nm = p->name(g);
        if (nm == "s") img[g] = m.A;
        else if (nm == "s^-1") img[g] = m.A.inverse();
        else if (nm == "t") img[g] = m.B;
        else throw std::invalid_argument("no image for generator " + nm + " (expected s, s^-1, t)");
    }
    Mat<Scalar> r(m.dim(), m.dim());
    for (auto& [w, c] : x.terms()) {
        Mat<Scalar> t = Mat<Scalar>::identity(m.dim());
        for (Letter l : w) t = t * img[l];
        r = r + t.scaled(c);
    }
    return r;
}

SolutionMatrix solve(const QsiModuleSpec& m, int D) {
    Report v = validate(m);
    if (!v.ok) throw std::invalid_argument("invalid module: " + v.failures.front());
    const Field& f = m.field;
    Mat<Scalar> A = m.system_A(), B = m.system_B();
    int nil = B.nilpotency_index();
    auto N = is_root_of_unity(f);
    if (N && (nil < 0 || nil > *N))
        throw Refusal("q is a primitive " + std::to_string(*N) + "-th root of unity and B is " +
                      (nil < 0 ? std::string("not nilpotent") : "nilpotent of index " + std::to_string(nil)) +
                      "; [i]_q! vanishes for i >= " + std::to_string(*N));
    SolutionMatrix s;
    s.spec = m;
    s.exact = nil >= 0;
    s.truncation = D;
    int top = s.exact ? std::max(nil - 1, 0) : D;
    int prec = s.exact ? kExact : D;
    if (!s.exact) s.notes.push_back("B is not nilpotent; the series is truncated after X^" + std::to_string(D));
    SeqMat powers = matrix_power_sequence(A);
    int n = m.dim();
    std::vector<std::vector<std::vector<CFiniteSeq>>> coeffs(n, std::vector<std::vector<CFiniteSeq>>(n));
    Mat<Scalar> Bi = Mat<Scalar>::identity(n);
    for (int i = 0; i <= top; ++i) {
        SeqMat c = scalar_times(Bi.scaled(q_factorial(i, f).inv()), powers);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) coeffs[r][k].push_back(c(r, k));
        Bi = Bi * B;
    }
    s.Y = YMat(n, n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) s.Y(r, k) = TwistedSeries<CFiniteSeq>(coeffs[r][k], prec);
    return s;
}

Report verify_solution(const SolutionMatrix& s) {
    const Field& f = s.spec.field;
    Report rep = check_system(s.spec.system_A(), s.spec.system_B(), s.Y, f);
    int D = std::min(s.truncation, min_precision(s.Y));
    auto Z = invert(s.Y, D);
    ++rep.checked;
    if (!Z) {
        rep.fail("constant term of Y is not invertible");
        return rep;
    }
    YMat id = YMat::identity(s.Y.rows());
    compare(s.Y * *Z, id, "Y Z = 1", rep);
    compare(*Z * s.Y, id, "Z Y = 1", rep);
    for (auto& n : s.notes) rep.note(n);
    return rep;
}

Trivialization trivializing_matrix(const SolutionMatrix& s) {
    Trivialization t;
    int D = std::min(s.truncation, min_precision(s.Y));
    auto Z = invert(s.Y, D);
    if (!Z) {
        t.report.fail("constant term of Y is not invertible");
        return t;
    }
    t.Z = *Z;
    t.report = check_trivializing(s.spec.system_A(), s.spec.system_B(), t.Z, s.spec.field);
    return t;
}

Report check_from_trivializing(const QsiModuleSpec& m, const YMat& Z, int D) {
    Mat<Scalar> A = m.system_A(), B = m.system_B();
    Report rep = check_trivializing(A, B, Z, m.field);
    auto Y = invert(Z, std::min(D, min_precision(Z)));
    ++rep.checked;
    if (!Y) {
        rep.fail("constant term of Z is not invertible");
        return rep;
    }
    rep.merge(check_system(A, B, *Y, m.field), "from Z^-1: ");
    return rep;
}

std::string series_str(const TwistedSeries<CFiniteSeq>& s, const SeqNaming& names) {
    return s.str([&](const CFiniteSeq& c) { return seq_str(c, names); });
}

std::string ymat_str(const YMat& y, const SeqNaming& names) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < y.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < y.cols(); ++j) os << (j ? ", " : "") << series_str(y(i, j), names);
        os << "]";
    }
    os << "]";
    return os.str();
}

YMat ymat_from_seq(const SeqMat& m) {
    YMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = TwistedSeries<CFiniteSeq>(m(i, j));
    return r;
}

}  // namespace qsi
