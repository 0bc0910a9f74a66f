#include "qsi/hull.hpp"

#include "qsi/expr_parser.hpp"

namespace qsi {

RatFunc1 rf_t(const Field& f) { return RatFunc1::var(f.q()); }
RatFunc1 rf_const(const Field& f, const Scalar& c) { return RatFunc1(c).with_multiplier(f.q()); }
RatFunc2 rf2_Q(const Field& f) { return RatFunc2::var(f.q()); }
RatFunc2 rf2_const(const Field& f, const RatFunc1& c) { return RatFunc2(c).with_multiplier(f.q()); }

RatFunc1 parse_ratfunc(const std::string& text, const Field& f, const std::map<std::string, Scalar>& extra) {
    ExprRules<RatFunc1> rules;
    rules.number = [&](const Rational& r) { return rf_const(f, Scalar(r)); };
    rules.ident = [&](const std::string& id) -> std::optional<RatFunc1> {
        if (id == "t") return rf_t(f);
        auto it = extra.find(id);
        if (it != extra.end()) return rf_const(f, it->second);
        if (id == "q") return rf_const(f, f.q());
        return std::nullopt;
    };
    rules.divide = [](const RatFunc1& a, const RatFunc1& b) { return a / b; };
    rules.power = [](const RatFunc1& a, long e) { return a.pow(e); };
    return parse_expr(text, rules);
}

RatFunc2 substitute_tQ(const RatFunc1& a, const Field& f) {
    auto lift = [&](const UPoly<Scalar>& p) {
        std::vector<RatFunc1> c;
        for (int k = 0; k <= p.degree(); ++k)
            c.push_back(RatFunc1(UPoly<Scalar>::monomial(p.coeff(k), k), UPoly<Scalar>(Scalar(1)), f.q()));
        return UPoly<RatFunc1>(std::move(c));
    };
    return RatFunc2(lift(a.num()), lift(a.den()), f.q());
}

RatFunc1 evaluate_Q(const RatFunc2& a, const Scalar& value) {
    RatFunc1 v(value);
    if (a.multiplier()) v = v.with_multiplier(*a.multiplier());
    return a.eval(v);
}

RatFunc2 d_dt(const RatFunc2& a) {
    return a.derive_coefficients([](const RatFunc1& c) { return c.derivative(); });
}

HullElement d_dt(const HullElement& s) {
    std::vector<RatFunc2> c;
    for (int i = 0; i <= s.degree(); ++i) c.push_back(d_dt(s.coeff(i)));
    return HullElement(c, s.precision());
}

// ---------------------------------------------------------------- C(t)

RatFunc1 RationalQsiField::sigma(const RatFunc1& a, int power) const {
    return a.substitute_scaled(f_.q().pow(power)).with_multiplier(f_.q());
}

RatFunc1 RationalQsiField::theta1(const RatFunc1& a) const {
    const Scalar q = f_.q();
    if (q == Scalar(1)) return a.derivative();
    RatFunc1 t = rf_t(f_);
    return (sigma(a) - a) / (rf_const(f_, q - Scalar(1)) * t);
}

RatFunc1 RationalQsiField::theta(int n, const RatFunc1& a) const {
    Scalar fact = q_factorial(n, f_);
    if (fact.is_zero()) throw Refusal("theta^(" + std::to_string(n) + ") needs [" + std::to_string(n) + "]_q! != 0");
    RatFunc1 x = a;
    for (int i = 0; i < n; ++i) x = theta1(x);
    return x.scaled(fact.inv());
}

// ---------------------------------------------------------------- universal Hopf morphism

HullElement universal_hopf(const Field& f, const RatFunc1& a, int D) {
    if (is_root_of_unity(f)) throw Refusal("the universal Hopf morphism on C(t) needs q not a root of unity");
    RationalQsiField K(f);
    std::vector<RatFunc2> c;
    RatFunc1 x = a.with_multiplier(f.q());
    for (int i = 0; i <= D; ++i) {
        c.push_back(substitute_tQ(x.scaled(q_factorial(i, f).inv()), f));
        x = K.theta1(x);
    }
    return HullElement(c, D);
}

HullElement hull_X(const Field& f) {
    return HullElement({rf2_const(f, RatFunc1(0)), rf2_const(f, RatFunc1(1))}, kExact);
}

HullElement hull_Q(const Field& f) { return HullElement(rf2_Q(f)); }

HullElement hull_inverse_generator(const Field& f, const Scalar& c, int D) {
    HullElement p = HullElement(rf2_const(f, rf_const(f, c)) + rf2_const(f, rf_t(f)) * rf2_Q(f)) + hull_X(f);
    return series_invert(p, D);
}

namespace {

void expect(Report& rep, const std::string& what, const HullElement& got, const HullElement& want) {
    ++rep.checked;
    int at = got.first_difference(want);
    if (at >= 0) rep.fail(what + " fails at X^" + std::to_string(at));
}

HullElement scal(const Field& f, const Scalar& c, const HullElement& s) { return c * s; }

}  // namespace

Report verify_qsi_morphism(const Field& f, const RatFunc1& a0, const RatFunc1& b0, int D) {
    Report rep;
    RationalQsiField K(f);
    RatFunc1 a = a0.with_multiplier(f.q()), b = b0.with_multiplier(f.q());
    HullElement ia = universal_hopf(f, a, D), ib = universal_hopf(f, b, D);
    expect(rep, "iota(ab) = iota(a) iota(b)", universal_hopf(f, a * b, D), (ia * ib).truncated(D));
    for (auto [x, ix, name] : {std::tuple{a, ia, "a"}, std::tuple{b, ib, "b"}}) {
        std::string n = name;
        expect(rep, "iota(sigma " + n + ") = Sigma-hat iota(" + n + ")", universal_hopf(f, K.sigma(x), D), hat_sigma(ix, f));
        for (int i = 1; i <= 3 && i <= D; ++i)
            expect(rep, "iota(theta^(" + std::to_string(i) + ") " + n + ") = Theta-hat^(" + std::to_string(i) + ") iota(" + n + ")",
                   universal_hopf(f, K.theta(i, x), D), hat_theta(i, ix, f));
    }
    return rep;
}

Report hull_stability_check(const Field& f, const Scalar& c, int D) {
    Report rep;
    const Scalar q = f.q();
    HullElement X = hull_X(f), Q = hull_Q(f), one(1), zero;
    HullElement W = hull_inverse_generator(f, c, D), Wq = hull_inverse_generator(f, c / q, D);
    HullElement it = universal_hopf(f, rf_t(f), D);
    expect(rep, "QX = qXQ", Q * X, scal(f, q, X * Q));
    expect(rep, "Sigma-hat(X) = qX", hat_sigma(X, f), scal(f, q, X));
    expect(rep, "Theta-hat(X) = 1", hat_theta(1, X, f), one);
    expect(rep, "d/dt X = 0", d_dt(X), zero);
    expect(rep, "Sigma-hat(Q) = qQ", hat_sigma(Q, f), scal(f, q, Q));
    expect(rep, "Theta-hat(Q) = 0", hat_theta(1, Q, f), zero);
    expect(rep, "d/dt Q = 0", d_dt(Q), zero);
    expect(rep, "d/dt iota(t) = Q", d_dt(it), Q);
    expect(rep, "W (c + tQ + X) = 1", (W * (HullElement(rf2_const(f, rf_const(f, c))) + it)).truncated(D), one);
    expect(rep, "Sigma-hat(W_c) = q^-1 W_{c/q}", hat_sigma(W, f), scal(f, q.inv(), Wq));
    expect(rep, "Theta-hat(W_c) = -q^-1 W_{c/q} W_c", hat_theta(1, W, f), scal(f, -q.inv(), (Wq * W).truncated(D)));
    expect(rep, "d/dt W_c = -W_c Q W_c", d_dt(W), -((W * Q * W).truncated(D)));
    rep.note("hull generators X, Q, (c' + tQ + X)^-1 with c' in {" + c.str() + ", " + (c / q).str() + "}");
    return rep;
}

// ---------------------------------------------------------------- deformations

DeformationWitness DeformationWitness::identity(int n) { return {Mat<Scalar>::identity(n), Mat<Scalar>(n, n)}; }

namespace {

bool nilpotent(const Mat<Scalar>& m) { return m.pow(m.rows()).is_zero(); }

HullMatrix lift(const Field& f, const Mat<Scalar>& m, const HullElement& s) {
    HullMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) r(i, j) = m(i, j) * s;
    return r;
}

HullMatrix scale(const Scalar& c, const HullMatrix& m) {
    HullMatrix r = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = c * m(i, j);
    return r;
}

HullMatrix map_hat(const HullMatrix& m, const std::function<HullElement(const HullElement&)>& op) {
    HullMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = op(m(i, j));
    return r;
}

void expect_m(Report& rep, const std::string& what, const HullMatrix& got, const HullMatrix& want) {
    ++rep.checked;
    for (int i = 0; i < got.rows(); ++i)
        for (int j = 0; j < got.cols(); ++j) {
            int at = got(i, j).first_difference(want(i, j));
            if (at >= 0) {
                rep.fail(what + " fails at entry (" + std::to_string(i) + "," + std::to_string(j) + "), X^" +
                         std::to_string(at));
                return;
            }
        }
}

}  // namespace

Report deformation_preconditions(const Field& field, const DeformationWitness& w) {
    Report rep;
    int n = w.e.rows();
    if (w.e.cols() != n || w.f.rows() != n || w.f.cols() != n) {
        rep.fail("e and f must be square matrices of the same size");
        return rep;
    }
    rep.checked += 4;
    if (w.e * w.f != (w.f * w.e).scaled(field.q())) rep.fail("ef = qfe fails");
    if (!nilpotent(w.e - Mat<Scalar>::identity(n))) rep.fail("e - 1 is not nilpotent");
    if (!nilpotent(w.f)) rep.fail("f is not nilpotent");
    if (w.e.det().is_zero()) rep.fail("e is not invertible");
    return rep;
}

Report deformation_witness(const Field& field, const DeformationWitness& w, const Scalar& c, int D) {
    Report rep = deformation_preconditions(field, w);
    if (!rep.ok) return rep;
    const Field& f = field;
    const Scalar q = f.q();
    int n = w.e.rows();
    Mat<Scalar> I = Mat<Scalar>::identity(n);
    HullElement X = hull_X(f), Q = hull_Q(f);
    RatFunc2 t2 = rf2_const(f, rf_t(f));
    HullMatrix phiQ = lift(f, w.e, Q);
    HullMatrix phiX = lift(f, I, X) + lift(f, w.f, Q);
    HullMatrix phiT = lift(f, w.e, HullElement(t2) * Q) + phiX;  // image of iota(t) = tQ + X
    auto phiW = [&](const Scalar& cc) {
        HullMatrix p = lift(f, I, HullElement(rf2_const(f, rf_const(f, cc)))) + phiT;
        Mat<RatFunc2> c0(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c0(i, j) = p(i, j).coeff(0);
        return std::make_pair(series_matrix_invert(p, c0.inverse(), D), p);
    };
    auto [W, P] = phiW(c);
    auto Wq = phiW(c / q).first;
    auto sig = [&](const HullElement& s) { return hat_sigma(s, f); };
    auto th = [&](const HullElement& s) { return hat_theta(1, s, f); };
    auto tr = [&](const HullMatrix& m) { return truncate_entries<RatFunc2>(m, D); };
    HullMatrix Id = lift(f, I, HullElement(1)), Z(n, n);
    expect_m(rep, "phi(Q) phi(X) = q phi(X) phi(Q)", phiQ * phiX, scale(q, phiX * phiQ));
    expect_m(rep, "Sigma-hat phi(Q) = phi(qQ)", map_hat(phiQ, sig), scale(q, phiQ));
    expect_m(rep, "Theta-hat phi(Q) = 0", map_hat(phiQ, th), Z);
    expect_m(rep, "Sigma-hat phi(X) = phi(qX)", map_hat(phiX, sig), scale(q, phiX));
    expect_m(rep, "Theta-hat phi(X) = 1", map_hat(phiX, th), Id);
    expect_m(rep, "phi(W_c) phi(c + tQ + X) = 1", tr(W * P), Id);
    expect_m(rep, "phi(c + tQ + X) phi(W_c) = 1", tr(P * W), Id);
    expect_m(rep, "Sigma-hat phi(W_c) = q^-1 phi(W_{c/q})", map_hat(W, sig), scale(q.inv(), Wq));
    expect_m(rep, "Theta-hat phi(W_c) = -q^-1 phi(W_{c/q}) phi(W_c)", map_hat(W, th), scale(-q.inv(), tr(Wq * W)));
    if (w.e == I && w.f.is_zero()) {
        HullElement Wc = hull_inverse_generator(f, c, D);
        expect_m(rep, "identity deformation fixes W_c", W, lift(f, I, Wc));
        rep.note("identity deformation");
    }
    return rep;
}

DeformationWitness deformation_compose(const DeformationWitness& w1, const DeformationWitness& w2) {
    auto commute = [](const Mat<Scalar>& a, const Mat<Scalar>& b) { return a * b == b * a; };
    if (!commute(w1.e, w2.e) || !commute(w1.e, w2.f) || !commute(w1.f, w2.e) || !commute(w1.f, w2.f))
        throw std::invalid_argument("deformation pairs must commute with each other");
    return {w1.e * w2.e, w1.e * w2.f + w1.f};
}

std::vector<Mat<Scalar>> regular_representation(const std::vector<std::vector<std::vector<Scalar>>>& table) {
    int n = static_cast<int>(table.size());
    std::vector<Mat<Scalar>> out;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(table[i].size()) != n) throw std::invalid_argument("multiplication table is not square");
        Mat<Scalar> m(n, n);
        for (int j = 0; j < n; ++j) {
            if (static_cast<int>(table[i][j].size()) != n) throw std::invalid_argument("product has wrong length");
            for (int k = 0; k < n; ++k) m(k, j) = table[i][j][k];
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace qsi
