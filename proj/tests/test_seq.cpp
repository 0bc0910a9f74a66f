#include "doctest.h"
#include "qsi/series.hpp"

#include <random>

using namespace qsi;

namespace {

Field F2() { return Field::rationals(Rational(2)); }

using Series = TwistedSeries<CFiniteSeq>;

CFiniteSeq Qs(const Field& f) { return CFiniteSeq::geometric(f.q()); }

CFiniteSeq random_seq(std::mt19937& rng, const Field& f) {
    // small combination of 1, Z, Q, Q^-1 with rational coefficients
    CFiniteSeq out;
    CFiniteSeq parts[] = {CFiniteSeq(1), CFiniteSeq::index(), Qs(f), CFiniteSeq::geometric(f.q().inv())};
    for (auto& p : parts) out += Scalar(static_cast<long>(rng() % 5) - 2) * p;
    return out;
}

Series random_series(std::mt19937& rng, const Field& f, int D) {
    std::vector<CFiniteSeq> c;
    for (int i = 0; i <= D; ++i) c.push_back(random_seq(rng, f));
    return Series(c, D);
}

}  // namespace

TEST_CASE("shift") {
    Field F = F2();
    CFiniteSeq Q = Qs(F);
    CHECK(Q.shift() == Scalar(2) * Q);
    CHECK(CFiniteSeq(Scalar(7)).shift(3) == CFiniteSeq(Scalar(7)));
    CFiniteSeq Z = CFiniteSeq::index();
    CHECK(Z.shift() == Z + CFiniteSeq(1));
    CHECK(Z(-5) == Scalar(-5));
    CHECK(Q(-2) == Scalar(Rational(1, 4)));
}

TEST_CASE("pointwise products") {
    Field Qf = Field::rational_functions();
    CFiniteSeq Q = Qs(Qf), Z = CFiniteSeq::index();
    CHECK(Q * Q == CFiniteSeq::geometric(Qf.q().pow(2)));
    CHECK((Q * Q).order() == 1);
    CHECK(Q * CFiniteSeq(1) == Q);
    CFiniteSeq ZQ = Z * Q;
    Scalar q = Qf.q();
    CHECK(ZQ(-1) == -q.inv());
    CHECK(ZQ(0).is_zero());
    CHECK(ZQ(1) == q);
    CHECK(ZQ(2) == Scalar(2) * q.pow(2));
    CHECK(ZQ.order() == 2);
}

TEST_CASE("C-finite equality agrees with brute force") {
    Field F = F2();
    std::mt19937 rng(0);
    for (int it = 0; it < 40; ++it) {
        CFiniteSeq a = random_seq(rng, F), b = random_seq(rng, F);
        bool brute = a.values(-25, 50) == b.values(-25, 50);
        CHECK((a == b) == brute);
        // same sequence reached by two different routes
        CFiniteSeq c = (a + b) - b;
        CHECK(c == a);
        CHECK(c.values(-25, 50) == a.values(-25, 50));
        CFiniteSeq d = a * b;
        auto va = a.values(-25, 50), vb = b.values(-25, 50), vd = d.values(-25, 50);
        for (int i = 0; i < 50; ++i) CHECK(vd[i] == va[i] * vb[i]);
    }
}

TEST_CASE("pointwise inverse") {
    Field F = F2();
    CFiniteSeq Q = Qs(F);
    CHECK(*Q.pointwise_inverse() == CFiniteSeq::geometric(Scalar(Rational(1, 2))));
    CHECK(!CFiniteSeq::index().pointwise_inverse().has_value());
    CFiniteSeq alt = CFiniteSeq::geometric(Scalar(-1)) + CFiniteSeq(Scalar(3));  // 4, 2, 4, 2, ...
    auto inv = alt.pointwise_inverse();
    REQUIRE(inv.has_value());
    CHECK(alt * *inv == CFiniteSeq(1));
}

TEST_CASE("closed form printing and parsing") {
    Field Qf = Field::rational_functions();
    SeqNaming names = SeqNaming::standard(Qf);
    CFiniteSeq Q = Qs(Qf), Z = CFiniteSeq::index();
    CHECK(seq_str(Q, names) == "Q");
    CHECK(seq_str(Z, names) == "Z");
    CFiniteSeq y = Qf.q().inv() * (Z * Q);
    CHECK(parse_seq(seq_str(y, names), Qf, names) == y);
    CHECK(parse_seq("q^-1*Z*Q", Qf, names) == y);
    Field F = F2();
    SeqNaming withL = SeqNaming::standard(F);
    withL.bases.emplace_back("L", Scalar(3));
    CFiniteSeq LQ = parse_seq("L*Q", F, withL);
    CHECK(LQ == CFiniteSeq::geometric(Scalar(6)));
    CHECK(seq_str(LQ, withL) == "Q*L");
}

TEST_CASE("matrix power sequence") {
    Field Qf = Field::rational_functions();
    Scalar q = Qf.q();
    Mat<Scalar> A(3, 3);
    A(0, 0) = q;
    A(0, 1) = Scalar(1);
    A(1, 1) = q;
    A(2, 2) = Scalar(1);
    auto P = matrix_power_sequence(A);
    for (int n = -3; n <= 3; ++n) CHECK(evaluate(P, n) == A.pow(n));
    CHECK(P(0, 1) == q.inv() * (CFiniteSeq::index() * Qs(Qf)));
    auto Pinv = seq_matrix_inverse(P);
    REQUIRE(Pinv.has_value());
    CHECK(evaluate(*Pinv, 2) == A.pow(-2));
}

TEST_CASE("hat operators") {
    Field Qf = Field::rational_functions();
    Scalar q = Qf.q();
    CFiniteSeq Q = Qs(Qf);
    Series X = Series::X();
    CHECK(hat_sigma(X * Series(Q), Qf) == Series(std::vector<CFiniteSeq>{0, q.pow(2) * Q}, kExact));
    CHECK(hat_sigma(Series(1), Qf) == Series(1));
    CHECK(hat_theta(1, X, Qf) == Series(1));
    CHECK(hat_theta(2, Series(Q), Qf).is_zero());
    // Q X = q X Q
    CHECK(Series(Q) * X == q * (X * Series(Q)));
}

TEST_CASE("series algebra properties") {
    Field F = F2();
    std::mt19937 rng(0);
    const int D = 5;
    for (int it = 0; it < 8; ++it) {
        Series a = random_series(rng, F, D), b = random_series(rng, F, D);
        // hat-sigma is multiplicative
        CHECK(hat_sigma(a * b, F) == hat_sigma(a, F) * hat_sigma(b, F));
        // twisted Leibniz
        CHECK(hat_theta(1, a * b, F) == hat_sigma(a, F) * hat_theta(1, b, F) + hat_theta(1, a, F) * b);
        // theta^(i) sigma = q^i sigma theta^(i)
        for (int i = 1; i <= 3; ++i)
            CHECK(hat_theta(i, hat_sigma(a, F), F) == F.q().pow(i) * hat_sigma(hat_theta(i, a, F), F));
        // theta^(1) theta^(1) = [2]_q theta^(2)
        CHECK(hat_theta(1, hat_theta(1, a, F), F) == q_integer(2, F) * hat_theta(2, a, F));
    }
}

TEST_CASE("series inversion") {
    Field F = F2();
    Series X = Series::X();
    Series geo = series_invert(Series(1) - X, 8);
    std::vector<CFiniteSeq> ones(9, CFiniteSeq(1));
    CHECK(geo == Series(ones, 8));
    CHECK(geo.precision() == 8);
    std::mt19937 rng(0);
    for (int it = 0; it < 5; ++it) {
        Series a = random_series(rng, F, 4);
        Scalar c(static_cast<long>(1 + rng() % 3));
        a = a - Series(a.coeff(0)) + Series(CFiniteSeq::geometric(F.q(), c));
        Series inv = series_invert(a, 4);
        CHECK(a * inv == Series(1).truncated(4));
        CHECK(inv * a == Series(1).truncated(4));
    }
    CHECK_THROWS_AS(series_invert(X, 3), std::domain_error);
    CHECK(Series(1).truncated(3).str() == "1 + O(X^4)");
}
