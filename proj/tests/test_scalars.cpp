#include "doctest.h"
#include "qsi/scalar.hpp"

#include <random>

using namespace qsi;

namespace {
Field Fq(long num, long den = 1) { return Field::rationals(Rational(num, den)); }
}

TEST_CASE("q-integers") {
    Field Q = Field::rational_functions();
    CHECK(q_integer(2, Q) == parse_scalar("1+q", Q));
    CHECK(q_integer(0, Q).is_zero());
    CHECK(q_integer(5, Fq(1)) == Scalar(5));
    CHECK(q_integer(3, Fq(2)) == Scalar(7));
}

TEST_CASE("q-factorials") {
    Field Q = Field::rational_functions();
    CHECK(q_factorial(0, Q) == Scalar(1));
    CHECK(q_factorial(3, Fq(1)) == Scalar(6));
    CHECK(q_factorial(3, Q) == parse_scalar("(1+q)*(1+q+q^2)", Q));
}

TEST_CASE("q-binomials") {
    Field Q = Field::rational_functions();
    CHECK(q_binomial(2, 3, Q).is_zero());
    CHECK(q_binomial(4, 2, Q) == parse_scalar("1+q+2q^2+q^3+q^4", Q));
    for (int m = 0; m <= 7; ++m)
        for (int n = 0; n <= m; ++n) {
            // oracle: quotient of q-factorials in the rational-function field
            Scalar direct = q_factorial(m, Q) / (q_factorial(n, Q) * q_factorial(m - n, Q));
            CHECK(q_binomial(m, n, Q) == direct);
            CHECK(q_binomial(m, n, Q) == q_binomial(m, m - n, Q));
        }
    // q = 1 gives ordinary binomials
    CHECK(q_binomial(6, 3, Fq(1)) == Scalar(20));
}

TEST_CASE("q-binomials at roots of unity stay finite") {
    Field Z3 = Field::cyclotomic(3);
    CHECK(q_factorial(3, Z3).is_zero());
    // binom(3,1) = 1 + z + z^2 = 0, binom(3,3) = 1
    CHECK(q_binomial(3, 1, Z3).is_zero());
    CHECK(q_binomial(3, 3, Z3) == Scalar(1));
    CHECK(q_binomial(4, 1, Z3) == Scalar(1));
}

TEST_CASE("specialization commutes") {
    Field Q = Field::rational_functions();
    for (long qv : {2L, 3L, -2L}) {
        Field F = Fq(qv);
        for (int m = 0; m <= 6; ++m)
            for (int n = 0; n <= m; ++n) {
                QPoly g = gaussian_binomial_poly(m, n);
                CHECK(g.eval<Scalar>(F.q()) == q_binomial(m, n, F));
                CHECK(Scalar::make(Q, g) == q_binomial(m, n, Q));
            }
    }
}

TEST_CASE("root of unity detection") {
    CHECK(is_root_of_unity(Field::cyclotomic(3)) == 3);
    CHECK(!is_root_of_unity(Fq(2)).has_value());
    CHECK(is_root_of_unity(Fq(-1)) == 2);
    CHECK(!is_root_of_unity(Field::rational_functions()).has_value());
}

TEST_CASE("cyclotomic arithmetic") {
    for (int n : {3, 4, 5, 6, 7}) {
        Field F = Field::cyclotomic(n);
        Scalar z = F.q();
        CHECK(z.pow(n) == Scalar(1));
        CHECK(cyclotomic_poly(n).eval<Scalar>(z).is_zero());
        CHECK(z * z.inv() == Scalar(1));
        Scalar a = parse_scalar("2 - zeta + 1/3*zeta^2", F);
        CHECK(a * a.inv() == Scalar(1));
    }
}

TEST_CASE("q-Pascal identity") {
    Field Q = Field::rational_functions();
    CHECK(q_pascal_identity_check(1, 1, Q));
    for (int m = 1; m <= 8; ++m)
        for (int l = 1; l <= m; ++l) CHECK(q_pascal_identity_check(m, l, Q));
    CHECK(q_pascal_identity_check(4, 2, Fq(3)));
}

TEST_CASE("literal round trip") {
    Field Q = Field::rational_functions();
    Field Z = Field::cyclotomic(5);
    for (std::string s : {"3/4", "q", "q^2 - 1/(q+1)", "-q^-3", "(q^2+1)/(2*q-3)", "0"}) {
        Scalar a = parse_scalar(s, Q);
        CHECK(parse_scalar(a.str(), Q) == a);
    }
    Scalar z = parse_scalar("zeta^7 + 1/2", Z);
    CHECK(parse_scalar(z.str(), Z) == z);
    CHECK(parse_scalar("q^2 - 1/(q+1)", Q) == parse_scalar("(q^3+q^2-1)/(q+1)", Q));
    std::mt19937 rng(0);
    for (int it = 0; it < 50; ++it) {
        Scalar x(0);
        for (int k = -2; k <= 2; ++k) x += Scalar(Rational(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3)) * Q.q().pow(k);
        CHECK(parse_scalar(x.str(), Q) == x);
    }
}

TEST_CASE("field arithmetic laws") {
    Field Q = Field::rational_functions();
    Scalar a = parse_scalar("q+2", Q), b = parse_scalar("1/(q-1)", Q), c = parse_scalar("3q^2", Q);
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a / a == Scalar(1));
    CHECK_THROWS(Scalar(0).inv());
}
