#include "doctest.h"
#include "qsi/hopf.hpp"

#include <random>

using namespace qsi;

namespace {

Field F2() { return Field::rationals(Rational(2)); }

NCElement T(const HopfPtr& h, const std::string& text) { return parse_tensor_element(h->square(), text); }
NCElement E(const HopfPtr& h, const std::string& text) { return parse_element(h->algebra(), text); }

}  // namespace

TEST_CASE("coproduct on the quantum plane Hopf algebra") {
    auto H = builtin_Hq(Field::rational_functions());
    CHECK(H->coproduct(E(H, "t")) == T(H, "s ⊗ t + t ⊗ 1"));
    CHECK(H->coproduct(E(H, "1")) == T(H, "1 ⊗ 1"));
    CHECK(H->coproduct(E(H, "s*t")) == T(H, "s^2 ⊗ s*t + s*t ⊗ s"));
    CHECK(H->counit(E(H, "s^3*t")).is_zero());
    CHECK(H->counit(E(H, "s^-2")) == Scalar(1));
}

TEST_CASE("antipode values") {
    Field Q = Field::rational_functions();
    auto H = builtin_Hq(Q);
    CHECK(H->antipode(E(H, "t")) == E(H, "-q*t*s^-1"));
    CHECK(H->antipode(E(H, "t")) == E(H, "-s^-1*t"));
    CHECK(H->antipode(E(H, "s")) * E(H, "s") == E(H, "1"));
    auto G = builtin_GHq(Q);
    CHECK(G->antipode(E(G, "v")) == E(G, "-u^-1*v"));
}

TEST_CASE("bialgebra well-definedness") {
    Field Q = Field::rational_functions();
    CHECK(builtin_Hq(Q)->verify_bialgebra().ok);
    CHECK(builtin_GHq(Q)->verify_bialgebra().ok);
    CHECK(builtin_frakH(Q)->verify_bialgebra().ok);
    CHECK(galois_group_rank3(Q)->verify_bialgebra().ok);
    CHECK(galois_group_param(F2(), Scalar(3))->verify_bialgebra().ok);

    // mutated coproduct v -> v ⊗ v breaks v u = q^-1 u v
    auto G = builtin_GHq(Q);
    std::vector<NCElement> d, s;
    std::vector<Scalar> e;
    for (int g = 0; g < 3; ++g) {
        d.push_back(G->coproduct_of(g));
        e.push_back(G->counit_of(g));
        s.push_back(G->antipode_of(g));
    }
    d[2] = T(G, "v ⊗ v");
    auto bad = HopfPresentation::make("mutated", G->algebra(), d, e, s);
    auto rep = bad->verify_bialgebra();
    CHECK(!rep.ok);
    CHECK(!rep.failures.empty());
}

TEST_CASE("Hopf axioms on built-ins") {
    Field Q = Field::rational_functions();
    auto rHq = builtin_Hq(Q)->verify_hopf_axioms(4);
    CHECK(rHq.ok);
    CHECK(rHq.checked > 20);
    CHECK(builtin_GHq(F2())->verify_hopf_axioms(4).ok);
    CHECK(builtin_frakH(Q)->verify_hopf_axioms(3).ok);
    CHECK(galois_group_rank3(Q)->verify_hopf_axioms(3).ok);
    CHECK(galois_group_param(F2(), Scalar(3))->verify_hopf_axioms(3).ok);

    auto T3 = builtin_taft(Field::cyclotomic(3), 3);
    auto r3 = T3->verify_hopf_axioms();
    CHECK(r3.ok);
    CHECK(r3.checked == 9);
    auto T2 = builtin_taft(Field::cyclotomic(2), 2);
    CHECK(T2->algebra()->finite_basis()->size() == 4);
    CHECK(T2->verify_bialgebra().ok);
    CHECK(T2->verify_hopf_axioms().ok);
    CHECK(builtin_taft(Field::rationals(Rational(-1)), 2)->verify_hopf_axioms().ok);
    CHECK_THROWS_AS(builtin_taft(F2(), 2), std::invalid_argument);
    CHECK_THROWS_AS(builtin_taft(Field::cyclotomic(6), 3), std::invalid_argument);
}

TEST_CASE("broken antipode is detected") {
    auto G = builtin_GHq(F2());
    std::vector<NCElement> d, s;
    std::vector<Scalar> e;
    for (int g = 0; g < 3; ++g) {
        d.push_back(G->coproduct_of(g));
        e.push_back(G->counit_of(g));
        s.push_back(G->antipode_of(g));
    }
    s[2] = E(G, "-v*u^-1");
    auto bad = HopfPresentation::make("bad antipode", G->algebra(), d, e, s);
    CHECK(!bad->verify_hopf_axioms(2).ok);
}

TEST_CASE("relations of the rank-two Galois group") {
    auto G = galois_group_param(F2(), Scalar(3));
    CHECK(E(G, "h*g") == E(G, "3*g*h"));
    CHECK(E(G, "e*g") == E(G, "2*g*e"));
    CHECK(E(G, "e*h") == E(G, "h*e"));
    auto K = builtin_frakH(Field::rational_functions());
    CHECK(E(K, "e*f") == E(K, "f*e"));
    CHECK(E(K, "e*g") == E(K, "q*g*e"));
    CHECK(E(K, "f*g - g*f") == E(K, "g"));
}

TEST_CASE("v-basis coproduct agrees with multiplicative extension") {
    auto H = builtin_Hq(Field::rational_functions());
    for (int m = -3; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) CHECK(hq_coproduct_v(H, m, n) == H->coproduct(hq_v_basis(H, m, n)));
    CHECK(hq_coproduct_v(H, 0, 1) == T(H, "s ⊗ t + t ⊗ 1"));
    CHECK(hq_coproduct_v(H, 2, 0) == T(H, "s^2 ⊗ s^2"));
}

TEST_CASE("v-basis antipode closed form") {
    Field Q = Field::rational_functions();
    auto H = builtin_Hq(Q);
    for (int m = -3; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) {
            auto [c, idx] = hq_antipode_v(Q, m, n);
            CHECK(H->antipode(hq_v_basis(H, m, n)) == c * hq_v_basis(H, idx.m, idx.n));
        }
    auto [c0, i0] = hq_antipode_v(Q, 3, 0);
    CHECK(c0 == Scalar(1));
    CHECK(i0 == VIndex{-3, 0});
    // S(t_n) with t_n = t^n/[n]! is (-1)^n q^{n(n+1)/2} t_n s^-n
    for (int n = 1; n <= 3; ++n) {
        NCElement tn = hq_v_basis(H, 0, n);
        NCElement expected = ((n % 2 ? Scalar(-1) : Scalar(1)) * Q.q().pow(n * (n + 1) / 2)) *
                             (tn * NCElement::gen(H->algebra(), "s^-1").pow(n));
        CHECK(H->antipode(tn) == expected);
    }
    CHECK_THROWS_AS(hq_antipode_v(Field::cyclotomic(3), 0, 1), std::domain_error);
    CHECK_NOTHROW(hq_antipode_v(Field::cyclotomic(3), 2, 0));
}

TEST_CASE("antipode is an anti-morphism on random pairs") {
    auto H = builtin_Hq(F2());
    const PresPtr& p = H->algebra();
    std::mt19937 rng(0);
    auto rnd = [&] {
        NCElement x(p);
        for (int i = 0; i < 3; ++i) {
            Word w;
            int len = static_cast<int>(rng() % 4);
            for (int k = 0; k < len; ++k) w.push_back(Letter(rng() % 3));
            x += Scalar(static_cast<long>(rng() % 5) - 2) * NCElement::word(p, w);
        }
        return x;
    };
    for (int it = 0; it < 25; ++it) {
        NCElement a = rnd(), b = rnd();
        CHECK(H->antipode(a * b) == H->antipode(b) * H->antipode(a));
        CHECK(H->coproduct(a * b) == H->coproduct(a) * H->coproduct(b));
    }
}

TEST_CASE("Hopf structure from text") {
    auto G = builtin_GHq(F2());
    auto again = HopfPresentation::from_text("copy", G->algebra(), {{"u", "u @ u"}, {"v", "u @ v + v @ 1"}},
                                             {{"u", "1"}, {"v", "0"}}, {{"u", "u^-1"}, {"v", "-u^-1*v"}});
    CHECK(again->verify_hopf_axioms(3).ok);
    CHECK_THROWS(HopfPresentation::from_text("missing", G->algebra(), {{"u", "u @ u"}}, {{"u", "1"}},
                                             {{"u", "u^-1"}}));
}
