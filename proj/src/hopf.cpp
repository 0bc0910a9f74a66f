#include "qsi/hopf.hpp"

#include <functional>

namespace qsi {

namespace {

NCElement as_element(const PresPtr& p, const Word& w) {
    Terms t;
    t.emplace(w, Scalar(1));
    return NCElement(p, t);
}

}  // namespace

HopfPtr HopfPresentation::make(std::string name, PresPtr algebra, std::vector<NCElement> coproduct,
                               std::vector<Scalar> counit, std::vector<NCElement> antipode) {
    int n = algebra->num_generators();
    if (static_cast<int>(coproduct.size()) != n || static_cast<int>(counit.size()) != n ||
        static_cast<int>(antipode.size()) != n)
        throw std::invalid_argument("Hopf structure must be given on every generator");
    auto h = std::shared_ptr<HopfPresentation>(new HopfPresentation());
    h->name_ = std::move(name);
    h->alg_ = algebra;
    h->alg2_ = Presentation::tensor({algebra, algebra});
    h->alg3_ = Presentation::tensor({algebra, algebra, algebra});
    for (int g = 0; g < n; ++g) {
        int gi = algebra->inverse_of(g);
        if (!coproduct[g].pres()) {
            if (gi < 0 || !coproduct[gi].pres())
                throw std::invalid_argument("missing coproduct of " + algebra->name(g));
            auto inv = try_inverse(coproduct[gi]);
            if (!inv) throw std::invalid_argument("coproduct of " + algebra->name(gi) + " is not invertible");
            coproduct[g] = *inv;
        }
        if (!antipode[g].pres()) {
            if (gi < 0 || !antipode[gi].pres()) throw std::invalid_argument("missing antipode of " + algebra->name(g));
            auto inv = try_inverse(antipode[gi]);
            if (!inv) throw std::invalid_argument("antipode of " + algebra->name(gi) + " is not invertible");
            antipode[g] = *inv;
        }
        if (coproduct[g].pres() != h->alg2_) {
            // re-home onto our tensor square (same factors, different object)
            coproduct[g] = NCElement(h->alg2_, coproduct[g].terms());
        }
        if (antipode[g].pres() != algebra) antipode[g] = NCElement(algebra, antipode[g].terms());
    }
    h->delta_ = std::move(coproduct);
    h->eps_ = std::move(counit);
    h->S_ = std::move(antipode);
    return h;
}

HopfPtr HopfPresentation::from_text(std::string name, PresPtr algebra,
                                    const std::map<std::string, std::string>& coproduct,
                                    const std::map<std::string, std::string>& counit,
                                    const std::map<std::string, std::string>& antipode) {
    int n = algebra->num_generators();
    auto sq = Presentation::tensor({algebra, algebra});
    std::vector<NCElement> d(n), s(n);
    std::vector<Scalar> e(n);
    std::vector<bool> have_e(n, false);
    for (auto& [g, text] : coproduct) {
        auto i = algebra->index_of(g);
        if (!i) throw std::invalid_argument("coproduct given for unknown generator '" + g + "'");
        d[*i] = parse_tensor_element(sq, text);
    }
    for (auto& [g, text] : antipode) {
        auto i = algebra->index_of(g);
        if (!i) throw std::invalid_argument("antipode given for unknown generator '" + g + "'");
        s[*i] = parse_element(algebra, text);
    }
    for (auto& [g, text] : counit) {
        auto i = algebra->index_of(g);
        if (!i) throw std::invalid_argument("counit given for unknown generator '" + g + "'");
        e[*i] = parse_scalar(text, algebra->field(), algebra->params());
        have_e[*i] = true;
    }
    for (int g = 0; g < n; ++g) {
        if (have_e[g]) continue;
        int gi = algebra->inverse_of(g);
        if (gi < 0 || !have_e[gi] || e[gi].is_zero())
            throw std::invalid_argument("missing counit of " + algebra->name(g));
        e[g] = e[gi].inv();
    }
    return make(std::move(name), algebra, std::move(d), std::move(e), std::move(s));
}

// ---------------------------------------------------------------- extensions

NCElement HopfPresentation::coproduct_word(const Word& w) const {
    if (w.empty()) return NCElement(alg2_, Scalar(1));
    if (w.size() == 1) return delta_[w[0]];
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = delta_cache_.find(w);
        if (it != delta_cache_.end()) return it->second;
    }
    NCElement v = coproduct_word(w.substr(0, w.size() - 1)) * delta_[w.back()];
    std::lock_guard<std::mutex> lock(mu_);
    return delta_cache_.emplace(w, v).first->second;
}

NCElement HopfPresentation::antipode_word(const Word& w) const {
    if (w.empty()) return NCElement(alg_, Scalar(1));
    if (w.size() == 1) return S_[w[0]];
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = s_cache_.find(w);
        if (it != s_cache_.end()) return it->second;
    }
    NCElement v = S_[w.back()] * antipode_word(w.substr(0, w.size() - 1));
    std::lock_guard<std::mutex> lock(mu_);
    return s_cache_.emplace(w, v).first->second;
}

Scalar HopfPresentation::counit_word(const Word& w) const {
    Scalar c(1);
    for (Letter g : w) c *= eps_[g];
    return c;
}

NCElement HopfPresentation::coproduct(const NCElement& x) const {
    NCElement r(alg2_);
    for (auto& [w, c] : x.terms()) r += c * coproduct_word(w);
    return r;
}

NCElement HopfPresentation::antipode(const NCElement& x) const {
    NCElement r(alg_);
    for (auto& [w, c] : x.terms()) r += c * antipode_word(w);
    return r;
}

Scalar HopfPresentation::counit(const NCElement& x) const {
    Scalar r(0);
    for (auto& [w, c] : x.terms()) r += c * counit_word(w);
    return r;
}

// ---------------------------------------------------------------- verification

HopfReport HopfPresentation::verify_bialgebra() const {
    HopfReport rep;
    auto dm = check_morphism(alg_, delta_, alg2_);
    for (auto& v : dm.violations) rep.fail("coproduct: " + v);
    auto ground = Presentation::ground(alg_->field());
    std::vector<NCElement> eimg;
    for (auto& e : eps_) eimg.emplace_back(ground, e);
    auto em = check_morphism(alg_, eimg, ground);
    for (auto& v : em.violations) rep.fail("counit: " + v);
    auto sm = check_morphism(alg_, S_, alg_, true);
    for (auto& v : sm.violations) rep.fail("antipode: " + v);
    rep.checked = static_cast<int>(alg_->rules().size());
    return rep;
}

std::vector<Word> HopfPresentation::test_monomials(int degree_bound) const {
    std::vector<Word> out;
    if (auto basis = alg_->finite_basis(std::max(degree_bound, 16))) return *basis;
    for (auto& level : alg_->irreducible_words(degree_bound))
        for (auto& w : level) out.push_back(w);
    return out;
}

HopfReport HopfPresentation::verify_hopf_axioms(int degree_bound) const {
    HopfReport rep;
    NCElement one(alg_, Scalar(1));
    for (const Word& w : test_monomials(degree_bound)) {
        ++rep.checked;
        NCElement x = as_element(alg_, w);
        NCElement d = coproduct_word(w);
        NCElement left(alg3_), right(alg3_), cl(alg_), cr(alg_), sl(alg_), sr(alg_);
        for (auto& [tw, c] : d.terms()) {
            auto parts = alg2_->split(tw);
            const Word& a = parts[0];
            const Word& b = parts[1];
            left += c * (embed(coproduct_word(a), alg3_, 0) * embed(as_element(alg_, b), alg3_, 2));
            right += c * (embed(as_element(alg_, a), alg3_, 0) * embed(coproduct_word(b), alg3_, 1));
            cl += (c * counit_word(a)) * as_element(alg_, b);
            cr += (c * counit_word(b)) * as_element(alg_, a);
            sl += c * (antipode_word(a) * as_element(alg_, b));
            sr += c * (as_element(alg_, a) * antipode_word(b));
        }
        std::string ws = alg_->word_str(w);
        if (left != right) rep.fail("coassociativity fails on " + ws);
        if (cl != x || cr != x) rep.fail("counit law fails on " + ws);
        NCElement unit = counit_word(w) * one;
        if (sl != unit) rep.fail("m(S⊗id)Δ fails on " + ws + ": " + sl.str());
        if (sr != unit) rep.fail("m(id⊗S)Δ fails on " + ws + ": " + sr.str());
    }
    return rep;
}

// ---------------------------------------------------------------- built-ins

namespace {

HopfPtr assemble(const std::string& name, const PresPtr& p, const std::map<std::string, std::string>& delta,
                 const std::map<std::string, std::string>& eps, const std::map<std::string, std::string>& S) {
    return HopfPresentation::from_text(name, p, delta, eps, S);
}

}  // namespace

HopfPtr builtin_Hq(const Field& f) {
    PresentationSpec s;
    s.generators = {"s", "s^-1", "t"};
    s.inverses = {{"s", "s^-1"}};
    s.rules = {{"t*s", "q*s*t"}, {"t*s^-1", "q^-1*s^-1*t"}};
    auto p = Presentation::build(f, s);
    return assemble("Hq", p, {{"s", "s ⊗ s"}, {"t", "s ⊗ t + t ⊗ 1"}}, {{"s", "1"}, {"t", "0"}},
                    {{"s", "s^-1"}, {"t", "-q*t*s^-1"}});
}

HopfPtr builtin_GHq(const Field& f) {
    PresentationSpec s;
    s.generators = {"u", "u^-1", "v"};
    s.inverses = {{"u", "u^-1"}};
    s.rules = {{"v*u", "q^-1*u*v"}, {"v*u^-1", "q*u^-1*v"}};
    auto p = Presentation::build(f, s);
    return assemble("GHq", p, {{"u", "u ⊗ u"}, {"v", "u ⊗ v + v ⊗ 1"}}, {{"u", "1"}, {"v", "0"}},
                    {{"u", "u^-1"}, {"v", "-u^-1*v"}});
}

HopfPtr builtin_taft(const Field& f, int n) {
    if (n < 2) throw std::invalid_argument("Taft algebra needs N >= 2");
    auto ord = is_root_of_unity(f);
    if (!ord || *ord != n)
        throw std::invalid_argument("Taft algebra of order " + std::to_string(n) +
                                    " needs q a primitive root of unity of that order (field: " + f.describe() + ")");
    PresentationSpec s;
    s.generators = {"s", "t"};
    std::string N = std::to_string(n), N1 = std::to_string(n - 1);
    s.rules = {{"t*s", "q*s*t"}, {"s^" + N, "1"}, {"t^" + N, "0"}};
    auto p = Presentation::build(f, s);
    return assemble("Taft(" + N + ")", p, {{"s", "s ⊗ s"}, {"t", "s ⊗ t + t ⊗ 1"}}, {{"s", "1"}, {"t", "0"}},
                    {{"s", "s^" + N1}, {"t", "-s^" + N1 + "*t"}});
}

namespace {

PresPtr efg_algebra(const Field& f) {
    PresentationSpec s;
    s.generators = {"e", "e^-1", "f", "g"};
    s.inverses = {{"e", "e^-1"}};
    s.rules = {{"f*e", "e*f"}, {"g*e", "q^-1*e*g"}, {"f*e^-1", "e^-1*f"}, {"g*e^-1", "q*e^-1*g"}, {"g*f", "f*g - g"}};
    return Presentation::build(f, s);
}

}  // namespace

HopfPtr builtin_frakH(const Field& f) {
    auto p = efg_algebra(f);
    return assemble("frakH", p, {{"e", "e ⊗ e"}, {"f", "f ⊗ 1 + 1 ⊗ f"}, {"g", "1 ⊗ g + g ⊗ e"}},
                    {{"e", "1"}, {"f", "0"}, {"g", "0"}}, {{"e", "e^-1"}, {"f", "-f"}, {"g", "-g*e^-1"}});
}

HopfPtr galois_group_rank3(const Field& f) {
    auto p = efg_algebra(f);
    return assemble("galois_rank3", p, {{"e", "e ⊗ e"}, {"f", "f ⊗ 1 + 1 ⊗ f"}, {"g", "g ⊗ 1 + e ⊗ g"}},
                    {{"e", "1"}, {"f", "0"}, {"g", "0"}}, {{"e", "e^-1"}, {"f", "-f"}, {"g", "-e^-1*g"}});
}

HopfPtr galois_group_param(const Field& f, const Scalar& l) {
    if (l.is_zero()) throw std::invalid_argument("parameter l must be nonzero");
    PresentationSpec s;
    s.generators = {"e", "e^-1", "h", "h^-1", "g"};
    s.inverses = {{"e", "e^-1"}, {"h", "h^-1"}};
    s.params = {{"l", l}};
    s.rules = {{"h*e", "e*h"},       {"h*e^-1", "e^-1*h"},   {"h^-1*e", "e*h^-1"}, {"h^-1*e^-1", "e^-1*h^-1"},
               {"g*e", "q^-1*e*g"}, {"g*e^-1", "q*e^-1*g"}, {"g*h", "l^-1*h*g"},  {"g*h^-1", "l*h^-1*g"}};
    auto p = Presentation::build(f, s);
    return assemble("galois_param", p, {{"e", "e ⊗ e"}, {"h", "h ⊗ h"}, {"g", "g ⊗ 1 + e ⊗ g"}},
                    {{"e", "1"}, {"h", "1"}, {"g", "0"}}, {{"e", "e^-1"}, {"h", "h^-1"}, {"g", "-e^-1*g"}});
}

HopfPtr builtin_hopf(const std::string& name, const Field& f, const Scalar& l) {
    if (name == "Hq") return builtin_Hq(f);
    if (name == "GHq") return builtin_GHq(f);
    if (name == "frakH") return builtin_frakH(f);
    if (name == "galois_rank3") return galois_group_rank3(f);
    if (name == "galois_param") return galois_group_param(f, l);
    if (name.rfind("taft", 0) == 0 || name.rfind("Taft", 0) == 0) {
        std::string digits;
        for (char c : name)
            if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
        if (digits.empty()) throw std::invalid_argument("Taft algebra name needs an order, e.g. taft3");
        return builtin_taft(f, std::stoi(digits));
    }
    throw std::invalid_argument("unknown built-in Hopf algebra '" + name + "'");
}

// ---------------------------------------------------------------- v-basis

namespace {

void require_generic(const Field& f, int n) {
    if (n > 0 && is_root_of_unity(f))
        throw std::domain_error("v-basis with n > 0 needs q not a root of unity ([n]_q! vanishes)");
}

}  // namespace

NCElement hq_v_basis(const HopfPtr& hq, int m, int n) {
    const PresPtr& p = hq->algebra();
    require_generic(p->field(), n);
    NCElement s = NCElement::gen(p, "s"), t = NCElement::gen(p, "t");
    return q_factorial(n, p->field()).inv() * (s.pow(m) * t.pow(n));
}

NCElement hq_coproduct_v(const HopfPtr& hq, int m, int n) {
    const PresPtr& sq = hq->square();
    NCElement r(sq);
    for (int j = 0; j <= n; ++j) {
        int i = n - j;
        r += tensor_of(sq, {hq_v_basis(hq, m + j, i), hq_v_basis(hq, m, j)});
    }
    return r;
}

std::pair<Scalar, VIndex> hq_antipode_v(const Field& f, int m, int n) {
    require_generic(f, n);
    long e = static_cast<long>(n) * (n + 1) / 2 - static_cast<long>(n) * (m + n);
    Scalar c = f.q().pow(e);
    if (n % 2) c = -c;
    return {c, VIndex{-(m + n), n}};
}

}  // namespace qsi
