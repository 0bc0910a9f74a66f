#include "qsi/pvt.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsi {

namespace {

void add_term(Terms& t, const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

NCElement word_el(const PresPtr& p, const Word& w) { return NCElement(p, Terms{{w, Scalar(1)}}); }

// Applies op to the first tensor factor of x in a two-factor presentation.
NCElement apply_first(const NCElement& x, const PresPtr& first,
                      const std::function<NCElement(const NCElement&)>& op) {
    const PresPtr& T = x.pres();
    Terms out;
    for (auto& [w, c] : x.terms()) {
        auto parts = T->split(w);
        NCElement img = op(word_el(first, parts[0]));
        for (auto& [wa, ca] : img.terms()) add_term(out, T->combine({wa, parts[1]}), c * ca);
    }
    return NCElement(T, out);
}

// Element of the second factor if every term of x has an empty first part.
std::optional<NCElement> second_part(const NCElement& x, const PresPtr& second) {
    const PresPtr& T = x.pres();
    Terms out;
    for (auto& [w, c] : x.terms()) {
        auto parts = T->split(w);
        if (!parts[0].empty()) return std::nullopt;
        add_term(out, parts[1], c);
    }
    return NCElement(second, out);
}

std::string msg_eq(const std::string& what, const NCElement& got, const NCElement& want) {
    return what + ": got " + got.str() + ", expected " + want.str();
}

bool generic_q(const Field& f) { return !is_root_of_unity(f).has_value(); }

}  // namespace

// ---------------------------------------------------------------- QsiAlgebra

QsiPtr QsiAlgebra::make(std::string name, PresPtr alg, std::vector<NCElement> sigma, std::vector<NCElement> theta,
                        std::vector<NCElement> sigma_inverse) {
    int n = alg->num_generators();
    if (static_cast<int>(sigma.size()) != n || static_cast<int>(theta.size()) != n)
        throw std::invalid_argument("sigma and theta must be given on every generator");
    if (sigma_inverse.empty()) sigma_inverse.assign(n, NCElement());
    if (static_cast<int>(sigma_inverse.size()) != n)
        throw std::invalid_argument("sigma inverse must be given on every generator or omitted");
    auto a = std::shared_ptr<QsiAlgebra>(new QsiAlgebra());
    a->name_ = std::move(name);
    a->alg_ = alg;
    auto rehome = [&](NCElement& x) {
        if (x.pres() && x.pres() != alg) x = NCElement(alg, x.terms());
    };
    for (int g = 0; g < n; ++g) {
        int gi = alg->inverse_of(g);
        if (!sigma[g].pres()) {
            if (gi < 0 || !sigma[gi].pres()) throw std::invalid_argument("missing sigma of " + alg->name(g));
            auto inv = try_inverse(sigma[gi]);
            if (!inv) throw std::invalid_argument("sigma of " + alg->name(gi) + " is not invertible");
            sigma[g] = *inv;
        }
        rehome(sigma[g]);
    }
    for (int g = 0; g < n; ++g) {
        int gi = alg->inverse_of(g);
        if (!theta[g].pres()) {
            if (gi < 0 || !theta[gi].pres()) throw std::invalid_argument("missing theta of " + alg->name(g));
            NCElement ginv = NCElement::gen(alg, g);
            theta[g] = -(sigma[g] * NCElement(alg, theta[gi].terms()) * ginv);
        }
        rehome(theta[g]);
    }
    // sigma^-1: given, or read off when sigma(g) = c g
    for (int g = 0; g < n; ++g) {
        if (sigma_inverse[g].pres()) {
            rehome(sigma_inverse[g]);
            continue;
        }
        const auto& t = sigma[g].terms();
        Word w{Letter(g)};
        if (t.size() == 1 && t.begin()->first == w) {
            sigma_inverse[g] = t.begin()->second.inv() * NCElement::gen(alg, g);
            continue;
        }
        throw std::invalid_argument("sigma inverse of " + alg->name(g) + " must be given explicitly");
    }
    a->sigma_ = std::move(sigma);
    a->theta_ = std::move(theta);
    a->sigma_inv_ = std::move(sigma_inverse);
    return a;
}

NCElement QsiAlgebra::sigma(const NCElement& x) const { return apply_generator_map(x, sigma_, alg_); }
NCElement QsiAlgebra::sigma_inverse(const NCElement& x) const { return apply_generator_map(x, sigma_inv_, alg_); }

NCElement QsiAlgebra::theta_word(const Word& raw) const {
    // theta(w g) = sigma(w) theta(g) + theta(w) g
    NCElement s(alg_, Scalar(1)), t(alg_);
    for (Letter g : raw) {
        t = s * theta_[g] + t * NCElement::gen(alg_, g);
        s = s * sigma_[g];
    }
    return t;
}

NCElement QsiAlgebra::theta(const NCElement& x) const {
    NCElement out(alg_);
    for (auto& [w, c] : x.terms()) out += c * theta_word(w);
    return out;
}

NCElement QsiAlgebra::theta(int i, const NCElement& x) const {
    if (i < 0) throw std::invalid_argument("negative theta order");
    Scalar fact = q_factorial(i, alg_->field());
    if (fact.is_zero())
        throw Refusal("theta^(" + std::to_string(i) + ") needs [" + std::to_string(i) +
                      "]_q! != 0; q is a root of unity of small order");
    NCElement y = x;
    for (int k = 0; k < i; ++k) y = theta(y);
    return fact.inv() * y;
}

Report QsiAlgebra::verify() const {
    Report rep;
    const Scalar q = alg_->field().q();
    auto ms = check_morphism(alg_, sigma_, alg_);
    ++rep.checked;
    for (auto& v : ms.violations) rep.fail("sigma does not respect " + v);
    auto mi = check_morphism(alg_, sigma_inv_, alg_);
    ++rep.checked;
    for (auto& v : mi.violations) rep.fail("sigma^-1 does not respect " + v);
    for (int g = 0; g < alg_->num_generators(); ++g) {
        NCElement x = NCElement::gen(alg_, g);
        ++rep.checked;
        if (sigma(sigma_inverse(x)) != x || sigma_inverse(sigma(x)) != x)
            rep.fail("sigma^-1 is not inverse to sigma on " + alg_->name(g));
        ++rep.checked;
        NCElement lhs = theta(sigma(x)), rhs = q * sigma(theta(x));
        if (lhs != rhs) rep.fail(msg_eq("theta sigma = q sigma theta on " + alg_->name(g), lhs, rhs));
    }
    for (auto& r : alg_->rules()) {
        ++rep.checked;
        NCElement v = theta_word(r.lhs);
        for (auto& [w, c] : r.rhs) v -= c * theta_word(w);
        if (!v.is_zero()) rep.fail("theta does not respect " + alg_->word_str(r.lhs) + ": difference " + v.str());
    }
    return rep;
}

QsiPtr builtin_R(const Field& f, bool allow_root_of_unity) {
    if (!allow_root_of_unity && !generic_q(f))
        throw Refusal("the ring R is built for q not a root of unity (field: " + f.describe() + ")");
    PresentationSpec s;
    s.generators = {"Q", "Q^-1", "tau"};
    s.inverses = {{"Q", "Q^-1"}};
    s.rules = {{"tau*Q", "q^-1*Q*tau"}, {"tau*Q^-1", "q*Q^-1*tau"}};
    auto p = Presentation::build(f, s);
    NCElement Q = NCElement::gen(p, "Q"), tau = NCElement::gen(p, "tau"), one(p, Scalar(1)), zero(p);
    Scalar q = f.q();
    return QsiAlgebra::make("R", p, {q * Q, NCElement(), q * tau}, {zero, NCElement(), one},
                            {q.inv() * Q, NCElement(), q.inv() * tau});
}

QsiPtr laurent_difference(const Field& f) {
    PresentationSpec s;
    s.generators = {"Q", "Q^-1"};
    s.inverses = {{"Q", "Q^-1"}};
    auto p = Presentation::build(f, s);
    return qsi_from_difference("C[Q,Q^-1]", p, {f.q() * NCElement::gen(p, "Q"), NCElement()});
}

QsiPtr qsi_from_difference(std::string name, PresPtr alg, std::vector<NCElement> sigma,
                           std::vector<NCElement> sigma_inverse) {
    std::vector<NCElement> theta(alg->num_generators(), NCElement(alg));
    return QsiAlgebra::make(std::move(name), alg, std::move(sigma), std::move(theta), std::move(sigma_inverse));
}

Report check_matrix_equations(const QsiAlgebra& a, const Mat<NCElement>& Y, const Mat<Scalar>& A,
                              const Mat<Scalar>& B) {
    Report rep;
    const PresPtr& p = a.algebra();
    int n = Y.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < Y.cols(); ++j) {
            NCElement ay(p), by(p);
            for (int k = 0; k < n; ++k) {
                ay += A(i, k) * Y(k, j);
                by += B(i, k) * Y(k, j);
            }
            std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            rep.checked += 2;
            NCElement sy = a.sigma(Y(i, j)), ty = a.theta(Y(i, j));
            if (sy != ay) rep.fail(msg_eq("sigma(Y) = A Y at " + at, sy, ay));
            if (ty != by) rep.fail(msg_eq("theta(Y) = B Y at " + at, ty, by));
        }
    return rep;
}

NCElement hq_act(const QsiAlgebra& a, const NCElement& h, const NCElement& x) {
    const PresPtr& hp = h.pres();
    NCElement out(a.algebra());
    for (auto& [w, c] : h.terms()) {
        NCElement y = x;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            const std::string& n = hp->name(*it);
            if (n == "s") y = a.sigma(y);
            else if (n == "s^-1") y = a.sigma_inverse(y);
            else if (n == "t") y = a.theta(y);
            else throw std::invalid_argument("unknown H_q generator '" + n + "'");
        }
        out += c * y;
    }
    return out;
}

// ---------------------------------------------------------------- comodule algebras

ComoduleAlgebra ComoduleAlgebra::make(std::string name, PresPtr alg, HopfPtr hopf,
                                      const std::map<std::string, std::string>& rho_text) {
    ComoduleAlgebra ca;
    ca.name = std::move(name);
    ca.alg = alg;
    ca.hopf = hopf;
    ca.tens = Presentation::tensor({alg, hopf->algebra()});
    int n = alg->num_generators();
    ca.rho.assign(n, NCElement());
    for (int g = 0; g < n; ++g) {
        auto it = rho_text.find(alg->name(g));
        if (it != rho_text.end()) ca.rho[g] = parse_tensor_element(ca.tens, it->second);
    }
    for (auto& [k, v] : rho_text)
        if (!alg->index_of(k)) throw std::invalid_argument("coaction given on unknown generator '" + k + "'");
    for (int g = 0; g < n; ++g) {
        if (ca.rho[g].pres()) continue;
        int gi = alg->inverse_of(g);
        if (gi < 0 || !ca.rho[gi].pres()) throw std::invalid_argument("missing coaction of " + alg->name(g));
        auto inv = try_inverse(ca.rho[gi]);
        if (!inv) throw std::invalid_argument("coaction of " + alg->name(gi) + " is not invertible");
        ca.rho[g] = *inv;
    }
    return ca;
}

NCElement ComoduleAlgebra::coact(const NCElement& x) const { return apply_generator_map(x, rho, tens); }

Report ComoduleAlgebra::verify() const {
    Report rep;
    auto m = check_morphism(alg, rho, tens);
    ++rep.checked;
    for (auto& v : m.violations) rep.fail("rho does not respect " + v);
    const PresPtr& H = hopf->algebra();
    PresPtr t3 = Presentation::tensor({alg, H, H});
    for (int g = 0; g < alg->num_generators(); ++g) {
        NCElement left(t3), right(t3), collapse(alg);
        for (auto& [w, c] : rho[g].terms()) {
            auto parts = tens->split(w);
            NCElement a = word_el(alg, parts[0]), h = word_el(H, parts[1]);
            left += c * (embed(coact(a), t3, 0) * embed(h, t3, 2));
            right += c * (embed(a, t3, 0) * embed(hopf->coproduct(h), t3, 1));
            collapse += (c * hopf->counit(h)) * a;
        }
        rep.checked += 2;
        if (left != right) rep.fail(msg_eq("coassociativity on " + alg->name(g), left, right));
        NCElement x = NCElement::gen(alg, g);
        if (collapse != x) rep.fail(msg_eq("counit on " + alg->name(g), collapse, x));
    }
    return rep;
}

Report ComoduleAlgebra::verify_qsi_equivariance(int degree_bound) const {
    Report rep;
    if (!qsi) {
        rep.fail("no qsi structure attached");
        return rep;
    }
    auto sig = [&](const NCElement& a) { return qsi->sigma(a); };
    auto th = [&](const NCElement& a) { return qsi->theta(a); };
    for (auto& layer : alg->irreducible_words(degree_bound))
        for (auto& w : layer) {
            NCElement x = word_el(alg, w);
            NCElement rx = coact(x);
            rep.checked += 2;
            NCElement l1 = coact(qsi->sigma(x)), r1 = apply_first(rx, alg, sig);
            if (l1 != r1) rep.fail(msg_eq("rho(sigma x) for x = " + x.str(), l1, r1));
            NCElement l2 = coact(qsi->theta(x)), r2 = apply_first(rx, alg, th);
            if (l2 != r2) rep.fail(msg_eq("rho(theta x) for x = " + x.str(), l2, r2));
        }
    return rep;
}

ComoduleAlgebra coaction_R(const Field& f) {
    auto R = builtin_R(f);
    auto ca = ComoduleAlgebra::make("R", R->algebra(), builtin_GHq(f),
                                    {{"Q", "Q ⊗ u"}, {"Q^-1", "Q^-1 ⊗ u^-1"}, {"tau", "tau ⊗ 1 + Q ⊗ v"}});
    ca.qsi = R;
    return ca;
}

ComoduleAlgebra taft_torsor(const Field& f, int N, const Scalar& lambda) {
    auto hopf = builtin_taft(f, N);  // validates q
    PresentationSpec s;
    s.generators = {"s'", "t'"};
    s.params = {{"lambda", lambda}};
    std::string n = std::to_string(N);
    s.rules = {{"t'*s'", "q*s'*t'"}, {"s'^" + n, "1"}, {"t'^" + n, "lambda"}};
    auto p = Presentation::build(f, s);
    return ComoduleAlgebra::make("R_" + lambda.str() + " over Taft(" + n + ")", p, hopf,
                                 {{"s'", "s' ⊗ s"}, {"t'", "s' ⊗ t + t' ⊗ 1"}});
}

ComoduleAlgebra trivial_comodule_algebra(HopfPtr hopf) {
    return ComoduleAlgebra::make("C", Presentation::ground(hopf->algebra()->field()), hopf, {});
}

// ---------------------------------------------------------------- Galois map

Report galois_map_check(const ComoduleAlgebra& ca, int bound) {
    Report rep;
    const PresPtr& H = ca.hopf->algebra();
    auto basisA = ca.alg->finite_basis(16);
    if (basisA) {
        auto basisH = H->finite_basis(32);
        if (!basisH) {
            rep.fail("algebra is finite-dimensional but the Hopf algebra is not");
            return rep;
        }
        int da = static_cast<int>(basisA->size()), dh = static_cast<int>(basisH->size());
        rep.note("dim A = " + std::to_string(da) + ", dim H = " + std::to_string(dh));
        if (da != dh) {
            rep.fail("dimension mismatch: A ⊗ A has dimension " + std::to_string(da * da) + " but A ⊗ H has " +
                     std::to_string(da * dh));
            return rep;
        }
        std::map<Word, int, DegLex> row;
        for (auto& a : *basisA)
            for (auto& h : *basisH) row.emplace(ca.tens->combine({a, h}), static_cast<int>(row.size()));
        Mat<Scalar> m(da * dh, da * da);
        int col = 0;
        for (auto& x : *basisA) {
            NCElement x1 = embed(word_el(ca.alg, x), ca.tens, 0);
            for (auto& y : *basisA) {
                NCElement img = x1 * ca.coact(word_el(ca.alg, y));
                for (auto& [w, c] : img.terms()) m(row.at(w), col) = c;
                ++col;
            }
        }
        int rk = m.rank();
        rep.checked = da * da;
        rep.note("rank " + std::to_string(rk) + " of " + std::to_string(da * da));
        if (rk != da * da) rep.fail("Galois map is not bijective: rank " + std::to_string(rk));
        return rep;
    }
    // Graded case: A ⊗ A and A ⊗ H are free left A-modules on 1 ⊗ (normal words); the matrix of the
    // Galois map in these bases is triangular for deglex with unit diagonal.
    auto wordsA = ca.alg->irreducible_words(bound);
    auto wordsH = H->irreducible_words(bound);
    std::set<Word, DegLex> leads;
    for (auto& layer : wordsA)
        for (auto& y : layer) {
            ++rep.checked;
            NCElement img = ca.coact(word_el(ca.alg, y));
            std::map<Word, Terms, DegLex> byH;
            for (auto& [w, c] : img.terms()) {
                auto parts = ca.tens->split(w);
                add_term(byH[parts[1]], parts[0], c);
            }
            std::string ys = ca.alg->word_str(y);
            if (byH.empty()) {
                rep.fail("rho(" + ys + ") = 0");
                continue;
            }
            const Word& lead = byH.rbegin()->first;
            NCElement coeff(ca.alg, byH.rbegin()->second);
            if (lead.size() != y.size())
                rep.fail("leading H-word of rho(" + ys + ") has degree " + std::to_string(lead.size()));
            if (!try_inverse(coeff))
                rep.fail("leading coefficient " + coeff.str() + " of rho(" + ys + ") is not a unit");
            if (!leads.insert(lead).second) rep.fail("leading H-word " + H->word_str(lead) + " repeats");
        }
    size_t total = 0;
    for (auto& layer : wordsH)
        for (auto& h : layer) {
            ++total;
            if (!leads.count(h)) rep.fail("H-word " + H->word_str(h) + " is not reached");
        }
    rep.note("graded check through degree " + std::to_string(bound) + ": " + std::to_string(leads.size()) +
             " leading words of " + std::to_string(total));
    return rep;
}

// ---------------------------------------------------------------- cleft structures

LinearMapOnBasis generator_renaming(const ComoduleAlgebra& ca) {
    PresPtr A = ca.alg;
    int n = A->num_generators();
    if (ca.hopf->algebra()->num_generators() != n)
        throw std::invalid_argument("generator renaming needs equally many generators");
    return [A](const Word& w) { return NCElement::word(A, w); };
}

CleftResult cleft_check(const ComoduleAlgebra& ca, const LinearMapOnBasis& phi) {
    CleftResult res;
    Report& rep = res.report;
    const PresPtr& H = ca.hopf->algebra();
    auto bH = H->finite_basis(32);
    auto bA = ca.alg->finite_basis(32);
    if (!bH || !bA) {
        rep.fail("cleft check needs finite-dimensional H and A");
        return res;
    }
    res.basis = *bH;
    int dh = static_cast<int>(bH->size()), da = static_cast<int>(bA->size());
    std::map<Word, int, DegLex> posH, posA;
    for (int i = 0; i < dh; ++i) posH[(*bH)[i]] = i;
    for (int i = 0; i < da; ++i) posA[(*bA)[i]] = i;
    std::vector<NCElement> ph;
    for (auto& h : *bH) ph.push_back(phi(h));
    // comodule map: rho(phi(h)) = (phi ⊗ id) Delta(h)
    bool comodule = true;
    for (int i = 0; i < dh; ++i) {
        ++rep.checked;
        NCElement lhs = ca.coact(ph[i]), rhs(ca.tens);
        NCElement dh_i = ca.hopf->coproduct(word_el(H, (*bH)[i]));
        for (auto& [w, c] : dh_i.terms()) {
            auto parts = ca.hopf->square()->split(w);
            rhs += c * tensor_of(ca.tens, {ph[posH.at(parts[0])], word_el(H, parts[1])});
        }
        if (lhs != rhs) {
            comodule = false;
            rep.fail(msg_eq("phi is not a comodule map at " + H->word_str((*bH)[i]), lhs, rhs));
        }
    }
    if (!comodule) return res;
    // unknowns psi(h_j) = sum_k x_jk a_k; equations phi * psi = eps = psi * phi on every basis h
    std::vector<std::vector<NCElement>> coprod(dh);
    int nunk = dh * da;
    std::vector<std::vector<Scalar>> rows;
    std::vector<Scalar> rhs;
    for (int i = 0; i < dh; ++i) {
        NCElement d = ca.hopf->coproduct(word_el(H, (*bH)[i]));
        Scalar eps = ca.hopf->counit(word_el(H, (*bH)[i]));
        for (int side = 0; side < 2; ++side) {
            std::vector<std::vector<Scalar>> block(da, std::vector<Scalar>(nunk, Scalar(0)));
            for (auto& [w, c] : d.terms()) {
                auto parts = ca.hopf->square()->split(w);
                int h1 = posH.at(parts[0]), h2 = posH.at(parts[1]);
                for (int k = 0; k < da; ++k) {
                    NCElement ak = word_el(ca.alg, (*bA)[k]);
                    // side 0: phi(h1) psi(h2); side 1: psi(h1) phi(h2)
                    NCElement prod = side == 0 ? ph[h1] * ak : ak * ph[h2];
                    int unk = (side == 0 ? h2 : h1) * da + k;
                    for (auto& [wa, ca2] : prod.terms()) block[posA.at(wa)][unk] += c * ca2;
                }
            }
            for (int r = 0; r < da; ++r) {
                rows.push_back(std::move(block[r]));
                rhs.push_back((*bA)[r].empty() ? eps : Scalar(0));
            }
        }
    }
    Mat<Scalar> m(static_cast<int>(rows.size()), nunk);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < nunk; ++c) m(static_cast<int>(r), c) = rows[r][c];
    std::vector<Scalar> sol;
    rep.checked += static_cast<int>(rows.size());
    if (!m.solve(rhs, sol)) {
        rep.fail("phi has no convolution inverse");
        return res;
    }
    std::vector<NCElement> inv;
    for (int j = 0; j < dh; ++j) {
        NCElement x(ca.alg);
        for (int k = 0; k < da; ++k) x += sol[j * da + k] * word_el(ca.alg, (*bA)[k]);
        inv.push_back(x);
    }
    res.inverse = inv;
    return res;
}

MatrixComodule MatrixComodule::taft_standard(HopfPtr taft) {
    const PresPtr& p = taft->algebra();
    auto basis = p->finite_basis(32);
    int N = 0;
    if (basis) {
        for (int k = 1; k <= 16 && !N; ++k)
            if (NCElement::gen(p, "s").pow(k) == NCElement(p, Scalar(1))) N = k;
    }
    if (N < 2) throw std::invalid_argument("not a Taft algebra");
    MatrixComodule m;
    m.hopf = taft;
    NCElement sn = NCElement::gen(p, "s").pow(N - 1);
    m.C = Mat<NCElement>(2, 2);
    m.C(0, 0) = sn;
    m.C(0, 1) = NCElement(p);
    m.C(1, 0) = sn * NCElement::gen(p, "t");
    m.C(1, 1) = NCElement(p, Scalar(1));
    return m;
}

MatrixComodule MatrixComodule::trivial(HopfPtr hopf) {
    MatrixComodule m;
    m.hopf = hopf;
    m.C = Mat<NCElement>(1, 1);
    m.C(0, 0) = NCElement(hopf->algebra(), Scalar(1));
    return m;
}

Report MatrixComodule::verify() const {
    Report rep;
    int n = C.rows();
    const PresPtr& sq = hopf->square();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rep.checked += 2;
            NCElement d = hopf->coproduct(C(i, j)), want(sq);
            for (int k = 0; k < n; ++k) want += tensor_of(sq, {C(i, k), C(k, j)});
            std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (d != want) rep.fail(msg_eq("Delta(C" + at + ")", d, want));
            if (hopf->counit(C(i, j)) != Scalar(i == j ? 1 : 0)) rep.fail("counit of C" + at);
        }
    return rep;
}

Report cleft_trivialize(const MatrixComodule& n, const ComoduleAlgebra& ca, const LinearMapOnBasis& phi,
                        const CleftResult& cleft) {
    Report rep;
    if (!cleft.report.ok || !cleft.inverse) {
        rep.fail("cleft check did not pass");
        return rep;
    }
    std::map<Word, int, DegLex> posH;
    for (size_t i = 0; i < cleft.basis.size(); ++i) posH[cleft.basis[i]] = static_cast<int>(i);
    auto lin = [&](const NCElement& h, bool inverse) {
        NCElement out(ca.alg);
        for (auto& [w, c] : h.terms()) out += c * (inverse ? (*cleft.inverse)[posH.at(w)] : phi(w));
        return out;
    };
    int d = n.C.rows();
    Mat<NCElement> F(d, d), G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            F(i, j) = lin(n.C(i, j), false);
            G(i, j) = lin(n.C(i, j), true);
        }
    // F G = G F = 1 as matrices over A
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            NCElement fg(ca.alg), gf(ca.alg);
            for (int k = 0; k < d; ++k) {
                fg += F(i, k) * G(k, j);
                gf += G(i, k) * F(k, j);
            }
            NCElement want(ca.alg, Scalar(i == j ? 1 : 0));
            rep.checked += 2;
            std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (fg != want) rep.fail(msg_eq("map then inverse at " + at, fg, want));
            if (gf != want) rep.fail(msg_eq("inverse then map at " + at, gf, want));
        }
    // colinearity: n_j ⊗ x with diagonal coaction onto N_trivial ⊗ A
    auto bA = ca.alg->finite_basis(32);
    if (!bA) {
        rep.fail("algebra is not finite-dimensional");
        return rep;
    }
    for (int j = 0; j < d; ++j)
        for (auto& xw : *bA) {
            NCElement x = word_el(ca.alg, xw);
            NCElement rx = ca.coact(x);
            for (int i = 0; i < d; ++i) {
                ++rep.checked;
                NCElement lhs = ca.coact(F(i, j) * x), rhs(ca.tens);
                for (int k = 0; k < d; ++k) rhs += tensor_of(ca.tens, {F(i, k), n.C(k, j)}) * rx;
                if (lhs != rhs)
                    rep.fail(msg_eq("colinearity at n_" + std::to_string(j) + " ⊗ " + x.str(), lhs, rhs));
            }
        }
    return rep;
}

int trace_form_rank(const PresPtr& alg) {
    auto basis = alg->finite_basis(32);
    if (!basis) throw std::invalid_argument("trace form needs a finite-dimensional algebra");
    int n = static_cast<int>(basis->size());
    std::map<Word, Scalar, DegLex> tr;
    for (int i = 0; i < n; ++i) {
        Scalar t(0);
        for (int k = 0; k < n; ++k) t += NCElement::word(alg, (*basis)[i] + (*basis)[k]).coeff((*basis)[k]);
        tr[(*basis)[i]] = t;
    }
    Mat<Scalar> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            NCElement p = NCElement::word(alg, (*basis)[i] + (*basis)[j]);
            Scalar v(0);
            for (auto& [w, c] : p.terms()) v += c * tr.at(w);
            m(i, j) = v;
        }
    return m.rank();
}

// ---------------------------------------------------------------- simplicity

std::string SimplicityMove::str() const {
    switch (kind) {
        case Theta: return "theta^(" + std::to_string(degree) + ")";
        case LeftMultiply: return "left-multiply by " + factor.str();
        case Eliminate: return "eliminate Q^" + std::to_string(degree);
        case Scale: return "scale by " + scalar.str();
    }
    return "?";
}

namespace {

int tau_degree(const PresPtr& p, const NCElement& x) {
    int tau = *p->index_of("tau"), top = 0;
    for (auto& [w, c] : x.terms()) top = std::max(top, static_cast<int>(std::count(w.begin(), w.end(), tau)));
    return top;
}

int q_degree(const PresPtr& p, const Word& w) {
    int Q = *p->index_of("Q"), Qi = *p->index_of("Q^-1"), d = 0;
    for (Letter g : w) d += g == Q ? 1 : (g == Qi ? -1 : 0);
    return d;
}

NCElement apply_move(const QsiAlgebra& R, const SimplicityMove& mv, const NCElement& h) {
    const Scalar q = R.algebra()->field().q();
    switch (mv.kind) {
        case SimplicityMove::Theta: return R.theta(mv.degree, h);
        case SimplicityMove::LeftMultiply: return mv.factor * h;
        case SimplicityMove::Eliminate: {
            Scalar qd = q.pow(mv.degree);
            return (qd - Scalar(1)).inv() * (qd * h - R.sigma(h));
        }
        case SimplicityMove::Scale: return mv.scalar * h;
    }
    return h;
}

}  // namespace

SimplicityCertificate simplicity_reduce(const QsiAlgebra& R, const NCElement& f) {
    const PresPtr& p = R.algebra();
    if (!generic_q(p->field())) throw Refusal("simplicity reduction needs q not a root of unity");
    if (f.is_zero()) throw std::invalid_argument("simplicity reduction of the zero element");
    if (!p->index_of("tau") || !p->index_of("Q") || !p->index_of("Q^-1"))
        throw std::invalid_argument("simplicity reduction works in the ring R");
    SimplicityCertificate cert;
    NCElement h = NCElement(p, f.terms());
    auto push = [&](SimplicityMove mv) {
        h = apply_move(R, mv, h);
        cert.moves.push_back(mv);
        cert.trail.push_back(h);
    };
    int n = tau_degree(p, h);
    if (n > 0) push({SimplicityMove::Theta, n, NCElement(), Scalar(0)});
    // h is now a nonzero Laurent polynomial in Q; remove all but one Q-degree
    while (h.terms().size() > 1) {
        std::vector<int> degs;
        for (auto& [w, c] : h.terms()) degs.push_back(q_degree(p, w));
        // keep degree 0 when present, otherwise the lowest
        int keep = std::find(degs.begin(), degs.end(), 0) != degs.end() ? 0 : *std::min_element(degs.begin(), degs.end());
        int drop = keep;
        for (int d : degs)
            if (d != keep) {
                drop = d;
                break;
            }
        push({SimplicityMove::Eliminate, drop, NCElement(), Scalar(0)});
    }
    const auto& [w, c] = *h.terms().begin();
    int k = q_degree(p, w);
    if (k != 0) push({SimplicityMove::LeftMultiply, 0, NCElement::gen(p, "Q").pow(-k), Scalar(0)});
    Scalar lead = h.terms().begin()->second;
    if (lead != Scalar(1)) push({SimplicityMove::Scale, 0, NCElement(), lead.inv()});
    return cert;
}

bool replay_certificate(const QsiAlgebra& R, const NCElement& f, const SimplicityCertificate& c) {
    NCElement h = NCElement(R.algebra(), f.terms());
    for (size_t i = 0; i < c.moves.size(); ++i) {
        h = apply_move(R, c.moves[i], h);
        if (i < c.trail.size() && c.trail[i] != h) return false;
    }
    return h == NCElement(R.algebra(), Scalar(1));
}

// ---------------------------------------------------------------- constants

std::string Window::str() const {
    std::ostringstream os;
    os << "length <= " << max_length;
    for (auto& [g, k] : max_count) os << ", #" << g << " <= " << k;
    return os.str();
}

std::vector<Word> window_words(const PresPtr& alg, const Window& w) {
    std::vector<int> cap(alg->num_generators(), w.max_length);
    for (auto& [name, k] : w.max_count) {
        auto g = alg->index_of(name);
        if (!g) throw std::invalid_argument("window names unknown generator '" + name + "'");
        cap[*g] = k;
    }
    std::vector<Word> out;
    for (auto& layer : alg->irreducible_words(w.max_length, 20000))
        for (auto& word : layer) {
            std::vector<int> cnt(cap.size(), 0);
            bool ok = true;
            for (Letter g : word)
                if (++cnt[g] > cap[g]) ok = false;
            if (ok) out.push_back(word);
        }
    return out;
}

std::vector<NCElement> constants(const QsiAlgebra& a, const Window& w) {
    const PresPtr& p = a.algebra();
    auto words = window_words(p, w);
    std::map<Word, int, DegLex> rows;
    std::vector<NCElement> ds, ts;
    for (auto& x : words) {
        NCElement e = word_el(p, x);
        ds.push_back(a.sigma(e) - e);
        ts.push_back(a.theta(e));
        for (auto& [u, c] : ds.back().terms()) rows.emplace(u, 0);
        for (auto& [u, c] : ts.back().terms()) rows.emplace(u, 0);
    }
    int r = 0;
    for (auto& [u, i] : rows) i = r++;
    int nw = static_cast<int>(words.size());
    Mat<Scalar> m(std::max(2 * r, 1), nw);
    for (int j = 0; j < nw; ++j) {
        for (auto& [u, c] : ds[j].terms()) m(rows.at(u), j) = c;
        for (auto& [u, c] : ts[j].terms()) m(r + rows.at(u), j) = c;
    }
    std::vector<NCElement> out;
    for (auto& v : m.kernel()) {
        NCElement x(p);
        for (int j = 0; j < nw; ++j) x += v[j] * word_el(p, words[j]);
        out.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------- universal coaction

RoundTrip universal_coaction_roundtrip(const Field& f, const PresPtr& S, const NCElement& u, const NCElement& v,
                                       int degree_bound) {
    RoundTrip rt;
    Report& rep = rt.report;
    auto R = builtin_R(f, true);
    const PresPtr& A = R->algebra();
    const Scalar q = f.q();
    NCElement uu(S, u.terms()), vv(S, v.terms());
    auto uinv = try_inverse(uu);
    ++rep.checked;
    if (!uinv) rep.fail("u' is not invertible");
    ++rep.checked;
    if (uu * vv != q * (vv * uu)) rep.fail(msg_eq("u'v' = q v'u'", uu * vv, q * (vv * uu)));
    if (!rep.ok) return rt;
    PresPtr T = Presentation::tensor({A, S});
    NCElement Q = NCElement::gen(A, "Q"), Qi = NCElement::gen(A, "Q^-1"), tau = NCElement::gen(A, "tau");
    NCElement one(A, Scalar(1));
    rt.psi = {tensor_of(T, {Q, uu}), tensor_of(T, {Qi, *uinv}), tensor_of(T, {Q, vv}) + tensor_of(T, {tau, NCElement(S, Scalar(1))})};
    auto m = check_morphism(A, rt.psi, T);
    ++rep.checked;
    for (auto& x : m.violations) rep.fail("psi does not respect " + x);
    auto psi = [&](const NCElement& x) { return apply_generator_map(x, rt.psi, T); };
    auto sig = [&](const NCElement& a) { return R->sigma(a); };
    auto th = [&](const NCElement& a) { return R->theta(a); };
    for (auto& layer : A->irreducible_words(degree_bound))
        for (auto& w : layer) {
            NCElement x = word_el(A, w);
            NCElement px = psi(x);
            rep.checked += 2;
            if (psi(R->sigma(x)) != apply_first(px, A, sig)) rep.fail("psi does not commute with sigma on " + x.str());
            if (psi(R->theta(x)) != apply_first(px, A, th)) rep.fail("psi does not commute with theta on " + x.str());
        }
    // backward: H' = Y^-1 psi(Y) with Y = [[Q, tau], [0, 1]]
    NCElement Qi1 = embed(Qi, T, 0), tau1 = embed(tau, T, 0);
    NCElement h11 = Qi1 * rt.psi[0], h12 = Qi1 * rt.psi[2] - Qi1 * tau1;
    auto u2 = second_part(h11, S), v2 = second_part(h12, S);
    rep.checked += 2;
    if (!u2) rep.fail("entry (1,1) of Y^-1 psi(Y) is not constant: " + h11.str());
    if (!v2) rep.fail("entry (1,2) of Y^-1 psi(Y) is not constant: " + h12.str());
    if (!u2 || !v2) return rt;
    rt.u = *u2;
    rt.v = *v2;
    rep.checked += 2;
    if (rt.u * rt.v != q * (rt.v * rt.u)) rep.fail("recovered pair violates u'v' = q v'u'");
    if (rt.u != uu || rt.v != vv) rep.fail("round trip changed the pair: (" + rt.u.str() + ", " + rt.v.str() + ")");
    return rt;
}

// ---------------------------------------------------------------- normalization

Normalization normalize_fundamental_system(const QsiAlgebra& A, const NCElement& a0, const NCElement& b0,
                                           const NCElement& c0, const NCElement& d0) {
    Normalization out;
    Report& rep = out.report;
    const PresPtr& p = A.algebra();
    const Scalar q = p->field().q();
    if (q == Scalar(1)) throw std::invalid_argument("normalization divides by 1 - q; q = 1 is not allowed");
    NCElement a(p, a0.terms()), b(p, b0.terms()), c(p, c0.terms()), d(p, d0.terms());
    auto expect = [&](const std::string& what, const NCElement& got, const NCElement& want) {
        ++rep.checked;
        if (got != want) rep.fail(msg_eq(what, got, want));
    };
    NCElement zero(p);
    expect("sigma(a) = q a", A.sigma(a), q * a);
    expect("theta(a) = c", A.theta(a), c);
    expect("sigma(c) = c", A.sigma(c), c);
    expect("theta(c) = 0", A.theta(c), zero);
    expect("sigma(b) = q b", A.sigma(b), q * b);
    expect("theta(b) = d", A.theta(b), d);
    expect("sigma(d) = d", A.sigma(d), d);
    expect("theta(d) = 0", A.theta(d), zero);
    if (!c.is_scalar() || !d.is_scalar()) rep.fail("c and d must be scalars (constants are C)");
    if (!rep.ok) return out;
    Scalar cs = c.scalar_part(), ds = d.scalar_part();
    if (cs.is_zero() && ds.is_zero()) {
        rep.fail("(c, d) = (0, 0): the matrix is not invertible");
        return out;
    }
    // column operations to c = 0, d = 1
    if (!ds.is_zero()) {
        a = a - (cs / ds) * b;
        b = ds.inv() * b;
    } else {
        NCElement na = b;
        b = cs.inv() * a;
        a = na;
    }
    rep.note("after column operations: a = " + a.str() + ", b = " + b.str());
    auto ainv = try_inverse(a);
    ++rep.checked;
    if (!ainv) {
        rep.fail("a = " + a.str() + " is not invertible");
        return out;
    }
    NCElement fe = q * (*ainv * b) - b * *ainv;
    ++rep.checked;
    if (!fe.is_scalar()) {
        rep.fail("f = q a^-1 b - b a^-1 = " + fe.str() + " is not constant");
        return out;
    }
    out.f = fe.scalar_part();
    out.g = out.f / (Scalar(1) - q);
    out.a = a;
    out.b = b + out.g * a;
    // Q -> a, tau -> b' is a qsi morphism R -> A, bijective on the checked window
    auto R = builtin_R(p->field(), true);
    const PresPtr& r = R->algebra();
    std::vector<NCElement> img = {out.a, *ainv, out.b};
    auto mr = check_morphism(r, img, p);
    ++rep.checked;
    for (auto& v : mr.violations) rep.fail("Q -> a, tau -> b' does not respect " + v);
    for (int g = 0; g < r->num_generators(); ++g) {
        NCElement x = NCElement::gen(r, g);
        expect("image commutes with sigma on " + r->name(g), A.sigma(img[g]), apply_generator_map(R->sigma(x), img, p));
        expect("image commutes with theta on " + r->name(g), A.theta(img[g]), apply_generator_map(R->theta(x), img, p));
    }
    // injective on normal words of degree <= 3 and every generator of A in the image
    std::vector<NCElement> images;
    std::map<Word, int, DegLex> rows;
    for (auto& layer : r->irreducible_words(3))
        for (auto& w : layer) {
            images.push_back(apply_generator_map(word_el(r, w), img, p));
            for (auto& [u, c2] : images.back().terms()) rows.emplace(u, 0);
        }
    for (int g = 0; g < p->num_generators(); ++g) rows.emplace(Word{Letter(g)}, 0);
    int nr = 0;
    for (auto& [u, i] : rows) i = nr++;
    Mat<Scalar> m(nr, static_cast<int>(images.size()));
    for (size_t j = 0; j < images.size(); ++j)
        for (auto& [u, c2] : images[j].terms()) m(rows.at(u), static_cast<int>(j)) = c2;
    ++rep.checked;
    int rk = m.rank();
    if (rk != static_cast<int>(images.size())) rep.fail("images of normal words of degree <= 3 are dependent");
    for (int g = 0; g < p->num_generators(); ++g) {
        std::vector<Scalar> rhs(nr, Scalar(0)), sol;
        rhs[rows.at(Word{Letter(g)})] = Scalar(1);
        ++rep.checked;
        if (!m.solve(rhs, sol)) rep.fail("generator " + p->name(g) + " is not in the image through degree 3");
    }
    return out;
}

NCElement random_R_element(const PresPtr& p, std::mt19937& rng, int max_degree) {
    NCElement x(p);
    NCElement Q = NCElement::gen(p, "Q"), tau = NCElement::gen(p, "tau");
    while (x.is_zero()) {
        int terms = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < terms; ++k) {
            int m = static_cast<int>(rng() % (2 * max_degree + 1)) - max_degree;
            int room = max_degree - std::abs(m);
            int n = static_cast<int>(rng() % (room + 1));
            int c = static_cast<int>(rng() % 7) - 3;
            x += Scalar(c) * (Q.pow(m) * tau.pow(n));
        }
    }
    return x;
}

}  // namespace qsi
