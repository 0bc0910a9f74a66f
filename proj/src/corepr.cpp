#include "qsi/corepr.hpp"

#include <sstream>

namespace qsi {

namespace {

void require_generic_q(const Field& f, const char* what) {
    if (auto n = is_root_of_unity(f))
        throw Refusal(std::string(what) + " needs q not a root of unity (q is a primitive " + std::to_string(*n) +
                      "-th root; [n]_q! vanishes)");
}

}  // namespace

FMat coefficient_functionals(const QsiModuleSpec& m) {
    require_generic_q(m.field, "coefficient functionals");
    Report v = validate(m);
    if (!v.ok) throw std::invalid_argument("invalid module: " + v.failures.front());
    int d = m.dim();
    int nil = m.B.nilpotency_index();
    if (nil < 0) throw std::invalid_argument("B is not nilpotent");
    SeqMat P = matrix_power_sequence(m.A);
    std::vector<std::vector<std::map<int, CFiniteSeq>>> comps(d, std::vector<std::map<int, CFiniteSeq>>(d));
    Mat<Scalar> Bn = Mat<Scalar>::identity(d);
    for (int n = 0; n < nil; ++n) {
        Mat<Scalar> C = Bn.scaled(q_factorial(n, m.field).inv());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                CFiniteSeq s;
                for (int k = 0; k < d; ++k)
                    if (!C(k, j).is_zero()) s += C(k, j) * P(i, k);
                if (!s.is_zero()) comps[i][j][n] = s;
            }
        Bn = Bn * m.B;
    }
    FMat y(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) y(i, j) = Functional(m.field, comps[i][j]);
    return y;
}

FMat antipode_matrix(const FMat& y) {
    FMat r(y.rows(), y.cols());
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) r(i, j) = antipode_functional(y(i, j));
    return r;
}

std::string fmat_str(const FMat& y, const SeqNaming& names) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < y.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < y.cols(); ++j) os << (j ? ", " : "") << y(i, j).str(names);
        os << "]";
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- span

FunctionalSpan::FunctionalSpan(int max_n, int half_width) : max_n_(max_n), half_width_(half_width) {}

std::vector<Scalar> FunctionalSpan::sample(const Functional& x) const {
    std::vector<Scalar> v;
    v.reserve(static_cast<size_t>(max_n_ + 1) * (2 * half_width_ + 1));
    for (int n = 0; n <= max_n_; ++n) {
        CFiniteSeq s = x.component(n);
        if (s.is_zero()) v.insert(v.end(), 2 * half_width_ + 1, Scalar(0));
        else {
            auto vals = s.values(-half_width_, 2 * half_width_ + 1);
            v.insert(v.end(), vals.begin(), vals.end());
        }
    }
    return v;
}

std::optional<std::vector<Scalar>> FunctionalSpan::reduce(const Functional& x, std::vector<Scalar>& res) const {
    res = sample(x);
    std::vector<Scalar> comb(elems_.size(), Scalar(0));
    for (auto& r : rows_) {
        Scalar a = res[r.pivot];
        if (a.is_zero()) continue;
        for (size_t k = 0; k < res.size(); ++k)
            if (!r.vec[k].is_zero()) res[k] -= a * r.vec[k];
        for (size_t k = 0; k < r.comb.size(); ++k)
            if (!r.comb[k].is_zero()) comb[k] += a * r.comb[k];
    }
    for (auto& s : res)
        if (!s.is_zero()) return std::nullopt;
    return comb;
}

void FunctionalSpan::resample(const Functional& trigger) {
    max_n_ = std::max(max_n_, trigger.max_degree());
    std::vector<Functional> old = std::move(elems_);
    elems_.clear();
    rows_.clear();
    num_rows_.clear();
    for (auto& e : old)
        if (insert(e)) throw std::logic_error("span element became dependent after resampling");
}

namespace {

const Rational& specialization() {
    static const Rational q0(1009, 17);
    return q0;
}

Rational specialize(const Scalar& s) {
    if (s.is_rational()) return s.to_rational();
    Rational d = s.den().eval<Rational>(specialization());
    if (d == 0) throw std::runtime_error("functional span: specialization of q hits a pole");
    return s.num().eval<Rational>(specialization()) / d;
}

}  // namespace

std::vector<Rational> FunctionalSpan::numeric_sample(const Functional& x) const {
    std::vector<Rational> v;
    for (auto& s : sample(x)) v.push_back(specialize(s));
    return v;
}

// Candidate combination from the specialized rows, solved exactly on its support.
std::optional<std::vector<Scalar>> FunctionalSpan::numeric_express(const Functional& x) const {
    std::vector<Rational> v = numeric_sample(x), comb(elems_.size(), Rational(0));
    for (auto& r : num_rows_) {
        Rational a = v[r.pivot];
        if (a == 0) continue;
        for (size_t k = 0; k < v.size(); ++k)
            if (r.vec[k] != 0) v[k] -= a * r.vec[k];
        for (size_t k = 0; k < r.comb.size(); ++k)
            if (r.comb[k] != 0) comb[k] += a * r.comb[k];
    }
    for (auto& s : v)
        if (s != 0) return std::nullopt;
    std::vector<int> support;
    for (size_t k = 0; k < comb.size(); ++k)
        if (comb[k] != 0) support.push_back(static_cast<int>(k));
    std::vector<Scalar> out(elems_.size(), Scalar(0));
    if (support.empty()) return out;
    // sample positions where the support elements are independent
    int width = 2 * half_width_ + 1, m = static_cast<int>(support.size());
    Mat<Scalar> num(m, static_cast<int>(v.size()));
    for (int j = 0; j < m; ++j) {
        auto s = numeric_sample(elems_[support[j]]);
        for (size_t k = 0; k < s.size(); ++k) num(j, static_cast<int>(k)) = Scalar(s[k]);
    }
    auto cols = num.rref();
    if (static_cast<int>(cols.size()) != m) return std::nullopt;
    Mat<Scalar> M(m, m);
    std::vector<Scalar> rhs(m), c;
    for (int i = 0; i < m; ++i) {
        int n = cols[i] / width, pos = cols[i] % width - half_width_;
        for (int j = 0; j < m; ++j) M(i, j) = elems_[support[j]](pos, n);
        rhs[i] = x(pos, n);
    }
    if (!M.solve(rhs, c)) return std::nullopt;
    for (int j = 0; j < m; ++j) out[support[j]] = c[j];
    return out;
}

void FunctionalSpan::numeric_insert(const Functional& x) {
    std::vector<Rational> s = numeric_sample(x), cmb(elems_.size() + 1, Rational(0));
    cmb[elems_.size()] = 1;
    for (auto& r : num_rows_) {
        Rational a = s[r.pivot];
        if (a == 0) continue;
        for (size_t k = 0; k < s.size(); ++k)
            if (r.vec[k] != 0) s[k] -= a * r.vec[k];
        for (size_t k = 0; k < r.comb.size(); ++k)
            if (r.comb[k] != 0) cmb[k] -= a * r.comb[k];
    }
    int p = 0;
    while (s[p] == 0) ++p;
    Rational inv = 1 / s[p];
    for (auto& v : s) v *= inv;
    for (auto& v : cmb) v *= inv;
    for (auto& r : num_rows_) {
        Rational a = r.vec[p];
        if (a == 0) continue;
        for (size_t k = 0; k < s.size(); ++k)
            if (s[k] != 0) r.vec[k] -= a * s[k];
        r.comb.resize(cmb.size(), Rational(0));
        for (size_t k = 0; k < cmb.size(); ++k)
            if (cmb[k] != 0) r.comb[k] -= a * cmb[k];
    }
    num_rows_.push_back({std::move(s), std::move(cmb), p});
    elems_.push_back(x);
}

std::optional<std::vector<Scalar>> FunctionalSpan::express(const Functional& x) const {
    auto* self = const_cast<FunctionalSpan*>(this);  // resampling refines the cache only
    if (!numeric_ && x.field()) {
        self->numeric_ = x.field()->kind() == FieldKind::RationalFunctions;
        if (*numeric_ && !elems_.empty()) self->resample(x);  // rebuild rows from field-free elements
    }
    if (x.max_degree() > max_n_) self->resample(x);
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::vector<Scalar> res;
        auto comb = numeric_.value_or(false) ? numeric_express(x) : reduce(x, res);
        if (!comb) return std::nullopt;
        Functional sum;
        for (size_t k = 0; k < elems_.size(); ++k)
            if (!(*comb)[k].is_zero()) sum += (*comb)[k] * elems_[k];
        if (sum == x) return comb;
        self->half_width_ *= 2;
        self->resample(x);
    }
    throw std::runtime_error("functional span: sampling never separated a false dependency");
}

std::optional<std::vector<Scalar>> FunctionalSpan::insert(const Functional& x) {
    if (auto c = express(x)) return c;
    if (numeric_.value_or(false)) {
        numeric_insert(x);
        return std::nullopt;
    }
    // residual of x against the rows, tracked as a combination of the elements and x
    std::vector<Scalar> s = sample(x);
    std::vector<Scalar> cmb(elems_.size() + 1, Scalar(0));
    cmb[elems_.size()] = Scalar(1);
    for (auto& r : rows_) {
        Scalar a = s[r.pivot];
        if (a.is_zero()) continue;
        for (size_t k = 0; k < s.size(); ++k)
            if (!r.vec[k].is_zero()) s[k] -= a * r.vec[k];
        for (size_t k = 0; k < r.comb.size(); ++k)
            if (!r.comb[k].is_zero()) cmb[k] -= a * r.comb[k];
    }
    int p = 0;
    while (s[p].is_zero()) ++p;
    Scalar inv = s[p].inv();
    for (auto& v : s) v *= inv;
    for (auto& v : cmb) v *= inv;
    // keep earlier rows reduced at the new pivot
    for (auto& r : rows_) {
        Scalar a = r.vec[p];
        if (a.is_zero()) continue;
        for (size_t k = 0; k < s.size(); ++k)
            if (!s[k].is_zero()) r.vec[k] -= a * s[k];
        r.comb.resize(cmb.size(), Scalar(0));
        for (size_t k = 0; k < cmb.size(); ++k)
            if (!cmb[k].is_zero()) r.comb[k] -= a * cmb[k];
    }
    rows_.push_back({std::move(s), std::move(cmb), p});
    elems_.push_back(x);
    return std::nullopt;
}

// ---------------------------------------------------------------- discovery

namespace {

struct GenInfo {
    std::string name;
    Functional w;
    bool grouplike = false;
    int inverse = -1;  // index among generators
    // non-grouplike: w = scale * unit^-1 * Y_k(i, j)
    int k = 0, i = 0, j = 0;
    int unit = -1;  // index of the grouplike used for normalization
    Scalar scale = Scalar(1);
    int min_n = 0;
    int order = 0;  // discovery order
};

std::optional<Scalar> grouplike_ratio(const Functional& x) {
    if (x.components().size() != 1 || x.min_degree() != 0) return std::nullopt;
    const CFiniteSeq& s = x.components().begin()->second;
    if (s.order() != 1 || s(0) != Scalar(1)) return std::nullopt;
    return s(1);
}

// The ratio r if the component is p(m) r^m.
std::optional<Scalar> single_root(const CFiniteSeq& s) {
    const SPoly& rec = s.recurrence();
    int d = rec.degree();
    if (d < 1) return std::nullopt;
    Scalar r = -rec.coeff(d - 1) / Scalar(d);
    SPoly lin(std::vector<Scalar>{-r, Scalar(1)});
    SPoly p(Scalar(1));
    for (int k = 0; k < d; ++k) p = p * lin;
    if (p != rec) return std::nullopt;
    return r;
}

Scalar first_nonzero(const CFiniteSeq& s) {
    int bound = s.order() + 2;
    for (int a = 0; a <= bound; ++a) {
        if (!s(a).is_zero()) return s(a);
        if (a > 0 && !s(-a).is_zero()) return s(-a);
    }
    throw std::logic_error("nonzero sequence vanished on a full window");
}

bool has_lhs_suffix(const Word& w, const std::vector<Word>& lhs) {
    for (auto& l : lhs)
        if (l.size() <= w.size() && std::equal(l.begin(), l.end(), w.end() - static_cast<long>(l.size()))) return true;
    return false;
}

}  // namespace

std::vector<std::string> DiscoveredHopf::generator_names() const {
    std::vector<std::string> r;
    const PresPtr& p = hopf->algebra();
    for (int g = 0; g < p->num_generators(); ++g) r.push_back(p->name(g));
    return r;
}

Functional DiscoveredHopf::witness(const NCElement& x) const {
    Functional r;
    for (auto& [w, c] : x.terms()) {
        Functional y = witnesses.empty() ? Functional() : Functional::counit(*witnesses[0].field());
        for (Letter l : w) y = y * witnesses[l];
        r += c * y;
    }
    return r;
}

std::optional<NCElement> DiscoveredHopf::express(const Functional& x) const {
    auto c = span_->express(x);
    if (!c) return std::nullopt;
    NCElement r(hopf->algebra());
    for (size_t k = 0; k < c->size(); ++k)
        if (!(*c)[k].is_zero()) r += (*c)[k] * NCElement::word(hopf->algebra(), basis_words_[k]);
    return r;
}

DiscoveredHopf corepresentation_hopf(const QsiModuleSpec& m, const CoreprOptions& opt) {
    const Field& f = m.field;
    DiscoveredHopf out;
    out.relation_degree = opt.relation_degree;
    std::vector<FMat> Ys{coefficient_functionals(m)};
    Functional eps = Functional::counit(f);

    // 1. generators from the antipode orbit of the coefficient matrix
    std::vector<GenInfo> group, other;
    FunctionalSpan lin;
    lin.insert(eps);
    int discovered = 0;
    bool stable = false;
    for (int k = 0; k < opt.antipode_depth; ++k) {
        if (k > 0) Ys.push_back(antipode_matrix(Ys[k - 1]));
        const FMat& Y = Ys[k];
        bool added = false;
        for (int i = 0; i < Y.rows(); ++i)
            for (int j = 0; j < Y.cols(); ++j) {
                auto r = grouplike_ratio(Y(i, j));
                if (!r || *r == Scalar(1)) continue;
                bool known = false;
                for (auto& g : group) known = known || g.w == Y(i, j);
                if (known) continue;
                GenInfo a, b;
                a.w = Functional::grouplike(f, *r);
                b.w = Functional::grouplike(f, r->inv());
                a.grouplike = b.grouplike = true;
                a.order = discovered++;
                b.order = discovered++;
                int base = static_cast<int>(group.size());
                a.inverse = base + 1;
                b.inverse = base;
                lin.insert(a.w);
                lin.insert(b.w);
                group.push_back(a);
                group.push_back(b);
                added = true;
            }
        for (int i = 0; i < Y.rows(); ++i)
            for (int j = 0; j < Y.cols(); ++j) {
                const Functional& c = Y(i, j);
                if (c.is_zero() || grouplike_ratio(c)) continue;
                GenInfo g;
                g.k = k;
                g.i = i;
                g.j = j;
                g.min_n = c.min_degree();
                Functional x = c;
                if (auto r = single_root(c.component(g.min_n)); r && *r != Scalar(1)) {
                    for (size_t u = 0; u < group.size(); ++u)
                        if (*grouplike_ratio(group[u].w) == *r) {
                            g.unit = static_cast<int>(u);
                            x = group[group[u].inverse].w * c;
                            break;
                        }
                }
                g.scale = first_nonzero(x.component(g.min_n)).inv();
                g.w = g.scale * x;
                if (lin.insert(g.w)) continue;
                g.order = discovered++;
                other.push_back(g);
                added = true;
            }
        out.orbit_depth = k + 1;
        if (k > 0 && !added) {
            stable = true;
            break;
        }
    }
    if (!stable)
        out.report.fail("antipode orbit did not stabilize within depth " + std::to_string(opt.antipode_depth));
    out.report.note("antipode orbit examined Y_0 .. Y_" + std::to_string(out.orbit_depth - 1));

    // 2. naming and ordering: grouplike pairs, then the rest by lowest t-degree
    std::stable_sort(other.begin(), other.end(), [](const GenInfo& a, const GenInfo& b) { return a.min_n < b.min_n; });
    std::vector<GenInfo> gens = group;
    int nf = 0, ng = 0, extra = 0;
    for (size_t p = 0; p < group.size(); p += 2) {
        std::string nm = p == 0 ? "e" : p == 2 ? "h" : "x" + std::to_string(++extra);
        gens[p].name = nm;
        gens[p + 1].name = nm + "^-1";
    }
    for (auto& g : other) {
        if (g.min_n == 0 && nf++ == 0) g.name = "f";
        else if (g.min_n == 1 && ng++ == 0) g.name = "g";
        else g.name = "x" + std::to_string(++extra);
        gens.push_back(g);
    }
    int N = static_cast<int>(gens.size());
    std::vector<std::string> names;
    std::vector<int> inverse(N, -1);
    for (int g = 0; g < N; ++g) {
        names.push_back(gens[g].name);
        inverse[g] = gens[g].inverse;
        out.witnesses.push_back(gens[g].w);
    }

    // 3. relations by elimination over words in deglex order
    auto span = std::make_shared<FunctionalSpan>();
    span->insert(eps);
    out.basis_words_.push_back(Word());
    out.word_values_.push_back(eps);
    std::vector<Rule> rules;
    std::vector<Word> lhs;
    std::vector<std::pair<Word, Functional>> level{{Word(), eps}};
    out.graded_presented = {1};
    out.graded_functional = {1};
    for (int d = 1; d <= opt.relation_degree + 1; ++d) {
        std::vector<std::pair<Word, Functional>> next;
        int presented = 0, independent = 0;
        for (auto& [w, val] : level)
            for (int g = 0; g < N; ++g) {
                Word w2 = w;
                w2.push_back(static_cast<Letter>(g));
                if (has_lhs_suffix(w2, lhs)) continue;
                Functional v2 = val * out.witnesses[g];
                auto dep = span->insert(v2);
                if (!dep) {
                    ++presented;
                    ++independent;
                    out.basis_words_.push_back(w2);
                    out.word_values_.push_back(v2);
                    next.emplace_back(w2, v2);
                    continue;
                }
                if (d > opt.relation_degree) {
                    ++presented;  // normal word of the presentation whose image is dependent
                    continue;
                }
                Rule r;
                r.lhs = w2;
                for (size_t b = 0; b < dep->size(); ++b)
                    if (!(*dep)[b].is_zero()) r.rhs.emplace_back(out.basis_words_[b], (*dep)[b]);
                rules.push_back(r);
                lhs.push_back(w2);
            }
        out.graded_presented.push_back(presented);
        out.graded_functional.push_back(independent);
        level = std::move(next);
    }
    out.span_ = span;
    out.complete = out.graded_presented == out.graded_functional;
    if (out.complete)
        out.report.note("graded dimensions of presentation and functional image agree through degree " +
                        std::to_string(opt.relation_degree + 1));
    else
        out.report.fail("graded dimensions disagree at degree " + std::to_string(opt.relation_degree + 1) +
                        "; relations beyond degree " + std::to_string(opt.relation_degree) + " are missing");

    BuildOptions bopt;
    bopt.check_confluence = false;
    PresPtr alg = Presentation::from_rules(f, names, inverse, rules, bopt);
    auto conf = alg->check_local_confluence();
    if (!conf.ok) {
        for (auto& s : conf.failures) out.report.fail("discovered rewriting system: " + s);
    }
    for (auto& r : rules) {
        NCElement rhs(alg, Terms(r.rhs.begin(), r.rhs.end()));
        out.relations.push_back(alg->word_str(r.lhs) + " = " + rhs.str());
    }

    // 4. Hopf structure on generators
    PresPtr sq = Presentation::tensor({alg, alg});
    std::vector<NCElement> delta, anti;
    std::vector<Scalar> counit;
    auto expr = [&](const Functional& x) -> NCElement {
        auto c = span->express(x);
        if (!c) throw std::runtime_error("functional outside the generated algebra: " + x.str());
        NCElement r(alg);
        for (size_t k = 0; k < c->size(); ++k)
            if (!(*c)[k].is_zero()) r += (*c)[k] * NCElement::word(alg, out.basis_words_[k]);
        return r;
    };
    auto tens = [&](const NCElement& a, const NCElement& b) { return embed(a, sq, 0) * embed(b, sq, 1); };
    bool structure_ok = true;
    for (int g = 0; g < N; ++g) {
        const GenInfo& G = gens[g];
        counit.push_back(G.w(0, 0));
        NCElement gen = NCElement::gen(alg, g);
        try {
            anti.push_back(expr(antipode_functional(G.w)));
            if (G.grouplike) {
                delta.push_back(tens(gen, gen));
                continue;
            }
            const FMat& Y = Ys[G.k];
            NCElement d(sq);
            for (int l = 0; l < Y.rows(); ++l) {
                if (Y(G.i, l).is_zero() || Y(l, G.j).is_zero()) continue;
                if (G.k % 2 == 0) d += tens(expr(Y(G.i, l)), expr(Y(l, G.j)));
                else d += tens(expr(Y(l, G.j)), expr(Y(G.i, l)));
            }
            if (G.unit >= 0) {
                NCElement u = NCElement::gen(alg, gens[G.unit].inverse);
                d = tens(u, u) * d;
            }
            delta.push_back(G.scale * d);
        } catch (const std::exception& e) {
            out.report.fail("generator " + G.name + ": " + e.what());
            structure_ok = false;
        }
    }
    if (!structure_ok) return out;
    std::string nm = m.name.empty() ? "discovered" : "discovered(" + m.name + ")";
    out.hopf = HopfPresentation::make(nm, alg, delta, counit, anti);

    // coproducts against <x, v v'> = q^{n m'} binom(n+n', n)_q <x, v_{m+m', n+n'}>
    Report dual_check;
    for (int g = 0; g < N; ++g) {
        NCElement d = out.hopf->coproduct(NCElement::gen(out.hopf->algebra(), g));
        std::vector<std::pair<Scalar, std::pair<Functional, Functional>>> terms;
        for (auto& [w, c] : d.terms()) {
            auto parts = out.hopf->square()->split(w);
            terms.push_back({c,
                             {out.witness(NCElement::word(out.hopf->algebra(), parts[0])),
                              out.witness(NCElement::word(out.hopf->algebra(), parts[1]))}});
        }
        for (int m1 = -2; m1 <= 2; ++m1)
            for (int m2 = -2; m2 <= 2; ++m2)
                for (int n1 = 0; n1 <= 2; ++n1)
                    for (int n2 = 0; n2 <= 2; ++n2) {
                        Scalar lhs(0);
                        for (auto& [c, xy] : terms) lhs += c * xy.first(m1, n1) * xy.second(m2, n2);
                        Scalar rhs = f.q().pow(n1 * m2) * q_binomial(n1 + n2, n1, f) * gens[g].w(m1 + m2, n1 + n2);
                        ++dual_check.checked;
                        if (lhs != rhs)
                            dual_check.fail("coproduct of " + gens[g].name + " disagrees with the dual pairing at v_{" +
                                            std::to_string(m1) + "," + std::to_string(n1) + "} ⊗ v_{" +
                                            std::to_string(m2) + "," + std::to_string(n2) + "}");
                    }
    }
    out.report.merge(dual_check);
    out.report.merge(out.hopf->verify_bialgebra(), "bialgebra: ");
    out.report.merge(out.hopf->verify_hopf_axioms(opt.axiom_degree), "Hopf axioms: ");
    return out;
}

// ---------------------------------------------------------------- comodule

Coaction comodule_structure(const QsiModuleSpec& m, int b) {
    Coaction c;
    c.coefficients = coefficient_functionals(m);
    const FMat& C = c.coefficients;
    const Field& f = m.field;
    int d = m.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ++c.report.checked;
            if (C(i, j)(0, 0) != Scalar(i == j ? 1 : 0))
                c.report.fail("counit: <c_" + std::to_string(i + 1) + std::to_string(j + 1) + ", 1> is not delta");
        }
    for (int m1 = -b; m1 <= b; ++m1)
        for (int m2 = -b; m2 <= b; ++m2)
            for (int n1 = 0; n1 <= b; ++n1)
                for (int n2 = 0; n2 <= b; ++n2) {
                    Scalar w = f.q().pow(n1 * m2) * q_binomial(n1 + n2, n1, f);
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) {
                            Scalar lhs = w * C(i, j)(m1 + m2, n1 + n2), rhs(0);
                            for (int k = 0; k < d; ++k) rhs += C(i, k)(m1, n1) * C(k, j)(m2, n2);
                            ++c.report.checked;
                            if (lhs != rhs)
                                c.report.fail("coassociativity fails for c_" + std::to_string(i + 1) +
                                              std::to_string(j + 1));
                        }
                }
    return c;
}

std::string coaction_str(const FMat& c, const std::vector<std::pair<std::string, Functional>>& names) {
    std::ostringstream os;
    for (int j = 0; j < c.cols(); ++j) {
        os << (j ? "; " : "") << "rho(m_" << j + 1 << ") = ";
        bool first = true;
        for (int i = 0; i < c.rows(); ++i) {
            const Functional& x = c(i, j);
            if (x.is_zero()) continue;
            std::string label;
            for (auto& [n, w] : names)
                if (w == x) label = n;
            if (label.empty()) {
                for (auto& [n, w] : names)
                    if (!w.is_zero() && x == Scalar(-1) * w) label = "-" + n;
            }
            if (label.empty()) label = x.str();
            os << (first ? "" : " + ") << "m_" << i + 1 << "⊗" << label;
            first = false;
        }
        if (first) os << "0";
    }
    return os.str();
}

// ---------------------------------------------------------------- trivialization

Report trivialization_iso(const QsiModuleSpec& m, const DiscoveredHopf& h, int word_bound) {
    Report rep;
    if (!h.hopf) {
        rep.fail("no Hopf structure was discovered");
        return rep;
    }
    const PresPtr& R = h.hopf->algebra();
    FMat C = coefficient_functionals(m);
    int d = m.dim();
    std::vector<std::vector<NCElement>> E(d, std::vector<NCElement>(d)), SE = E;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto a = h.express(C(i, j));
            auto b = h.express(antipode_functional(C(i, j)));
            if (!a || !b) {
                rep.fail("coefficient c_" + std::to_string(i + 1) + std::to_string(j + 1) +
                         " lies outside the discovered algebra");
                return rep;
            }
            E[i][j] = *a;
            SE[i][j] = *b;
        }
    using Vec = std::vector<NCElement>;
    auto apply = [&](const std::vector<std::vector<NCElement>>& T, const Vec& v) {
        Vec out(d, NCElement(R));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (!T[i][j].is_zero() && !v[j].is_zero()) out[i] += T[i][j] * v[j];
        return out;
    };
    // right translation on the dual: b -> x = sum x_(1) <x_(2), b>
    std::map<Word, Functional> wcache;
    auto wit = [&](const Word& w) -> const Functional& {
        auto it = wcache.find(w);
        if (it != wcache.end()) return it->second;
        return wcache[w] = h.witness(NCElement::word(R, w));
    };
    auto act = [&](const NCElement& b, const NCElement& x) {
        NCElement out(R);
        NCElement dx = h.hopf->coproduct(x);
        for (auto& [w, c] : dx.terms()) {
            auto parts = h.hopf->square()->split(w);
            Scalar p = pair(wit(parts[1]), b);
            if (!p.is_zero()) out += (c * p) * NCElement::word(R, parts[0]);
        }
        return out;
    };
    auto Hq = builtin_Hq(m.field);
    std::vector<std::pair<NCElement, std::vector<std::pair<NCElement, NCElement>>>> acts;
    for (const char* g : {"s", "s^-1", "t"}) {
        NCElement hg = NCElement::gen(Hq->algebra(), g);
        std::vector<std::pair<NCElement, NCElement>> parts;
        NCElement dh = Hq->coproduct(hg);
        for (auto& [w, c] : dh.terms()) {
            auto sp = Hq->square()->split(w);
            parts.emplace_back(c * NCElement::word(Hq->algebra(), sp[0]), NCElement::word(Hq->algebra(), sp[1]));
        }
        acts.emplace_back(hg, parts);
    }
    for (size_t b = 0; b < h.basis_words_.size(); ++b) {
        if (static_cast<int>(h.basis_words_[b].size()) > word_bound) continue;
        NCElement w = NCElement::word(R, h.basis_words_[b]);
        for (int j = 0; j < d; ++j) {
            Vec v(d, NCElement(R));
            v[j] = w;
            std::string at = "m_" + std::to_string(j + 1) + " ⊗ " + R->word_str(h.basis_words_[b]);
            Vec fw = apply(E, v);
            ++rep.checked;
            if (apply(SE, fw) != v) rep.fail("backward after forward is not the identity on " + at);
            ++rep.checked;
            if (apply(E, apply(SE, v)) != v) rep.fail("forward after backward is not the identity on " + at);
            for (auto& [hg, parts] : acts) {
                // source: diagonal action; target: action on the dual factor only
                Vec src(d, NCElement(R));
                for (auto& [a, bb] : parts) {
                    Mat<Scalar> pa = represent(m, a);
                    NCElement bx = act(bb, w);
                    for (int i = 0; i < d; ++i)
                        if (!pa(i, j).is_zero()) src[i] += pa(i, j) * bx;
                }
                Vec lhs = apply(E, src), rhs(d, NCElement(R));
                for (int i = 0; i < d; ++i) rhs[i] = act(hg, fw[i]);
                ++rep.checked;
                if (lhs != rhs) rep.fail("not equivariant for " + hg.str() + " on " + at);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- invariants

namespace {

std::vector<std::pair<NCElement, NCElement>> hq_coproduct_parts(const HopfPtr& Hq, const char* g) {
    std::vector<std::pair<NCElement, NCElement>> parts;
    NCElement dh = Hq->coproduct(NCElement::gen(Hq->algebra(), g));
    for (auto& [w, c] : dh.terms()) {
        auto sp = Hq->square()->split(w);
        parts.emplace_back(c * NCElement::word(Hq->algebra(), sp[0]), NCElement::word(Hq->algebra(), sp[1]));
    }
    return parts;
}

FMat alpha_matrix(const QsiModuleSpec& n) {
    FMat C = coefficient_functionals(n);
    for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < C.cols(); ++j) C(i, j) = antipode_inverse_functional(C(i, j));
    return C;
}

}  // namespace

InvariantsReport invariants_functor(const QsiModuleSpec& n) {
    InvariantsReport out;
    Report& rep = out.report;
    const int d = n.dim();
    FMat X = alpha_matrix(n);
    auto Hq = builtin_Hq(n.field);
    // alpha(n_j) has coefficient X(i, j) at n_i
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ++rep.checked;
            if (X(i, j)(0, 0) != Scalar(i == j ? 1 : 0))
                rep.fail("epsilon-retraction does not invert alpha at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
        }
    for (const char* g : {"s", "s^-1", "t"}) {
        auto parts = hq_coproduct_parts(Hq, g);
        Scalar eps = Hq->counit(NCElement::gen(Hq->algebra(), g));
        for (int j = 0; j < d; ++j) {
            std::vector<Functional> out_v(d);
            for (auto& [a, b] : parts) {
                Mat<Scalar> pb = represent(n, b);
                for (int i = 0; i < d; ++i) {
                    Functional ax = translate(a, X(i, j));
                    for (int k = 0; k < d; ++k)
                        if (!pb(k, i).is_zero()) out_v[k] += pb(k, i) * ax;
                }
            }
            for (int k = 0; k < d; ++k) {
                ++rep.checked;
                if (out_v[k] != eps * X(k, j))
                    rep.fail(std::string("alpha(n_") + std::to_string(j + 1) + ") is not invariant under " + g);
            }
        }
    }
    // invariants of W ⊗ N with W = span of the coefficients of alpha
    FunctionalSpan W;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!X(i, j).is_zero()) W.insert(X(i, j));
    int r = W.size();
    auto coords = [&](const Functional& x) {
        auto c = W.express(x);
        if (!c) throw std::runtime_error("span of alpha coefficients is not stable under translation");
        c->resize(r, Scalar(0));
        return *c;
    };
    Mat<Scalar> stacked(0, r * d);
    std::vector<Mat<Scalar>> blocks;
    try {
        for (const char* g : {"s", "t"}) {
            auto parts = hq_coproduct_parts(Hq, g);
            Scalar eps = Hq->counit(NCElement::gen(Hq->algebra(), g));
            Mat<Scalar> T = Mat<Scalar>::identity(r * d).scaled(-eps);
            for (auto& [a, b] : parts) {
                Mat<Scalar> Ma(r, r);
                for (int k = 0; k < r; ++k) {
                    auto c = coords(translate(a, W.elements()[k]));
                    for (int l = 0; l < r; ++l) Ma(l, k) = c[l];
                }
                T = T + Ma.kron(represent(n, b));
            }
            blocks.push_back(T);
        }
    } catch (const std::exception& e) {
        rep.fail(e.what());
        return out;
    }
    Mat<Scalar> S(2 * r * d, r * d);
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < r * d; ++i)
            for (int j = 0; j < r * d; ++j) S(b * r * d + i, j) = blocks[b](i, j);
    auto ker = S.kernel();
    out.invariant_dim = static_cast<int>(ker.size());
    // images of alpha in coordinates; they must span the invariants
    Mat<Scalar> img(d, r * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            auto c = coords(X(i, j));
            for (int k = 0; k < r; ++k) img(j, k * d + i) = c[k];
        }
    ++rep.checked;
    if (img.rank() != d) rep.fail("alpha is not injective");
    ++rep.checked;
    if (out.invariant_dim != d)
        rep.fail("invariant subspace has dimension " + std::to_string(out.invariant_dim) + ", expected " +
                 std::to_string(d));
    Mat<Scalar> both(d + static_cast<int>(ker.size()), r * d);
    for (int j = 0; j < d; ++j)
        for (int c = 0; c < r * d; ++c) both(j, c) = img(j, c);
    for (size_t k = 0; k < ker.size(); ++k)
        for (int c = 0; c < r * d; ++c) both(d + static_cast<int>(k), c) = ker[k][c];
    ++rep.checked;
    if (both.rank() != out.invariant_dim) rep.fail("alpha does not land in the invariants");
    return out;
}

Report invariants_tensor_compatibility(const QsiModuleSpec& a, const QsiModuleSpec& b) {
    Report rep;
    FMat Xa = alpha_matrix(a), Xb = alpha_matrix(b), Xab = alpha_matrix(tensor(a, b));
    int da = a.dim(), db = b.dim();
    for (int p = 0; p < da; ++p)
        for (int r = 0; r < db; ++r)
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < db; ++j) {
                    ++rep.checked;
                    if (Xab(i * db + j, p * db + r) != Xb(j, r) * Xa(i, p))
                        rep.fail("tensor structure map disagrees at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") for n_" + std::to_string(p + 1) + " ⊗ n'_" +
                                 std::to_string(r + 1));
                }
    return rep;
}

}  // namespace qsi
