#include "qsi/ncalg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qsi/expr_parser.hpp"
#include "qsi/matrix.hpp"

namespace qsi {

namespace {

Terms single(const Word& w, const Scalar& c = Scalar(1)) {
    Terms t;
    if (!c.is_zero()) t.emplace(w, c);
    return t;
}

void add_into(Terms& acc, const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = acc.find(w);
    if (it == acc.end()) {
        acc.emplace(w, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

std::string coeff_prefix(const Scalar& c) {
    if (c == Scalar(1)) return "";
    if (c == Scalar(-1)) return "-";
    std::string s = c.str();
    if (s.find(' ') != std::string::npos || (c.is_rational() == false && s.find('/') != std::string::npos))
        s = "(" + s + ")";
    return s + "*";
}

}  // namespace

// ---------------------------------------------------------------- build

PresPtr Presentation::from_rules(const Field& f, std::vector<std::string> names, std::vector<int> inverse,
                                 std::vector<Rule> rules, const BuildOptions& opt) {
    if (names.size() > 250) throw std::invalid_argument("too many generators");
    auto p = std::shared_ptr<Presentation>(new Presentation());
    p->field_ = f;
    p->names_ = std::move(names);
    p->inverse_ = inverse.empty() ? std::vector<int>(p->names_.size(), -1) : std::move(inverse);
    p->step_budget_ = opt.step_budget;
    DegLex less;
    for (auto& r : rules) {
        if (r.lhs.empty()) throw std::invalid_argument("rule with empty left-hand side");
        for (auto& [w, c] : r.rhs)
            if (!less(w, r.lhs))
                throw std::invalid_argument("rule " + p->word_str(r.lhs) + " -> ... is not decreasing (term " +
                                            p->word_str(w) + ")");
    }
    p->rules_ = std::move(rules);
    p->index_rules();
    if (opt.check_confluence) {
        auto rep = p->check_local_confluence(opt.overlap_bound);
        if (!rep.ok) {
            std::string msg = "rewriting system is not locally confluent:";
            for (auto& s : rep.failures) msg += "\n  " + s;
            throw std::invalid_argument(msg);
        }
    }
    return p;
}

PresPtr Presentation::ground(const Field& f) {
    BuildOptions opt;
    return from_rules(f, {}, {}, {}, opt);
}

void Presentation::index_rules() {
    by_last_.assign(names_.size(), {});
    for (size_t i = 0; i < rules_.size(); ++i) by_last_[rules_[i].lhs.back()].push_back(static_cast<int>(i));
}

PresPtr Presentation::build(const Field& f, const PresentationSpec& spec, const BuildOptions& opt) {
    std::vector<int> inverse(spec.generators.size(), -1);
    auto idx = [&](const std::string& n) {
        auto it = std::find(spec.generators.begin(), spec.generators.end(), n);
        if (it == spec.generators.end()) throw std::invalid_argument("unknown generator '" + n + "'");
        return static_cast<int>(it - spec.generators.begin());
    };
    for (auto& [g, h] : spec.inverses) {
        inverse[idx(g)] = idx(h);
        inverse[idx(h)] = idx(g);
    }
    BuildOptions raw_opt;
    raw_opt.check_confluence = false;
    auto raw = std::const_pointer_cast<Presentation>(from_rules(f, spec.generators, inverse, {}, raw_opt));
    raw->params_ = spec.params;
    std::vector<Rule> rules;
    for (auto& [g, h] : spec.inverses) {
        int a = idx(g), b = idx(h);
        rules.push_back({Word{Letter(a), Letter(b)}, {{Word(), Scalar(1)}}});
        rules.push_back({Word{Letter(b), Letter(a)}, {{Word(), Scalar(1)}}});
    }
    for (auto& [l, r] : spec.rules) {
        Rule rule;
        rule.lhs = raw->parse_word(l);
        NCElement rhs = parse_element(raw, r);
        for (auto& [w, c] : rhs.terms()) rule.rhs.emplace_back(w, c);
        rules.push_back(std::move(rule));
    }
    auto p = std::const_pointer_cast<Presentation>(from_rules(f, spec.generators, inverse, std::move(rules), opt));
    p->params_ = spec.params;
    return p;
}

PresPtr Presentation::tensor(const std::vector<PresPtr>& parts) {
    std::vector<PresPtr> flat;
    for (auto& p : parts) {
        if (p->is_tensor())
            for (auto& f : p->factors_) flat.push_back(f);
        else
            flat.push_back(p);
    }
    if (flat.empty()) throw std::invalid_argument("empty tensor product");
    auto t = std::shared_ptr<Presentation>(new Presentation());
    t->field_ = flat[0]->field_;
    t->step_budget_ = flat[0]->step_budget_;
    t->factors_ = flat;
    int off = 0;
    for (size_t k = 0; k < flat.size(); ++k) {
        if (flat[k]->field_ != t->field_) throw std::invalid_argument("tensor factors over different fields");
        t->offsets_.push_back(off);
        for (int g = 0; g < flat[k]->num_generators(); ++g) {
            t->names_.push_back(flat[k]->names_[g] + "#" + std::to_string(k + 1));
            int inv = flat[k]->inverse_[g];
            t->inverse_.push_back(inv < 0 ? -1 : inv + off);
            t->factor_of_.push_back(static_cast<int>(k));
        }
        for (auto& r : flat[k]->rules_) {
            Rule s;
            for (Letter c : r.lhs) s.lhs.push_back(Letter(c + off));
            for (auto& [w, c] : r.rhs) {
                Word v;
                for (Letter x : w) v.push_back(Letter(x + off));
                s.rhs.emplace_back(v, c);
            }
            t->rules_.push_back(std::move(s));
        }
        off += flat[k]->num_generators();
    }
    if (off > 250) throw std::invalid_argument("tensor product has too many generators");
    for (int b = 0; b < off; ++b)
        for (int a = 0; a < b; ++a)
            if (t->factor_of_[a] < t->factor_of_[b])
                t->rules_.push_back({Word{Letter(b), Letter(a)}, {{Word{Letter(a), Letter(b)}, Scalar(1)}}});
    t->index_rules();
    return t;
}

PresPtr Presentation::factor(int k) const {
    if (!is_tensor()) {
        if (k != 0) throw std::out_of_range("factor index");
        return shared_from_this();
    }
    return factors_.at(k);
}

std::optional<int> Presentation::index_of(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::vector<Word> Presentation::split(const Word& w) const {
    if (!is_tensor()) return {w};
    std::vector<Word> parts(factors_.size());
    for (Letter c : w) {
        int k = factor_of_[c];
        parts[k].push_back(Letter(c - offsets_[k]));
    }
    return parts;
}

Word Presentation::combine(const std::vector<Word>& parts) const {
    if (!is_tensor()) return parts.at(0);
    Word w;
    for (size_t k = 0; k < parts.size(); ++k)
        for (Letter c : parts[k]) w.push_back(Letter(c + offsets_[k]));
    return w;
}

// ---------------------------------------------------------------- rewriting

Terms Presentation::nf_append(const Word& x, Letter g, long& steps) const {
    Word w = x;
    w.push_back(g);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
    }
    const Rule* hit = nullptr;
    for (int ri : by_last_[g]) {
        const Word& l = rules_[ri].lhs;
        if (l.size() <= w.size() && w.compare(w.size() - l.size(), l.size(), l) == 0) {
            hit = &rules_[ri];
            break;
        }
    }
    Terms result;
    if (hit == nullptr) {
        result = single(w);
    } else {
        if (++steps > step_budget_)
            throw NonTermination("rewriting step budget exceeded while reducing " + word_str(w));
        Word u = w.substr(0, w.size() - hit->lhs.size());
        for (auto& [rw, c] : hit->rhs) {
            Terms part = single(u, c);
            nf_concat(part, rw, steps);
            for (auto& [v, d] : part) add_into(result, v, d);
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(w, result);
    return result;
}

void Presentation::nf_concat(Terms& acc, const Word& r, long& steps) const {
    for (Letter g : r) {
        Terms next;
        for (auto& [w, c] : acc) {
            Terms a = nf_append(w, g, steps);
            for (auto& [v, d] : a) add_into(next, v, c * d);
        }
        acc.swap(next);
    }
}

Terms Presentation::nf_raw(const Word& raw, long& steps) const {
    Terms acc = single(Word());
    nf_concat(acc, raw, steps);
    return acc;
}

Terms Presentation::normal_form(const Word& raw) const {
    long steps = 0;
    return nf_raw(raw, steps);
}

Terms Presentation::multiply_words(const Word& a, const Word& b) const {
    if (b.empty()) return single(a);
    if (a.empty()) return single(b);
    if (!is_tensor()) {
        long steps = 0;
        Terms acc = single(a);
        nf_concat(acc, b, steps);
        return acc;
    }
    auto pa = split(a), pb = split(b);
    std::vector<Terms> per(factors_.size());
    for (size_t k = 0; k < factors_.size(); ++k) per[k] = factors_[k]->multiply_words(pa[k], pb[k]);
    Terms out;
    std::vector<Word> parts(factors_.size());
    std::function<void(size_t, const Scalar&)> rec = [&](size_t k, const Scalar& c) {
        if (k == per.size()) {
            add_into(out, combine(parts), c);
            return;
        }
        for (auto& [w, d] : per[k]) {
            parts[k] = w;
            rec(k + 1, c * d);
        }
    };
    rec(0, Scalar(1));
    return out;
}

bool Presentation::is_irreducible(const Word& w) const {
    for (size_t end = 1; end <= w.size(); ++end)
        for (int ri : by_last_[w[end - 1]]) {
            const Word& l = rules_[ri].lhs;
            if (l.size() <= end && w.compare(end - l.size(), l.size(), l) == 0) return false;
        }
    return true;
}

std::vector<std::vector<Word>> Presentation::irreducible_words(int max_degree, size_t max_words) const {
    std::vector<std::vector<Word>> levels;
    levels.push_back({Word()});
    size_t total = 1;
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<Word> next;
        for (auto& x : levels.back())
            for (int g = 0; g < num_generators(); ++g) {
                Word w = x;
                w.push_back(Letter(g));
                bool ok = true;
                for (int ri : by_last_[g]) {
                    const Word& l = rules_[ri].lhs;
                    if (l.size() <= w.size() && w.compare(w.size() - l.size(), l.size(), l) == 0) {
                        ok = false;
                        break;
                    }
                }
                if (ok) next.push_back(std::move(w));
            }
        if (next.empty()) break;
        total += next.size();
        levels.push_back(std::move(next));
        if (max_words && total > max_words) break;
    }
    return levels;
}

std::optional<std::vector<Word>> Presentation::finite_basis(int max_degree) const {
    constexpr size_t kCap = 20000;
    auto levels = irreducible_words(max_degree + 1, kCap);
    size_t total = 0;
    for (auto& l : levels) total += l.size();
    if (static_cast<int>(levels.size()) > max_degree + 1 || total > kCap) return std::nullopt;
    std::vector<Word> basis;
    for (auto& l : levels)
        for (auto& w : l) basis.push_back(w);
    return basis;
}

ConfluenceReport Presentation::check_local_confluence(int overlap_bound) const {
    ConfluenceReport rep;
    auto reduce_sum = [&](const std::vector<std::pair<Word, Scalar>>& terms) {
        Terms acc;
        long steps = 0;
        for (auto& [w, c] : terms) {
            Terms t = nf_raw(w, steps);
            for (auto& [v, d] : t) add_into(acc, v, c * d);
        }
        return acc;
    };
    auto with_context = [](const Word& pre, const std::vector<std::pair<Word, Scalar>>& rhs, const Word& post) {
        std::vector<std::pair<Word, Scalar>> out;
        for (auto& [w, c] : rhs) out.emplace_back(pre + w + post, c);
        return out;
    };
    auto record = [&](const Word& w, const Terms& a, const Terms& b) {
        ++rep.pairs_checked;
        if (a != b) {
            rep.ok = false;
            rep.failures.push_back("overlap " + word_str(w) + ": " + NCElement(shared_from_this(), a).str() +
                                   " != " + NCElement(shared_from_this(), b).str());
        }
    };
    for (size_t i = 0; i < rules_.size(); ++i)
        for (size_t j = 0; j < rules_.size(); ++j) {
            const Word& li = rules_[i].lhs;
            const Word& lj = rules_[j].lhs;
            // proper overlaps: suffix of li == prefix of lj
            for (size_t k = 1; k < li.size() && k < lj.size(); ++k) {
                if (li.compare(li.size() - k, k, lj, 0, k) != 0) continue;
                Word w = li + lj.substr(k);
                if (overlap_bound > 0 && static_cast<int>(w.size()) > overlap_bound) continue;
                Terms a = reduce_sum(with_context(Word(), rules_[i].rhs, lj.substr(k)));
                Terms b = reduce_sum(with_context(li.substr(0, li.size() - k), rules_[j].rhs, Word()));
                record(w, a, b);
            }
            // inclusions: lj inside li
            if (i != j && lj.size() <= li.size()) {
                for (size_t p = 0; p + lj.size() <= li.size(); ++p) {
                    if (li.compare(p, lj.size(), lj) != 0) continue;
                    if (overlap_bound > 0 && static_cast<int>(li.size()) > overlap_bound) continue;
                    Terms a = reduce_sum(rules_[i].rhs);
                    Terms b = reduce_sum(with_context(li.substr(0, p), rules_[j].rhs, li.substr(p + lj.size())));
                    record(li, a, b);
                }
            }
        }
    return rep;
}

// ---------------------------------------------------------------- printing / parsing

std::string Presentation::word_str(const Word& w) const {
    if (w.empty()) return "1";
    if (is_tensor()) {
        auto parts = split(w);
        std::string s;
        for (size_t k = 0; k < parts.size(); ++k) {
            if (k) s += " ⊗ ";
            s += factors_[k]->word_str(parts[k]);
        }
        return s;
    }
    std::string s;
    for (size_t i = 0; i < w.size();) {
        size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        size_t e = j - i;
        const std::string& n = names_[w[i]];
        if (!s.empty()) s += "*";
        bool inv_name = n.size() > 3 && n.compare(n.size() - 3, 3, "^-1") == 0;
        if (e == 1) s += n;
        else if (inv_name) s += n.substr(0, n.size() - 3) + "^-" + std::to_string(e);
        else s += n + "^" + std::to_string(e);
        i = j;
    }
    return s;
}

Word Presentation::parse_word(const std::string& text) const {
    NCElement e = parse_element(shared_from_this(), text);
    if (e.terms().size() != 1 || e.terms().begin()->second != Scalar(1))
        throw ParseError("'" + text + "' is not a single word");
    return e.terms().begin()->first;
}

// ---------------------------------------------------------------- elements

NCElement::NCElement(PresPtr p, const Scalar& c) : p_(std::move(p)) {
    if (!c.is_zero()) t_.emplace(Word(), c);
}
NCElement::NCElement(PresPtr p, Terms t) : p_(std::move(p)), t_(std::move(t)) {}

NCElement NCElement::gen(PresPtr p, int g) {
    auto nf = p->normal_form(Word{Letter(g)});
    return NCElement(std::move(p), nf);
}

NCElement NCElement::gen(PresPtr p, const std::string& name) {
    auto i = p->index_of(name);
    if (!i) throw std::invalid_argument("unknown generator '" + name + "'");
    return gen(std::move(p), *i);
}

NCElement NCElement::word(PresPtr p, const Word& raw) {
    auto nf = p->normal_form(raw);
    return NCElement(std::move(p), nf);
}

bool NCElement::is_scalar() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }
Scalar NCElement::scalar_part() const { return coeff(Word()); }
Scalar NCElement::coeff(const Word& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? Scalar(0) : it->second;
}
int NCElement::degree() const { return t_.empty() ? -1 : static_cast<int>(t_.rbegin()->first.size()); }

void NCElement::add_term(const Word& w, const Scalar& c) { add_into(t_, w, c); }

NCElement NCElement::operator-() const {
    NCElement r = *this;
    for (auto& [w, c] : r.t_) c = -c;
    return r;
}
NCElement& NCElement::operator+=(const NCElement& o) {
    if (!p_) p_ = o.p_;
    for (auto& [w, c] : o.t_) add_term(w, c);
    return *this;
}
NCElement& NCElement::operator-=(const NCElement& o) {
    if (!p_) p_ = o.p_;
    for (auto& [w, c] : o.t_) add_term(w, -c);
    return *this;
}

NCElement operator*(const NCElement& a, const NCElement& b) {
    PresPtr p = a.p_ ? a.p_ : b.p_;
    if (a.p_ && b.p_ && a.p_ != b.p_) throw std::invalid_argument("product of elements of different algebras");
    NCElement r(p);
    for (auto& [w1, c1] : a.t_)
        for (auto& [w2, c2] : b.t_) {
            Scalar c = c1 * c2;
            if (w1.empty() || w2.empty()) {
                r.add_term(w1 + w2, c);
                continue;
            }
            for (auto& [v, d] : p->multiply_words(w1, w2)) r.add_term(v, c * d);
        }
    return r;
}

NCElement operator*(const Scalar& c, const NCElement& a) {
    NCElement r(a.p_);
    if (c.is_zero()) return r;
    for (auto& [w, d] : a.t_) r.t_.emplace(w, c * d);
    return r;
}

NCElement NCElement::pow(int e) const {
    if (e < 0) {
        auto inv = try_inverse(*this);
        if (!inv) throw std::domain_error("element " + str() + " is not invertible");
        return inv->pow(-e);
    }
    NCElement r(p_, Scalar(1)), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::string NCElement::str() const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [w, c] = *it;
        std::string term;
        if (w.empty()) {
            term = c.str();
            if (term.find(' ') != std::string::npos && !first) term = "(" + term + ")";
        } else {
            term = coeff_prefix(c) + p_->word_str(w);
        }
        if (first) {
            s = term;
            first = false;
        } else if (term[0] == '-') {
            s += " - " + term.substr(1);
        } else {
            s += " + " + term;
        }
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const NCElement& x) { return os << x.str(); }

NCElement parse_element(const PresPtr& p, const std::string& text) {
    ExprRules<NCElement> rules;
    std::vector<std::pair<std::string, std::function<NCElement()>>> names;
    for (int g = 0; g < p->num_generators(); ++g) {
        const std::string& n = p->name(g);
        if (n.find('^') != std::string::npos) continue;  // inverses are written g^-1
        names.emplace_back(n, [p, g] { return NCElement::gen(p, g); });
    }
    auto scalar = [p](const Scalar& c) { return NCElement(p, c); };
    for (auto& [n, v] : p->params()) names.emplace_back(n, [=] { return scalar(v); });
    names.emplace_back("q", [=] { return scalar(p->field().q()); });
    if (p->field().kind() == FieldKind::Cyclotomic) names.emplace_back("zeta", [=] { return scalar(p->field().q()); });
    std::sort(names.begin(), names.end(), [](auto& a, auto& b) { return a.first.size() > b.first.size(); });

    rules.number = [=](const Rational& r) { return scalar(Scalar(r)); };
    rules.ident = [=](const std::string& id) -> std::optional<NCElement> {
        NCElement acc(p, Scalar(1));
        size_t i = 0;
        while (i < id.size()) {
            bool found = false;
            for (auto& [n, mk] : names) {
                if (id.compare(i, n.size(), n) == 0) {
                    acc = acc * mk();
                    i += n.size();
                    found = true;
                    break;
                }
            }
            if (!found) return std::nullopt;
        }
        return acc;
    };
    rules.divide = [](const NCElement& a, const NCElement& b) {
        if (!b.is_scalar() || b.is_zero()) throw ParseError("division by a non-scalar element");
        return b.scalar_part().inv() * a;
    };
    rules.power = [p](const NCElement& a, long e) {
        if (e >= 0) return a.pow(static_cast<int>(e));
        if (a.is_scalar()) return NCElement(p, a.scalar_part().pow(e));
        if (a.terms().size() == 1) {
            const auto& [w, c] = *a.terms().begin();
            if (w.size() == 1 && p->inverse_of(w[0]) >= 0)
                return (c.inv() * NCElement::gen(p, p->inverse_of(w[0]))).pow(static_cast<int>(-e));
        }
        return a.pow(static_cast<int>(e));
    };
    return parse_expr(text, rules);
}

namespace {

// Split at top-level occurrences of separators; returns pieces and the sign before each summand.
std::vector<std::pair<int, std::string>> split_summands(const std::string& s) {
    std::vector<std::pair<int, std::string>> out;
    int depth = 0, sign = 1;
    std::string cur;
    auto flush = [&] {
        bool blank = cur.find_first_not_of(" \t") == std::string::npos;
        if (!blank) out.emplace_back(sign, cur);
        cur.clear();
    };
    char prev = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == '+' || c == '-') && prev != '^' && prev != '*' && prev != '/') {
            bool blank = cur.find_first_not_of(" \t") == std::string::npos;
            if (blank) {
                if (c == '-') sign = -sign;
            } else {
                flush();
                sign = c == '-' ? -1 : 1;
            }
        } else {
            cur.push_back(c);
        }
        if (c != ' ') prev = c;
    }
    flush();
    return out;
}

std::vector<std::string> split_tensor(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    const std::string otimes = "⊗";
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && c == '@') {
            parts.push_back(cur);
            cur.clear();
        } else if (depth == 0 && s.compare(i, otimes.size(), otimes) == 0) {
            parts.push_back(cur);
            cur.clear();
            i += otimes.size() - 1;
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace

NCElement parse_tensor_element(const PresPtr& p, const std::string& text) {
    NCElement acc(p);
    for (auto& [sign, summand] : split_summands(text)) {
        auto parts = split_tensor(summand);
        if (static_cast<int>(parts.size()) != p->num_factors())
            throw ParseError("summand '" + summand + "' does not have " + std::to_string(p->num_factors()) +
                             " tensor factors");
        std::vector<NCElement> xs;
        for (int k = 0; k < p->num_factors(); ++k) xs.push_back(parse_element(p->factor(k), parts[k]));
        NCElement t = tensor_of(p, xs);
        if (sign < 0) acc -= t;
        else acc += t;
    }
    return acc;
}

NCElement embed(const NCElement& x, const PresPtr& t, int k) {
    const PresPtr& s = x.pres();
    std::vector<int> map;
    for (int j = 0; j < s->num_factors(); ++j) map.push_back(k + j);
    Terms out;
    for (auto& [w, c] : x.terms()) {
        auto parts = s->split(w);
        std::vector<Word> tp(t->num_factors());
        for (size_t j = 0; j < parts.size(); ++j) tp[map[j]] = parts[j];
        add_into(out, t->combine(tp), c);
    }
    return NCElement(t, out);
}

NCElement tensor_of(const PresPtr& t, const std::vector<NCElement>& xs) {
    if (static_cast<int>(xs.size()) != t->num_factors()) throw std::invalid_argument("tensor_of arity");
    Terms out;
    std::vector<Word> parts(xs.size());
    std::function<void(size_t, const Scalar&)> rec = [&](size_t k, const Scalar& c) {
        if (k == xs.size()) {
            add_into(out, t->combine(parts), c);
            return;
        }
        for (auto& [w, d] : xs[k].terms()) {
            parts[k] = w;
            rec(k + 1, c * d);
        }
    };
    rec(0, Scalar(1));
    return NCElement(t, out);
}

NCElement apply_to_word(const Word& w, const std::vector<NCElement>& images, const PresPtr& target, bool anti) {
    NCElement acc(target, Scalar(1));
    if (anti)
        for (auto it = w.rbegin(); it != w.rend(); ++it) acc = acc * images.at(*it);
    else
        for (Letter g : w) acc = acc * images.at(g);
    return acc;
}

NCElement apply_generator_map(const NCElement& x, const std::vector<NCElement>& images, const PresPtr& target,
                              bool anti) {
    std::unordered_map<Word, NCElement, WordHash> memo;
    std::function<const NCElement&(const Word&)> img = [&](const Word& w) -> const NCElement& {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        NCElement v(target, Scalar(1));
        if (!w.empty()) {
            Word pre = w.substr(0, w.size() - 1);
            const NCElement& a = img(pre);
            const NCElement& g = images.at(w.back());
            v = anti ? g * a : a * g;
        }
        return memo.emplace(w, std::move(v)).first->second;
    };
    NCElement out(target);
    for (auto& [w, c] : x.terms()) out += c * img(w);
    return out;
}

MorphismReport check_morphism(const PresPtr& source, const std::vector<NCElement>& images, const PresPtr& target,
                              bool anti) {
    MorphismReport rep;
    for (auto& r : source->rules()) {
        NCElement v = apply_to_word(r.lhs, images, target, anti);
        for (auto& [w, c] : r.rhs) v -= c * apply_to_word(w, images, target, anti);
        if (!v.is_zero()) {
            rep.ok = false;
            Terms rt;
            for (auto& [w, c] : r.rhs) add_into(rt, w, c);
            rep.violations.push_back(source->word_str(r.lhs) + " = " + NCElement(source, rt).str() +
                                     " maps to nonzero " + v.str());
        }
    }
    return rep;
}

std::optional<NCElement> try_inverse(const NCElement& x) {
    const PresPtr& p = x.pres();
    if (x.is_zero()) return std::nullopt;
    if (x.terms().size() == 1) {
        const auto& [w, c] = *x.terms().begin();
        bool ok = true;
        Word inv;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            int g = p->inverse_of(*it);
            if (g < 0) {
                ok = false;
                break;
            }
            inv.push_back(Letter(g));
        }
        if (ok) return c.inv() * NCElement::word(p, inv);
    }
    auto basis = p->finite_basis(32);
    if (!basis) return std::nullopt;
    int n = static_cast<int>(basis->size());
    std::map<Word, int, DegLex> pos;
    for (int i = 0; i < n; ++i) pos[(*basis)[i]] = i;
    Mat<Scalar> m(n, n);
    for (int j = 0; j < n; ++j) {
        NCElement prod = x * NCElement(p, single((*basis)[j]));
        for (auto& [w, c] : prod.terms()) m(pos.at(w), j) = c;
    }
    std::vector<Scalar> rhs(n, Scalar(0)), sol;
    rhs[pos.at(Word())] = Scalar(1);
    if (!m.solve(rhs, sol)) return std::nullopt;
    Terms t;
    for (int i = 0; i < n; ++i)
        if (!sol[i].is_zero()) t.emplace((*basis)[i], sol[i]);
    NCElement y(p, t);
    if (y * x != NCElement(p, Scalar(1)) || x * y != NCElement(p, Scalar(1))) return std::nullopt;
    return y;
}

}  // namespace qsi
