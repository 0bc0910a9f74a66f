#include "qsi/scalar.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include "qsi/expr_parser.hpp"

namespace qsi {

struct FieldData {
    FieldKind kind;
    Rational q;   // rationals
    int n = 0;    // cyclotomic order
    QPoly modulus;
    std::optional<int> rou;
};

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}
std::vector<std::unique_ptr<FieldData>>& registry() {
    static std::vector<std::unique_ptr<FieldData>> r;
    return r;
}

const FieldData* intern(FieldKind kind, const Rational& q, int n) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    for (auto& d : registry())
        if (d->kind == kind && d->q == q && d->n == n) return d.get();
    auto d = std::make_unique<FieldData>();
    d->kind = kind;
    d->q = q;
    d->n = n;
    if (kind == FieldKind::Cyclotomic) {
        d->modulus = cyclotomic_poly(n);
        d->rou = n;
    } else if (kind == FieldKind::Rationals) {
        if (q == 1) d->rou = 1;
        else if (q == -1) d->rou = 2;
    }
    registry().push_back(std::move(d));
    return registry().back().get();
}

std::string rat_str(const Rational& r) { return r.get_str(); }

std::string poly_str(const QPoly& p, const std::string& var) {
    if (p.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        Rational c = p.coeff(i);
        if (is_zero(c)) continue;
        bool neg = sgn(c) < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first) os << (neg ? "-" : "");
        else os << (neg ? " - " : " + ");
        first = false;
        std::string mono;
        if (i == 1) mono = var;
        else if (i > 1) mono = var + "^" + std::to_string(i);
        if (mono.empty()) os << rat_str(a);
        else if (a == 1) os << mono;
        else os << rat_str(a) << "*" << mono;
    }
    return os.str();
}

int term_count(const QPoly& p) {
    int k = 0;
    for (auto& c : p.coeffs())
        if (!is_zero(c)) ++k;
    return k;
}

}  // namespace

QPoly cyclotomic_poly(int n) {
    static std::mutex m;
    static std::map<int, QPoly> cache;
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    if (n < 1) throw std::invalid_argument("cyclotomic order must be positive");
    QPoly p = QPoly::monomial(Rational(1), n) - QPoly(Rational(1));
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = p / cyclotomic_poly(d);
    std::lock_guard<std::mutex> lock(m);
    cache[n] = p;
    return p;
}

// ---- Field ----

Field::Field() : d_(intern(FieldKind::Rationals, Rational(1), 0)) {}
Field Field::rationals(const Rational& q) {
    if (is_zero(q)) throw std::invalid_argument("q must be nonzero");
    return Field(intern(FieldKind::Rationals, q, 0));
}
Field Field::cyclotomic(int n) { return Field(intern(FieldKind::Cyclotomic, Rational(0), n)); }
Field Field::rational_functions() { return Field(intern(FieldKind::RationalFunctions, Rational(0), 0)); }

Field Field::from_descriptor(const std::string& desc) {
    if (desc == "indeterminate") return rational_functions();
    for (std::string prefix : {"root_of_unity:", "cyclotomic:", "zeta"}) {
        if (desc.rfind(prefix, 0) == 0) return cyclotomic(std::stoi(desc.substr(prefix.size())));
    }
    Rational q;
    try {
        q = Rational(desc);
        q.canonicalize();
    } catch (const std::exception&) {
        throw std::invalid_argument("bad field descriptor '" + desc + "'");
    }
    return rationals(q);
}

FieldKind Field::kind() const { return d_->kind; }
int Field::cyclotomic_order() const { return d_->n; }
const Rational& Field::q_rational() const { return d_->q; }
std::optional<int> Field::root_of_unity_order() const { return d_->rou; }

Scalar Field::q() const {
    switch (d_->kind) {
    case FieldKind::Rationals: return Scalar(d_->q);
    default: return Scalar::make(*this, QPoly::x());
    }
}

std::string Field::describe() const {
    switch (d_->kind) {
    case FieldKind::Rationals: return "q=" + rat_str(d_->q);
    case FieldKind::Cyclotomic: return "q=zeta" + std::to_string(d_->n);
    default: return "q=indeterminate";
    }
}

// ---- Scalar ----

Scalar Scalar::make(const Field& f, const QPoly& num, const QPoly& den) {
    Scalar s;
    s.num_ = num;
    s.den_ = den;
    if (f.kind() == FieldKind::Rationals) {
        if (!num.is_constant() || !den.is_constant()) throw std::invalid_argument("non-constant rational scalar");
        s.f_ = nullptr;
    } else {
        s.f_ = f.data();
    }
    s.canonicalize();
    return s;
}

void Scalar::canonicalize() {
    if (den_.zero()) throw std::domain_error("division by zero");
    if (f_ == nullptr) {
        if (!den_.is_constant()) throw std::logic_error("fieldless scalar with polynomial denominator");
        if (den_.coeff(0) != 1) {
            num_ = num_.scaled(Rational(1) / den_.coeff(0));
            den_ = QPoly(Rational(1));
        }
        return;
    }
    if (f_->kind == FieldKind::Cyclotomic) {
        if (!den_.is_constant()) {
            auto [g, s] = QPoly::inverse_mod(den_, f_->modulus);
            if (g != QPoly(Rational(1))) throw std::domain_error("division by zero in cyclotomic field");
            num_ = num_ * s;
        } else {
            num_ = num_.scaled(Rational(1) / den_.coeff(0));
        }
        den_ = QPoly(Rational(1));
        num_ = num_ % f_->modulus;
    } else {
        if (num_.zero()) {
            den_ = QPoly(Rational(1));
        } else {
            QPoly g = QPoly::gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
            Rational lc = den_.lead();
            if (lc != 1) {
                num_ = num_.scaled(Rational(1) / lc);
                den_ = den_.monic();
            }
        }
    }
    if (num_.is_constant() && den_ == QPoly(Rational(1))) f_ = nullptr;
}

const FieldData* Scalar::common(const Scalar& a, const Scalar& b) {
    if (a.f_ == nullptr) return b.f_;
    if (b.f_ == nullptr || a.f_ == b.f_) return a.f_;
    throw std::invalid_argument("scalars from different fields");
}

Rational Scalar::to_rational() const {
    if (f_ != nullptr) throw std::logic_error("scalar " + str() + " is not rational");
    return num_.coeff(0);
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    const FieldData* f = common(*this, o);
    if (f == nullptr) {
        num_ = QPoly(num_.coeff(0) + o.num_.coeff(0));
        return *this;
    }
    if (f->kind == FieldKind::Cyclotomic) {
        num_ += o.num_;
    } else if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    f_ = f;
    canonicalize();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
    const FieldData* f = common(*this, o);
    if (f == nullptr) {
        num_ = QPoly(num_.coeff(0) * o.num_.coeff(0));
        return *this;
    }
    if (o.f_ == nullptr) {
        num_ = num_.scaled(o.num_.coeff(0));
        if (num_.zero()) { f_ = f; canonicalize(); }
        return *this;
    }
    if (f_ == nullptr) {
        Rational c = num_.coeff(0);
        *this = o;
        num_ = num_.scaled(c);
        canonicalize();
        return *this;
    }
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
    f_ = f;
    canonicalize();
    return *this;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (f_ == nullptr) return Scalar(Rational(1) / num_.coeff(0));
    Scalar r;
    r.f_ = f_;
    r.num_ = den_;
    r.den_ = num_;
    r.canonicalize();
    return r;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inv(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    Scalar result(1), base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

std::string Scalar::str() const {
    if (f_ == nullptr) return rat_str(num_.coeff(0));
    std::string var = f_->kind == FieldKind::Cyclotomic ? "zeta" : "q";
    std::string n = poly_str(num_, var);
    if (den_ == QPoly(Rational(1))) return n;
    if (term_count(num_) > 1) n = "(" + n + ")";
    std::string d = poly_str(den_, var);
    bool bare = term_count(den_) == 1 && den_.lead() == 1;
    if (!bare) d = "(" + d + ")";
    return n + "/" + d;
}

size_t Scalar::hash() const {
    size_t h = std::hash<const void*>()(f_);
    auto mix = [&](const QPoly& p) {
        for (auto& c : p.coeffs()) h = h * 1000003u ^ std::hash<std::string>()(c.get_str());
    };
    mix(num_);
    mix(den_);
    return h;
}

Scalar parse_scalar(const std::string& text, const Field& f, const std::map<std::string, Scalar>& extra) {
    ExprRules<Scalar> rules;
    rules.number = [](const Rational& r) { return Scalar(r); };
    rules.ident = [&](const std::string& id) -> std::optional<Scalar> {
        auto it = extra.find(id);
        if (it != extra.end()) return it->second;
        if (id == "q") return f.q();
        if (id == "zeta" && f.kind() == FieldKind::Cyclotomic) return f.q();
        return std::nullopt;
    };
    rules.divide = [](const Scalar& a, const Scalar& b) { return a / b; };
    rules.power = [](const Scalar& a, long e) { return a.pow(e); };
    return parse_expr(text, rules);
}

// ---- q-combinatorics ----

Scalar q_integer(int n, const Field& f) {
    Scalar q = f.q(), acc(0), p(1);
    for (int i = 0; i < n; ++i) {
        acc += p;
        p *= q;
    }
    return acc;
}

Scalar q_factorial(int n, const Field& f) {
    Scalar r(1);
    for (int i = 1; i <= n; ++i) r *= q_integer(i, f);
    return r;
}

QPoly gaussian_binomial_poly(int m, int n) {
    if (n < 0 || m < 0 || n > m) return QPoly();
    static std::mutex mu;
    static std::vector<std::vector<QPoly>> table;  // table[m][n]
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= m) {
        int r = static_cast<int>(table.size());
        std::vector<QPoly> row(r + 1);
        row[0] = QPoly(Rational(1));
        row[r] = QPoly(Rational(1));
        for (int k = 1; k < r; ++k)
            row[k] = table[r - 1][k - 1] + QPoly::monomial(Rational(1), k) * table[r - 1][k];
        table.push_back(std::move(row));
    }
    return table[m][n];
}

Scalar q_binomial(int m, int n, const Field& f) {
    if (n < 0 || n > m) return Scalar(0);
    return gaussian_binomial_poly(m, n).eval<Scalar>(f.q());
}

std::optional<int> is_root_of_unity(const Field& f) { return f.root_of_unity_order(); }

bool q_pascal_identity_check(int m, int l, const Field& f) {
    if (l < 1 || l > m) throw std::invalid_argument("q-Pascal check needs 1 <= l <= m");
    Scalar q = f.q();
    Scalar lhs = q.pow(l) * q_binomial(m, l, f) + q_binomial(m, l - 1, f);
    Scalar rhs = q_binomial(m, l, f) + q.pow(m - l + 1) * q_binomial(m, l - 1, f);
    return lhs == rhs;
}

}  // namespace qsi
