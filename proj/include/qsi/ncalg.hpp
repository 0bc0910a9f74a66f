#pragma once
// Finitely presented noncommutative algebras given by a terminating rewriting
// system on words (degree-lexicographic order), and their elements.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsi/scalar.hpp"

namespace qsi {

using Letter = uint8_t;
using Word = std::basic_string<Letter>;

struct DegLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

struct WordHash {
    size_t operator()(const Word& w) const {
        size_t h = 1469598103934665603ull;
        for (Letter c : w) h = (h ^ c) * 1099511628211ull;
        return h;
    }
};

using Terms = std::map<Word, Scalar, DegLex>;

struct Rule {
    Word lhs;
    std::vector<std::pair<Word, Scalar>> rhs;
};

struct ConfluenceReport {
    bool ok = true;
    int pairs_checked = 0;
    std::vector<std::string> failures;
};

struct NonTermination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Presentation;
using PresPtr = std::shared_ptr<const Presentation>;

struct PresentationSpec {
    std::vector<std::string> generators;  // declared order = normal-form order
    std::vector<std::pair<std::string, std::string>> inverses;  // (g, g^-1), both listed above
    std::vector<std::pair<std::string, std::string>> rules;     // textual lhs -> rhs
    std::map<std::string, Scalar> params;  // extra scalar names usable in rules
};

struct BuildOptions {
    bool check_confluence = true;
    int overlap_bound = 0;  // 0: every critical pair
    long step_budget = 1000000;
};

class Presentation : public std::enable_shared_from_this<Presentation> {
public:
    static PresPtr build(const Field& f, const PresentationSpec& spec, const BuildOptions& opt = {});
    static PresPtr from_rules(const Field& f, std::vector<std::string> names, std::vector<int> inverse,
                              std::vector<Rule> rules, const BuildOptions& opt = {});
    // Flat tensor product; generators of later factors commute past earlier ones.
    static PresPtr tensor(const std::vector<PresPtr>& factors);
    static PresPtr ground(const Field& f);  // C, no generators

    const Field& field() const { return field_; }
    int num_generators() const { return static_cast<int>(names_.size()); }
    const std::string& name(int g) const { return names_[g]; }
    std::optional<int> index_of(const std::string& name) const;
    int inverse_of(int g) const { return inverse_[g]; }
    const std::vector<Rule>& rules() const { return rules_; }
    const std::map<std::string, Scalar>& params() const { return params_; }
    long step_budget() const { return step_budget_; }

    // tensor structure (a plain presentation is a single factor of itself)
    bool is_tensor() const { return !factors_.empty(); }
    int num_factors() const { return is_tensor() ? static_cast<int>(factors_.size()) : 1; }
    PresPtr factor(int k) const;
    int factor_offset(int k) const { return is_tensor() ? offsets_[k] : 0; }
    int factor_of(int g) const { return is_tensor() ? factor_of_[g] : 0; }
    std::vector<Word> split(const Word& w) const;
    Word combine(const std::vector<Word>& parts) const;

    Terms normal_form(const Word& raw) const;
    Terms multiply_words(const Word& a, const Word& b) const;  // both irreducible
    bool is_irreducible(const Word& w) const;
    // Irreducible words by degree, up to max_degree (stops early if none left, or once
    // more than max_words are listed when max_words is nonzero).
    std::vector<std::vector<Word>> irreducible_words(int max_degree, size_t max_words = 0) const;
    // Basis of normal-form words if the algebra is finite-dimensional (checked up to max_degree,
    // at most 20000 words).
    std::optional<std::vector<Word>> finite_basis(int max_degree = 64) const;

    ConfluenceReport check_local_confluence(int overlap_bound = 0) const;

    std::string word_str(const Word& w) const;
    Word parse_word(const std::string& text) const;

private:
    Presentation() = default;
    void index_rules();
    Terms nf_append(const Word& x, Letter g, long& steps) const;
    void nf_concat(Terms& acc, const Word& r, long& steps) const;
    Terms nf_raw(const Word& raw, long& steps) const;

    Field field_;
    std::vector<std::string> names_;
    std::vector<int> inverse_;
    std::vector<Rule> rules_;
    std::vector<std::vector<int>> by_last_;
    std::map<std::string, Scalar> params_;
    long step_budget_ = 1000000;

    std::vector<PresPtr> factors_;
    std::vector<int> offsets_;
    std::vector<int> factor_of_;

    mutable std::mutex mu_;
    mutable std::unordered_map<Word, Terms, WordHash> cache_;
};

class NCElement {
public:
    NCElement() = default;
    explicit NCElement(PresPtr p) : p_(std::move(p)) {}
    NCElement(PresPtr p, const Scalar& c);
    NCElement(PresPtr p, Terms t);  // terms must already be normal forms

    static NCElement gen(PresPtr p, int g);
    static NCElement gen(PresPtr p, const std::string& name);
    static NCElement word(PresPtr p, const Word& raw);  // normalizes

    const PresPtr& pres() const { return p_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_scalar() const;
    Scalar scalar_part() const;  // coefficient of the empty word
    Scalar coeff(const Word& w) const;
    int degree() const;

    NCElement operator-() const;
    NCElement& operator+=(const NCElement& o);
    NCElement& operator-=(const NCElement& o);
    friend NCElement operator+(NCElement a, const NCElement& b) { return a += b; }
    friend NCElement operator-(NCElement a, const NCElement& b) { return a -= b; }
    friend NCElement operator*(const NCElement& a, const NCElement& b);
    friend NCElement operator*(const Scalar& c, const NCElement& a);
    NCElement pow(int e) const;
    bool operator==(const NCElement& o) const { return t_ == o.t_; }
    bool operator!=(const NCElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    void add_term(const Word& w, const Scalar& c);
    PresPtr p_;
    Terms t_;
};

std::ostream& operator<<(std::ostream& os, const NCElement& x);

NCElement parse_element(const PresPtr& p, const std::string& text);
// Sum of "a ⊗ b ⊗ ..." summands in a tensor presentation (ASCII "@" also accepted).
NCElement parse_tensor_element(const PresPtr& p, const std::string& text);

// Place an element of factor k into the tensor presentation t.
NCElement embed(const NCElement& x, const PresPtr& t, int k);
// Pure tensor x_0 ⊗ x_1 ⊗ ... in t.
NCElement tensor_of(const PresPtr& t, const std::vector<NCElement>& xs);

// Multiplicative (or anti-multiplicative) extension of a generator map.
NCElement apply_to_word(const Word& w, const std::vector<NCElement>& images, const PresPtr& target,
                        bool anti = false);
NCElement apply_generator_map(const NCElement& x, const std::vector<NCElement>& images, const PresPtr& target,
                              bool anti = false);

struct MorphismReport {
    bool ok = true;
    std::vector<std::string> violations;
};
MorphismReport check_morphism(const PresPtr& source, const std::vector<NCElement>& images, const PresPtr& target,
                              bool anti = false);

// Inverse if x is a monomial in invertible generators or the algebra is finite-dimensional.
std::optional<NCElement> try_inverse(const NCElement& x);

}  // namespace qsi
