#pragma once
// Coefficient functionals of a qsi module and the Hopf algebra they generate
// inside the dual, with a presentation discovered by linear algebra.

#include <optional>
#include <string>
#include <vector>

#include "qsi/functional.hpp"
#include "qsi/hopf.hpp"
#include "qsi/qsimod.hpp"
#include "qsi/report.hpp"

namespace qsi {

using FMat = Mat<Functional>;

// <c_ij, v_{m,n}> = (A^m B^n / [n]_q!)_ij. Throws Refusal at a root of unity.
FMat coefficient_functionals(const QsiModuleSpec& m);
FMat antipode_matrix(const FMat& y);  // entrywise antipode
std::string fmat_str(const FMat& y, const SeqNaming& names);

// Finite-dimensional span of functionals with exact membership: sampled
// Gaussian elimination, every claimed dependency re-checked symbolically.
// Over Q(q) the elimination runs at a rational specialization of q (independence
// there implies independence over Q(q)); dependencies are then solved exactly
// on their support.
class FunctionalSpan {
public:
    FunctionalSpan(int max_n = 6, int half_width = 8);
    // Adds x if independent and returns nullopt; otherwise returns x in terms of the elements.
    std::optional<std::vector<Scalar>> insert(const Functional& x);
    std::optional<std::vector<Scalar>> express(const Functional& x) const;
    int size() const { return static_cast<int>(elems_.size()); }
    const std::vector<Functional>& elements() const { return elems_; }

private:
    struct Row {
        std::vector<Scalar> vec, comb;
        int pivot;
    };
    std::vector<Scalar> sample(const Functional& x) const;
    std::optional<std::vector<Scalar>> reduce(const Functional& x, std::vector<Scalar>& residual) const;
    void resample(const Functional& trigger);
    struct NumRow {
        std::vector<Rational> vec, comb;
        int pivot;
    };
    std::vector<Rational> numeric_sample(const Functional& x) const;
    std::optional<std::vector<Scalar>> numeric_express(const Functional& x) const;
    void numeric_insert(const Functional& x);
    int max_n_, half_width_;
    std::vector<Functional> elems_;
    std::vector<Row> rows_;
    std::optional<bool> numeric_;  // decided by the first element
    std::vector<NumRow> num_rows_;
};

struct CoreprOptions {
    int relation_degree = 2;  // relations are searched up to this word length
    int antipode_depth = 4;   // Y_0 .. Y_{depth-1}
    int axiom_degree = 3;     // Hopf axioms checked on monomials up to this degree
};

struct DiscoveredHopf {
    HopfPtr hopf;
    std::vector<Functional> witnesses;        // generator -> functional
    std::vector<std::string> relations;       // "lhs = rhs"
    std::vector<int> graded_presented;        // normal words by degree 0 .. relation_degree+1
    std::vector<int> graded_functional;       // independent images by degree
    bool complete = false;                    // graded dimensions agree
    int orbit_depth = 0;                      // Y_0 .. Y_{orbit_depth-1} were needed
    int relation_degree = 0;
    Report report;

    Functional witness(const NCElement& x) const;
    std::optional<NCElement> express(const Functional& x) const;
    std::vector<std::string> generator_names() const;

    std::vector<Functional> word_values_;     // functional of each basis word
    std::vector<Word> basis_words_;
    std::shared_ptr<FunctionalSpan> span_;    // spans word_values_ in order
};

DiscoveredHopf corepresentation_hopf(const QsiModuleSpec& m, const CoreprOptions& opt = {});

// rho(m_j) = sum_i m_i ⊗ c_ij; coassociativity and counit checked by evaluation.
struct Coaction {
    FMat coefficients;
    Report report;
};
Coaction comodule_structure(const QsiModuleSpec& m, int sample_bound = 3);
std::string coaction_str(const FMat& c, const std::vector<std::pair<std::string, Functional>>& names);

// m ⊗ x -> sum m_(0) ⊗ m_(1) x and its antipode-twisted inverse on m_i ⊗ w, w a normal word.
Report trivialization_iso(const QsiModuleSpec& m, const DiscoveredHopf& h, int word_bound = 3);

// alpha(n_j) = sum_i Sbar(c_ij) ⊗ n_i into the invariants of span(Sbar(c)) ⊗ N.
struct InvariantsReport {
    Report report;
    int invariant_dim = -1;
};
InvariantsReport invariants_functor(const QsiModuleSpec& n);
Report invariants_tensor_compatibility(const QsiModuleSpec& a, const QsiModuleSpec& b);

}  // namespace qsi
