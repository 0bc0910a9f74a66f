#pragma once
// Hopf algebra structure on a presentation: coproduct, counit and antipode
// given on generators and extended (anti-)multiplicatively, with
// degree-bounded verification of the axioms.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsi/ncalg.hpp"
#include "qsi/report.hpp"

namespace qsi {

using HopfReport = Report;

class HopfPresentation;
using HopfPtr = std::shared_ptr<const HopfPresentation>;

class HopfPresentation {
public:
    // Entries for a formal inverse generator may be left empty (null presentation);
    // they are then derived from the entry of the generator it inverts.
    static HopfPtr make(std::string name, PresPtr algebra, std::vector<NCElement> coproduct,
                        std::vector<Scalar> counit, std::vector<NCElement> antipode);
    // Generator name -> text; "a ⊗ b" (or "a @ b") for coproducts.
    static HopfPtr from_text(std::string name, PresPtr algebra, const std::map<std::string, std::string>& coproduct,
                             const std::map<std::string, std::string>& counit,
                             const std::map<std::string, std::string>& antipode);

    const std::string& name() const { return name_; }
    const PresPtr& algebra() const { return alg_; }
    const PresPtr& square() const { return alg2_; }
    const PresPtr& cube() const { return alg3_; }
    const NCElement& coproduct_of(int g) const { return delta_[g]; }
    const Scalar& counit_of(int g) const { return eps_[g]; }
    const NCElement& antipode_of(int g) const { return S_[g]; }

    NCElement coproduct(const NCElement& x) const;
    Scalar counit(const NCElement& x) const;
    NCElement antipode(const NCElement& x) const;
    NCElement coproduct_word(const Word& w) const;
    Scalar counit_word(const Word& w) const;
    NCElement antipode_word(const Word& w) const;

    // Well-definedness of the coproduct, counit and antipode on the defining relations.
    HopfReport verify_bialgebra() const;
    // Coassociativity, counit and antipode laws on normal-form monomials of degree <= bound
    // (the whole basis when the algebra is finite-dimensional).
    HopfReport verify_hopf_axioms(int degree_bound = 4) const;
    std::vector<Word> test_monomials(int degree_bound) const;

private:
    HopfPresentation() = default;
    std::string name_;
    PresPtr alg_, alg2_, alg3_;
    std::vector<NCElement> delta_;
    std::vector<Scalar> eps_;
    std::vector<NCElement> S_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Word, NCElement, WordHash> delta_cache_, s_cache_;
};

// Built-in Hopf algebras.
HopfPtr builtin_Hq(const Field& f);                 // s, s^-1, t with t s = q s t
HopfPtr builtin_GHq(const Field& f);                // u, u^-1, v with v u = q^-1 u v
HopfPtr builtin_taft(const Field& f, int n);        // s, t with s^n = 1, t^n = 0; q primitive n-th root
HopfPtr builtin_frakH(const Field& f);              // e, e^-1, f, g; the dual generated by the 2-dim module
HopfPtr galois_group_rank3(const Field& f);          // e, e^-1, f, g; group of the rank 3 example
HopfPtr galois_group_param(const Field& f, const Scalar& l);  // e, e^-1, h, h^-1, g
HopfPtr builtin_hopf(const std::string& name, const Field& f, const Scalar& l = Scalar(2));

// The basis v_{m,n} = s^m t^n / [n]_q! of the quantum plane Hopf algebra.
struct VIndex {
    int m = 0;
    int n = 0;
    bool operator==(const VIndex& o) const { return m == o.m && n == o.n; }
};
NCElement hq_v_basis(const HopfPtr& hq, int m, int n);
// Sum over i + j = n of v_{m+j,i} ⊗ v_{m,j}.
NCElement hq_coproduct_v(const HopfPtr& hq, int m, int n);
// S(v_{m,n}) = c * v_{-(m+n), n}.
std::pair<Scalar, VIndex> hq_antipode_v(const Field& f, int m, int n);

}  // namespace qsi
