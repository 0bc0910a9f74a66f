#pragma once
// Picard-Vessiot rings and torsors: qsi algebras (sigma, theta), comodule
// algebras, Galois-map checks, cleft structures, simplicity certificates,
// constants in degree windows and the normalization of fundamental systems.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsi/hopf.hpp"
#include "qsi/matrix.hpp"
#include "qsi/ncalg.hpp"
#include "qsi/report.hpp"

namespace qsi {

class QsiAlgebra;
using QsiPtr = std::shared_ptr<const QsiAlgebra>;

// sigma is an automorphism given on generators; theta = theta^(1) is extended by
// theta(ab) = sigma(a) theta(b) + theta(a) b; theta^(i) = theta^i / [i]_q!.
class QsiAlgebra {
public:
    // Empty entries for a formal inverse g^-1 are derived: sigma(g^-1) = sigma(g)^-1,
    // theta(g^-1) = -sigma(g^-1) theta(g) g^-1.
    static QsiPtr make(std::string name, PresPtr alg, std::vector<NCElement> sigma, std::vector<NCElement> theta,
                       std::vector<NCElement> sigma_inverse = {});

    const std::string& name() const { return name_; }
    const PresPtr& algebra() const { return alg_; }
    NCElement sigma(const NCElement& x) const;
    NCElement sigma_inverse(const NCElement& x) const;
    NCElement theta(const NCElement& x) const;
    NCElement theta(int i, const NCElement& x) const;  // divided power; Refusal if [i]_q! = 0
    NCElement theta_word(const Word& raw) const;       // Leibniz along an unreduced word
    const NCElement& sigma_of(int g) const { return sigma_[g]; }
    const NCElement& theta_of(int g) const { return theta_[g]; }

    // sigma invertible, sigma and theta respect every relation, theta sigma = q sigma theta on generators.
    Report verify() const;

private:
    QsiAlgebra() = default;
    std::string name_;
    PresPtr alg_;
    std::vector<NCElement> sigma_, sigma_inv_, theta_;
};

// R = C<Q, Q^-1, tau> with tau Q = q^-1 Q tau, sigma(Q) = qQ, sigma(tau) = q tau, theta(Q) = 0, theta(tau) = 1.
// Refusal at a root of unity unless allowed (the coaction round trip uses q = -1).
QsiPtr builtin_R(const Field& f, bool allow_root_of_unity = false);
// C[Q, Q^-1] with sigma(Q) = qQ and zero theta.
QsiPtr laurent_difference(const Field& f);
// Trivial derivations: theta = 0.
QsiPtr qsi_from_difference(std::string name, PresPtr alg, std::vector<NCElement> sigma,
                           std::vector<NCElement> sigma_inverse = {});
// Fundamental-matrix equations sigma(Y) = A Y, theta(Y) = B Y.
Report check_matrix_equations(const QsiAlgebra& a, const Mat<NCElement>& Y, const Mat<Scalar>& A,
                              const Mat<Scalar>& B);
// H_q acting through s -> sigma, s^-1 -> sigma^-1, t -> theta.
NCElement hq_act(const QsiAlgebra& a, const NCElement& h, const NCElement& x);

// Right comodule algebra: rho given on generators with values in alg ⊗ H.
struct ComoduleAlgebra {
    std::string name;
    PresPtr alg;
    HopfPtr hopf;
    PresPtr tens;                  // alg ⊗ H
    std::vector<NCElement> rho;    // per generator of alg
    QsiPtr qsi;                    // optional qsi structure on alg

    static ComoduleAlgebra make(std::string name, PresPtr alg, HopfPtr hopf,
                                const std::map<std::string, std::string>& rho_text);
    NCElement coact(const NCElement& x) const;
    // rho is an algebra morphism; coassociativity and counit on generators.
    Report verify() const;
    // rho(sigma x) = (sigma ⊗ id) rho(x), rho(theta x) = (theta ⊗ id) rho(x) on normal words up to degree bound.
    Report verify_qsi_equivariance(int degree_bound = 3) const;
};

ComoduleAlgebra coaction_R(const Field& f);
// R_lambda = C<s', t'> / (t's' = q s't', s'^N = 1, t'^N = lambda) over the Taft algebra.
ComoduleAlgebra taft_torsor(const Field& f, int N, const Scalar& lambda);
// The ground field with the trivial coaction.
ComoduleAlgebra trivial_comodule_algebra(HopfPtr hopf);

// x ⊗ y -> (x ⊗ 1) rho(y): rank test when finite-dimensional, triangularity for R.
Report galois_map_check(const ComoduleAlgebra& ca, int bound = 4);

// Linear map H -> A given on the finite basis of H.
struct CleftResult {
    Report report;
    std::vector<Word> basis;                  // basis of H
    std::optional<std::vector<NCElement>> inverse;  // convolution inverse on the basis
};
using LinearMapOnBasis = std::function<NCElement(const Word&)>;
CleftResult cleft_check(const ComoduleAlgebra& ca, const LinearMapOnBasis& phi);
// phi(h) = h with generators renamed by position (s -> s', t -> t').
LinearMapOnBasis generator_renaming(const ComoduleAlgebra& ca);

// Right H-comodule with coefficient matrix C: rho(n_j) = sum_i n_i ⊗ C_ij.
struct MatrixComodule {
    HopfPtr hopf;
    Mat<NCElement> C;
    static MatrixComodule taft_standard(HopfPtr taft);  // the 2-dimensional Taft comodule
    static MatrixComodule trivial(HopfPtr hopf);
    Report verify() const;
};
// n ⊗ x -> sum n_(0) ⊗ phi(n_(1)) x and its phi^-1 twisted inverse.
Report cleft_trivialize(const MatrixComodule& n, const ComoduleAlgebra& ca, const LinearMapOnBasis& phi,
                        const CleftResult& cleft);
// Rank of the trace form (x, y) -> tr(L_xy) of a finite-dimensional algebra; dim minus the radical.
int trace_form_rank(const PresPtr& alg);

// Certificate that the two-sided qsi ideal generated by f contains 1.
struct SimplicityMove {
    enum Kind { Theta, LeftMultiply, Eliminate, Scale } kind;
    int degree = 0;         // Theta: order; Eliminate: Q-degree removed
    NCElement factor;       // LeftMultiply
    Scalar scalar;          // Scale
    std::string str() const;
};
struct SimplicityCertificate {
    std::vector<SimplicityMove> moves;
    std::vector<NCElement> trail;  // element after each move
};
SimplicityCertificate simplicity_reduce(const QsiAlgebra& R, const NCElement& f);
// Random nonzero element of R: up to three terms c Q^m tau^n with |m| + n <= max_degree, c in [-3, 3].
NCElement random_R_element(const PresPtr& R, std::mt19937& rng, int max_degree);
// Replays the moves from f; true if the result is 1.
bool replay_certificate(const QsiAlgebra& R, const NCElement& f, const SimplicityCertificate& c);

// Monomials: normal words of length <= max_length with at most max_count[name] copies of each generator.
struct Window {
    int max_length = 4;
    std::map<std::string, int> max_count;
    std::string str() const;
};
std::vector<Word> window_words(const PresPtr& alg, const Window& w);
// Basis of {a : sigma(a) = a, theta(a) = 0} within the span of the window.
std::vector<NCElement> constants(const QsiAlgebra& a, const Window& w);

// Hom(R, R ⊗ S) versus pairs (u', v') with u' v' = q v' u', u' invertible.
struct RoundTrip {
    Report report;
    std::vector<NCElement> psi;  // images of Q, Q^-1, tau in R ⊗ S
    NCElement u, v;              // recovered pair
};
RoundTrip universal_coaction_roundtrip(const Field& f, const PresPtr& S, const NCElement& u, const NCElement& v,
                                       int degree_bound = 3);

struct Normalization {
    Report report;
    NCElement a, b;   // images of Q and tau
    Scalar f;         // the constant q a^-1 b - b a^-1
    Scalar g;         // f / (1 - q)
};
// (a, b, c, d) with sigma(a) = qa, theta(a) = c, sigma(b) = qb, theta(b) = d and c, d constants.
Normalization normalize_fundamental_system(const QsiAlgebra& A, const NCElement& a, const NCElement& b,
                                           const NCElement& c, const NCElement& d);

}  // namespace qsi
