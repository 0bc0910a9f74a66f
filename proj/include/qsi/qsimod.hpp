#pragma once
// Finite-dimensional qsi modules: validation, tensor and dual constructions,
// and the closed-form power-series fundamental system.

#include <map>
#include <string>
#include <vector>

#include "qsi/hopf.hpp"
#include "qsi/matrix.hpp"
#include "qsi/report.hpp"
#include "qsi/scalar.hpp"
#include "qsi/series.hpp"
#include "qsi/seq.hpp"

namespace qsi {

enum class Convention { Module, DifferenceSystem };

// Stored in the module convention: A = pi(s), B = pi(t), B A = q A B.
// Matrices given with A B = q B A (the difference-system convention) are transposed on ingestion.
struct QsiModuleSpec {
    Field field;
    Mat<Scalar> A, B;
    std::map<std::string, Scalar> params;  // named constants such as l, used for printing bases
    std::string name;

    int dim() const { return A.rows(); }
    static QsiModuleSpec make(const Field& f, const Mat<Scalar>& A, const Mat<Scalar>& B,
                              Convention conv = Convention::Module, std::map<std::string, Scalar> params = {});
    static QsiModuleSpec trivial(const Field& f, int n = 1);
    // Difference-system form (A B = q B A): the transposes of the stored matrices.
    Mat<Scalar> system_A() const { return A.transpose(); }
    Mat<Scalar> system_B() const { return B.transpose(); }
    SeqNaming naming() const;
};

Report validate(const QsiModuleSpec& m);
QsiModuleSpec tensor(const QsiModuleSpec& a, const QsiModuleSpec& b);
QsiModuleSpec dual(const QsiModuleSpec& m);
// Image of an element of the quantum plane Hopf algebra (gens s, s^-1, t) in the representation.
Mat<Scalar> represent(const QsiModuleSpec& m, const NCElement& x);

using SeqMat = Mat<CFiniteSeq>;
using YMat = SeriesMat<CFiniteSeq>;

struct SolutionMatrix {
    QsiModuleSpec spec;
    YMat Y;
    int truncation = 0;
    bool exact = false;
    std::vector<std::string> notes;
};

// Y = sum_i X^i (B^i / [i]_q!) * (n -> A^n) with A, B in difference-system form.
// Throws Refusal at a root of unity unless B is nilpotent of index <= the order.
SolutionMatrix solve(const QsiModuleSpec& m, int D = 8);
// Sigma-hat Y = A Y and Theta-hat Y = B Y coefficientwise, plus invertibility through X^D.
Report verify_solution(const SolutionMatrix& s);

struct Trivialization {
    YMat Z;
    Report report;
};
// Z = Y^-1 with sigma(Z) = Z A^-1, theta(Z) = -Z A^-1 B, and the rows of Z
// (the vectors c = Z m) fixed by sigma and killed by theta.
Trivialization trivializing_matrix(const SolutionMatrix& s);
// Converse direction: from Z satisfying the trivializing equations, Z^-1 solves the system.
Report check_from_trivializing(const QsiModuleSpec& m, const YMat& Z, int D);

std::string series_str(const TwistedSeries<CFiniteSeq>& s, const SeqNaming& names);
std::string ymat_str(const YMat& y, const SeqNaming& names);
YMat ymat_from_seq(const SeqMat& m);

}  // namespace qsi
