#pragma once

#include <cstdint>
#include <vector>

#include "stargraph/model.hpp"
#include "stargraph/region.hpp"

namespace stargraph {

// Three independent evaluations of the bound-state condition. All of them work
// in the dimensionless variable x = kL with coupling lambda = alpha*L, so the
// values depend on (k, alpha, L) only through kL and alpha*L.

enum class SecularForm { TangentSum, ClosedRegularized, Determinant };

struct SecularValue {
  cplx value;
  SecularForm form = SecularForm::TangentSum;
  bool pole_flag = false;
  /// Sum of term magnitudes; |value| / scale measures cancellation.
  double scale = 0.0;

  bool is_root(double tol) const noexcept;
};

/// Edge sum  sum_j tan(kL - beta_j)  with tan(beta_j) = i*alpha*e^{ij phi}/k.
///
/// Terms are evaluated as (sin kL - c_j cos kL) / (cos kL + c_j sin kL), so
/// zeros of cos kL are regular points. pole_flag is raised when a term
/// denominator is within `pole_guard` (relative) of zero.
SecularValue secular_sum(const ComplexWaveNumber& k, const StarGraphModel& model,
                         double pole_guard = 1e-6);

/// Sign s in the closed form  q t (x^q + s(i lambda)^q t^{q-2}) / (x^q - s(i lambda)^q t^q)
/// that reproduces the edge sum term by term: (-1)^q.
int closed_form_sign(int q) noexcept;

/// Pole-free numerator/denominator pair of the closed secular form,
///   N = q sin x cos x [x^q cos^{q-2} x + s(i lambda)^q sin^{q-2} x]
///   D = x^q cos^q x - s(i lambda)^q sin^q x
/// with x = kL. N/D equals the edge sum.
struct ClosedForm {
  cplx numerator;
  cplx denominator;
  int sigma = 1;
  /// Upper bound on |N| built from the magnitudes of its pieces.
  double scale = 1.0;

  double residual() const noexcept { return std::abs(numerator) / scale; }
  bool is_root(double tol, double guard = 1e-12) const noexcept;
  /// N and D both (relatively) zero: classification needs a limit analysis.
  bool joint_zero(double tol, double guard = 1e-12) const noexcept;
  cplx ratio() const { return numerator / denominator; }
};

ClosedForm secular_closed_regularized(const ComplexWaveNumber& k, const StarGraphModel& model,
                                      int sigma);
ClosedForm secular_closed_regularized(const ComplexWaveNumber& k, const StarGraphModel& model);

/// dN/dx of the closed numerator at x = kL (canonical sign).
cplx closed_numerator_derivative(cplx x, const StarGraphModel& model);
/// N at x = kL (canonical sign), with its magnitude scale.
cplx closed_numerator(cplx x, const StarGraphModel& model, double* scale = nullptr);

/// The coupling-dependent factor F = x^q cos^{q-2} x + s(i lambda)^q sin^{q-2} x
/// of N, whose zeros are the non-generic roots.
cplx coupling_factor(cplx x, const StarGraphModel& model);

struct DeterminantValue {
  cplx determinant;
  /// |det| divided by the product of row 2-norms (Hadamard bound), in [0, 1].
  double relative = 0.0;

  bool is_root(double threshold = 1e-8) const noexcept { return relative <= threshold; }
};

/// Determinant of the 2q x 2q linear system on (A_j, B_j): q Robin rows,
/// q-1 continuity rows and one Kirchhoff row, each scaled to unit max-magnitude.
DeterminantValue matching_determinant(const ComplexWaveNumber& k, const StarGraphModel& model);

struct Disagreement {
  ComplexWaveNumber k;
  cplx sum_value;
  cplx closed_value;
  bool sum_root = false;
  bool closed_root = false;
  double value_mismatch = 0.0;
};

struct VerificationReport {
  int q = 0;
  double alpha = 0.0;
  double length = 0.0;
  int sigma = 0;
  int samples = 0;
  /// Worst value mismatch of each sign candidate (index 0: +1, index 1: -1).
  double mismatch_plus = 0.0;
  double mismatch_minus = 0.0;
  std::vector<Disagreement> disagreements;

  bool passed() const noexcept { return disagreements.empty(); }
};

struct CrossVerifyOptions {
  int samples = 200;
  std::uint64_t seed = 20120601;
  double root_tol = 1e-8;
  double value_tol = 1e-8;
  double pole_guard = 1e-6;
  /// Points checked in addition to the random samples (e.g. known roots).
  std::vector<ComplexWaveNumber> extra_points;
};

/// Compares edge sum and closed form on random pole-guarded samples of the
/// region, picks the closed-form sign that matches, and lists every sample
/// where values or root indicators disagree.
VerificationReport cross_verify(const StarGraphModel& model, const RootSearchRegion& region,
                                const CrossVerifyOptions& options = {});

}  // namespace stargraph
