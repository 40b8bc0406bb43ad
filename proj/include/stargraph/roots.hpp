#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stargraph/model.hpp"
#include "stargraph/region.hpp"

namespace stargraph {

class CertificationUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RealRoot {
  double k = 0.0;
  RootClassification classification;
  bool near_double = false;
  /// Row-normalized matching determinant relative to its Hadamard bound.
  double determinant = 0.0;
};

struct ComplexRoot {
  ComplexWaveNumber k;
  double residual = 0.0;
  double determinant = 0.0;
};

/// Real bound states in (0, k_max], ascending: kL = n pi/2 for every q, k = alpha
/// for q = 2, and the anomalous family when q = 4m - 2.
std::vector<RealRoot> real_spectrum(const StarGraphModel& model, double k_max,
                                    double tol = 1e-10);

/// Non-real zeros of the regularized secular numerator inside `region`,
/// sorted by (mu, nu). Seeds are local minima of |N| on the region grid,
/// polished by damped Newton; nonconverging seeds are dropped.
std::vector<ComplexRoot> complex_roots(const StarGraphModel& model, const RootSearchRegion& region);

struct WindingCount {
  int count = 0;
  /// Region actually integrated around (inflated when a zero sat on the edge).
  RootSearchRegion region;
  int inflations = 0;
};

/// Zeros of N inside the rectangle by the argument principle, with
/// multiplicity. Inflates the rectangle when a zero lies on its boundary;
/// throws CertificationUnavailable when that keeps failing.
WindingCount count_roots_detailed(const StarGraphModel& model, const RootSearchRegion& region);
int count_roots_in_region(const StarGraphModel& model, const RootSearchRegion& region);

/// Real part, imaginary part and modulus balance of the coupling factor
/// x^q cos^{q-2} x + s(i lambda)^q sin^{q-2} x, each relative to |P| + |Q|.
struct TripleResidual {
  double real_part = 0.0;
  double imag_part = 0.0;
  double modulus = 0.0;

  double max() const noexcept;
  bool all_below(double tol) const noexcept { return max() < tol; }
};

/// Requires q >= 3.
TripleResidual triple_residual(const ComplexWaveNumber& k, const StarGraphModel& model);

/// Newton polish of a single seed; nullopt when it does not converge to tol.
std::optional<ComplexRoot> polish_root(const StarGraphModel& model, cplx seed, double tol,
                                       int max_iter = 100);

struct SpectrumResult {
  StarGraphModel model;
  std::vector<RealRoot> real_roots;
  std::vector<ComplexRoot> complex_roots;
  RootSearchRegion region;
  std::optional<int> count_certificate;
  std::string certificate_note;
  int refinements = 0;

  int located() const noexcept {
    return static_cast<int>(real_roots.size() + complex_roots.size());
  }
  bool certified() const noexcept {
    return count_certificate && *count_certificate == located();
  }
};

/// Real and complex roots of a region plus the winding-number certificate.
/// A grid-density refinement pass runs when the certificate exceeds the
/// located count.
SpectrumResult analyze_region(const StarGraphModel& model, const RootSearchRegion& region);

}  // namespace stargraph
