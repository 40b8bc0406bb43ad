#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stargraph {

using cplx = std::complex<double>;

/// Thrown when an edge coefficient cannot be fixed because the vertex
/// continuity bracket vanishes for some edge.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a supposed root does not satisfy the vertex conditions.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Star graph with q equilateral edges of length L, complex Robin couplings
/// i*alpha*exp(i*j*phi) at the outer ends and Kirchhoff matching at the centre.
///
/// Edges use the inward coordinate y in (0, L) with the vertex at y = L.
class StarGraphModel {
 public:
  StarGraphModel(int q, double alpha, double length);

  int q() const noexcept { return q_; }
  double alpha() const noexcept { return alpha_; }
  double length() const noexcept { return length_; }

  /// Rotation angle 2*pi/q between consecutive edge couplings.
  double phi() const noexcept;
  /// Dimensionless coupling alpha*L.
  double lambda() const noexcept { return alpha_ * length_; }

  /// Same graph with coupling given in dimensionless form, alpha = lambda / L.
  static StarGraphModel from_lambda(int q, double lambda, double length = 1.0);

  bool operator==(const StarGraphModel&) const = default;

 private:
  int q_;
  double alpha_;
  double length_;
};

/// A point k = mu + i*nu of the complex wavenumber plane.
struct ComplexWaveNumber {
  double mu = 0.0;
  double nu = 0.0;

  ComplexWaveNumber() = default;
  ComplexWaveNumber(double mu_, double nu_);
  explicit ComplexWaveNumber(cplx k) : ComplexWaveNumber(k.real(), k.imag()) {}

  cplx value() const noexcept { return {mu, nu}; }
  cplx energy() const noexcept { return value() * value(); }

  bool operator==(const ComplexWaveNumber&) const = default;
};

enum class RootKind { GenericReal, AnomalousReal, ComplexPair };

const char* to_string(RootKind kind) noexcept;

struct RootClassification {
  RootKind kind = RootKind::GenericReal;
  double residual = 0.0;
};

struct EdgeCoefficients {
  cplx a;  // sin(ky) amplitude
  cplx b;  // cos(ky) amplitude
};

/// Edge amplitudes psi_j(y) = A_j sin(ky) + B_j cos(ky) at a bound state.
struct EdgeEigenfunction {
  std::vector<EdgeCoefficients> coefficients;
  ComplexWaveNumber root;
  cplx rho{1.0, 0.0};

  // Residuals relative to the largest coefficient magnitude.
  double robin_residual = 0.0;
  double continuity_residual = 0.0;
  double kirchhoff_residual = 0.0;

  cplx value(std::size_t edge, double y) const;
  cplx derivative(std::size_t edge, double y) const;
};

/// exp(i*j*phi); throws std::out_of_range for j outside [0, q).
cplx robin_phase(int j, const StarGraphModel& model);

/// (C, K) with i*alpha*exp(i*j*phi)/k = C + iK, for real nonzero k.
std::pair<double, double> ck_coefficients(int j, double k, const StarGraphModel& model);

/// Builds the edge amplitudes at a root k with vertex value rho.
///
/// B_j follows from continuity psi_j(L) = rho and A_j from the Robin condition.
/// Throws DegenerateConfiguration when a continuity bracket vanishes and
/// ConsistencyError when the Kirchhoff residual exceeds `tol`.
EdgeEigenfunction assemble_eigenfunction(const ComplexWaveNumber& k, const StarGraphModel& model,
                                         cplx rho = {1.0, 0.0}, double tol = 1e-8);

}  // namespace stargraph
