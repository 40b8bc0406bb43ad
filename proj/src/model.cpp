#include "stargraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stargraph {

StarGraphModel::StarGraphModel(int q, double alpha, double length)
    : q_(q), alpha_(alpha), length_(length) {
  if (q < 2) throw std::invalid_argument("star graph needs q >= 2 edges");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("coupling alpha must be positive and finite");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("edge length must be positive and finite");
}

double StarGraphModel::phi() const noexcept { return 2.0 * std::numbers::pi / q_; }

StarGraphModel StarGraphModel::from_lambda(int q, double lambda, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("edge length must be positive and finite");
  return StarGraphModel(q, lambda / length, length);
}

ComplexWaveNumber::ComplexWaveNumber(double mu_, double nu_) : mu(mu_), nu(nu_) {
  if (!std::isfinite(mu) || !std::isfinite(nu))
    throw std::invalid_argument("wavenumber components must be finite");
}

const char* to_string(RootKind kind) noexcept {
  switch (kind) {
    case RootKind::GenericReal: return "generic_real";
    case RootKind::AnomalousReal: return "anomalous_real";
    case RootKind::ComplexPair: return "complex";
  }
  return "unknown";
}

cplx EdgeEigenfunction::value(std::size_t edge, double y) const {
  const auto& c = coefficients.at(edge);
  const cplx ky = root.value() * y;
  return c.a * std::sin(ky) + c.b * std::cos(ky);
}

cplx EdgeEigenfunction::derivative(std::size_t edge, double y) const {
  const auto& c = coefficients.at(edge);
  const cplx k = root.value();
  const cplx ky = k * y;
  return k * (c.a * std::cos(ky) - c.b * std::sin(ky));
}

cplx robin_phase(int j, const StarGraphModel& model) {
  if (j < 0 || j >= model.q()) {
    std::ostringstream os;
    os << "edge index " << j << " outside [0, " << model.q() << ")";
    throw std::out_of_range(os.str());
  }
  if (j == 0) return {1.0, 0.0};
  return std::polar(1.0, j * model.phi());
}

std::pair<double, double> ck_coefficients(int j, double k, const StarGraphModel& model) {
  if (k == 0.0) throw std::domain_error("C, K undefined at k = 0");
  const cplx phase = robin_phase(j, model);
  const double ratio = model.alpha() / k;
  // i * alpha * e^{ij phi} / k = -ratio*sin + i*ratio*cos
  return {-ratio * phase.imag(), ratio * phase.real()};
}

EdgeEigenfunction assemble_eigenfunction(const ComplexWaveNumber& k, const StarGraphModel& model,
                                         cplx rho, double tol) {
  const cplx kv = k.value();
  if (kv == cplx{}) throw DegenerateConfiguration("eigenfunction undefined at k = 0");
  const int q = model.q();
  const double len = model.length();
  const cplx s = std::sin(kv * len);
  const cplx c = std::cos(kv * len);
  const cplx ialpha{0.0, model.alpha()};

  EdgeEigenfunction ef;
  ef.root = k;
  ef.rho = rho;
  ef.coefficients.resize(static_cast<std::size_t>(q));

  for (int j = 0; j < q; ++j) {
    const cplx coupling = ialpha * robin_phase(j, model);
    const cplx bracket = coupling * s + kv * c;
    const double bracket_scale = std::abs(coupling * s) + std::abs(kv * c);
    if (std::abs(bracket) <= 1e-12 * bracket_scale) {
      std::ostringstream os;
      os << "continuity bracket vanishes on edge " << j << " at k = " << kv;
      throw DegenerateConfiguration(os.str());
    }
    const cplx unit_b = kv / bracket;
    auto& coef = ef.coefficients[static_cast<std::size_t>(j)];
    coef.b = rho * unit_b;
    coef.a = rho * ((coupling / kv) * unit_b);
  }

  double robin = 0.0, robin_scale = 0.0;
  double cont = 0.0, cont_scale = 0.0;
  cplx kirchhoff{};
  double kirchhoff_scale = 0.0;
  const cplx psi0 = ef.value(0, len);
  for (int j = 0; j < q; ++j) {
    const auto& coef = ef.coefficients[static_cast<std::size_t>(j)];
    const cplx coupling = ialpha * robin_phase(j, model);
    robin = std::max(robin, std::abs(kv * coef.a - coupling * coef.b));
    robin_scale = std::max({robin_scale, std::abs(kv * coef.a), std::abs(coupling * coef.b)});

    const cplx psi = ef.value(static_cast<std::size_t>(j), len);
    cont = std::max(cont, std::abs(psi - psi0));
    cont_scale = std::max({cont_scale, std::abs(coef.a * s), std::abs(coef.b * c)});

    kirchhoff += ef.derivative(static_cast<std::size_t>(j), len);
    kirchhoff_scale += std::abs(kv * coef.a * c) + std::abs(kv * coef.b * s);
  }
  ef.robin_residual = robin_scale > 0.0 ? robin / robin_scale : robin;
  ef.continuity_residual = cont_scale > 0.0 ? cont / cont_scale : cont;
  ef.kirchhoff_residual =
      kirchhoff_scale > 0.0 ? std::abs(kirchhoff) / kirchhoff_scale : std::abs(kirchhoff);

  if (ef.kirchhoff_residual > tol) {
    std::ostringstream os;
    os << "k = " << kv << " is not a bound state: Kirchhoff residual " << ef.kirchhoff_residual;
    throw ConsistencyError(os.str(), ef.kirchhoff_residual);
  }
  return ef;
}

}  // namespace stargraph
