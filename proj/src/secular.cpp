#include "stargraph/secular.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "stargraph/parallel.hpp"

namespace stargraph {
namespace {

cplx ipow(cplx base, int n) {
  cplx result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// s * (i lambda)^q
cplx coupling_power(const StarGraphModel& model, int sigma) {
  return static_cast<double>(sigma) * ipow(cplx{0.0, model.lambda()}, model.q());
}

double numerator_scale(cplx x, cplx s, cplx c, const StarGraphModel& model) {
  const double m = std::max(std::abs(s), std::abs(c));
  const int q = model.q();
  return q * (std::pow(std::abs(x), q) + std::pow(model.lambda(), q)) * std::pow(m, q);
}

}  // namespace

bool SecularValue::is_root(double tol) const noexcept {
  return !pole_flag && std::isfinite(value.real()) && std::abs(value) <= tol * scale;
}

SecularValue secular_sum(const ComplexWaveNumber& k, const StarGraphModel& model,
                         double pole_guard) {
  const cplx x = k.value() * model.length();
  if (x == cplx{}) throw std::domain_error("edge sum undefined at k = 0");
  const cplx s = std::sin(x);
  const cplx c = std::cos(x);
  const cplx ilam{0.0, model.lambda()};

  SecularValue out;
  out.form = SecularForm::TangentSum;
  for (int j = 0; j < model.q(); ++j) {
    const cplx cj = ilam * robin_phase(j, model) / x;
    const cplx num = s - cj * c;
    const cplx den = c + cj * s;
    if (std::abs(den) <= pole_guard * (std::abs(c) + std::abs(cj * s))) out.pole_flag = true;
    const cplx term = num / den;
    out.value += term;
    out.scale += std::abs(term);
  }
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag())) out.pole_flag = true;
  return out;
}

int closed_form_sign(int q) noexcept { return q % 2 == 0 ? 1 : -1; }

bool ClosedForm::is_root(double tol, double guard) const noexcept {
  return std::abs(numerator) <= tol * scale && std::abs(denominator) > guard * scale;
}

bool ClosedForm::joint_zero(double tol, double guard) const noexcept {
  return std::abs(numerator) <= tol * scale && std::abs(denominator) <= guard * scale;
}

cplx coupling_factor(cplx x, const StarGraphModel& model) {
  const int q = model.q();
  const cplx gamma = coupling_power(model, closed_form_sign(q));
  return ipow(x, q) * ipow(std::cos(x), q - 2) + gamma * ipow(std::sin(x), q - 2);
}

ClosedForm secular_closed_regularized(const ComplexWaveNumber& k, const StarGraphModel& model,
                                      int sigma) {
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("closed-form sign must be +1 or -1");
  const int q = model.q();
  const cplx x = k.value() * model.length();
  const cplx s = std::sin(x);
  const cplx c = std::cos(x);
  const cplx gamma = coupling_power(model, sigma);
  const cplx xq = ipow(x, q);

  ClosedForm out;
  out.sigma = sigma;
  out.numerator = static_cast<double>(q) * s * c * (xq * ipow(c, q - 2) + gamma * ipow(s, q - 2));
  out.denominator = xq * ipow(c, q) - gamma * ipow(s, q);
  out.scale = numerator_scale(x, s, c, model);
  return out;
}

ClosedForm secular_closed_regularized(const ComplexWaveNumber& k, const StarGraphModel& model) {
  return secular_closed_regularized(k, model, closed_form_sign(model.q()));
}

cplx closed_numerator(cplx x, const StarGraphModel& model, double* scale) {
  const int q = model.q();
  const cplx s = std::sin(x);
  const cplx c = std::cos(x);
  const cplx gamma = coupling_power(model, closed_form_sign(q));
  if (scale) *scale = numerator_scale(x, s, c, model);
  return static_cast<double>(q) * s * c * (ipow(x, q) * ipow(c, q - 2) + gamma * ipow(s, q - 2));
}

cplx closed_numerator_derivative(cplx x, const StarGraphModel& model) {
  const int q = model.q();
  const double qd = q;
  const cplx s = std::sin(x);
  const cplx c = std::cos(x);
  const cplx gamma = coupling_power(model, closed_form_sign(q));

  const cplx factor = ipow(x, q) * ipow(c, q - 2) + gamma * ipow(s, q - 2);
  cplx dfactor = qd * ipow(x, q - 1) * ipow(c, q - 2);
  if (q > 2) {
    dfactor += (qd - 2.0) * (gamma * ipow(s, q - 3) * c - ipow(x, q) * ipow(c, q - 3) * s);
  }
  return qd * ((c * c - s * s) * factor + s * c * dfactor);
}

DeterminantValue matching_determinant(const ComplexWaveNumber& k, const StarGraphModel& model) {
  const int q = model.q();
  const int n = 2 * q;
  const cplx x = k.value() * model.length();
  const cplx s = std::sin(x);
  const cplx c = std::cos(x);
  const cplx ilam{0.0, model.lambda()};

  // Unknowns ordered (A_0, B_0, A_1, B_1, ...).
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < q; ++j) {
    m(j, 2 * j) = x;
    m(j, 2 * j + 1) = -ilam * robin_phase(j, model);
  }
  for (int j = 1; j < q; ++j) {
    const int row = q + j - 1;
    m(row, 2 * j) = s;
    m(row, 2 * j + 1) = c;
    m(row, 0) = -s;
    m(row, 1) = -c;
  }
  for (int j = 0; j < q; ++j) {
    m(n - 1, 2 * j) = x * c;
    m(n - 1, 2 * j + 1) = -x * s;
  }

  double hadamard = 1.0;
  for (int r = 0; r < n; ++r) {
    const double peak = m.row(r).cwiseAbs().maxCoeff();
    if (peak > 0.0) m.row(r) /= peak;
    hadamard *= m.row(r).norm();
  }

  DeterminantValue out;
  out.determinant = m.partialPivLu().determinant();
  out.relative = hadamard > 0.0 ? std::abs(out.determinant) / hadamard : 0.0;
  return out;
}

VerificationReport cross_verify(const StarGraphModel& model, const RootSearchRegion& region,
                                const CrossVerifyOptions& options) {
  region.validate();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> mu_dist(region.mu_min, region.mu_max);
  std::uniform_real_distribution<double> nu_dist(region.nu_min, region.nu_max);

  std::vector<ComplexWaveNumber> points;
  points.reserve(static_cast<std::size_t>(options.samples) + options.extra_points.size());
  int attempts = 0;
  while (static_cast<int>(points.size()) < options.samples) {
    if (++attempts > 100 * std::max(options.samples, 1))
      throw std::runtime_error("cross_verify: region is too close to poles to sample");
    const ComplexWaveNumber k(mu_dist(rng), nu_dist(rng));
    if (k.value() == cplx{}) continue;
    if (secular_sum(k, model, options.pole_guard).pole_flag) continue;
    points.push_back(k);
  }
  points.insert(points.end(), options.extra_points.begin(), options.extra_points.end());

  struct Sample {
    SecularValue sum;
    ClosedForm closed[2];
    double mismatch[2];
  };
  std::vector<Sample> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    Sample& out = results[i];
    out.sum = secular_sum(points[i], model, options.pole_guard);
    for (int idx = 0; idx < 2; ++idx) {
      const int sigma = idx == 0 ? 1 : -1;
      out.closed[idx] = secular_closed_regularized(points[i], model, sigma);
      const ClosedForm& cf = out.closed[idx];
      const double denom = cf.scale + out.sum.scale * std::abs(cf.denominator);
      out.mismatch[idx] = std::abs(cf.numerator - out.sum.value * cf.denominator) / denom;
    }
  });

  VerificationReport report;
  report.q = model.q();
  report.alpha = model.alpha();
  report.length = model.length();
  report.samples = static_cast<int>(points.size());
  for (const Sample& s : results) {
    report.mismatch_plus = std::max(report.mismatch_plus, s.mismatch[0]);
    report.mismatch_minus = std::max(report.mismatch_minus, s.mismatch[1]);
  }
  report.sigma = report.mismatch_plus <= report.mismatch_minus ? 1 : -1;
  const int idx = report.sigma == 1 ? 0 : 1;

  for (std::size_t i = 0; i < points.size(); ++i) {
    const Sample& s = results[i];
    const ClosedForm& cf = s.closed[idx];
    const bool sum_root = s.sum.is_root(options.root_tol);
    const bool closed_root = cf.is_root(options.root_tol);
    if (sum_root != closed_root || s.mismatch[idx] > options.value_tol) {
      report.disagreements.push_back(
          {points[i], s.sum.value, cf.ratio(), sum_root, closed_root, s.mismatch[idx]});
    }
  }
  std::sort(report.disagreements.begin(), report.disagreements.end(),
            [](const Disagreement& a, const Disagreement& b) {
              return std::pair(a.k.mu, a.k.nu) < std::pair(b.k.mu, b.k.nu);
            });
  return report;
}

}  // namespace stargraph
