#include "stargraph/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stargraph/anomalous.hpp"
#include "stargraph/parallel.hpp"
#include "stargraph/secular.hpp"

namespace stargraph {
namespace {

constexpr double kRealAxisTol = 1e-8;  // |Im kL| below this is a real root
constexpr double kDeterminantThreshold = 1e-8;

double relative_residual(cplx x, const StarGraphModel& model) {
  double scale = 1.0;
  const cplx n = closed_numerator(x, model, &scale);
  return std::abs(n) / scale;
}

RealRoot make_real(double k, RootKind kind, bool near_double, const StarGraphModel& model) {
  RealRoot r;
  r.k = k;
  r.classification.kind = kind;
  r.classification.residual = relative_residual(cplx{k * model.length(), 0.0}, model);
  r.near_double = near_double;
  r.determinant = matching_determinant(ComplexWaveNumber(k, 0.0), model).relative;
  return r;
}

}  // namespace

void RootSearchRegion::validate() const {
  if (!(mu_min < mu_max) || !(nu_min < nu_max))
    throw std::invalid_argument("search region needs mu_min < mu_max and nu_min < nu_max");
  if (!std::isfinite(mu_min) || !std::isfinite(mu_max) || !std::isfinite(nu_min) ||
      !std::isfinite(nu_max))
    throw std::invalid_argument("search region bounds must be finite");
  if (grid_mu < 2 || grid_nu < 2) throw std::invalid_argument("grid densities must be >= 2");
  if (!(tol_root > 0.0)) throw std::invalid_argument("tol_root must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

double TripleResidual::max() const noexcept { return std::max({real_part, imag_part, modulus}); }

std::vector<RealRoot> real_spectrum(const StarGraphModel& model, double k_max, double tol) {
  if (!(k_max > 0.0)) throw std::invalid_argument("k_max must be positive");
  const double len = model.length();
  std::vector<RealRoot> out;

  // Zeros of sin kL cos kL: independent of q and alpha.
  const double step = std::numbers::pi / (2.0 * len);
  const auto n_max = static_cast<long>(std::floor(k_max / step * (1.0 + 1e-14)));
  for (long n = 1; n <= n_max; ++n) {
    out.push_back(make_real(static_cast<double>(n) * step, RootKind::GenericReal, false, model));
  }

  // The coupling factor has real zeros only for q = 4m - 2.
  if (model.q() % 4 == 2) {
    const int m = (model.q() + 2) / 4;
    for (const auto& a : anomalous_real_roots(m, model.alpha(), len, k_max)) {
      out.push_back(make_real(a.k, RootKind::AnomalousReal, a.near_double, model));
    }
  }

  std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.k < b.k; });
  for (const auto& r : out) {
    if (r.classification.residual > tol && !r.near_double) {
      std::ostringstream os;
      os << "real root k = " << r.k << " failed verification, residual "
         << r.classification.residual;
      throw ConsistencyError(os.str(), r.classification.residual);
    }
  }
  return out;
}

std::optional<ComplexRoot> polish_root(const StarGraphModel& model, cplx seed, double tol,
                                       int max_iter) {
  const double len = model.length();
  cplx x = seed * len;
  double scale = 1.0;
  cplx n = closed_numerator(x, model, &scale);
  double res = std::abs(n) / scale;

  for (int it = 0; it < max_iter; ++it) {
    if (res == 0.0) break;
    const cplx dn = closed_numerator_derivative(x, model);
    if (dn == cplx{}) break;
    const cplx full = n / dn;
    double damp = 1.0;
    cplx trial = x - full;
    double trial_scale = 1.0;
    cplx trial_n = closed_numerator(trial, model, &trial_scale);
    double trial_res = std::abs(trial_n) / trial_scale;
    for (int h = 0; h < 60 && !(trial_res < res); ++h) {
      damp *= 0.5;
      trial = x - damp * full;
      trial_n = closed_numerator(trial, model, &trial_scale);
      trial_res = std::abs(trial_n) / trial_scale;
    }
    if (!(trial_res < res)) break;
    const double moved = std::abs(trial - x);
    x = trial;
    n = trial_n;
    res = trial_res;
    if (moved <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  if (!(res <= tol) || !std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;

  ComplexRoot r;
  r.k = ComplexWaveNumber(x / len);
  r.residual = res;
  r.determinant = matching_determinant(r.k, model).relative;
  return r;
}

std::vector<ComplexRoot> complex_roots(const StarGraphModel& model, const RootSearchRegion& region) {
  region.validate();
  const double len = model.length();
  const int gm = region.grid_mu, gn = region.grid_nu;
  const auto idx = [gn](int i, int j) { return static_cast<std::size_t>(i * (gn + 1) + j); };
  auto grid_point = [&](int i, int j) {
    return cplx{region.mu_min + (region.mu_max - region.mu_min) * i / gm,
                region.nu_min + (region.nu_max - region.nu_min) * j / gn};
  };

  std::vector<double> mag(static_cast<std::size_t>((gm + 1) * (gn + 1)));
  parallel_for(static_cast<std::size_t>(gm + 1), [&](std::size_t i) {
    for (int j = 0; j <= gn; ++j) {
      const int ii = static_cast<int>(i);
      mag[idx(ii, j)] = std::abs(closed_numerator(grid_point(ii, j) * len, model));
    }
  });

  std::vector<cplx> seeds;
  for (int i = 0; i <= gm; ++i) {
    for (int j = 0; j <= gn; ++j) {
      const double v = mag[idx(i, j)];
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int a = i + di, b = j + dj;
          if (a < 0 || a > gm || b < 0 || b > gn) continue;
          if (mag[idx(a, b)] < v) {
            minimum = false;
            break;
          }
        }
      }
      if (minimum) seeds.push_back(grid_point(i, j));
    }
  }

  std::vector<std::optional<ComplexRoot>> polished(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    polished[s] = polish_root(model, seeds[s], region.tol_root, region.max_iter);
  });

  std::vector<ComplexRoot> found;
  const double eps_box = 1e-12 * std::max(1.0, std::abs(region.mu_max));
  for (const auto& p : polished) {
    if (!p) continue;
    if (std::abs(p->k.nu * len) <= kRealAxisTol) continue;
    if (!region.inflated(eps_box).contains(p->k.mu, p->k.nu)) continue;
    found.push_back(*p);
  }
  std::sort(found.begin(), found.end(), [](const ComplexRoot& a, const ComplexRoot& b) {
    return std::pair(a.k.mu, a.k.nu) < std::pair(b.k.mu, b.k.nu);
  });

  // Merge duplicates within 10 tol_root (kL units).
  const double radius = 10.0 * region.tol_root / len;
  std::vector<ComplexRoot> unique;
  for (const auto& r : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const ComplexRoot& u) {
      return std::abs(u.k.value() - r.k.value()) <= std::max(radius, 1e-12 * std::abs(r.k.value()));
    });
    if (!dup) unique.push_back(r);
  }
  return unique;
}

namespace {

// Phase increment of N along [a, b], subdivided until every piece turns by
// less than pi/4. Returns false when a zero sits on (or next to) the path.
bool phase_increment(const StarGraphModel& model, cplx a, cplx b, cplx na, cplx nb, int depth,
                     double& total) {
  const double delta = std::arg(nb / na);
  if (std::abs(delta) < std::numbers::pi / 4.0) {
    total += delta;
    return true;
  }
  if (depth > 40) return false;
  const cplx mid = 0.5 * (a + b);
  double scale = 1.0;
  const cplx nm = closed_numerator(mid, model, &scale);
  if (std::abs(nm) <= 1e-12 * scale) return false;
  return phase_increment(model, a, mid, na, nm, depth + 1, total) &&
         phase_increment(model, mid, b, nm, nb, depth + 1, total);
}

std::optional<int> winding(const StarGraphModel& model, const RootSearchRegion& r) {
  const double len = model.length();
  const cplx corners[5] = {{r.mu_min * len, r.nu_min * len},
                           {r.mu_max * len, r.nu_min * len},
                           {r.mu_max * len, r.nu_max * len},
                           {r.mu_min * len, r.nu_max * len},
                           {r.mu_min * len, r.nu_min * len}};
  const int per_edge = 256;
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    cplx prev = corners[e];
    double scale = 1.0;
    cplx nprev = closed_numerator(prev, model, &scale);
    if (std::abs(nprev) <= 1e-12 * scale) return std::nullopt;
    for (int i = 1; i <= per_edge; ++i) {
      const cplx cur = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(i) / per_edge);
      const cplx ncur = closed_numerator(cur, model, &scale);
      if (std::abs(ncur) <= 1e-12 * scale) return std::nullopt;
      if (!phase_increment(model, prev, cur, nprev, ncur, 0, total)) return std::nullopt;
      prev = cur;
      nprev = ncur;
    }
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.1) return std::nullopt;
  return static_cast<int>(rounded);
}

}  // namespace

WindingCount count_roots_detailed(const StarGraphModel& model, const RootSearchRegion& region) {
  region.validate();
  const double margin =
      1e-3 * std::max(region.mu_max - region.mu_min, region.nu_max - region.nu_min);
  RootSearchRegion current = region;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (auto n = winding(model, current)) return {*n, current, attempt};
    current = current.inflated(margin * (attempt + 1));
  }
  std::ostringstream os;
  os << "argument-principle count failed for mu in [" << region.mu_min << ", " << region.mu_max
     << "], nu in [" << region.nu_min << ", " << region.nu_max << "] after 6 inflations";
  throw CertificationUnavailable(os.str());
}

int count_roots_in_region(const StarGraphModel& model, const RootSearchRegion& region) {
  return count_roots_detailed(model, region).count;
}

TripleResidual triple_residual(const ComplexWaveNumber& k, const StarGraphModel& model) {
  if (model.q() < 3) throw std::invalid_argument("triple residual needs q >= 3");
  const int q = model.q();
  const cplx x = k.value() * model.length();
  cplx p{1.0, 0.0}, cq{1.0, 0.0};
  const cplx s = std::sin(x), c = std::cos(x);
  for (int i = 0; i < q; ++i) p *= x;
  for (int i = 0; i < q - 2; ++i) {
    p *= c;
    cq *= s;
  }
  cplx lamq{1.0, 0.0};
  for (int i = 0; i < q; ++i) lamq *= cplx{0.0, model.lambda()};
  cq *= static_cast<double>(closed_form_sign(q)) * lamq;

  const cplx f = p + cq;
  const double scale = std::abs(p) + std::abs(cq);
  TripleResidual r;
  r.real_part = std::abs(f.real()) / scale;
  r.imag_part = std::abs(f.imag()) / scale;
  r.modulus = std::abs(std::abs(p) - std::abs(cq)) / scale;
  return r;
}

SpectrumResult analyze_region(const StarGraphModel& model, const RootSearchRegion& region) {
  region.validate();
  SpectrumResult out{model, {}, {}, region, std::nullopt, {}, 0};
  try {
    const WindingCount w = count_roots_detailed(model, region);
    out.count_certificate = w.count;
    out.region = w.region;
    if (w.inflations > 0) {
      std::ostringstream os;
      os << "boundary zero: region inflated " << w.inflations << " time(s)";
      out.certificate_note = os.str();
    }
  } catch (const CertificationUnavailable& e) {
    out.certificate_note = e.what();
  }

  const RootSearchRegion& r = out.region;
  if (r.nu_min <= 0.0 && r.nu_max >= 0.0 && r.mu_max > 0.0) {
    for (const auto& root : real_spectrum(model, r.mu_max, r.tol_root)) {
      if (root.k >= r.mu_min) out.real_roots.push_back(root);
    }
  }

  RootSearchRegion search = r;
  for (int pass = 0; pass < 3; ++pass) {
    out.complex_roots = complex_roots(model, search);
    if (!out.count_certificate || out.located() >= *out.count_certificate) break;
    search.grid_mu *= 4;
    search.grid_nu *= 4;
    ++out.refinements;
  }
  if (out.count_certificate && !out.certified()) {
    std::ostringstream os;
    os << "winding count " << *out.count_certificate << " but " << out.located()
       << " roots located";
    if (!out.certificate_note.empty()) out.certificate_note += "; ";
    out.certificate_note += os.str();
  }
  return out;
}

}  // namespace stargraph
