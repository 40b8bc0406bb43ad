#include "stargraph/anomalous.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "stargraph/parallel.hpp"
#include "stargraph/roots.hpp"

namespace stargraph {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kMergeSeparation = 1e-6 * std::numbers::pi;  // in kL units
constexpr double kDoubleRootTol = 1e-10;

double pw(double v, int n) { return n == 0 ? 1.0 : std::pow(v, n); }

// a - b in dimensionless form, with derivatives for the fold solver.
struct BranchFactor {
  int a;  // 2m - 1
  int b;  // 2m - 2
  double lam;

  explicit BranchFactor(int m, double lambda) : a(2 * m - 1), b(2 * m - 2), lam(lambda) {}

  double value(double x) const {
    return pw(x, a) * pw(std::cos(x), b) - pw(lam, a) * pw(std::sin(x), b);
  }
  double scale(double x) const {
    return pw(std::abs(x), a) * pw(std::abs(std::cos(x)), b) +
           pw(lam, a) * pw(std::abs(std::sin(x)), b);
  }
  double dx(double x) const {
    const double c = std::cos(x), s = std::sin(x);
    double out = a * pw(x, a - 1) * pw(c, b);
    if (b > 0) out -= b * (pw(x, a) * pw(c, b - 1) * s + pw(lam, a) * pw(s, b - 1) * c);
    return out;
  }
  double dxx(double x) const {
    const double c = std::cos(x), s = std::sin(x);
    double out = a * (a - 1) * pw(x, a - 2) * pw(c, b);
    if (b > 0) {
      out += -2.0 * a * b * pw(x, a - 1) * pw(c, b - 1) * s - b * pw(x, a) * pw(c, b) +
             b * pw(lam, a) * pw(s, b);
      if (b > 1) {
        out += b * (b - 1) * pw(x, a) * pw(c, b - 2) * s * s -
               b * (b - 1) * pw(lam, a) * pw(s, b - 2) * c * c;
      }
    }
    return out;
  }
  double dlam(double x) const { return -a * pw(lam, a - 1) * pw(std::sin(x), b); }
  double dx_dlam(double x) const {
    if (b == 0) return 0.0;
    return -a * b * pw(lam, a - 1) * pw(std::sin(x), b - 1) * std::cos(x);
  }
};

void require_m(int m) {
  if (m < 1) throw std::invalid_argument("branch parameter m must be >= 1");
}

// Roots of a - b on (0, x_max], x = kL.
std::vector<AnomalousRoot> scan_roots(const BranchFactor& f, double x_max) {
  std::vector<AnomalousRoot> roots;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);

  auto bracket = [&](double lo, double hi) {
    std::uintmax_t iters = 200;
    auto [r0, r1] = boost::math::tools::toms748_solve([&](double x) { return f.value(x); }, lo, hi,
                                                      tol, iters);
    return 0.5 * (r0 + r1);
  };

  for (int n = 0; n * kHalfPi < x_max; ++n) {
    const double lo = n * kHalfPi;
    const double hi = std::min((n + 1) * kHalfPi, x_max);
    const bool pole_at_hi = (n % 2 == 0);

    std::vector<double> pts;
    const int uniform = 128;
    for (int i = 0; i <= uniform; ++i) pts.push_back(lo + (hi - lo) * i / uniform);
    // Anomalous roots crowd towards the tan poles and, on the first branch, towards 0.
    for (int i = 0; i <= 90; ++i) {
      const double d = kHalfPi * std::pow(10.0, -0.5 - 14.5 * i / 90.0);
      const double pole = pole_at_hi ? (n + 1) * kHalfPi : lo;
      const double x = pole_at_hi ? pole - d : pole + d;
      if (x > lo && x < hi) pts.push_back(x);
      if (n == 0 && d < hi) pts.push_back(d);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(), [](double x) { return x <= 0.0; }),
              pts.end());

    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f.value(pts[i]);

    auto push = [&](double x, bool dbl) {
      if (x <= 0.0 || x > x_max) return;
      roots.push_back({x, n, dbl, std::abs(f.value(x)) / f.scale(x)});
    };

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (vals[i] == 0.0) {
        if (i > 0 || n == 0) push(pts[i], false);
        continue;
      }
      if (vals[i] * vals[i + 1] < 0.0) {
        push(bracket(pts[i], pts[i + 1]), false);
        continue;
      }
      // Same sign on both sides: look for a pair hidden between samples.
      if (i == 0) continue;
      const double sgn = vals[i] > 0.0 ? 1.0 : -1.0;
      if (vals[i - 1] * sgn <= 0.0 || vals[i + 1] * sgn <= 0.0) continue;
      if (std::abs(vals[i]) >= std::abs(vals[i - 1]) || std::abs(vals[i]) >= std::abs(vals[i + 1]))
        continue;
      const auto [xm, vm] = boost::math::tools::brent_find_minima(
          [&](double x) { return sgn * f.value(x); }, pts[i - 1], pts[i + 1], 52);
      if (vm < 0.0) {
        push(bracket(pts[i - 1], xm), false);
        push(bracket(xm, pts[i + 1]), false);
      } else if (vm <= kDoubleRootTol * f.scale(xm)) {
        push(xm, true);
      }
    }
    if (!vals.empty() && vals.back() == 0.0) push(pts.back(), false);
  }

  std::sort(roots.begin(), roots.end(),
            [](const AnomalousRoot& l, const AnomalousRoot& r) { return l.k < r.k; });
  std::vector<AnomalousRoot> merged;
  for (const auto& r : roots) {
    if (!merged.empty() && r.k - merged.back().k < kMergeSeparation) {
      auto& prev = merged.back();
      prev.k = 0.5 * (prev.k + r.k);
      prev.near_double = true;
      prev.residual = std::abs(f.value(prev.k)) / f.scale(prev.k);
      continue;
    }
    merged.push_back(r);
  }
  return merged;
}

int count_in(const std::vector<AnomalousRoot>& roots, double lo, double hi) {
  int n = 0;
  for (const auto& r : roots) {
    if (r.k > lo && r.k < hi) n += r.near_double ? 2 : 1;
  }
  return n;
}

}  // namespace

int exceptional_edge_count(int m) {
  require_m(m);
  return 4 * m - 2;
}

double anomalous_branch_function(double k, int m, double alpha, double length) {
  require_m(m);
  const double p = 1.0 - 1.0 / (2 * m - 1);
  return k - alpha * std::pow(std::abs(std::tan(k * length)), p);
}

double anomalous_residual(double k, int m, double alpha, double length) {
  require_m(m);
  const double x = k * length;
  const double lam = alpha * length;
  const int q = 4 * m - 2;
  const double lhs = pw(x, q) * pw(std::cos(x), q - 2);
  const double rhs = pw(lam, q) * pw(std::sin(x), q - 2);
  const double scale = std::abs(lhs) + std::abs(rhs);
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

std::vector<AnomalousRoot> anomalous_real_roots(int m, double alpha, double length, double k_max) {
  require_m(m);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
  if (!(k_max > 0.0)) throw std::invalid_argument("k_max must be positive");

  auto roots = scan_roots(BranchFactor(m, alpha * length), k_max * length);
  for (auto& r : roots) r.k /= length;
  return roots;
}

BranchInterval first_branch(double length) { return {0.0, kHalfPi / length}; }

BifurcationPoint critical_alpha(int m, double length, BranchInterval branch,
                                const CriticalAlphaOptions& options) {
  if (m < 2) throw std::invalid_argument("critical_alpha needs m >= 2 (m = 1 never merges)");
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
  if (!(branch.hi > branch.lo) || branch.lo < 0.0)
    throw std::invalid_argument("branch interval must satisfy 0 <= lo < hi");

  const double xlo = branch.lo * length;
  const double xhi = branch.hi * length;
  auto count_at = [&](double lam) {
    return count_in(scan_roots(BranchFactor(m, lam), xhi), xlo, xhi);
  };

  double x_seed = 0.0;
  double lam_seed = 0.0;
  if (options.use_seed) {
    x_seed = options.seed_k * length;
    lam_seed = options.seed_alpha * length;
  } else {
    const int n = std::max(options.scan_points, 2);
    std::vector<double> lams(static_cast<std::size_t>(n));
    std::vector<int> counts(lams.size());
    for (int i = 0; i < n; ++i) {
      lams[static_cast<std::size_t>(i)] =
          options.lambda_lo * std::pow(options.lambda_hi / options.lambda_lo,
                                       static_cast<double>(i) / (n - 1));
    }
    parallel_for(lams.size(), [&](std::size_t i) { counts[i] = count_at(lams[i]); });

    std::optional<std::size_t> drop;
    for (std::size_t i = 0; i + 1 < lams.size(); ++i) {
      if (counts[i] >= 2 && counts[i + 1] < counts[i]) {
        drop = i;
        break;
      }
    }
    if (!drop) {
      std::ostringstream os;
      os << "no root-pair merge in branch (" << branch.lo << ", " << branch.hi
         << ") for alpha*L in [" << options.lambda_lo << ", " << options.lambda_hi
         << "]; counts:";
      for (int c : counts) os << ' ' << c;
      throw BifurcationNotFound(os.str());
    }

    double lam_lo = lams[*drop], lam_hi = lams[*drop + 1];
    const int count_lo = counts[*drop];
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (lam_lo + lam_hi);
      (count_at(mid) >= count_lo ? lam_lo : lam_hi) = mid;
    }
    // The merging pair is the closest adjacent pair just below the fold.
    const auto roots = scan_roots(BranchFactor(m, lam_lo), xhi);
    std::vector<double> inside;
    for (const auto& r : roots) {
      if (r.k > xlo && r.k < xhi) inside.push_back(r.k);
    }
    x_seed = inside.empty() ? 0.5 * (xlo + xhi) : inside.front();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < inside.size(); ++i) {
      if (inside[i + 1] - inside[i] < best) {
        best = inside[i + 1] - inside[i];
        x_seed = 0.5 * (inside[i] + inside[i + 1]);
      }
    }
    lam_seed = 0.5 * (lam_lo + lam_hi);
  }

  // Damped Newton on (a - b, d(a - b)/dx) = 0 over (x, lambda).
  double x = x_seed, lam = lam_seed;
  auto residual = [&](double xv, double lv) {
    BranchFactor f(m, lv);
    const double sc = f.scale(xv);
    return std::hypot(f.value(xv) / sc, f.dx(xv) / sc);
  };
  double res = residual(x, lam);
  int iters = 0;
  for (; iters < 100 && res > options.tol; ++iters) {
    BranchFactor f(m, lam);
    const double f1 = f.value(x), f2 = f.dx(x);
    const double j11 = f.dx(x), j12 = f.dlam(x), j21 = f.dxx(x), j22 = f.dx_dlam(x);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    const double dx = (f1 * j22 - f2 * j12) / det;
    const double dl = (j11 * f2 - j21 * f1) / det;
    double step = 1.0;
    double trial = residual(x - dx, lam - dl);
    for (int h = 0; h < 60 && !(trial < res); ++h) {
      step *= 0.5;
      trial = residual(x - step * dx, lam - step * dl);
    }
    if (!(trial < res)) break;
    x -= step * dx;
    lam -= step * dl;
    res = trial;
  }

  BifurcationPoint out;
  out.m = m;
  out.alpha_critical = lam / length;
  out.k_merge = x / length;
  out.newton_iterations = iters;
  const double p = 1.0 - 1.0 / (2 * m - 1);
  const double t = std::tan(x);
  const double c = std::cos(x);
  out.residual_g = std::abs(x - lam * std::pow(std::abs(t), p)) / length;
  out.residual_dg =
      std::abs(1.0 - lam * p * std::pow(std::abs(t), p - 1.0) / (c * c) * (t < 0 ? -1.0 : 1.0));
  if (!(out.residual_g < 1e-8 && out.residual_dg < 1e-8) || x <= xlo || x >= xhi) {
    std::ostringstream os;
    os << "fold solver did not converge: k = " << out.k_merge << ", alpha = " << out.alpha_critical
       << ", |g| = " << out.residual_g << ", |g'| = " << out.residual_dg;
    throw BifurcationNotFound(os.str());
  }
  return out;
}

BifurcationPoint critical_alpha(int m, double length) {
  return critical_alpha(m, length, first_branch(length));
}

std::vector<SweepRow> alpha_sweep(int m, double length, double alpha_min, double alpha_max,
                                  int steps, double k_max) {
  require_m(m);
  if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
  if (!(alpha_min > 0.0) || !(alpha_max > alpha_min))
    throw std::invalid_argument("sweep range must satisfy 0 < alpha_min < alpha_max");
  if (!(length > 0.0) || !(k_max > 0.0))
    throw std::invalid_argument("length and k_max must be positive");

  const BranchInterval first = first_branch(length);
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  parallel_for(rows.size(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.alpha = alpha_min + (alpha_max - alpha_min) * static_cast<double>(i) / (steps - 1);
    row.real_roots = anomalous_real_roots(m, row.alpha, length, k_max);
    row.first_branch_count = count_in(row.real_roots, first.lo, first.hi);
  });

  if (m < 2) return rows;
  const bool any_complex = std::any_of(rows.begin(), rows.end(),
                                       [](const SweepRow& r) { return r.first_branch_count == 0; });
  if (!any_complex) return rows;

  std::optional<BifurcationPoint> fold;
  try {
    fold = critical_alpha(m, length);
  } catch (const BifurcationNotFound&) {
    return rows;
  }

  // Local continuation: complex roots of the full secular numerator near the fold.
  RootSearchRegion local;
  local.mu_min = 0.1 * first.hi;
  local.mu_max = 0.97 * first.hi;
  local.nu_min = -first.hi;
  local.nu_max = first.hi;
  local.grid_mu = 40;
  local.grid_nu = 40;
  const cplx merge{fold->k_merge, 0.0};
  const int q = exceptional_edge_count(m);
  for (auto& row : rows) {
    if (row.first_branch_count != 0 || row.alpha <= fold->alpha_critical) continue;
    const auto found = complex_roots(StarGraphModel(q, row.alpha, length), local);
    const ComplexRoot* best = nullptr;
    for (const auto& r : found) {
      if (r.k.nu <= 0.0) continue;
      if (!best || std::abs(r.k.value() - merge) < std::abs(best->k.value() - merge)) best = &r;
    }
    if (!best) continue;
    const cplx upper = best->k.value();
    for (const auto& r : found) {
      if (std::abs(r.k.value() - std::conj(upper)) <= 1e-8 * std::abs(upper)) {
        row.complex_pair.push_back(r.k.value());
      }
    }
    row.complex_pair.push_back(upper);
  }
  return rows;
}

}  // namespace stargraph
