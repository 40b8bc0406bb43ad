// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stargraph/anomalous.hpp"
#include "stargraph/roots.hpp"
#include "stargraph/secular.hpp"

namespace {

using namespace stargraph;
constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

RootSearchRegion box(double mu0, double mu1, double nu0, double nu1) {
  RootSearchRegion r;
  r.mu_min = mu0;
  r.mu_max = mu1;
  r.nu_min = nu0;
  r.nu_max = nu1;
  r.grid_mu = 64;
  r.grid_nu = 64;
  return r;
}

const RootSearchRegion kThreeEdgeRegion = box(0.5, 2.0, -1.0, 1.0);
const RootSearchRegion kFourEdgeRegion = box(1.0, 2.5, -1.0, 0.0);

Verdict q2_spectrum() {
  const auto roots = real_spectrum(StarGraphModel(2, 1.0, 1.0), 20.0);
  std::vector<double> expected{1.0};
  for (int n = 1; n <= 12; ++n) expected.push_back(n * kPi / 2);
  std::sort(expected.begin(), expected.end());
  if (roots.size() != expected.size())
    return {false, "found " + std::to_string(roots.size()) + " roots, expected 13"};
  double worst = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    worst = std::max(worst, std::abs(roots[i].k - expected[i]));
  std::ostringstream os;
  os << "13 roots, max deviation " << worst;
  return {worst <= 1e-10, os.str()};
}

Verdict q3_complex_root() {
  const StarGraphModel m = StarGraphModel::from_lambda(3, 1.0);
  const auto roots = complex_roots(m, kThreeEdgeRegion);
  bool upper = false, lower = false;
  std::ostringstream os;
  os << "roots:";
  for (const auto& r : roots) {
    os << " " << r.k.mu << (r.k.nu < 0 ? "" : "+") << r.k.nu << "i";
    const bool hit = std::abs(r.k.mu - 1.20484) <= 5e-4 && std::abs(std::abs(r.k.nu) - 0.3507) <= 5e-4;
    if (hit && r.k.nu > 0) upper = true;
    if (hit && r.k.nu < 0) lower = true;
  }
  os << "; target 1.20484+-0.3507i " << (upper && lower ? "found" : "not found");
  return {upper && lower, os.str()};
}

Verdict q4_complex_root() {
  const StarGraphModel m(4, 1.0, 1.0);
  const auto roots = complex_roots(m, kFourEdgeRegion);
  for (const auto& r : roots) {
    if (std::abs(r.k.mu - 1.7025) <= 5e-4 && std::abs(r.k.nu + 0.3165) <= 5e-4) {
      const auto t = triple_residual(r.k, m);
      std::ostringstream os;
      os << "k = " << r.k.mu << r.k.nu << "i, triple residual " << t.max();
      return {t.all_below(1e-6), os.str()};
    }
  }
  return {false, "no root within 5e-4 of 1.7025-0.3165i"};
}

Verdict m2_critical() {
  const auto p = critical_alpha(2, 1.0);
  std::ostringstream os;
  os << "alpha_c = " << p.alpha_critical << ", k_merge = " << p.k_merge;
  return {std::abs(p.alpha_critical - 0.7863) <= 1e-3 && std::abs(p.k_merge - 0.748) <= 1e-3,
          os.str()};
}

Verdict form_equivalence() {
  int disagreements = 0, roots_checked = 0, bad_roots = 0;
  for (int q = 2; q <= 10; ++q) {
    const StarGraphModel m = StarGraphModel::from_lambda(q, 1.0);
    const RootSearchRegion region;
    disagreements += static_cast<int>(cross_verify(m, region).disagreements.size());
    for (const auto& r : complex_roots(m, region)) {
      ++roots_checked;
      const auto s = secular_sum(r.k, m);
      if (!(std::abs(s.value) < 1e-8 * s.scale)) ++bad_roots;
    }
  }
  std::ostringstream os;
  os << disagreements << " disagreements over 9x200 samples; " << bad_roots << "/" << roots_checked
     << " closed-form roots with |sum| >= 1e-8 scale";
  return {disagreements == 0 && bad_roots == 0 && roots_checked > 0, os.str()};
}

Verdict determinant_oracle() {
  int roots = 0, root_failures = 0, non_roots = 0, non_root_failures = 0;
  std::mt19937_64 rng(2012);
  for (int q = 2; q <= 6; ++q) {
    const StarGraphModel m(q, 1.0, 1.0);
    const RootSearchRegion region = box(0.2, 5.0, -1.5, 1.5);
    std::vector<cplx> found;
    for (const auto& r : real_spectrum(m, 5.0)) {
      ++roots;
      found.emplace_back(r.k, 0.0);
      if (!matching_determinant(ComplexWaveNumber(r.k, 0), m).is_root()) ++root_failures;
    }
    for (const auto& r : complex_roots(m, region)) {
      ++roots;
      found.push_back(r.k.value());
      if (!matching_determinant(r.k, m).is_root()) ++root_failures;
    }
    std::uniform_real_distribution<double> mu(region.mu_min, region.mu_max),
        nu(region.nu_min, region.nu_max);
    int drawn = 0;
    while (drawn < 50) {
      const cplx k(mu(rng), nu(rng));
      const bool close = std::any_of(found.begin(), found.end(),
                                     [&](cplx z) { return std::abs(z - k) < 1e-2; });
      if (close) continue;
      ++drawn;
      ++non_roots;
      if (matching_determinant(ComplexWaveNumber(k), m).is_root()) ++non_root_failures;
    }
  }
  for (int m = 2; m <= 3; ++m) {
    const StarGraphModel model(exceptional_edge_count(m), 0.3, 1.0);
    for (const auto& r : anomalous_real_roots(m, 0.3, 1.0, 10.0)) {
      ++roots;
      if (!matching_determinant(ComplexWaveNumber(r.k, 0), model).is_root()) ++root_failures;
    }
  }
  std::ostringstream os;
  os << root_failures << "/" << roots << " roots above threshold, " << non_root_failures << "/"
     << non_roots << " non-roots below threshold";
  return {root_failures == 0 && non_root_failures == 0, os.str()};
}

Verdict q_independence() {
  const double alpha = 0.7, length = 1.3;
  std::set<double> reference;
  bool same = true, anomalous_ok = true;
  for (int q = 2; q <= 5; ++q) {
    std::set<double> generic;
    bool has_alpha = false;
    for (const auto& r : real_spectrum(StarGraphModel(q, alpha, length), 12.0)) {
      if (r.classification.kind == RootKind::GenericReal) generic.insert(r.k);
      if (r.k == alpha) has_alpha = true;
    }
    if (q == 2) reference = generic;
    else same = same && generic == reference;
    anomalous_ok = anomalous_ok && (has_alpha == (q == 2));
  }
  std::ostringstream os;
  os << reference.size() << " generic roots, sets " << (same ? "identical" : "differ")
     << ", k=alpha " << (anomalous_ok ? "only for q=2" : "misplaced");
  return {same && anomalous_ok && !reference.empty(), os.str()};
}

Verdict conjugation_closure() {
  const RootSearchRegion region = box(0.5, 4.0, -1.0, 1.0);
  int roots = 0, unpaired = 0;
  for (int q : {3, 5}) {
    const auto found = complex_roots(StarGraphModel::from_lambda(q, 1.0), region);
    for (const auto& r : found) {
      ++roots;
      const bool paired = std::any_of(found.begin(), found.end(), [&](const ComplexRoot& o) {
        return std::abs(o.k.value() - std::conj(r.k.value())) <= 2 * region.tol_root;
      });
      if (!paired) ++unpaired;
    }
  }
  std::ostringstream os;
  os << unpaired << "/" << roots << " complex roots without conjugate partner (q=3,5)";
  return {unpaired == 0 && roots > 0, os.str()};
}

Verdict bifurcation_parity() {
  const double critical = critical_alpha(2, 1.0).alpha_critical;
  std::vector<int> counts;
  std::vector<double> alphas;
  for (int i = 0; i <= 90; ++i) {
    const double alpha = 0.1 + 0.01 * i;
    int n = 0;
    for (const auto& r : anomalous_real_roots(2, alpha, 1.0, kPi / 2))
      if (r.k < kPi / 2) ++n;
    counts.push_back(n);
    alphas.push_back(alpha);
  }
  int transitions = 0;
  double at = 0.0;
  bool values_ok = counts.front() == 2 && counts.back() == 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    values_ok = values_ok && (counts[i] == 0 || counts[i] == 2);
    if (i > 0 && counts[i] != counts[i - 1]) {
      ++transitions;
      at = alphas[i];
    }
  }
  const bool consistent = transitions == 1 && at - 0.01 < critical && critical <= at;
  std::ostringstream os;
  os << transitions << " transition(s), at alpha " << at << " (critical " << critical << ")";
  return {values_ok && consistent, os.str()};
}

Verdict certificates() {
  const auto three = analyze_region(StarGraphModel::from_lambda(3, 1.0), kThreeEdgeRegion);
  const auto four = analyze_region(StarGraphModel(4, 1.0, 1.0), kFourEdgeRegion);
  std::ostringstream os;
  auto describe = [&](const char* name, const SpectrumResult& r) {
    os << name << ": count " << (r.count_certificate ? std::to_string(*r.count_certificate) : "n/a")
       << ", located " << r.located() << "; ";
  };
  describe("q=3", three);
  describe("q=4", four);
  return {three.certified() && four.certified(), os.str()};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 means untimed
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "q=2 real spectrum", 1.0, q2_spectrum},
      {2, "q=3 complex root 1.20484+-0.3507i", 5.0, q3_complex_root},
      {3, "q=4 complex root 1.7025-0.3165i", 5.0, q4_complex_root},
      {4, "m=2 critical coupling", 5.0, m2_critical},
      {5, "edge sum vs closed form", 0.0, form_equivalence},
      {6, "matching determinant oracle", 0.0, determinant_oracle},
      {7, "generic real roots independent of q", 0.0, q_independence},
      {8, "conjugation closure q=3,5", 0.0, conjugation_closure},
      {9, "m=2 bifurcation parity", 0.0, bifurcation_parity},
      {10, "argument-principle certificates", 0.0, certificates},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds > c.time_limit) {
      v.pass = false;
      v.detail += " [over time limit]";
    }
    if (!v.pass) ++failed;
    std::printf("AC%-2d %s  %s (%.3f s) -- %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, seconds,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
