#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stargraph/model.hpp"

namespace stargraph {

// Exceptional star graphs with q = 4m - 2 edges. Their coupling factor
//   k^{4m-2} cos^{4m-4} kL - alpha^{4m-2} sin^{4m-4} kL
// factors over the reals into (a - b)(a + b) with
//   a = (kL)^{2m-1} cos^{2m-2} kL,  b = (alpha L)^{2m-1} sin^{2m-2} kL,
// and a + b > 0 for k > 0, so real anomalous roots are the sign changes of a - b.

class BifurcationNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnomalousRoot {
  double k = 0.0;
  /// Half-branch index n with kL in [n pi/2, (n+1) pi/2).
  int branch = 0;
  /// Tangential (double) root, or two roots closer than the merge threshold.
  bool near_double = false;
  /// |k^{4m-2} cos^{4m-4} - alpha^{4m-2} sin^{4m-4}| relative to its terms.
  double residual = 0.0;
};

/// Edge count q = 4m - 2 for m >= 1; throws std::invalid_argument otherwise.
int exceptional_edge_count(int m);

/// k - alpha * |tan kL|^{1 - 1/(2m-1)}.
double anomalous_branch_function(double k, int m, double alpha, double length);

/// Relative residual of the regularized q = 4m-2 factor at real k.
double anomalous_residual(double k, int m, double alpha, double length);

/// All real anomalous roots in (0, k_max], ascending. m = 1 yields k = alpha.
std::vector<AnomalousRoot> anomalous_real_roots(int m, double alpha, double length, double k_max);

struct BranchInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// The first tan branch (0, pi/(2L)).
BranchInterval first_branch(double length);

struct BifurcationPoint {
  double alpha_critical = 0.0;
  double k_merge = 0.0;
  int m = 0;
  /// |g| and |dg/dk| at the merge, g the fixed-point branch function.
  double residual_g = 0.0;
  double residual_dg = 0.0;
  int newton_iterations = 0;
};

struct CriticalAlphaOptions {
  /// Dimensionless scan range for alpha*L (geometric grid).
  double lambda_lo = 0.05;
  double lambda_hi = 2.0;
  int scan_points = 64;
  /// Optional Newton seed (k, alpha) overriding the scan-derived one.
  bool use_seed = false;
  double seed_k = 0.0;
  double seed_alpha = 0.0;
  double tol = 1e-12;
};

/// Coupling at which the two lowest anomalous roots of `branch` merge.
///
/// Solves a - b = 0 and d(a - b)/dk = 0 for (k, alpha) by damped Newton,
/// seeded from a root-count bisection over the alpha scan.
BifurcationPoint critical_alpha(int m, double length, BranchInterval branch,
                                const CriticalAlphaOptions& options = {});
BifurcationPoint critical_alpha(int m, double length);

struct SweepRow {
  double alpha = 0.0;
  std::vector<AnomalousRoot> real_roots;
  /// Complexified pair near the merge point (k units); empty while the
  /// first-branch pair is still real.
  std::vector<cplx> complex_pair;
  int first_branch_count = 0;
};

/// Anomalous-root trajectories for `steps` evenly spaced couplings, ascending.
std::vector<SweepRow> alpha_sweep(int m, double length, double alpha_min, double alpha_max,
                                  int steps, double k_max);

}  // namespace stargraph
