#pragma once

namespace stargraph {

/// Rectangle of the (mu, nu) wavenumber plane plus search controls.
struct RootSearchRegion {
  double mu_min = 0.1;
  double mu_max = 5.0;
  double nu_min = -2.0;
  double nu_max = 2.0;
  int grid_mu = 96;
  int grid_nu = 96;
  double tol_root = 1e-10;
  int max_iter = 100;

  /// Throws std::invalid_argument when bounds, grid or tolerance are unusable.
  void validate() const;

  bool contains(double mu, double nu) const noexcept {
    return mu >= mu_min && mu <= mu_max && nu >= nu_min && nu <= nu_max;
  }
  bool conjugation_symmetric() const noexcept { return nu_min == -nu_max; }

  RootSearchRegion inflated(double margin) const {
    RootSearchRegion r = *this;
    r.mu_min -= margin;
    r.mu_max += margin;
    r.nu_min -= margin;
    r.nu_max += margin;
    return r;
  }
};

}  // namespace stargraph
