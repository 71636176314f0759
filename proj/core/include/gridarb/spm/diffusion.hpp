#pragma once

#include <span>
#include <vector>

namespace gridarb::spm {

/// Equal-volume shells of a sphere. Geometric quantities are stored per 4*pi
/// (shell volume (r_k^3 - r_{k-1}^3)/3, interface area r_k^2).
class RadialGrid {
 public:
  RadialGrid(int shells, double radius_m);

  int shells() const { return shells_; }
  double radius() const { return radius_; }
  std::span<const double> volumes() const { return volumes_; }
  /// Outer radius of shells 0..N-1 (the last one is the particle surface).
  std::span<const double> outer_radii() const { return outer_radii_; }
  /// Radius that halves each shell's volume; concentrations live here.
  std::span<const double> node_radii() const { return node_radii_; }

  /// Sum of the shell volumes, R^3/3.
  double total_volume() const { return radius_ * radius_ * radius_ / 3.0; }
  /// Volume average of a profile.
  double mean(std::span<const double> conc) const;
  /// Distance from the outermost node to the surface.
  double surface_gap() const { return radius_ - node_radii_.back(); }

 private:
  int shells_;
  double radius_;
  std::vector<double> volumes_;
  std::vector<double> outer_radii_;
  std::vector<double> node_radii_;
};

/// Backward-Euler finite-volume operator for Fick diffusion in a sphere:
///   V_k (c'_k - c_k)/dt = sum of interface fluxes + [k = N-1] R^2 j
/// with zero gradient at the centre and an insertion flux j (mol/m^2/s,
/// positive into the particle) at the surface. Mass is conserved exactly up to
/// rounding, and the step is unconditionally stable.
class ImplicitDiffusion {
 public:
  ImplicitDiffusion(const RadialGrid& grid, double diffusivity_m2_s, double dt_s);

  /// Profile after dt with zero surface flux.
  void relax(std::span<const double> conc, std::span<double> out) const;
  /// Profile change caused by a unit surface flux held over dt.
  std::span<const double> unit_response() const { return unit_response_; }

  double diffusivity() const { return diffusivity_; }

 private:
  void solve(std::span<double> rhs_inout) const;

  const RadialGrid* grid_;
  double diffusivity_;
  double dt_;
  std::vector<double> lower_;     // sub-diagonal coupling (negative conductance)
  std::vector<double> upper_mod_; // Thomas-modified super-diagonal
  std::vector<double> inv_pivot_;
  std::vector<double> unit_response_;
};

/// One complete step in place. Used by tests and by callers that do not need
/// the affine decomposition.
void diffusion_step(std::span<double> conc, const RadialGrid& grid, double diffusivity_m2_s,
                    double insertion_flux, double dt_s);

}  // namespace gridarb::spm
