#pragma once

#include "sbt/analytic_fields.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/surface_geometry.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace sbt {

/// The perturbed sphere Gamma_t: graph of phi_t over B_t, unit sphere elsewhere.
struct FamilySurface {
  FamilyParams params;
  bool singular_mode = false;
  GraphPatch cap;  ///< profile phi_t, charted over B_t

  double cap_radius() const { return params.t; }
  bool is_sphere() const { return params.t == 0.0; }
};

/// Validates the parameters. Singular mode needs k = 1 and alpha < 1, and when r is given
/// alpha must lie strictly inside ((r-1)/r, 1) so that H_t is in L^r.
FamilySurface build_family_surface(const FamilyParams& params, bool singular_mode,
                                   std::optional<double> r = std::nullopt);

/// Resolution of the cap rule. The rule lives on the positive orthant of B_t and carries
/// the 2^{N-1} symmetry multiplicity in its weights; nodes scale with t.
struct FamilyRules {
  int radial = 12;   ///< Gauss points on each of [0, t/2] and [t/2, t]
  int angular = 0;   ///< per-angle resolution; 0 picks about 2e4 directions
  int gap_grid = 0;  ///< points per axis in the gap scan; 0 picks about 2e5 points
  int level = 0;     ///< each level doubles the automatic angular resolution

  FamilyRules refined() const;
};

QuadratureRule family_cap_rule(const FamilySurface& surface, const FamilyRules& rules);

/// Everything the deviation integrals need, sampled once on the cap rule.
struct CapSamples {
  QuadratureRule rule;
  Eigen::VectorXd psi;          ///< Psi_t
  Eigen::VectorXd grad_psi;     ///< |grad Psi_t|
  Eigen::VectorXd area_t;       ///< sqrt(1 + |grad phi_t|^2)
  Eigen::VectorXd area_0;       ///< sqrt(1 + |grad phi_0|^2)
  Eigen::VectorXd h_minus_one;  ///< H_t - 1
  double delta_volume = 0.0;    ///< |Omega_t| - |B_1|
  double delta_perimeter = 0.0; ///< |Gamma_t| - |S^{N-1}|
};

CapSamples sample_cap(const FamilySurface& surface, const FamilyRules& rules);

/// H0 - 1 = (dGamma - N dOmega) / (N (|B_1| + dOmega)), without cancellation.
double reference_offset(const FamilySurface& surface, const CapSamples& samples);
/// H0 = |Gamma_t| / (N |Omega_t|).
double reference_constant(const FamilySurface& surface, const FamilyRules& rules = {});

struct MeasureDeviation {
  double vol_dev = 0.0;  ///< ||Omega_t| - |B_1||
  double per_dev = 0.0;  ///< ||Gamma_t| - |S^{N-1}||
};
MeasureDeviation volume_perimeter_deviation(const FamilySurface& surface, const FamilyRules& rules = {});

/// ||H_t - H0||_{L^r(Gamma_t)}. The round remainder contributes |1 - H0|^r times its area.
double curvature_deviation_norm(const FamilySurface& surface, double r, const FamilyRules& rules = {});
double curvature_deviation_norm(const FamilySurface& surface, const CapSamples& samples, double r);

/// Radii gap about the origin: rho_i = 1 from the round remainder, rho_e - 1 the largest
/// excess |X| - 1 over the cap, found by a grid scan plus compass search.
struct OriginGap {
  double rho_e = 1.0;
  double rho_i = 1.0;
  double gap = 0.0;
  double sup_psi = 0.0;  ///< largest Psi_t seen during the search
  Eigen::VectorXd argmax;
};
OriginGap origin_radii_gap(const FamilySurface& surface, const FamilyRules& rules = {});

struct BoundCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct FamilyReport {
  double t = 0.0;
  double H0 = 1.0;
  double dev_Lr = 0.0;
  double gap = 0.0;
  double vol_dev = 0.0;
  double per_dev = 0.0;
  double max_curvature_deviation = 0.0;  ///< max |H_t - H0| over the cap nodes
  std::vector<BoundCheck> bounds;

  bool all_bounds_pass() const;
};

/// One row of the optimality chain at params.t.
FamilyReport family_report(const FamilyParams& params, double r, const FamilyRules& rules = {},
                           bool singular_mode = false);

/// count log-spaced values in [t_max / 64, t_max]; t_max defaults to t1(N, k).
std::vector<double> default_t_grid(int dim_n, int k, int count = 12, std::optional<double> t_max = std::nullopt);

}  // namespace sbt
