#pragma once

#include "sbt/analytic_fields.hpp"
#include "sbt/surface_geometry.hpp"

#include <Eigen/Dense>

#include <functional>

namespace sbt {

/// Boundary curve r = R(theta) of a planar star-shaped domain, with R' and R''.
using PolarProfile = std::function<Profile1d<double>(double)>;

PolarProfile disk_profile(double radius);
/// Ellipse with semi-axes a (along x) and b (along y), centred at the origin.
PolarProfile ellipse_profile(double a, double b);
/// 1 + eps cos(m theta).
PolarProfile cosine_profile(double eps, int m);

/// Planar RadialSurface with base radius 0 and omega the 0-homogeneous extension of R.
RadialSurface polar_domain(const PolarProfile& profile);

/// R, R', R'' of a planar RadialSurface at angle theta, from the jet of its omega.
Profile1d<double> polar_radius(const RadialSurface& domain, double theta);

/// Signed curvature of the polar graph, (R^2 + 2 R'^2 - R R'') / (R^2 + R'^2)^{3/2}.
double polar_curvature(const Profile1d<double>& r);

struct TorsionMesh {
  int n_radial = 64;
  int n_angular = 256;

  TorsionMesh refined() const { return {2 * n_radial, 2 * n_angular}; }
};

/// Solution of Delta u = 2 in Omega, u = 0 on the boundary, written u = |x|^2/2 + w with w
/// harmonic and w = -R^2/2 on the boundary. Cell-centred finite volumes on the mesh
/// x = rho R(theta) (cos theta, sin theta), 0 < rho < 1.
struct TorsionSolution {
  RadialSurface domain;
  TorsionMesh mesh;

  // cell-centred fields, n_radial x n_angular
  Eigen::MatrixXd x, y, cell_area;
  Eigen::MatrixXd u, w;
  Eigen::MatrixXd w_xx, w_xy, w_yy;  ///< Hessian of w (= Hessian of u minus the identity)

  // boundary samples at the cell-centre angles
  Eigen::VectorXd theta;
  Eigen::MatrixXd boundary;  ///< 2 x n_angular points
  Eigen::MatrixXd normal;    ///< outward unit normals
  Eigen::VectorXd ds;        ///< arclength weights (trapezoid in theta)
  Eigen::VectorXd curvature;
  Eigen::VectorXd u_nu;

  double area = 0.0;       ///< |Omega|
  double perimeter = 0.0;  ///< |Gamma|
  double H0 = 0.0;         ///< |Gamma| / (2 |Omega|)
  Eigen::Vector2d z_min = Eigen::Vector2d::Zero();
  double u_min = 0.0;
  double pde_residual = 0.0;  ///< max |discrete Laplacian of w| per unit area
  double integral_u = 0.0;

  /// int_Gamma u_nu ds, equal to 2 |Omega| by the divergence theorem.
  double boundary_flux() const { return u_nu.dot(ds); }
};

/// Raises StarShapeError if R <= 0 somewhere and NumericalError if the sparse solve fails.
TorsionSolution solve_torsion(const RadialSurface& domain, const TorsionMesh& mesh = {});

/// int |D^2 h_z|^2 + H0 int (u_nu - 1/H0)^2 = int (H0 - H) u_nu^2, with h_z = |x-z|^2/2 - u.
struct IdentityResidual {
  double hessian_term = 0.0;
  double boundary_term = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double absolute = 0.0;  ///< |lhs - rhs|
  double relative = 0.0;  ///< |lhs - rhs| / max(lhs, rhs, 1e-300)
};
IdentityResidual fundamental_identity_residual(const TorsionSolution& s);

/// Distance from x to the boundary curve: coarse scan of the boundary samples, then golden-section search.
double boundary_distance(const TorsionSolution& s, const Eigen::Vector2d& x);

struct HopfRatios {
  double quadratic = 0.0;  ///< min over cells of -u / delta^2 (at least 1/2)
  double linear = 0.0;     ///< min over cells of -u / delta
};
HopfRatios hopf_bounds_check(const TorsionSolution& s);

/// || |x-z| - 1/H0 ||_{L^2(Gamma)} + || nu/H0 - (x-z) ||_{L^2(Gamma)} against ||H - H0||_{L^r(Gamma)}^{1/2},
/// z the minimum point of u.
struct RoughStability {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< 0 when both sides vanish
};
RoughStability rough_stability_check(const TorsionSolution& s, double r);

}  // namespace sbt
