#pragma once

#include <Eigen/Dense>

#include <vector>

namespace sbt {

enum class DomainKind { Interval, Box, Sphere, OrthantSphere, Ball, OrthantBall };

/// Nodes are stored column-wise (dim x M).
struct QuadratureRule {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  DomainKind kind = DomainKind::Box;
  double extent = 1.0;  ///< sphere/ball radius or box half-width
  bool hyperplane_safe = false;

  Eigen::Index size() const { return weights.size(); }
  Eigen::Index dim() const { return nodes.rows(); }
  double total_weight() const { return weights.sum(); }
};

/// One-dimensional rule: nodes and weights on an interval.
struct Rule1d {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [a,b]; nodes by Newton iteration on P_n.
Rule1d gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss-Legendre with n points on each panel [breaks[i], breaks[i+1]].
Rule1d composite_gauss(const std::vector<double>& breaks, int n);

/// Panels geometrically graded toward a (and toward b as well when two_sided),
/// smallest panel ratio^levels of the interval length.
Rule1d graded_gauss(double a, double b, int n, int levels, double ratio, bool two_sided);

/// Closed-form measure of the unit sphere S^{N-1} in R^N, 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int dim_n);
/// Volume of the unit ball in R^d.
double ball_volume(int d);

/// Default node cap for tensor rules; exceeding it raises BudgetError.
inline constexpr long kDefaultNodeCap = 20'000'000;

/// Hyperspherical tensor rule on the unit sphere S^{N-1} in R^N: Gauss-Legendre in each
/// polar angle, trapezoid with 2*resolution points in azimuth.
QuadratureRule sphere_rule(int dim_n, int resolution, long node_cap = kDefaultNodeCap);

/// Rule on the part of the unit sphere S^{d-1} in R^d with all coordinates positive.
/// With graded = true the angles use two-sided graded panels, which resolves integrands
/// that blow up like a power of a coordinate near the coordinate hyperplanes.
QuadratureRule orthant_sphere_rule(int d, int resolution, bool graded = false,
                                   long node_cap = kDefaultNodeCap);

/// Polar-product rule on a ball of radius `radius` in R^d (or its positive orthant): the
/// radial rule is supplied on [0, radius] without the r^{d-1} factor, which is applied here.
QuadratureRule ball_rule(int d, double radius, const Rule1d& radial, const QuadratureRule& directions);

/// Rule on [-t,t]^dim. Gauss-Legendre per axis, or shifted midpoint when hyperplane_safe,
/// in which case every node satisfies min_i |x_i| >= t/(2 resolution).
QuadratureRule scaled_box_rule(double t, int dim, int resolution, bool hyperplane_safe);

/// Tensor product of one-dimensional rules.
QuadratureRule tensor_rule(const std::vector<Rule1d>& axes);

}  // namespace sbt
