#pragma once

#include "sbt/jet.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>

namespace sbt {

using ScalarJetField = std::function<Jet2<double>(const Eigen::VectorXd&)>;

/// sqrt(1 + |g|^2).
double graph_area_element(const Eigen::VectorXd& gradient);

/// Mean curvature of the graph x -> (x, phi(x)) with upward normal orientation such that
/// the upper unit hemisphere has H = 1:
/// H = (-Delta phi / w + grad^T D^2 phi grad / w^3) / (N-1), w = sqrt(1 + |grad|^2).
double graph_mean_curvature(const Jet2<double>& jet, int dim_n);

/// Hypersurface {(x, phi(x)) : |x| < patch_radius} in R^N.
struct GraphPatch {
  int dim_n = 0;
  ScalarJetField profile;
  double patch_radius = 1.0;

  Jet2<double> jet(const Eigen::VectorXd& x) const;
  Eigen::VectorXd point(const Eigen::VectorXd& x) const;
  /// Unit normal pointing away from the region below the graph.
  Eigen::VectorXd normal(const Eigen::VectorXd& x) const;
  double mean_curvature(const Eigen::VectorXd& x) const;
};

/// Radial graph {center + (base_radius + omega(x)) x : x in S^{N-1}}.
///
/// `omega` returns the jet, taken in R^N, of any extension of omega off the sphere;
/// only its tangential part enters the geometry.
struct RadialSurface {
  Eigen::VectorXd center;
  double base_radius = 1.0;
  ScalarJetField omega;

  int dim_n() const { return static_cast<int>(center.size()); }
  double radius(const Eigen::VectorXd& x) const;
  Eigen::VectorXd sphere_gradient(const Eigen::VectorXd& x) const;
  Eigen::VectorXd point(const Eigen::VectorXd& x) const;
  Eigen::VectorXd normal(const Eigen::VectorXd& x) const;
  double mean_curvature(const Eigen::VectorXd& x) const;
};

/// RadialSurface with omega identically zero.
RadialSurface round_sphere(const Eigen::VectorXd& center, double radius);

/// Outward unit normal ((b + w) x - grad_S w) / sqrt((b + w)^2 + |grad_S w|^2) of a radial graph.
Eigen::VectorXd radial_normal(double omega_value, const Eigen::VectorXd& sphere_gradient, const Eigen::VectorXd& x,
                              double base_radius);

/// Mean curvature of a radial graph at direction x (unit vector), computed as the divergence of
/// the unit normal of the level set F(y) = |y - c| - b - omega((y - c)/|y - c|).
double radial_mean_curvature(const RadialSurface& surface, const Eigen::VectorXd& x);

struct SurfaceSample {
  Eigen::VectorXd point;
  Eigen::VectorXd normal;
};

/// omega sampled on the directions of the input points, relative to `center` and `base_radius`.
struct SampledRadialGraph {
  Eigen::VectorXd center;
  double base_radius = 1.0;
  Eigen::MatrixXd directions;  ///< unit vectors, column-wise
  Eigen::VectorXd omega;
};

/// Radial description of a sampled surface. Every sample must satisfy nu . (y - center) > 0;
/// otherwise StarShapeError is raised carrying the first violating point and normal.
SampledRadialGraph radial_extraction(std::span<const SurfaceSample> samples, const Eigen::VectorXd& center,
                                     double base_radius = 1.0);

struct RadiiGap {
  double rho_e = 0.0;
  double rho_i = 0.0;
  double gap = 0.0;
};

/// Largest and smallest distance from center over column-wise sample points.
RadiiGap radii_gap(const Eigen::MatrixXd& points, const Eigen::VectorXd& center);

}  // namespace sbt
