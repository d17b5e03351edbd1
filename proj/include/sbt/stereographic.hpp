#pragma once

#include "sbt/jet.hpp"
#include "sbt/surface_geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace sbt {

/// Stereographic chart of S^{N-1} from the north pole P = e_N.
struct SphereChart {
  int dim_n = 3;
  /// Radius of the flat ball on which the Sobolev transfer is asserted, 1/(8 (N-1)^2).
  double transfer_radius() const { return 1.0 / (8.0 * (dim_n - 1) * (dim_n - 1)); }
  /// 3 * 2^{(N+5)/p + 5/2}.
  double transfer_constant(double p) const { return 3.0 * std::pow(2.0, (dim_n + 5) / p + 2.5); }
};

/// iota(x) = x' / (1 - x_N); DomainError at the pole.
Eigen::VectorXd stereo_project(const Eigen::VectorXd& x);
/// iota^{-1}(y) = (2 y, |y|^2 - 1) / (|y|^2 + 1).
Eigen::VectorXd stereo_inverse(const Eigen::VectorXd& y);

/// iota^{-1} with its Jacobian (N x (N-1)) and second derivatives (one (N-1)x(N-1) block per component).
struct ChartMap {
  Eigen::VectorXd point;
  Eigen::MatrixXd jacobian;
  std::vector<Eigen::MatrixXd> second;
};
ChartMap stereo_inverse_jet(const Eigen::VectorXd& y);

struct Metric {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inverse;
};
/// g_ij = 4 / (|y|^2 + 1)^2 delta_ij.
Metric metric_at(const Eigen::VectorXd& y);

/// Gamma[k](i, j) = -2 (y_j delta_ik + y_i delta_jk - y_k delta_ij) / (|y|^2 + 1).
std::vector<Eigen::MatrixXd> christoffel_at(const Eigen::VectorXd& y);

struct CovariantNorms {
  double gradient_sq = 0.0;  ///< |grad_S v|^2
  double hessian_sq = 0.0;   ///< |D^2_S v|^2
};
/// Covariant gradient and Hessian norms of a chart function v given its flat jet at y.
CovariantNorms covariant_norms(const Jet2<double>& v, const Eigen::VectorXd& y);

/// |D^2_S v|^2 + |grad_S v|^2 - ((|y|^2+1)^4/32 |D^2 v|^2 + (|y|^2+1)^2/8 |grad v|^2).
double pointwise_derivative_slack(const Jet2<double>& v, const Eigen::VectorXd& y);

/// Flat jet of y -> V(iota^{-1}(y)) from the ambient jet of V at iota^{-1}(y).
Jet2<double> pull_back_jet(const ScalarJetField& ambient, const Eigen::VectorXd& y);

struct TransferResult {
  double flat_norm = 0.0;    ///< ||v o iota^{-1}||_{W^{2,p}(B_R)}
  double sphere_norm = 0.0;  ///< ||v||_{W^{2,p}(S^{N-1})}
  double ratio = 0.0;
  double min_slack = 0.0;  ///< smallest pointwise_derivative_slack over the flat nodes
};

/// W^{2,p} norms (sum convention) of an ambient field restricted to the sphere and of its chart
/// expression on B_R. Sphere derivatives are covariant, evaluated in the stereographic chart
/// from whichever pole is farther from the node.
TransferResult sobolev_transfer(const ScalarJetField& ambient, const SphereChart& chart, double p,
                                int flat_resolution = 12, int sphere_resolution = 24);

inline double sobolev_transfer_ratio(const ScalarJetField& ambient, const SphereChart& chart, double p,
                                     int flat_resolution = 12, int sphere_resolution = 24) {
  return sobolev_transfer(ambient, chart, p, flat_resolution, sphere_resolution).ratio;
}

/// Random polynomial of degree <= 3 on R^n with standard normal coefficients.
ScalarJetField random_ambient_cubic(int n, std::mt19937_64& rng);

}  // namespace sbt
