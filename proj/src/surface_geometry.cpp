#include "sbt/surface_geometry.hpp"

#include "sbt/errors.hpp"

#include <cmath>
#include <sstream>

namespace sbt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double graph_area_element(const VectorXd& gradient) { return std::sqrt(1.0 + gradient.squaredNorm()); }

double graph_mean_curvature(const Jet2<double>& jet, int dim_n) {
  if (jet.dim() != dim_n - 1) throw ParameterError("graph_mean_curvature: jet dimension must be N-1");
  const double w2 = 1.0 + jet.gradient.squaredNorm();
  const double w = std::sqrt(w2);
  const double quad = jet.gradient.dot(jet.hessian * jet.gradient);
  return (-jet.laplacian() / w + quad / (w2 * w)) / (dim_n - 1);
}

Jet2<double> GraphPatch::jet(const VectorXd& x) const {
  if (x.size() != dim_n - 1) throw ParameterError("GraphPatch: point dimension must be N-1");
  if (!(x.norm() < patch_radius)) throw DomainError("GraphPatch: point outside the patch");
  return profile(x);
}

VectorXd GraphPatch::point(const VectorXd& x) const {
  VectorXd y(dim_n);
  y.head(dim_n - 1) = x;
  y(dim_n - 1) = jet(x).value;
  return y;
}

VectorXd GraphPatch::normal(const VectorXd& x) const {
  const auto j = jet(x);
  VectorXd n(dim_n);
  n.head(dim_n - 1) = -j.gradient;
  n(dim_n - 1) = 1.0;
  return n / graph_area_element(j.gradient);
}

double GraphPatch::mean_curvature(const VectorXd& x) const { return graph_mean_curvature(jet(x), dim_n); }

RadialSurface round_sphere(const VectorXd& center, double radius) {
  const Index n = center.size();
  return RadialSurface{center, radius, [n](const VectorXd&) { return Jet2<double>(n); }};
}

double RadialSurface::radius(const VectorXd& x) const { return base_radius + omega(x).value; }

VectorXd RadialSurface::sphere_gradient(const VectorXd& x) const {
  const VectorXd g = omega(x).gradient;
  return g - x * x.dot(g);
}

VectorXd RadialSurface::point(const VectorXd& x) const { return center + radius(x) * x; }

VectorXd RadialSurface::normal(const VectorXd& x) const {
  const auto j = omega(x);
  return radial_normal(j.value, j.gradient - x * x.dot(j.gradient), x, base_radius);
}

double RadialSurface::mean_curvature(const VectorXd& x) const { return radial_mean_curvature(*this, x); }

VectorXd radial_normal(double omega_value, const VectorXd& sphere_gradient, const VectorXd& x, double base_radius) {
  if (std::abs(x.dot(sphere_gradient)) > 1e-10 * (1.0 + sphere_gradient.norm()))
    throw ParameterError("radial_normal: sphere gradient must be tangent to the sphere at x");
  const double rho = base_radius + omega_value;
  const double denom = std::sqrt(rho * rho + sphere_gradient.squaredNorm());
  if (!(denom > 1e-300)) throw NumericalError("radial_normal: degenerate normal");
  return (rho * x - sphere_gradient) / denom;
}

double radial_mean_curvature(const RadialSurface& surface, const VectorXd& x) {
  const Index n = x.size();
  if (n != surface.dim_n()) throw ParameterError("radial_mean_curvature: direction dimension mismatch");
  const auto w = surface.omega(x);
  const double rho = surface.base_radius + w.value;
  if (!(rho > 0.0)) throw DomainError("radial_mean_curvature: surface passes through the center");
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd proj = id - x * x.transpose();
  const VectorXd& g = w.gradient;
  const double gx = g.dot(x);
  // derivatives of y -> omega((y-c)/|y-c|) at y = c + rho x
  const MatrixXd dp = proj / rho;
  const VectorXd grad_w = dp.transpose() * g;
  const MatrixXd hess_w = dp.transpose() * w.hessian * dp -
                          (g * x.transpose() + x * g.transpose() + gx * id) / (rho * rho) +
                          3.0 * gx * (x * x.transpose()) / (rho * rho);
  const VectorXd grad_f = x - grad_w;
  const MatrixXd hess_f = proj / rho - hess_w;
  const double norm = grad_f.norm();
  if (!(norm > 1e-14)) throw NumericalError("radial_mean_curvature: degenerate level-set gradient");
  const double div = hess_f.trace() / norm - grad_f.dot(hess_f * grad_f) / (norm * norm * norm);
  return div / (n - 1);
}

SampledRadialGraph radial_extraction(std::span<const SurfaceSample> samples, const VectorXd& center,
                                     double base_radius) {
  if (samples.empty()) throw ParameterError("radial_extraction: no samples");
  const Index n = center.size();
  SampledRadialGraph out;
  out.center = center;
  out.base_radius = base_radius;
  out.directions.resize(n, static_cast<Index>(samples.size()));
  out.omega.resize(static_cast<Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.point.size() != n || s.normal.size() != n) throw ParameterError("radial_extraction: dimension mismatch");
    const VectorXd rel = s.point - center;
    if (!(s.normal.dot(rel) > 0.0)) {
      std::ostringstream msg;
      msg << "radial_extraction: surface is not star-shaped about the center (sample " << i << ")";
      throw StarShapeError(msg.str(), s.point, s.normal);
    }
    const double r = rel.norm();
    out.directions.col(static_cast<Index>(i)) = rel / r;
    out.omega(static_cast<Index>(i)) = r - base_radius;
  }
  return out;
}

RadiiGap radii_gap(const MatrixXd& points, const VectorXd& center) {
  if (points.cols() == 0) throw ParameterError("radii_gap: no samples");
  if (points.rows() != center.size()) throw ParameterError("radii_gap: dimension mismatch");
  const VectorXd dist = (points.colwise() - center).colwise().norm().transpose();
  RadiiGap g;
  g.rho_e = dist.maxCoeff();
  g.rho_i = dist.minCoeff();
  g.gap = g.rho_e - g.rho_i;
  return g;
}

}  // namespace sbt
