#include "sbt/stereographic.hpp"

#include "sbt/errors.hpp"
#include "sbt/norms.hpp"
#include "sbt/quadrature.hpp"

#include <cmath>

namespace sbt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd stereo_project(const VectorXd& x) {
  const Index n = x.size();
  const double denom = 1.0 - x(n - 1);
  if (!(std::abs(denom) > 1e-14)) throw DomainError("stereo_project: the pole has no image");
  return x.head(n - 1) / denom;
}

VectorXd stereo_inverse(const VectorXd& y) {
  const Index d = y.size();
  const double s = y.squaredNorm(), q = s + 1.0;
  VectorXd x(d + 1);
  x.head(d) = 2.0 * y / q;
  x(d) = (s - 1.0) / q;
  return x;
}

ChartMap stereo_inverse_jet(const VectorXd& y) {
  const Index d = y.size();
  const double q = y.squaredNorm() + 1.0, q2 = q * q, q3 = q2 * q;
  ChartMap m;
  m.point = stereo_inverse(y);
  m.jacobian.resize(d + 1, d);
  m.jacobian.topRows(d) = 2.0 / q * MatrixXd::Identity(d, d) - 4.0 / q2 * y * y.transpose();
  m.jacobian.row(d) = 4.0 / q2 * y.transpose();
  m.second.assign(d + 1, MatrixXd::Zero(d, d));
  for (Index i = 0; i < d; ++i) {
    MatrixXd& h = m.second[i];
    for (Index j = 0; j < d; ++j) {
      for (Index k = 0; k < d; ++k) {
        const double sym = (i == j ? y(k) : 0.0) + (i == k ? y(j) : 0.0) + (j == k ? y(i) : 0.0);
        h(j, k) = -4.0 * sym / q2 + 16.0 * y(i) * y(j) * y(k) / q3;
      }
    }
  }
  m.second[d] = 4.0 / q2 * MatrixXd::Identity(d, d) - 16.0 / q3 * y * y.transpose();
  return m;
}

Metric metric_at(const VectorXd& y) {
  const Index d = y.size();
  const double q = y.squaredNorm() + 1.0;
  return {4.0 / (q * q) * MatrixXd::Identity(d, d), (q * q) / 4.0 * MatrixXd::Identity(d, d)};
}

std::vector<MatrixXd> christoffel_at(const VectorXd& y) {
  const Index d = y.size();
  const double q = y.squaredNorm() + 1.0;
  std::vector<MatrixXd> gamma(d, MatrixXd::Zero(d, d));
  for (Index k = 0; k < d; ++k) {
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        const double v = (i == k ? y(j) : 0.0) + (j == k ? y(i) : 0.0) - (i == j ? y(k) : 0.0);
        gamma[k](i, j) = -2.0 * v / q;
      }
    }
  }
  return gamma;
}

CovariantNorms covariant_norms(const Jet2<double>& v, const VectorXd& y) {
  const double q = y.squaredNorm() + 1.0;
  const double c = q * q / 4.0;  // conformal factor of g^{-1}
  const auto gamma = christoffel_at(y);
  MatrixXd cov = v.hessian;
  for (Index k = 0; k < y.size(); ++k) cov -= gamma[k] * v.gradient(k);
  return {c * v.gradient.squaredNorm(), c * c * cov.squaredNorm()};
}

double pointwise_derivative_slack(const Jet2<double>& v, const VectorXd& y) {
  const auto cn = covariant_norms(v, y);
  const double q = y.squaredNorm() + 1.0;
  const double q2 = q * q;
  return cn.hessian_sq + cn.gradient_sq - (q2 * q2 / 32.0 * v.hessian.squaredNorm() + q2 / 8.0 * v.gradient.squaredNorm());
}

Jet2<double> pull_back_jet(const ScalarJetField& ambient, const VectorXd& y) {
  const ChartMap m = stereo_inverse_jet(y);
  const auto a = ambient(m.point);
  Jet2<double> out;
  out.value = a.value;
  out.gradient = m.jacobian.transpose() * a.gradient;
  out.hessian = m.jacobian.transpose() * a.hessian * m.jacobian;
  for (Index i = 0; i < m.point.size(); ++i) out.hessian += a.gradient(i) * m.second[i];
  return out;
}

TransferResult sobolev_transfer(const ScalarJetField& ambient, const SphereChart& chart, double p, int flat_resolution,
                                int sphere_resolution) {
  const int n = chart.dim_n;
  if (n < 3) throw ParameterError("sobolev_transfer: need N >= 3");
  if (!(p >= 1.0) || p == kInf) throw ParameterError("sobolev_transfer: p must lie in [1, inf)");
  const int d = n - 1;
  const double radius = chart.transfer_radius();

  const QuadratureRule flat =
      ball_rule(d, radius, gauss_legendre(flat_resolution, 0.0, radius), sphere_rule(d, std::max(4, flat_resolution)));
  VectorXd f0(flat.size()), f1(flat.size()), f2(flat.size());
  TransferResult out;
  out.min_slack = kInf;
  for (Index i = 0; i < flat.size(); ++i) {
    const VectorXd y = flat.nodes.col(i);
    const auto j = pull_back_jet(ambient, y);
    f0(i) = std::abs(j.value);
    f1(i) = j.gradient.norm();
    f2(i) = j.hessian.norm();
    out.min_slack = std::min(out.min_slack, pointwise_derivative_slack(j, y));
  }
  out.flat_norm = lr_norm(f0, flat, p) + lr_norm(f1, flat, p) + lr_norm(f2, flat, p);

  const QuadratureRule sphere = sphere_rule(n, sphere_resolution);
  // the field reflected through the equator, for nodes charted from the south pole
  const ScalarJetField reflected = [&ambient, n](const VectorXd& z) {
    VectorXd rz = z;
    rz(n - 1) = -rz(n - 1);
    auto j = ambient(rz);
    j.gradient(n - 1) = -j.gradient(n - 1);
    j.hessian.row(n - 1) *= -1.0;
    j.hessian.col(n - 1) *= -1.0;
    return j;
  };
  VectorXd s0(sphere.size()), s1(sphere.size()), s2(sphere.size());
  for (Index i = 0; i < sphere.size(); ++i) {
    VectorXd x = sphere.nodes.col(i);
    const bool north = x(n - 1) > 0.0;
    if (north) x(n - 1) = -x(n - 1);
    const VectorXd y = stereo_project(x);
    const auto j = pull_back_jet(north ? reflected : ambient, y);
    const auto cn = covariant_norms(j, y);
    s0(i) = std::abs(j.value);
    s1(i) = std::sqrt(cn.gradient_sq);
    s2(i) = std::sqrt(cn.hessian_sq);
  }
  out.sphere_norm = lr_norm(s0, sphere, p) + lr_norm(s1, sphere, p) + lr_norm(s2, sphere, p);
  if (!(out.sphere_norm > 0.0)) throw ParameterError("sobolev_transfer: field vanishes on the sphere");
  out.ratio = out.flat_norm / out.sphere_norm;
  return out;
}

ScalarJetField random_ambient_cubic(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double c0 = g(rng);
  VectorXd a(n);
  for (int i = 0; i < n; ++i) a(i) = g(rng);
  MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = g(rng);
  b = 0.5 * (b + b.transpose()).eval();
  // totally symmetric cubic coefficients c[i](j, k)
  std::vector<MatrixXd> raw(n, MatrixXd(n, n)), c(n, MatrixXd(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) raw[i](j, k) = g(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        c[i](j, k) = (raw[i](j, k) + raw[i](k, j) + raw[j](i, k) + raw[j](k, i) + raw[k](i, j) + raw[k](j, i)) / 6.0;
  return [c0, a, b, c, n](const VectorXd& x) {
    Jet2<double> j(n);
    VectorXd cx(n);
    MatrixXd cxx(n, n);
    for (int i = 0; i < n; ++i) {
      cx(i) = x.dot(c[i] * x);
      cxx.row(i) = (c[i] * x).transpose();
    }
    j.value = c0 + a.dot(x) + x.dot(b * x) + x.dot(cx);
    j.gradient = a + 2.0 * b * x + 3.0 * cx;
    j.hessian = 2.0 * b + 6.0 * cxx;
    return j;
  };
}

}  // namespace sbt
