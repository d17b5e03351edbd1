#include "sbt/quadrature.hpp"

#include "sbt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sbt {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

// Multiply node counts, refusing anything past the cap.
long checked_count(const std::vector<long>& sizes, long cap) {
  long total = 1;
  for (long s : sizes) {
    if (s > 0 && total > cap / s) {
      std::ostringstream msg;
      msg << "quadrature: tensor rule exceeds node cap " << cap;
      throw BudgetError(msg.str());
    }
    total *= s;
  }
  if (total > cap) throw BudgetError("quadrature: tensor rule exceeds node cap");
  return total;
}

// Hyperspherical angles -> point on S^{d-1}; angles has d-1 entries, last one azimuthal.
void angles_to_point(const double* angles, int d, double* x) {
  double s = 1.0;
  for (int j = 0; j < d - 1; ++j) {
    x[j] = s * std::cos(angles[j]);
    s *= std::sin(angles[j]);
  }
  x[d - 1] = s;
}

// Tensor rule over angle axes mapped to S^{d-1}, Jacobian prod_j sin^{d-2-j}(phi_j).
QuadratureRule angular_rule(int d, const std::vector<Rule1d>& axes, long cap) {
  std::vector<long> sizes;
  for (const auto& a : axes) sizes.push_back(a.nodes.size());
  const long total = checked_count(sizes, cap);
  QuadratureRule rule;
  rule.nodes.resize(d, total);
  rule.weights.resize(total);
  std::vector<Index> idx(axes.size(), 0);
  std::vector<double> ang(axes.size());
  for (long m = 0; m < total; ++m) {
    double w = 1.0;
    for (std::size_t j = 0; j < axes.size(); ++j) {
      ang[j] = axes[j].nodes(idx[j]);
      const int power = d - 2 - static_cast<int>(j);
      w *= axes[j].weights(idx[j]) * std::pow(std::sin(ang[j]), power);
    }
    angles_to_point(ang.data(), d, rule.nodes.col(m).data());
    rule.weights(m) = w;
    for (std::size_t j = axes.size(); j-- > 0;) {
      if (++idx[j] < static_cast<Index>(axes[j].nodes.size())) break;
      idx[j] = 0;
    }
  }
  return rule;
}

}  // namespace

Rule1d gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ParameterError("gauss_legendre: need at least one node");
  Rule1d r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node for the weight
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes(i) = mid - half * x;
    r.nodes(n - 1 - i) = mid + half * x;
    r.weights(i) = r.weights(n - 1 - i) = half * w;
  }
  return r;
}

Rule1d composite_gauss(const std::vector<double>& breaks, int n) {
  if (breaks.size() < 2) throw ParameterError("composite_gauss: need at least one panel");
  const Index panels = static_cast<Index>(breaks.size()) - 1;
  Rule1d r;
  r.nodes.resize(panels * n);
  r.weights.resize(panels * n);
  for (Index p = 0; p < panels; ++p) {
    const Rule1d g = gauss_legendre(n, breaks[p], breaks[p + 1]);
    r.nodes.segment(p * n, n) = g.nodes;
    r.weights.segment(p * n, n) = g.weights;
  }
  return r;
}

Rule1d graded_gauss(double a, double b, int n, int levels, double ratio, bool two_sided) {
  if (!(ratio > 0.0 && ratio < 1.0) || levels < 0)
    throw ParameterError("graded_gauss: ratio must lie in (0,1), levels >= 0");
  const double len = two_sided ? 0.5 * (b - a) : (b - a);
  std::vector<double> breaks{a};
  for (int l = levels; l >= 1; --l) breaks.push_back(a + len * std::pow(ratio, l));
  breaks.push_back(a + len);
  if (two_sided) {
    for (int l = 1; l <= levels; ++l) breaks.push_back(b - len * std::pow(ratio, l));
    breaks.push_back(b);
  }
  return composite_gauss(breaks, n);
}

double sphere_area(int dim_n) {
  return 2.0 * std::pow(kPi, 0.5 * dim_n) / std::tgamma(0.5 * dim_n);
}

double ball_volume(int d) { return sphere_area(d) / d; }

QuadratureRule sphere_rule(int dim_n, int resolution, long node_cap) {
  if (dim_n < 2 || resolution < 4) throw ParameterError("sphere_rule: need dim_N >= 2 and resolution >= 4");
  std::vector<Rule1d> axes;
  for (int j = 0; j < dim_n - 2; ++j) axes.push_back(gauss_legendre(resolution, 0.0, kPi));
  Rule1d az;
  const int m = 2 * resolution;
  az.nodes = VectorXd::LinSpaced(m, 0.0, 2.0 * kPi * (m - 1) / m);
  az.weights = VectorXd::Constant(m, 2.0 * kPi / m);
  axes.push_back(az);
  QuadratureRule rule = angular_rule(dim_n, axes, node_cap);
  rule.kind = DomainKind::Sphere;
  return rule;
}

QuadratureRule orthant_sphere_rule(int d, int resolution, bool graded, long node_cap) {
  if (d < 1 || resolution < 1) throw ParameterError("orthant_sphere_rule: need d >= 1, resolution >= 1");
  QuadratureRule rule;
  rule.kind = DomainKind::OrthantSphere;
  rule.hyperplane_safe = true;
  if (d == 1) {
    rule.nodes = MatrixXd::Ones(1, 1);
    rule.weights = VectorXd::Ones(1);
    return rule;
  }
  const Rule1d axis = graded ? graded_gauss(0.0, 0.5 * kPi, std::max(2, resolution / 4), 3, 0.25, true)
                             : gauss_legendre(resolution, 0.0, 0.5 * kPi);
  std::vector<Rule1d> axes(d - 1, axis);
  QuadratureRule r = angular_rule(d, axes, node_cap);
  r.kind = DomainKind::OrthantSphere;
  r.hyperplane_safe = true;
  return r;
}

QuadratureRule ball_rule(int d, double radius, const Rule1d& radial, const QuadratureRule& directions) {
  if (directions.dim() != d) throw ParameterError("ball_rule: direction rule dimension mismatch");
  const Index nr = radial.nodes.size(), na = directions.size();
  QuadratureRule rule;
  rule.kind = directions.kind == DomainKind::OrthantSphere ? DomainKind::OrthantBall : DomainKind::Ball;
  rule.extent = radius;
  rule.hyperplane_safe = directions.hyperplane_safe;
  rule.nodes.resize(d, nr * na);
  rule.weights.resize(nr * na);
  for (Index i = 0; i < nr; ++i) {
    const double r = radial.nodes(i);
    const double wr = radial.weights(i) * std::pow(r, d - 1);
    rule.nodes.middleCols(i * na, na) = r * directions.nodes;
    rule.weights.segment(i * na, na) = wr * directions.weights;
  }
  return rule;
}

QuadratureRule tensor_rule(const std::vector<Rule1d>& axes) {
  const int dim = static_cast<int>(axes.size());
  std::vector<long> sizes;
  for (const auto& a : axes) sizes.push_back(a.nodes.size());
  const long total = checked_count(sizes, kDefaultNodeCap);
  QuadratureRule rule;
  rule.nodes.resize(dim, total);
  rule.weights.resize(total);
  std::vector<Index> idx(dim, 0);
  for (long m = 0; m < total; ++m) {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) {
      rule.nodes(j, m) = axes[j].nodes(idx[j]);
      w *= axes[j].weights(idx[j]);
    }
    rule.weights(m) = w;
    for (int j = dim; j-- > 0;) {
      if (++idx[j] < static_cast<Index>(axes[j].nodes.size())) break;
      idx[j] = 0;
    }
  }
  return rule;
}

QuadratureRule scaled_box_rule(double t, int dim, int resolution, bool hyperplane_safe) {
  if (!(t > 0.0) || dim < 1 || resolution < 1) throw ParameterError("scaled_box_rule: need t > 0, dim >= 1, resolution >= 1");
  Rule1d axis;
  if (hyperplane_safe) {
    const double h = 2.0 * t / resolution;
    // odd counts would put a midpoint on 0; shift those by a quarter cell
    const double shift = resolution % 2 == 1 ? 0.25 * h : 0.0;
    axis.nodes.resize(resolution);
    for (int i = 0; i < resolution; ++i) axis.nodes(i) = -t + (i + 0.5) * h + shift;
    axis.weights = VectorXd::Constant(resolution, h);
  } else {
    axis = gauss_legendre(resolution, -t, t);
  }
  QuadratureRule rule = tensor_rule(std::vector<Rule1d>(dim, axis));
  rule.kind = DomainKind::Box;
  rule.extent = t;
  rule.hyperplane_safe = hyperplane_safe;
  return rule;
}

}  // namespace sbt
