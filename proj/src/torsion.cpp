#include "sbt/torsion.hpp"

#include "sbt/errors.hpp"
#include "sbt/norms.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace sbt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

Vector2d radial_unit(double th) { return {std::cos(th), std::sin(th)}; }
Vector2d angular_unit(double th) { return {-std::sin(th), std::cos(th)}; }

}  // namespace

PolarProfile disk_profile(double radius) {
  if (!(radius > 0.0)) throw ParameterError("disk_profile: radius must be positive");
  return [radius](double) { return Profile1d<double>{radius, 0.0, 0.0}; };
}

PolarProfile ellipse_profile(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ParameterError("ellipse_profile: semi-axes must be positive");
  return [a, b](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double d = b * b * c * c + a * a * s * s;
    const double d1 = (a * a - b * b) * std::sin(2 * th);
    const double d2 = 2 * (a * a - b * b) * std::cos(2 * th);
    const double r = a * b / std::sqrt(d);
    return Profile1d<double>{r, -0.5 * r * d1 / d, r * (0.75 * d1 * d1 / (d * d) - 0.5 * d2 / d)};
  };
}

PolarProfile cosine_profile(double eps, int m) {
  if (!(std::abs(eps) < 1.0)) throw ParameterError("cosine_profile: need |eps| < 1");
  return [eps, m](double th) {
    return Profile1d<double>{1.0 + eps * std::cos(m * th), -eps * m * std::sin(m * th), -eps * m * m * std::cos(m * th)};
  };
}

RadialSurface polar_domain(const PolarProfile& profile) {
  RadialSurface s;
  s.center = Vector2d::Zero();
  s.base_radius = 0.0;
  s.omega = [profile](const VectorXd& y) {
    const double q = y.squaredNorm();
    if (!(q > 0.0)) throw DomainError("polar_domain: omega is not defined at the origin");
    const auto r = profile(std::atan2(y(1), y(0)));
    const Vector2d g(-y(1) / q, y(0) / q);
    Eigen::Matrix2d ht;
    ht << 2 * y(0) * y(1), y(1) * y(1) - y(0) * y(0), y(1) * y(1) - y(0) * y(0), -2 * y(0) * y(1);
    ht /= q * q;
    Jet2<double> j;
    j.value = r.value;
    j.gradient = r.d1 * g;
    j.hessian = r.d2 * g * g.transpose() + r.d1 * ht;
    return j;
  };
  return s;
}

Profile1d<double> polar_radius(const RadialSurface& domain, double theta) {
  if (domain.dim_n() != 2) throw ParameterError("polar_radius: domain must be planar");
  const Vector2d x = radial_unit(theta), tau = angular_unit(theta);
  if (!domain.omega) return {domain.base_radius, 0.0, 0.0};
  const auto j = domain.omega(x);
  return {domain.base_radius + j.value, j.gradient.dot(tau), tau.dot(j.hessian * tau) - j.gradient.dot(x)};
}

double polar_curvature(const Profile1d<double>& r) {
  const double q = r.value * r.value + r.d1 * r.d1;
  return (r.value * r.value + 2 * r.d1 * r.d1 - r.value * r.d2) / std::pow(q, 1.5);
}

namespace {

// Sparse row under construction: sum of coefficient * unknown, plus a constant.
struct Row {
  std::vector<std::pair<Index, double>> terms;
  double constant = 0.0;
  void add(Index k, double c) { terms.emplace_back(k, c); }
};

struct Grid {
  int nr, nt;
  double h, dt;
  Index idx(int i, int j) const { return static_cast<Index>(i) * nt + ((j % nt) + nt) % nt; }
  double rho(int i) const { return (i + 0.5) * h; }
};

// Radial derivative at the centre of cell (i, j) as a combination of cell values and the
// boundary value; second order everywhere.
void radial_derivative(const Grid& g, int i, int j, double boundary_value, double scale, Row& row) {
  if (i == 0) {
    row.add(g.idx(0, j), -1.5 * scale / g.h);
    row.add(g.idx(1, j), 2.0 * scale / g.h);
    row.add(g.idx(2, j), -0.5 * scale / g.h);
  } else if (i == g.nr - 1) {
    row.add(g.idx(i - 1, j), -scale / (3 * g.h));
    row.add(g.idx(i, j), -scale / g.h);
    row.constant += 4.0 * scale / (3 * g.h) * boundary_value;
  } else {
    row.add(g.idx(i + 1, j), 0.5 * scale / g.h);
    row.add(g.idx(i - 1, j), -0.5 * scale / g.h);
  }
}

// Same stencils applied to a sampled field.
MatrixXd radial_derivative(const Grid& g, const MatrixXd& f, const VectorXd& boundary) {
  MatrixXd out(g.nr, g.nt);
  for (int j = 0; j < g.nt; ++j) {
    for (int i = 0; i < g.nr; ++i) {
      if (i == 0) out(i, j) = (-1.5 * f(0, j) + 2.0 * f(1, j) - 0.5 * f(2, j)) / g.h;
      else if (i == g.nr - 1) out(i, j) = (-f(i - 1, j) / 3 - f(i, j) + 4.0 / 3 * boundary(j)) / g.h;
      else out(i, j) = 0.5 * (f(i + 1, j) - f(i - 1, j)) / g.h;
    }
  }
  return out;
}

MatrixXd angular_derivative(const Grid& g, const MatrixXd& f) {
  MatrixXd out(g.nr, g.nt);
  for (int j = 0; j < g.nt; ++j) {
    const int jp = (j + 1) % g.nt, jm = (j + g.nt - 1) % g.nt;
    out.col(j) = 0.5 * (f.col(jp) - f.col(jm)) / g.dt;
  }
  return out;
}

// One-sided second-order derivative at rho = 1 from the boundary value and the last two cells.
VectorXd boundary_radial_derivative(const Grid& g, const MatrixXd& f, const VectorXd& boundary) {
  const int n = g.nr;
  return (8.0 / 3 * boundary - 3.0 * f.row(n - 1).transpose() + f.row(n - 2).transpose() / 3) / g.h;
}

// Cartesian gradient (gx, gy) from (f_rho, f_theta) at points rho * R(theta) e_r.
void to_cartesian(double rho, double th, const Profile1d<double>& r, double f_rho, double f_th, double& gx,
                  double& gy) {
  const Vector2d er = radial_unit(th), et = angular_unit(th);
  Eigen::Matrix2d jac;
  jac.col(0) = r.value * er;
  jac.col(1) = rho * (r.d1 * er + r.value * et);
  const Vector2d g = jac.transpose().partialPivLu().solve(Vector2d(f_rho, f_th));
  gx = g(0);
  gy = g(1);
}

}  // namespace

TorsionSolution solve_torsion(const RadialSurface& domain, const TorsionMesh& mesh) {
  if (domain.dim_n() != 2) throw ParameterError("solve_torsion: domain must be planar");
  if (mesh.n_radial < 4 || mesh.n_angular < 8) throw ParameterError("solve_torsion: mesh too coarse");
  const Grid g{mesh.n_radial, mesh.n_angular, 1.0 / mesh.n_radial, 2 * kPi / mesh.n_angular};
  const int nr = g.nr, nt = g.nt;

  // star-shapedness about the origin: R must stay positive
  for (int j = 0; j < 4 * nt; ++j) {
    const double th = 2 * kPi * j / (4 * nt);
    const auto r = polar_radius(domain, th);
    if (!(r.value > 0.0) || !std::isfinite(r.value)) {
      std::ostringstream msg;
      msg << "solve_torsion: boundary radius " << r.value << " at theta = " << th << " is not positive";
      throw StarShapeError(msg.str(), VectorXd(r.value * radial_unit(th)), VectorXd(radial_unit(th)));
    }
  }

  std::vector<Profile1d<double>> rc(nt), rf(nt);
  VectorXd wb(nt);
  for (int j = 0; j < nt; ++j) {
    rc[j] = polar_radius(domain, j * g.dt);
    rf[j] = polar_radius(domain, (j + 0.5) * g.dt);
    wb(j) = -0.5 * rc[j].value * rc[j].value;
  }

  // flux form: d_rho[rho A w_rho - B w_theta] + d_theta[-B w_rho + w_theta / rho] = 0,
  // A = 1 + (R'/R)^2, B = R'/R
  const Index n = static_cast<Index>(nr) * nt;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n * 16);
  VectorXd rhs = VectorXd::Zero(n);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      Row row;
      const double a = 1.0 + std::pow(rc[j].d1 / rc[j].value, 2), b = rc[j].d1 / rc[j].value;
      const double rho = g.rho(i);
      // outer rho face
      if (i < nr - 1) {
        const double c = g.dt * (rho + 0.5 * g.h) * a / g.h;
        row.add(g.idx(i + 1, j), c);
        row.add(g.idx(i, j), -c);
        const double x = -g.dt * b * 0.25 / g.dt;
        row.add(g.idx(i, j + 1), x);
        row.add(g.idx(i, j - 1), -x);
        row.add(g.idx(i + 1, j + 1), x);
        row.add(g.idx(i + 1, j - 1), -x);
      } else {
        // second-order one-sided w_rho at rho = 1 from the boundary value and two cells
        const double c = g.dt * a / g.h;
        row.add(g.idx(i, j), -3.0 * c);
        row.add(g.idx(i - 1, j), c / 3.0);
        row.constant += 8.0 / 3.0 * c * wb(j);
        row.constant += g.dt * b * rc[j].value * rc[j].d1;  // -B w_theta with w_theta = -R R'
      }
      // inner rho face (no flux through the centre)
      if (i > 0) {
        const double c = g.dt * (rho - 0.5 * g.h) * a / g.h;
        row.add(g.idx(i, j), -c);
        row.add(g.idx(i - 1, j), c);
        const double x = g.dt * b * 0.25 / g.dt;
        row.add(g.idx(i - 1, j + 1), x);
        row.add(g.idx(i - 1, j - 1), -x);
        row.add(g.idx(i, j + 1), x);
        row.add(g.idx(i, j - 1), -x);
      }
      // theta faces
      for (int side : {1, -1}) {
        const int jf = side == 1 ? j : j - 1;  // face index jf + 1/2
        const int jn = j + side;
        const auto& f = rf[(jf + nt) % nt];
        const double bf = f.d1 / f.value;
        const double sgn = side;
        radial_derivative(g, i, j, wb(j), -sgn * g.h * bf * 0.5, row);
        radial_derivative(g, i, jn, wb((jn + nt) % nt), -sgn * g.h * bf * 0.5, row);
        const double c = g.h / (rho * g.dt);
        row.add(g.idx(i, jn), c);
        row.add(g.idx(i, j), -c);
      }
      const Index k = g.idx(i, j);
      for (const auto& [col, v] : row.terms) trip.emplace_back(k, col, v);
      rhs(k) = -row.constant;
    }
  }
  Eigen::SparseMatrix<double> mat(n, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  mat.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(mat);
  if (lu.info() != Eigen::Success) throw NumericalError("solve_torsion: sparse factorization failed");
  VectorXd sol = lu.solve(rhs);
  sol += lu.solve(rhs - mat * sol);  // one step of iterative refinement
  if (lu.info() != Eigen::Success || !sol.allFinite()) throw NumericalError("solve_torsion: sparse solve failed");

  TorsionSolution s;
  s.domain = domain;
  s.mesh = mesh;
  s.w.resize(nr, nt);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) s.w(i, j) = sol(g.idx(i, j));

  s.x.resize(nr, nt);
  s.y.resize(nr, nt);
  s.cell_area.resize(nr, nt);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const Vector2d p = g.rho(i) * rc[j].value * radial_unit(j * g.dt);
      s.x(i, j) = p(0);
      s.y(i, j) = p(1);
      s.cell_area(i, j) = g.rho(i) * rc[j].value * rc[j].value * g.h * g.dt;
    }
  }
  s.u = 0.5 * (s.x.array().square() + s.y.array().square()).matrix() + s.w;
  s.integral_u = s.u.cwiseProduct(s.cell_area).sum();
  const VectorXd res = mat * sol - rhs;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      s.pde_residual = std::max(s.pde_residual, std::abs(res(g.idx(i, j))) / s.cell_area(i, j));

  // gradients of w: cells and boundary
  auto gradient = [&](const MatrixXd& f, const VectorXd& fb, const VectorXd& fb_theta, MatrixXd& gx, MatrixXd& gy,
                      VectorXd& bx, VectorXd& by) {
    const MatrixXd fr = radial_derivative(g, f, fb), ft = angular_derivative(g, f);
    const VectorXd frb = boundary_radial_derivative(g, f, fb);
    gx.resize(nr, nt);
    gy.resize(nr, nt);
    bx.resize(nt);
    by.resize(nt);
    for (int j = 0; j < nt; ++j) {
      for (int i = 0; i < nr; ++i) to_cartesian(g.rho(i), j * g.dt, rc[j], fr(i, j), ft(i, j), gx(i, j), gy(i, j));
      to_cartesian(1.0, j * g.dt, rc[j], frb(j), fb_theta(j), bx(j), by(j));
    }
  };
  VectorXd wb_theta(nt);
  for (int j = 0; j < nt; ++j) wb_theta(j) = -rc[j].value * rc[j].d1;
  MatrixXd wx, wy;
  VectorXd wbx, wby;
  gradient(s.w, wb, wb_theta, wx, wy, wbx, wby);

  // Hessian of w from differences of the gradient; the boundary gradient closes the stencil
  const auto periodic_theta = [&](const VectorXd& b) {
    VectorXd d(nt);
    for (int j = 0; j < nt; ++j) d(j) = 0.5 * (b((j + 1) % nt) - b((j + nt - 1) % nt)) / g.dt;
    return d;
  };
  MatrixXd xx, xy, yx, yy;
  VectorXd unused_x, unused_y;
  gradient(wx, wbx, periodic_theta(wbx), xx, xy, unused_x, unused_y);
  gradient(wy, wby, periodic_theta(wby), yx, yy, unused_x, unused_y);
  s.w_xx = xx;
  s.w_xy = 0.5 * (xy + yx);
  s.w_yy = yy;

  // boundary data
  s.theta.resize(nt);
  s.boundary.resize(2, nt);
  s.normal.resize(2, nt);
  s.ds.resize(nt);
  s.curvature.resize(nt);
  s.u_nu.resize(nt);
  for (int j = 0; j < nt; ++j) {
    const double th = j * g.dt;
    const auto& r = rc[j];
    const Vector2d er = radial_unit(th), et = angular_unit(th);
    const double len = std::hypot(r.value, r.d1);
    s.theta(j) = th;
    s.boundary.col(j) = r.value * er;
    s.normal.col(j) = (r.value * er - r.d1 * et) / len;
    s.ds(j) = len * g.dt;
    s.curvature(j) = polar_curvature(r);
    const Vector2d grad_u = s.boundary.col(j) + Vector2d(wbx(j), wby(j));
    s.u_nu(j) = grad_u.dot(s.normal.col(j));
    s.area += 0.5 * r.value * r.value * g.dt;
  }
  s.perimeter = s.ds.sum();
  s.H0 = s.perimeter / (2 * s.area);

  // minimum point: first discrete minimiser, refined by a least-squares quadratic on nearby cells
  Index best = 0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      if (s.u(i, j) < s.u(best % nr, best / nr)) best = static_cast<Index>(j) * nr + i;
  const int bi = static_cast<int>(best % nr), bj = static_cast<int>(best / nr);
  const Vector2d z0(s.x(bi, bj), s.y(bi, bj));
  s.z_min = z0;
  s.u_min = s.u(bi, bj);
  {
    // every cell within a few cell widths; near the centre this spans several rings
    double rmax = 0.0;
    for (const auto& r : rc) rmax = std::max(rmax, r.value);
    const double reach = 3.0 * g.h * rmax + 3.0 * g.rho(bi) * rmax * g.dt;
    std::vector<Index> near;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nt; ++j)
        if (std::hypot(s.x(i, j) - z0(0), s.y(i, j) - z0(1)) <= reach) near.push_back(static_cast<Index>(j) * nr + i);
    const Index m = static_cast<Index>(near.size());
    MatrixXd a(m, 6);
    VectorXd v(m);
    for (Index k = 0; k < m; ++k) {
      const int i = static_cast<int>(near[k] % nr), j = static_cast<int>(near[k] / nr);
      const double dx = s.x(i, j) - z0(0), dy = s.y(i, j) - z0(1);
      a.row(k) << 1, dx, dy, dx * dx, dx * dy, dy * dy;
      v(k) = s.u(i, j);
    }
    const double spread = reach;
    const VectorXd c = a.colPivHouseholderQr().solve(v);
    Eigen::Matrix2d hq;
    hq << 2 * c(3), c(4), c(4), 2 * c(5);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hq);
    if (es.eigenvalues().minCoeff() > 0.0) {
      const Vector2d dz = hq.ldlt().solve(-Vector2d(c(1), c(2)));
      if (dz.norm() <= spread) {
        s.z_min = z0 + dz;
        s.u_min = c(0) + 0.5 * Vector2d(c(1), c(2)).dot(dz);
      }
    }
  }
  return s;
}

IdentityResidual fundamental_identity_residual(const TorsionSolution& s) {
  IdentityResidual r;
  // D^2 h_z = I - D^2 u = -D^2 w, independent of z
  const MatrixXd hsq = s.w_xx.array().square() + 2 * s.w_xy.array().square() + s.w_yy.array().square();
  r.hessian_term = hsq.cwiseProduct(s.cell_area).sum();  // the 1/(N-1) factor is 1 in the plane
  const VectorXd dev = s.u_nu.array() - 1.0 / s.H0;
  r.boundary_term = s.H0 * dev.array().square().matrix().dot(s.ds);
  r.lhs = r.hessian_term + r.boundary_term;
  r.rhs = ((s.H0 - s.curvature.array()) * s.u_nu.array().square()).matrix().dot(s.ds);
  r.absolute = std::abs(r.lhs - r.rhs);
  r.relative = r.absolute / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
  return r;
}

double boundary_distance(const TorsionSolution& s, const Vector2d& x) {
  const Index nt = s.theta.size();
  Index jbest = 0;
  double best = kInf;
  for (Index j = 0; j < nt; ++j) {
    const double d = (s.boundary.col(j) - x).squaredNorm();
    if (d < best) {
      best = d;
      jbest = j;
    }
  }
  const double dt = 2 * kPi / nt;
  auto dist2 = [&](double th) {
    const double r = polar_radius(s.domain, th).value;
    return (r * radial_unit(th) - x).squaredNorm();
  };
  double a = s.theta(jbest) - dt, b = s.theta(jbest) + dt;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = dist2(c), fd = dist2(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = dist2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = dist2(d);
    }
  }
  return std::sqrt(std::min({best, fc, fd}));
}

HopfRatios hopf_bounds_check(const TorsionSolution& s) {
  HopfRatios h{kInf, kInf};
  for (Index i = 0; i < s.u.rows(); ++i) {
    for (Index j = 0; j < s.u.cols(); ++j) {
      const double delta = boundary_distance(s, Vector2d(s.x(i, j), s.y(i, j)));
      h.quadratic = std::min(h.quadratic, -s.u(i, j) / (delta * delta));
      h.linear = std::min(h.linear, -s.u(i, j) / delta);
    }
  }
  return h;
}

RoughStability rough_stability_check(const TorsionSolution& s, double r) {
  if (!(r > 1.0)) throw ParameterError("rough_stability_check: r must be > 1");
  double radial = 0.0, normal = 0.0, dev = 0.0;
  for (Index j = 0; j < s.theta.size(); ++j) {
    const Vector2d d = s.boundary.col(j) - s.z_min;
    radial += std::pow(d.norm() - 1.0 / s.H0, 2) * s.ds(j);
    normal += (s.normal.col(j) / s.H0 - d).squaredNorm() * s.ds(j);
    dev += std::pow(std::abs(s.curvature(j) - s.H0), r) * s.ds(j);
  }
  RoughStability out;
  out.lhs = std::sqrt(radial) + std::sqrt(normal);
  out.rhs = std::pow(dev, 0.5 / r);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

}  // namespace sbt
