#include "doctest.h"

#include "sbt/errors.hpp"
#include "sbt/norms.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/stereographic.hpp"

#include <cmath>
#include <random>

using namespace sbt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_point(int d, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd y(d);
  for (int i = 0; i < d; ++i) y(i) = u(rng);
  return radius * y / std::sqrt(static_cast<double>(d));
}

}  // namespace

TEST_CASE("stereographic projection fixed points") {
  for (int n : {2, 3, 5}) {
    VectorXd south = VectorXd::Zero(n);
    south(n - 1) = -1.0;
    CHECK(stereo_project(south).norm() == 0.0);
    VectorXd e1 = VectorXd::Zero(n);
    e1(0) = 1.0;
    CHECK((stereo_project(e1) - e1.head(n - 1)).norm() <= 1e-15);
    VectorXd north = VectorXd::Zero(n);
    north(n - 1) = 1.0;
    CHECK_THROWS_AS(stereo_project(north), DomainError);

    std::mt19937_64 rng(11 + n);
    for (int k = 0; k < 20; ++k) {
      const VectorXd y = random_point(n - 1, 3.0, rng);
      const VectorXd x = stereo_inverse(y);
      CHECK(std::abs(x.norm() - 1.0) <= 1e-14);
      CHECK((stereo_project(x) - y).norm() <= 1e-12 * (1 + y.norm()));
    }
  }
}

TEST_CASE("chart derivatives against finite differences") {
  std::mt19937_64 rng(5);
  const double h = 1e-5;
  for (int d : {1, 2, 3}) {
    for (int k = 0; k < 5; ++k) {
      const VectorXd y = random_point(d, 1.5, rng);
      const ChartMap m = stereo_inverse_jet(y);
      for (int j = 0; j < d; ++j) {
        VectorXd e = VectorXd::Zero(d);
        e(j) = h;
        const VectorXd fd = (stereo_inverse(y + e) - stereo_inverse(y - e)) / (2 * h);
        CHECK((fd - m.jacobian.col(j)).norm() <= 1e-8);
        const ChartMap mp = stereo_inverse_jet(y + e), mm = stereo_inverse_jet(y - e);
        for (int i = 0; i <= d; ++i) {
          const VectorXd fd2 = (mp.jacobian.row(i) - mm.jacobian.row(i)).transpose() / (2 * h);
          CHECK((fd2 - m.second[i].col(j)).norm() <= 1e-8);
        }
      }
      // the pull-back of the metric is conformal
      CHECK((m.jacobian.transpose() * m.jacobian - metric_at(y).g).norm() <= 1e-14);
    }
  }
}

TEST_CASE("metric and Christoffel symbols") {
  const VectorXd zero = VectorXd::Zero(3);
  CHECK((metric_at(zero).g - 4 * MatrixXd::Identity(3, 3)).norm() == 0.0);
  VectorXd unit = VectorXd::Zero(3);
  unit(1) = 1.0;
  CHECK((metric_at(unit).g - MatrixXd::Identity(3, 3)).norm() <= 1e-15);
  CHECK((metric_at(unit).g * metric_at(unit).g_inverse - MatrixXd::Identity(3, 3)).norm() <= 1e-15);

  std::mt19937_64 rng(9);
  const double h = 1e-5;
  for (int d : {2, 3, 4}) {
    const VectorXd y = random_point(d, 0.8, rng);
    const auto gamma = christoffel_at(y);
    const MatrixXd ginv = metric_at(y).g_inverse;
    // dg[l](i, j) = d_l g_ij
    std::vector<MatrixXd> dg(d);
    for (int l = 0; l < d; ++l) {
      VectorXd e = VectorXd::Zero(d);
      e(l) = h;
      dg[l] = (metric_at(y + e).g - metric_at(y - e).g) / (2 * h);
    }
    for (int k = 0; k < d; ++k) {
      CHECK((gamma[k] - gamma[k].transpose()).norm() == 0.0);
      // |Gamma| <= 6 |y| / (|y|^2 + 1) entrywise
      CHECK(gamma[k].cwiseAbs().maxCoeff() <= 6 * y.norm() / (y.squaredNorm() + 1) + 1e-15);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          double ref = 0.0;
          for (int l = 0; l < d; ++l) ref += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
          CHECK(std::abs(ref - gamma[k](i, j)) <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("covariant norms of simple chart functions") {
  const int d = 3;
  const VectorXd y0 = VectorXd::Zero(d);
  const auto c = covariant_norms(Jet2<double>::constant(d, 2.0), y0);
  CHECK(c.gradient_sq == 0.0);
  CHECK(c.hessian_sq == 0.0);

  Jet2<double> lin(d);
  lin.gradient << 1.0, -2.0, 0.5;
  const auto l0 = covariant_norms(lin, y0);
  CHECK(l0.gradient_sq == doctest::Approx(lin.gradient.squaredNorm() / 4).epsilon(1e-15));
  CHECK(l0.hessian_sq == 0.0);

  // the restriction of a linear ambient function x -> a.x has D^2_S v = -(a.x) g
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const VectorXd a = random_point(d + 1, 2.0, rng);
    const ScalarJetField amb = [a](const VectorXd& x) {
      Jet2<double> j(x.size());
      j.value = a.dot(x);
      j.gradient = a;
      return j;
    };
    const VectorXd y = random_point(d, 1.2, rng);
    const auto jv = pull_back_jet(amb, y);
    const auto cn = covariant_norms(jv, y);
    const VectorXd x = stereo_inverse(y);
    CHECK(cn.hessian_sq == doctest::Approx(d * std::pow(a.dot(x), 2)).epsilon(1e-10));
    CHECK(cn.gradient_sq == doctest::Approx(a.squaredNorm() - std::pow(a.dot(x), 2)).epsilon(1e-10));
  }
}

TEST_CASE("Sobolev transfer on constants and coordinates") {
  for (int n : {3, 4}) {
    const SphereChart chart{n};
    const ScalarJetField one = [](const VectorXd& x) { return Jet2<double>::constant(x.size(), 1.0); };
    for (double p : {1.0, 2.0, 3.0}) {
      const auto r = sobolev_transfer(one, chart, p);
      const double ball = ball_volume(n - 1) * std::pow(chart.transfer_radius(), n - 1);
      CHECK(r.ratio == doctest::Approx(std::pow(ball / sphere_area(n), 1 / p)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(sobolev_transfer(one, chart, kInf), ParameterError);
  }
  const ScalarJetField x1 = [](const VectorXd& x) {
    Jet2<double> j(x.size());
    j.value = x(0);
    j.gradient(0) = 1.0;
    return j;
  };
  const SphereChart chart{3};
  const auto r = sobolev_transfer(x1, chart, 2.0, 16, 32);
  // on S^2: ||x1||_2 = sqrt(4 pi / 3), ||grad x1||_2 = sqrt(8 pi / 3), ||D^2 x1||_2 = sqrt(8 pi / 3)
  const double pi = std::acos(-1.0);
  CHECK(r.sphere_norm == doctest::Approx(std::sqrt(4 * pi / 3) + 2 * std::sqrt(8 * pi / 3)).epsilon(1e-8));
  CHECK(r.ratio <= chart.transfer_constant(2.0));
  CHECK_THROWS_AS(sobolev_transfer(x1, SphereChart{2}, 2.0), ParameterError);
}

TEST_CASE("Sobolev transfer bound on random cubics") {
  std::mt19937_64 rng(20240611);
  for (auto [n, p] : {std::pair{3, 2.0}, std::pair{4, 2.0}, std::pair{4, 3.0}}) {
    const SphereChart chart{n};
    double worst = 0.0, slack = kInf;
    for (int trial = 0; trial < 50; ++trial) {
      const auto v = random_ambient_cubic(n, rng);
      const auto r = sobolev_transfer(v, chart, p, 8, 16);
      worst = std::max(worst, r.ratio);
      slack = std::min(slack, r.min_slack);
    }
    CHECK(worst <= chart.transfer_constant(p));
    CHECK(slack >= -1e-10);
  }
}
