#pragma once

#include "sbt/errors.hpp"
#include "sbt/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbt {

/// Parameters of one member of the perturbed-sphere family
/// phi_t(x) = sqrt(1-|x|^2) + psi(x/t) * sum_i |x_i|^{k+alpha}, x in R^{N-1}.
struct FamilyParams {
  int dim_n = 4;
  int k = 2;
  double alpha = 1.0;
  double t = 0.0;

  /// Largest admissible scale, 1/(10 (N-1)(k+1)).
  static double t1(int dim_n, int k) { return 1.0 / (10.0 * (dim_n - 1) * (k + 1)); }
  double t1() const { return t1(dim_n, k); }
  double exponent() const { return k + alpha; }
  /// k = 1 with alpha < 1: the Hessian of the perturbation blows up on coordinate hyperplanes.
  bool singular() const { return exponent() < 2.0; }

  /// t = 0 is accepted and denotes the unperturbed unit sphere.
  void validate() const {
    std::ostringstream msg;
    if (dim_n < 2) msg << "dim_n must be >= 2 (got " << dim_n << ")";
    else if (k < 1) msg << "k must be >= 1 (got " << k << ")";
    else if (!(alpha > 0.0 && alpha <= 1.0)) msg << "alpha must lie in (0,1] (got " << alpha << ")";
    else if (!(t >= 0.0) || t > t1() * (1.0 + 1e-12))
      msg << "t must lie in [0, t1] with t1 = " << t1() << " (got " << t << ")";
    if (!msg.str().empty()) throw ParameterError(msg.str());
  }
};

/// 1-D profile value with two derivatives.
template <typename Scalar>
struct Profile1d {
  Scalar value{0};
  Scalar d1{0};
  Scalar d2{0};
};

namespace detail {

// f(u) = exp(-1/u) for u > 0, with f' = f/u^2 and f'' = f (1-2u)/u^4.
template <typename Scalar>
Profile1d<Scalar> exp_kernel(Scalar u) {
  using std::exp;
  if (!(u > Scalar(1e-3))) return {};  // exp(-1000) underflows; keep 0/0 out of the derivatives
  const Scalar f = exp(-Scalar(1) / u);
  const Scalar u2 = u * u;
  return {f, f / u2, f * (Scalar(1) - Scalar(2) * u) / (u2 * u2)};
}

}  // namespace detail

/// C-infinity step g on [0,1]: g(0)=0, g(1)=1, all derivatives vanish at both ends.
template <typename Scalar>
Profile1d<Scalar> smooth_step(Scalar u) {
  if (u <= Scalar(0)) return {Scalar(0), Scalar(0), Scalar(0)};
  if (u >= Scalar(1)) return {Scalar(1), Scalar(0), Scalar(0)};
  const auto a = detail::exp_kernel(u);
  const auto b = detail::exp_kernel(Scalar(1) - u);
  // derivatives of b with respect to u pick up the chain-rule sign
  const Scalar A = a.value, A1 = a.d1, A2 = a.d2;
  const Scalar B = b.value, B1 = -b.d1, B2 = b.d2;
  const Scalar D = A + B;
  const Scalar W = A1 * B - A * B1;
  return {A / D, W / (D * D), ((A2 * B - A * B2) * D - Scalar(2) * W * (A1 + B1)) / (D * D * D)};
}

/// Radial cutoff eta(s): 1 on [0,1/2], 0 on [1,inf), smooth step in between.
template <typename Scalar>
Profile1d<Scalar> bump_profile(Scalar s) {
  if (s <= Scalar(0.5)) return {Scalar(1), Scalar(0), Scalar(0)};
  if (s >= Scalar(1)) return {};
  const auto g = smooth_step(Scalar(2) * (Scalar(1) - s));
  return {g.value, Scalar(-2) * g.d1, Scalar(4) * g.d2};
}

/// phi_0(x) = sqrt(1-|x|^2), the upper unit hemisphere as a graph over B_1^{N-1}.
template <typename Scalar>
Jet2<Scalar> hemisphere_jet(const Vec<Scalar>& x) {
  using std::sqrt;
  const Scalar r2 = x.squaredNorm();
  if (!(r2 < Scalar(1))) throw DomainError("hemisphere_jet: |x| must be < 1");
  const Eigen::Index d = x.size();
  const Scalar phi = sqrt(Scalar(1) - r2);
  Jet2<Scalar> j;
  j.value = phi;
  j.gradient = -x / phi;
  j.hessian = -Mat<Scalar>::Identity(d, d) / phi - (x * x.transpose()) / (phi * phi * phi);
  return j;
}

/// psi_t(x) = eta(|x|/t).
template <typename Scalar>
Jet2<Scalar> bump_jet(const Vec<Scalar>& x, Scalar t) {
  if (!(t > Scalar(0))) throw ParameterError("bump_jet: scale t must be positive");
  const Eigen::Index d = x.size();
  const Scalar r = x.norm();
  const Scalar s = r / t;
  if (s <= Scalar(0.5)) return Jet2<Scalar>::constant(d, Scalar(1));
  if (s >= Scalar(1)) return Jet2<Scalar>(d);
  const auto eta = bump_profile(s);
  const Vec<Scalar> n = x / r;
  const Mat<Scalar> nn = n * n.transpose();
  Jet2<Scalar> j;
  j.value = eta.value;
  j.gradient = (eta.d1 / t) * n;
  j.hessian = (eta.d2 / (t * t)) * nn + (eta.d1 / (t * r)) * (Mat<Scalar>::Identity(d, d) - nn);
  return j;
}

/// sum_i |x_i|^{k+alpha}.
template <typename Scalar>
Jet2<Scalar> perturbation_jet(const Vec<Scalar>& x, int k, Scalar alpha) {
  using std::abs;
  using std::pow;
  if (k < 1 || !(alpha > Scalar(0) && alpha <= Scalar(1)))
    throw ParameterError("perturbation_jet: need k >= 1 and alpha in (0,1]");
  const Scalar p = Scalar(k) + alpha;
  const Eigen::Index d = x.size();
  Jet2<Scalar> j(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Scalar a = abs(x(i));
    if (p < Scalar(2) && a == Scalar(0))
      throw SingularPointError("perturbation_jet: coordinate hyperplane hit with k+alpha < 2");
    const Scalar sgn = x(i) > Scalar(0) ? Scalar(1) : (x(i) < Scalar(0) ? Scalar(-1) : Scalar(0));
    j.value += pow(a, p);
    j.gradient(i) = p * sgn * pow(a, p - Scalar(1));
    j.hessian(i, i) = p * (p - Scalar(1)) * pow(a, p - Scalar(2));
  }
  return j;
}

/// Psi_t = phi_t - phi_0 = psi_t * sum_i |x_i|^{k+alpha}. Identically zero for t = 0 or |x| >= t.
template <typename Scalar>
Jet2<Scalar> family_perturbation_jet(const Vec<Scalar>& x, const FamilyParams& params) {
  const Eigen::Index d = x.size();
  if (d != params.dim_n - 1) throw ParameterError("family jet: point dimension must be N-1");
  if (params.t == 0.0 || x.norm() >= Scalar(params.t)) return Jet2<Scalar>(d);
  const auto cut = bump_jet(x, Scalar(params.t));
  return cut * perturbation_jet(x, params.k, Scalar(params.alpha));
}

template <typename Scalar>
Jet2<Scalar> family_profile_jet(const Vec<Scalar>& x, const FamilyParams& params) {
  return hemisphere_jet(x) + family_perturbation_jet(x, params);
}

/// Value of Psi_t only; no singular-point restriction since no derivatives are taken.
template <typename Scalar>
Scalar family_perturbation_value(const Vec<Scalar>& x, const FamilyParams& params) {
  using std::abs;
  using std::pow;
  if (params.t == 0.0) return Scalar(0);
  const Scalar eta = bump_profile(Scalar(x.norm() / params.t)).value;
  if (eta == Scalar(0)) return Scalar(0);
  Scalar sum(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += pow(abs(x(i)), Scalar(params.exponent()));
  return eta * sum;
}

/// sup |eta'| and sup |D^2 psi| for the unit-scale cutoff, by dense scan of the transition annulus.
struct BumpConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

inline BumpConstants bump_constants(int samples = 200001) {
  BumpConstants c;
  for (int i = 1; i < samples; ++i) {
    const double s = 0.5 + 0.5 * static_cast<double>(i) / samples;
    const auto eta = bump_profile(s);
    c.c1 = std::max(c.c1, std::abs(eta.d1));
    // eigenvalues of D^2 psi: eta'' (radial) and eta'/s (tangential)
    c.c2 = std::max({c.c2, std::abs(eta.d2), std::abs(eta.d1) / s});
  }
  return c;
}

}  // namespace sbt
