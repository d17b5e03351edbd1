#pragma once

#include <Eigen/Dense>

namespace sbt {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Value, gradient and Hessian of a scalar field at a single point.
///
/// Jets are combined with the sum and product rules below; nothing in the
/// library differentiates numerically, so second derivatives stay exact up to
/// rounding.
template <typename Scalar>
struct Jet2 {
  Scalar value{0};
  Vec<Scalar> gradient;
  Mat<Scalar> hessian;

  Jet2() = default;

  explicit Jet2(Eigen::Index dim)
      : value(0), gradient(Vec<Scalar>::Zero(dim)), hessian(Mat<Scalar>::Zero(dim, dim)) {}

  Jet2(Scalar v, Vec<Scalar> g, Mat<Scalar> h) : value(v), gradient(std::move(g)), hessian(std::move(h)) {}

  static Jet2 constant(Eigen::Index dim, Scalar c) {
    Jet2 j(dim);
    j.value = c;
    return j;
  }

  Eigen::Index dim() const { return gradient.size(); }

  Scalar laplacian() const { return hessian.trace(); }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    gradient += o.gradient;
    hessian += o.hessian;
    return *this;
  }

  Jet2& operator*=(Scalar c) {
    value *= c;
    gradient *= c;
    hessian *= c;
    return *this;
  }
};

template <typename Scalar>
Jet2<Scalar> operator+(Jet2<Scalar> a, const Jet2<Scalar>& b) {
  a += b;
  return a;
}

template <typename Scalar>
Jet2<Scalar> operator-(Jet2<Scalar> a, const Jet2<Scalar>& b) {
  a.value -= b.value;
  a.gradient -= b.gradient;
  a.hessian -= b.hessian;
  return a;
}

template <typename Scalar>
Jet2<Scalar> operator*(Scalar c, Jet2<Scalar> a) {
  a *= c;
  return a;
}

/// Product rule: D^2(ab) = a D^2 b + b D^2 a + grad a grad b^T + grad b grad a^T.
template <typename Scalar>
Jet2<Scalar> operator*(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  Jet2<Scalar> out;
  out.value = a.value * b.value;
  out.gradient = a.value * b.gradient + b.value * a.gradient;
  out.hessian = a.value * b.hessian + b.value * a.hessian + a.gradient * b.gradient.transpose() +
                b.gradient * a.gradient.transpose();
  return out;
}

/// Dilation v_lambda(x) = v(lambda x), given the jet of v at lambda x.
template <typename Scalar>
Jet2<Scalar> dilate(Jet2<Scalar> jet_at_scaled_point, Scalar lambda) {
  jet_at_scaled_point.gradient *= lambda;
  jet_at_scaled_point.hessian *= lambda * lambda;
  return jet_at_scaled_point;
}

}  // namespace sbt
