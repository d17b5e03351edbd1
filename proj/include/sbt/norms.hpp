#pragma once

#include "sbt/quadrature.hpp"

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace sbt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormKind { Lr, SobolevInt, SobolevFrac, Holder };

/// Order s = m + sigma and integrability exponent p of a norm.
struct NormSpec {
  NormKind kind = NormKind::Lr;
  double order = 0.0;
  double p = 2.0;

  int integer_part() const { return static_cast<int>(order); }
  double fractional_part() const { return order - integer_part(); }
  void validate() const;
};

/// (sum_i w_i a_i |v_i|^r)^{1/r}; r = infinity gives max |v_i|. Empty area_elements means 1.
double lr_norm(const Eigen::VectorXd& values, const QuadratureRule& rule, const Eigen::VectorXd& area_elements,
               double r);
double lr_norm(const Eigen::VectorXd& values, const QuadratureRule& rule, double r);

/// sum_{j=0..m} ||D^j v||_{L^p}, given |D^j v| at the nodes for each j (sum convention).
double sobolev_int_norm(const std::vector<Eigen::VectorXd>& derivative_magnitudes, const QuadratureRule& rule, int m,
                        double p);

/// Default cap on the number of ordered node pairs in a double sum.
inline constexpr long kDefaultPairBudget = 64'000'000;

/// Gagliardo seminorm (sum_{i != j} w_i w_j |v_i - v_j|^p / |x_i - x_j|^{d + sigma p})^{1/p} of a
/// (possibly vector-valued, one row per node) field on a flat domain of dimension <= 2.
double fractional_seminorm(const Eigen::MatrixXd& values, const QuadratureRule& rule, double sigma, double p,
                           long pair_budget = kDefaultPairBudget);

/// max_{i != j} |v_i - v_j| / |x_i - x_j|^sigma over the sample pairs; positions column-wise.
double holder_seminorm(const Eigen::MatrixXd& values, const Eigen::MatrixXd& positions, double sigma);

}  // namespace sbt
