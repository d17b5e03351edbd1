#include "sbt/norms.hpp"

#include "sbt/errors.hpp"

#include <cmath>

namespace sbt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void NormSpec::validate() const {
  if (!(order >= 0.0)) throw ParameterError("NormSpec: order must be >= 0");
  if (!(p >= 1.0)) throw ParameterError("NormSpec: p must lie in [1, inf]");
  const double sigma = fractional_part();
  if (kind == NormKind::SobolevFrac && !(sigma > 0.0 && sigma < 1.0))
    throw ParameterError("NormSpec: fractional Sobolev order needs a fractional part in (0,1)");
  if (p == kInf && sigma > 0.0 && kind != NormKind::Holder)
    throw ParameterError("NormSpec: p = inf with fractional order is a Holder norm");
}

double lr_norm(const VectorXd& values, const QuadratureRule& rule, const VectorXd& area_elements, double r) {
  if (values.size() != rule.size()) throw ParameterError("lr_norm: sample count does not match rule");
  if (area_elements.size() != 0 && area_elements.size() != values.size())
    throw ParameterError("lr_norm: area element count does not match samples");
  if (!(r >= 1.0)) throw ParameterError("lr_norm: r must be >= 1");
  if (r == kInf) return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  double sum = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    const double a = area_elements.size() ? area_elements(i) : 1.0;
    sum += rule.weights(i) * a * std::pow(std::abs(values(i)), r);
  }
  return std::pow(sum, 1.0 / r);
}

double lr_norm(const VectorXd& values, const QuadratureRule& rule, double r) {
  return lr_norm(values, rule, VectorXd(), r);
}

double sobolev_int_norm(const std::vector<VectorXd>& derivative_magnitudes, const QuadratureRule& rule, int m,
                        double p) {
  if (m < 0 || static_cast<int>(derivative_magnitudes.size()) != m + 1)
    throw ParameterError("sobolev_int_norm: need derivative magnitudes for orders 0..m");
  double total = 0.0;
  for (const auto& d : derivative_magnitudes) total += lr_norm(d, rule, p);
  return total;
}

double fractional_seminorm(const MatrixXd& values, const QuadratureRule& rule, double sigma, double p,
                           long pair_budget) {
  if (rule.dim() > 2) throw ParameterError("fractional_seminorm: flat domains of dimension <= 2 only");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ParameterError("fractional_seminorm: sigma must lie in (0,1)");
  if (!(p >= 1.0) || p == kInf) throw ParameterError("fractional_seminorm: p must lie in [1, inf)");
  const Index m = rule.size();
  if (values.rows() != m) throw ParameterError("fractional_seminorm: sample count does not match rule");
  if (static_cast<double>(m) * static_cast<double>(m - 1) > static_cast<double>(pair_budget))
    throw BudgetError("fractional_seminorm: node pair count exceeds budget");
  const double expo = rule.dim() + sigma * p;
  double sum = 0.0;
  // symmetric kernel: accumulate i < j once and double
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double dist = (rule.nodes.col(i) - rule.nodes.col(j)).norm();
      if (dist == 0.0) continue;
      const double diff = (values.row(i) - values.row(j)).norm();
      sum += rule.weights(i) * rule.weights(j) * std::pow(diff, p) / std::pow(dist, expo);
    }
  }
  return std::pow(2.0 * sum, 1.0 / p);
}

double holder_seminorm(const MatrixXd& values, const MatrixXd& positions, double sigma) {
  const Index m = positions.cols();
  if (values.rows() != m) throw ParameterError("holder_seminorm: sample count does not match positions");
  if (m < 2) throw ParameterError("holder_seminorm: need at least two samples");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw ParameterError("holder_seminorm: sigma must lie in (0,1]");
  double best = 0.0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double dist = (positions.col(i) - positions.col(j)).norm();
      if (dist == 0.0) continue;
      best = std::max(best, (values.row(i) - values.row(j)).norm() / std::pow(dist, sigma));
    }
  }
  return best;
}

}  // namespace sbt
