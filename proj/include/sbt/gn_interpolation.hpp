#pragma once

#include "sbt/quadrature.hpp"
#include "sbt/surface_geometry.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace sbt {

/// Exponents of ||v||_inf <= C ||v||_{W^{s,p}}^{1-theta} ||v||_{L^q}^theta on a flat domain of dimension dim.
struct GnSpec {
  double s = 1.0;
  double p = 2.0;  ///< may be infinity
  double q = 1.0;
  int dim = 1;

  int integer_order() const { return static_cast<int>(s); }
  double fractional_order() const { return s - integer_order(); }
  /// p > 1, 1 <= q <= p, s p > dim for finite p, s < 3 (jets carry two derivatives).
  void validate() const;
};

/// theta = (s - dim/p) / (s - dim/p + dim/q), with dim/p = 0 for p = infinity.
double gn_exponent(const GnSpec& spec);

/// Field on R^dim with jets; support_radius bounds its support (infinity if not compact).
struct GnField {
  ScalarJetField eval;
  double support_radius = 1.0;
};

struct GnDiscretization {
  double half_width = 1.0;   ///< the domain is [-half_width, half_width]^dim
  int resolution = 96;       ///< Gauss nodes per axis on the support panel
  int pair_resolution = 64;  ///< grid points per axis for double sums and suprema
};

/// Norms of v_lambda(x) = v(lambda x) on the domain box.
struct GnNorms {
  double sup = 0.0;
  double lq = 0.0;
  double wsp = 0.0;           ///< full W^{s,p} norm (sum convention)
  double top_seminorm = 0.0;  ///< ||D^s v||_p, or the fractional/Holder seminorm of D^m v
};

GnNorms gn_norms(const GnField& field, const GnSpec& spec, double lambda = 1.0, const GnDiscretization& disc = {});

/// ||v||_inf / (||v||_{W^{s,p}}^{1-theta} ||v||_{L^q}^theta); theta defaults to gn_exponent(spec).
double gn_ratio(const GnField& field, const GnSpec& spec, const GnDiscretization& disc = {},
                std::optional<double> theta = std::nullopt);

struct DilationCheck {
  std::vector<double> lambdas;
  std::vector<double> products;
  double slope = 0.0;  ///< log-log slope of the product in lambda
};

/// Slope in lambda of top_seminorm(v_lambda)^{1-theta} ||v_lambda||_q^theta with theta scaled by
/// theta_multiplier (1 for the balanced exponent). Raises ParameterError if a dilated support
/// leaves the domain.
DilationCheck dilation_invariance_check(const GnField& field, const GnSpec& spec, const std::vector<double>& lambdas,
                                        double theta_multiplier = 1.0, const GnDiscretization& disc = {});

/// K (eps ||D^m v||_p + eps^{-j/(m-j)} ||v||_p) - ||D^j v||_p from |D^i v| sampled at the rule nodes,
/// i = 0..m. For j = m the second coefficient is taken as its limit j -> m (infinite for eps < 1).
double smoothness_interpolation_margin(const std::vector<Eigen::VectorXd>& derivative_magnitudes,
                                       const QuadratureRule& rule, int j, int m, double p, double eps, double K);

/// Smallest K for which the margin above is nonnegative.
double minimal_interpolation_constant(const std::vector<Eigen::VectorXd>& derivative_magnitudes,
                                      const QuadratureRule& rule, int j, int m, double p, double eps);

}  // namespace sbt
