#include "sbt/gn_interpolation.hpp"

#include "sbt/errors.hpp"
#include "sbt/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void GnSpec::validate() const {
  std::ostringstream msg;
  if (dim < 1) msg << "GnSpec: dim must be >= 1";
  else if (!(p > 1.0)) msg << "GnSpec: p must be > 1 (got " << p << ")";
  else if (!(q >= 1.0 && q <= p)) msg << "GnSpec: need 1 <= q <= p (got q = " << q << ")";
  else if (!(s > 0.0 && s < 3.0)) msg << "GnSpec: s must lie in (0,3) (got " << s << ")";
  else if (p != kInf && !(s * p > dim)) msg << "GnSpec: need s p > dim (got s p = " << s * p << ")";
  if (!msg.str().empty()) throw ParameterError(msg.str());
}

double gn_exponent(const GnSpec& spec) {
  spec.validate();
  const double dp = spec.p == kInf ? 0.0 : spec.dim / spec.p;
  return (spec.s - dp) / (spec.s - dp + spec.dim / spec.q);
}

namespace {

// Components of D^order v at a jet: value, gradient, or Hessian flattened.
VectorXd derivative_components(const Jet2<double>& j, int order) {
  if (order == 0) return VectorXd::Constant(1, j.value);
  if (order == 1) return j.gradient;
  return j.hessian.reshaped();
}

struct Sampled {
  MatrixXd nodes;
  std::vector<Jet2<double>> jets;
};

Sampled sample(const GnField& field, double lambda, const MatrixXd& nodes) {
  Sampled s{nodes, {}};
  s.jets.reserve(nodes.cols());
  for (Index i = 0; i < nodes.cols(); ++i) s.jets.push_back(dilate(field.eval(lambda * nodes.col(i)), lambda));
  return s;
}

QuadratureRule uniform_grid(int dim, double a, int n, bool midpoint) {
  Rule1d axis;
  axis.nodes.resize(n);
  if (midpoint) {
    const double h = 2.0 * a / n;
    for (int i = 0; i < n; ++i) axis.nodes(i) = -a + (i + 0.5) * h;
    axis.weights = VectorXd::Constant(n, h);
  } else {
    axis.nodes = VectorXd::LinSpaced(n, -a, a);
    axis.weights = VectorXd::Constant(n, 2.0 * a / std::max(1, n - 1));
  }
  return tensor_rule(std::vector<Rule1d>(dim, axis));
}

}  // namespace

GnNorms gn_norms(const GnField& field, const GnSpec& spec, double lambda, const GnDiscretization& disc) {
  spec.validate();
  if (!(lambda > 0.0)) throw ParameterError("gn_norms: dilation factor must be positive");
  const double h = disc.half_width;
  const double a = std::isfinite(field.support_radius) ? std::min(h, field.support_radius / lambda) : h;
  const int m = spec.integer_order();
  const double sigma = spec.fractional_order();

  // local integrals: Gauss panels aligned with the dilated support
  Rule1d axis = gauss_legendre(disc.resolution, -a, a);
  if (a < h) {
    const int outer = std::max(2, disc.resolution / 2);
    const Rule1d left = gauss_legendre(outer, -h, -a), right = gauss_legendre(outer, a, h);
    const Rule1d mid = axis;
    axis.nodes.resize(2 * outer + disc.resolution);
    axis.weights.resize(2 * outer + disc.resolution);
    axis.nodes << left.nodes, mid.nodes, right.nodes;
    axis.weights << left.weights, mid.weights, right.weights;
  }
  const QuadratureRule rule = tensor_rule(std::vector<Rule1d>(spec.dim, axis));
  const Sampled quad = sample(field, lambda, rule.nodes);

  // suprema and Holder quotients: uniform grid through the origin over the support
  const int npair = 2 * (disc.pair_resolution / 2) + 1;
  const QuadratureRule grid = uniform_grid(spec.dim, a, npair, false);
  const Sampled pts = sample(field, lambda, grid.nodes);

  auto magnitudes = [](const Sampled& s, int order) {
    VectorXd out(static_cast<Index>(s.jets.size()));
    for (std::size_t i = 0; i < s.jets.size(); ++i) out(static_cast<Index>(i)) = derivative_components(s.jets[i], order).norm();
    return out;
  };

  GnNorms out;
  out.sup = std::max(magnitudes(quad, 0).maxCoeff(), magnitudes(pts, 0).maxCoeff());
  out.lq = lr_norm(magnitudes(quad, 0), rule, spec.q);
  double integer_part = 0.0, top_integer = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double term = spec.p == kInf ? std::max(magnitudes(quad, i).maxCoeff(), magnitudes(pts, i).maxCoeff())
                                       : lr_norm(magnitudes(quad, i), rule, spec.p);
    integer_part += term;
    if (i == m) top_integer = term;
  }
  if (sigma == 0.0) {
    out.top_seminorm = top_integer;
  } else if (spec.p == kInf) {
    MatrixXd vals(grid.size(), derivative_components(pts.jets.front(), m).size());
    for (Index i = 0; i < grid.size(); ++i) vals.row(i) = derivative_components(pts.jets[i], m).transpose();
    out.top_seminorm = holder_seminorm(vals, grid.nodes, sigma);
  } else {
    // the Gagliardo double integral is nonlocal: use the whole domain
    const QuadratureRule whole = uniform_grid(spec.dim, h, disc.pair_resolution, true);
    const Sampled all = sample(field, lambda, whole.nodes);
    MatrixXd vals(whole.size(), derivative_components(all.jets.front(), m).size());
    for (Index i = 0; i < whole.size(); ++i) vals.row(i) = derivative_components(all.jets[i], m).transpose();
    out.top_seminorm = fractional_seminorm(vals, whole, sigma, spec.p);
  }
  out.wsp = integer_part + (sigma > 0.0 ? out.top_seminorm : 0.0);
  return out;
}

double gn_ratio(const GnField& field, const GnSpec& spec, const GnDiscretization& disc, std::optional<double> theta) {
  const double th = theta.value_or(gn_exponent(spec));
  const GnNorms n = gn_norms(field, spec, 1.0, disc);
  if (!(n.sup > 0.0)) throw ParameterError("gn_ratio: field vanishes on the domain");
  return n.sup / (std::pow(n.wsp, 1.0 - th) * std::pow(n.lq, th));
}

DilationCheck dilation_invariance_check(const GnField& field, const GnSpec& spec, const std::vector<double>& lambdas,
                                        double theta_multiplier, const GnDiscretization& disc) {
  if (lambdas.size() < 2) throw ParameterError("dilation_invariance_check: need at least two dilation factors");
  const double th = theta_multiplier * gn_exponent(spec);
  DilationCheck out;
  out.lambdas = lambdas;
  for (double lambda : lambdas) {
    if (std::isfinite(field.support_radius) && field.support_radius / lambda > disc.half_width * (1 + 1e-12)) {
      std::ostringstream msg;
      msg << "dilation_invariance_check: support of v(" << lambda << " x) leaves the domain";
      throw ParameterError(msg.str());
    }
    const GnNorms n = gn_norms(field, spec, lambda, disc);
    out.products.push_back(std::pow(n.top_seminorm, 1.0 - th) * std::pow(n.lq, th));
  }
  const auto [lo, hi] = std::minmax_element(out.products.begin(), out.products.end());
  if (*hi == *lo) return out;  // includes the constant field, whose top seminorm vanishes
  if (!(*lo > 0.0)) throw NumericalError("dilation_invariance_check: product vanishes for some dilation");
  const Index n = static_cast<Index>(lambdas.size());
  VectorXd lx(n), ly(n);
  for (Index i = 0; i < n; ++i) {
    lx(i) = std::log(lambdas[i]);
    ly(i) = std::log(out.products[i]);
  }
  const double mx = lx.mean(), my = ly.mean();
  out.slope = (lx.array() - mx).matrix().dot((ly.array() - my).matrix()) / (lx.array() - mx).square().sum();
  return out;
}

namespace {

struct InterpolationTerms {
  double lhs;
  double top;
  double low;  // eps^{-j/(m-j)} ||v||, possibly infinite
};

InterpolationTerms interpolation_terms(const std::vector<VectorXd>& mags, const QuadratureRule& rule, int j, int m,
                                       double p, double eps) {
  if (m < 1 || j < 0 || j > m) throw ParameterError("smoothness interpolation: need 0 <= j <= m, m >= 1");
  if (static_cast<int>(mags.size()) != m + 1) throw ParameterError("smoothness interpolation: need |D^i v| for i = 0..m");
  if (!(eps > 0.0)) throw ParameterError("smoothness interpolation: eps must be positive");
  const double n0 = lr_norm(mags[0], rule, p);
  const double coef = j < m ? std::pow(eps, -static_cast<double>(j) / (m - j)) : (eps < 1 ? kInf : (eps == 1 ? 1.0 : 0.0));
  const double low = n0 == 0.0 ? 0.0 : coef * n0;
  return {lr_norm(mags[j], rule, p), eps * lr_norm(mags[m], rule, p), low};
}

}  // namespace

double smoothness_interpolation_margin(const std::vector<VectorXd>& derivative_magnitudes, const QuadratureRule& rule,
                                       int j, int m, double p, double eps, double K) {
  const auto t = interpolation_terms(derivative_magnitudes, rule, j, m, p, eps);
  return K * (t.top + t.low) - t.lhs;
}

double minimal_interpolation_constant(const std::vector<VectorXd>& derivative_magnitudes, const QuadratureRule& rule,
                                      int j, int m, double p, double eps) {
  const auto t = interpolation_terms(derivative_magnitudes, rule, j, m, p, eps);
  const double denom = t.top + t.low;
  if (denom == kInf) return 0.0;
  if (!(denom > 0.0)) throw NumericalError("minimal_interpolation_constant: right-hand side vanishes");
  return t.lhs / denom;
}

}  // namespace sbt
