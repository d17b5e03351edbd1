#include "sbt/optimality_family.hpp"

#include "sbt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbt {

using Eigen::Index;
using Eigen::VectorXd;

namespace {

double bump_gradient_constant() {
  static const double c1 = bump_constants().c1;
  return c1;
}

// Per-angle node count giving roughly `target` directions on the orthant of S^{d-1}.
int auto_angle_points(int d, double target) {
  if (d < 2) return 1;
  return std::clamp(static_cast<int>(std::lround(std::pow(target, 1.0 / (d - 1)))), 6, 32);
}

double excess_radius(const VectorXd& x, const FamilyParams& params, double* psi_out = nullptr) {
  const double r2 = x.squaredNorm();
  if (!(r2 < 1.0)) return 0.0;
  const double psi = family_perturbation_value(x, params);
  if (psi_out) *psi_out = psi;
  const double s = 2.0 * std::sqrt(1.0 - r2) * psi + psi * psi;
  return s / (std::sqrt(1.0 + s) + 1.0);
}

}  // namespace

FamilySurface build_family_surface(const FamilyParams& params, bool singular_mode, std::optional<double> r) {
  params.validate();
  std::ostringstream msg;
  if (singular_mode) {
    if (params.k != 1 || !(params.alpha < 1.0))
      msg << "singular mode needs k = 1 and alpha < 1 (got k = " << params.k << ", alpha = " << params.alpha << ")";
    else if (r && !(*r > 1.0))
      msg << "r must be > 1 (got " << *r << ")";
    else if (r && !(params.alpha > (*r - 1.0) / *r))
      msg << "singular mode needs alpha > (r-1)/r = " << (*r - 1.0) / *r << " (got " << params.alpha << ")";
  } else if (params.singular()) {
    msg << "k + alpha < 2 requires singular mode";
  }
  if (!msg.str().empty()) throw ParameterError(msg.str());

  FamilySurface s;
  s.params = params;
  s.singular_mode = singular_mode;
  s.cap.dim_n = params.dim_n;
  s.cap.patch_radius = params.t;
  s.cap.profile = [params](const VectorXd& x) { return family_profile_jet(x, params); };
  return s;
}

FamilyRules FamilyRules::refined() const {
  FamilyRules r = *this;
  r.radial *= 2;
  if (angular > 0) r.angular *= 2;
  ++r.level;
  return r;
}

QuadratureRule family_cap_rule(const FamilySurface& surface, const FamilyRules& rules) {
  const int d = surface.params.dim_n - 1;
  const double t = surface.params.t;
  if (t == 0.0) {
    QuadratureRule empty;
    empty.nodes.resize(d, 0);
    empty.weights.resize(0);
    return empty;
  }
  if (rules.radial < 1) throw ParameterError("family_cap_rule: radial resolution must be >= 1");
  int res = rules.angular;
  if (res <= 0) {
    const int n = auto_angle_points(d, 2e4) << rules.level;
    // the graded rule puts 2 * res nodes on each angle
    res = surface.singular_mode ? 4 * std::max(2, static_cast<int>(std::lround(n / 8.0))) : n;
  }
  const Rule1d radial = composite_gauss({0.0, 0.5 * t, t}, rules.radial);
  QuadratureRule rule = ball_rule(d, t, radial, orthant_sphere_rule(d, res, surface.singular_mode));
  rule.weights *= std::ldexp(1.0, d);  // every integrand is even in each coordinate
  return rule;
}

CapSamples sample_cap(const FamilySurface& surface, const FamilyRules& rules) {
  CapSamples s;
  s.rule = family_cap_rule(surface, rules);
  const Index m = s.rule.size();
  const int n = surface.params.dim_n;
  s.psi.resize(m);
  s.grad_psi.resize(m);
  s.area_t.resize(m);
  s.area_0.resize(m);
  s.h_minus_one.resize(m);
  for (Index i = 0; i < m; ++i) {
    const VectorXd x = s.rule.nodes.col(i);
    const auto j0 = hemisphere_jet(x);
    const auto jp = family_perturbation_jet(x, surface.params);
    const auto jt = j0 + jp;
    s.psi(i) = jp.value;
    s.grad_psi(i) = jp.gradient.norm();
    s.area_t(i) = graph_area_element(jt.gradient);
    s.area_0(i) = graph_area_element(j0.gradient);
    s.h_minus_one(i) = graph_mean_curvature(jt, n) - 1.0;
    const double w = s.rule.weights(i);
    s.delta_volume += w * jp.value;
    // |grad phi_t|^2 - |grad phi_0|^2 over the sum of the area elements
    s.delta_perimeter += w * (jp.gradient.squaredNorm() + 2.0 * jp.gradient.dot(j0.gradient)) / (s.area_t(i) + s.area_0(i));
  }
  return s;
}

double reference_offset(const FamilySurface& surface, const CapSamples& samples) {
  const int n = surface.params.dim_n;
  return (samples.delta_perimeter - n * samples.delta_volume) / (n * (ball_volume(n) + samples.delta_volume));
}

double reference_constant(const FamilySurface& surface, const FamilyRules& rules) {
  return 1.0 + reference_offset(surface, sample_cap(surface, rules));
}

MeasureDeviation volume_perimeter_deviation(const FamilySurface& surface, const FamilyRules& rules) {
  const auto s = sample_cap(surface, rules);
  return {std::abs(s.delta_volume), std::abs(s.delta_perimeter)};
}

double curvature_deviation_norm(const FamilySurface& surface, const CapSamples& samples, double r) {
  if (!(r > 1.0)) throw ParameterError("curvature_deviation_norm: r must be > 1");
  if (surface.singular_mode && !(surface.params.alpha > (r - 1.0) / r)) {
    std::ostringstream msg;
    msg << "curvature_deviation_norm: H_t is not in L^" << r << " for alpha = " << surface.params.alpha;
    throw ParameterError(msg.str());
  }
  const double off = reference_offset(surface, samples);
  double sum = 0.0;
  for (Index i = 0; i < samples.rule.size(); ++i)
    sum += samples.rule.weights(i) * samples.area_t(i) * std::pow(std::abs(samples.h_minus_one(i) - off), r);
  const double remainder = sphere_area(surface.params.dim_n) - samples.rule.weights.dot(samples.area_0);
  sum += std::pow(std::abs(off), r) * remainder;
  return std::pow(sum, 1.0 / r);
}

double curvature_deviation_norm(const FamilySurface& surface, double r, const FamilyRules& rules) {
  return curvature_deviation_norm(surface, sample_cap(surface, rules), r);
}

OriginGap origin_radii_gap(const FamilySurface& surface, const FamilyRules& rules) {
  OriginGap out;
  const FamilyParams& p = surface.params;
  const int d = p.dim_n - 1;
  out.argmax = VectorXd::Zero(d);
  if (surface.is_sphere()) return out;
  const double t = p.t;

  double best = -1.0;
  auto consider = [&](const VectorXd& x) {
    if (!(x.norm() < t)) return;
    double psi = 0.0;
    const double e = excess_radius(x, p, &psi);
    out.sup_psi = std::max(out.sup_psi, psi);
    if (e > best) {
      best = e;
      out.argmax = x;
    }
  };

  // coarse scan of the positive orthant; the field is even in every coordinate
  const int m = rules.gap_grid > 0 ? rules.gap_grid
                                   : std::max(3, static_cast<int>(std::floor(std::pow(2e5, 1.0 / d))));
  std::vector<int> idx(d, 0);
  VectorXd x(d);
  for (;;) {
    for (int j = 0; j < d; ++j) x(j) = t * idx[j] / (m - 1);
    consider(x);
    int j = 0;
    while (j < d && ++idx[j] == m) idx[j++] = 0;
    if (j == d) break;
  }
  // dense radial scans along an axis and the diagonal
  for (const VectorXd& dir : {VectorXd(VectorXd::Unit(d, 0)), VectorXd(VectorXd::Ones(d) / std::sqrt(double(d)))}) {
    for (int i = 1; i < 2000; ++i) consider(t * i / 2000.0 * dir);
  }
  // compass search from the best point
  double step = t / m;
  while (step > 1e-12 * t) {
    bool moved = false;
    for (int j = 0; j < d && !moved; ++j) {
      for (double sgn : {1.0, -1.0}) {
        VectorXd y = out.argmax;
        y(j) += sgn * step;
        const double before = best;
        consider(y);
        if (best > before) {
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  out.rho_e = 1.0 + best;
  out.rho_i = 1.0;  // the round remainder is nonempty and Psi_t >= 0 on the cap
  out.gap = best;
  return out;
}

bool FamilyReport::all_bounds_pass() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.pass; });
}

FamilyReport family_report(const FamilyParams& params, double r, const FamilyRules& rules, bool singular_mode) {
  if (!(r > 1.0)) throw ParameterError("family_report: r must be > 1");
  const FamilySurface surface = build_family_surface(params, singular_mode, r);
  const CapSamples samples = sample_cap(surface, rules);
  const OriginGap gap = origin_radii_gap(surface, rules);

  FamilyReport rep;
  rep.t = params.t;
  const double off = reference_offset(surface, samples);
  rep.H0 = 1.0 + off;
  rep.dev_Lr = curvature_deviation_norm(surface, samples, r);
  rep.gap = gap.gap;
  rep.vol_dev = std::abs(samples.delta_volume);
  rep.per_dev = std::abs(samples.delta_perimeter);
  for (Index i = 0; i < samples.rule.size(); ++i)
    rep.max_curvature_deviation = std::max(rep.max_curvature_deviation, std::abs(samples.h_minus_one(i) - off));

  const int n = params.dim_n;
  const double t = params.t, e = params.exponent();
  const double sup_psi = std::max(gap.sup_psi, samples.psi.size() ? samples.psi.maxCoeff() : 0.0);
  const double max_grad = samples.grad_psi.size() ? samples.grad_psi.maxCoeff() : 0.0;
  const double grad_bound = (n - 1) * (e + bump_gradient_constant()) * std::pow(t, e - 1.0);
  const double cap_volume = ball_volume(n - 1) * std::pow(t, n - 1);
  const auto add = [&rep](std::string name, double value, double bound, bool pass) {
    rep.bounds.push_back({std::move(name), value, bound, pass});
  };
  add("vol_dev", rep.vol_dev, sphere_area(n - 1) * std::pow(t, e + n - 1), rep.vol_dev <= sphere_area(n - 1) * std::pow(t, e + n - 1));
  const double per_bound = cap_volume * (grad_bound * grad_bound + 4.0 * t * grad_bound);
  add("per_dev", rep.per_dev, per_bound, rep.per_dev <= per_bound);
  const double gap_lo = 2.0 / 3.0 * std::pow(0.5 * t, e);
  add("gap_lower", rep.gap, gap_lo, rep.gap >= gap_lo);
  const double gap_hi = 2.0 * (n - 1) * std::pow(t, e);
  add("gap_upper", rep.gap, gap_hi, rep.gap <= gap_hi);
  add("sup_psi", sup_psi, (n - 1) * std::pow(t, e), sup_psi <= (n - 1) * std::pow(t, e));
  add("sup_psi_half", sup_psi, 0.5, sup_psi <= 0.5);
  add("grad_psi", max_grad, grad_bound, max_grad <= grad_bound);

  const double vals[] = {rep.H0, rep.dev_Lr, rep.gap, rep.vol_dev, rep.per_dev};
  for (double v : vals) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "family_report: non-finite result at t = " << t;
      throw NumericalError(msg.str());
    }
  }
  return rep;
}

std::vector<double> default_t_grid(int dim_n, int k, int count, std::optional<double> t_max) {
  if (count < 2) throw ParameterError("default_t_grid: need at least two values");
  const double hi = t_max.value_or(FamilyParams::t1(dim_n, k));
  if (!(hi > 0.0)) throw ParameterError("default_t_grid: t_max must be positive");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = hi * std::pow(64.0, -1.0 + static_cast<double>(i) / (count - 1));
  grid.back() = hi;
  return grid;
}

}  // namespace sbt
