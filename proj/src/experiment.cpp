#include "sbt/experiment.hpp"

#include "sbt/errors.hpp"
#include "sbt/gn_interpolation.hpp"
#include "sbt/norms.hpp"
#include "sbt/stereographic.hpp"
#include "sbt/torsion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace sbt {

namespace {

constexpr double kRegimeTol = 1e-12;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("bad number for " + key + ": '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

// Rethrows the active sbt error with context prepended, keeping its type.
[[noreturn]] void rethrow_with(const std::string& ctx) {
  try {
    throw;
  } catch (const StarShapeError& e) {
    throw StarShapeError(ctx + e.what(), e.witness, e.normal);
  } catch (const DomainError& e) {
    throw DomainError(ctx + e.what());
  } catch (const SingularPointError& e) {
    throw SingularPointError(ctx + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(ctx + e.what());
  } catch (const BudgetError& e) {
    throw BudgetError(ctx + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(ctx + e.what());
  }
}

std::string family_context(const ExperimentConfig& c, double t) {
  std::ostringstream s;
  s << "family N=" << c.dim_n << " k=" << c.k << " alpha=" << c.alpha << " r=" << c.r << " t=" << t
    << (c.singular ? " singular" : "") << ": ";
  return s.str();
}

CheckResult fit_check(const std::string& name, const ScalingFit& f, double tol) {
  std::ostringstream d;
  d << "slope " << fmt(f.slope) << " predicted " << fmt(f.predicted) << " rel.err " << fmt(f.relative_error)
    << " R^2 " << fmt(f.r_squared);
  if (f.excluded >= 0) d << " (excluded point " << f.excluded << ")";
  return {name, f.within(tol), d.str()};
}

// Straight line exp(b) x^s over the x range of `x`.
PlotSeries line_series(const std::string& label, const std::vector<double>& x, double slope, double intercept) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  PlotSeries s{label, {*lo, *hi}, {}, false};
  for (double v : s.x) s.y.push_back(std::exp(intercept + slope * std::log(v)));
  return s;
}

double log_mean(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += std::log(x) / static_cast<double>(v.size());
  return m;
}

struct Writer {
  const ExperimentConfig& config;
  ExperimentOutcome& out;

  void file(const std::string& name, std::string_view text) {
    const auto path = config.out_dir / name;
    write_text_file(path, text);
    out.files.push_back(path);
  }
};

void run_family(const ExperimentConfig& c, ExperimentOutcome& out) {
  Writer w{c, out};
  FamilyRules rules;
  if (c.resolution > 0) rules.radial = c.resolution;
  const auto ts = c.t_grid();
  std::vector<FamilyRow> rows;
  bool bounds_ok = true;
  std::string failed;
  for (double t : ts) {
    try {
      const auto rep = family_report({c.dim_n, c.k, c.alpha, t}, c.r, rules, c.singular);
      rows.push_back(family_row(rep));
      for (const auto& b : rep.bounds) {
        if (!b.pass) {
          bounds_ok = false;
          failed += " " + b.name + "@t=" + fmt(t);
        }
      }
    } catch (const Error&) {
      rethrow_with(family_context(c, t));
    }
  }
  w.file("family.csv", family_csv(rows));

  std::vector<double> dev, gap, vol, per;
  for (const auto& r : rows) {
    dev.push_back(r.dev_Lr);
    gap.push_back(r.gap);
    vol.push_back(r.vol_dev);
    per.push_back(r.per_dev);
  }
  const double e = c.alpha + c.k, n1 = c.dim_n - 1;
  const double tol = c.singular ? 0.07 : 0.05;
  const auto f_dev = fit_loglog(ts, dev, e + (n1 - 2 * c.r) / c.r);
  const auto f_gap = fit_loglog(ts, gap, e);
  const auto f_vol = fit_loglog(ts, vol, e + n1);
  const auto f_per = fit_loglog(ts, per, c.singular ? 2 * c.alpha + n1 : e + n1);
  out.checks.push_back(fit_check("deviation rate", f_dev, tol));
  out.checks.push_back(fit_check("gap rate", f_gap, 0.05));
  out.checks.push_back(fit_check("volume rate", f_vol, 0.05));
  out.checks.push_back(fit_check("perimeter rate", f_per, 0.05));
  out.checks.push_back({"pointwise bounds", bounds_ok, bounds_ok ? "all rows" : "failed:" + failed});

  std::vector<PlotSeries> plot{{"rows", dev, gap, true}};
  const bool power = stability_regime(c.dim_n, c.r) == StabilityRegime::power;
  const auto f_tau = fit_loglog(dev, gap, power ? std::optional(stability_exponent(c.dim_n, c.k, c.alpha, c.r)) : std::nullopt);
  plot.push_back(line_series("fit slope " + fmt(f_tau.slope), dev, f_tau.slope, f_tau.intercept));
  if (power) {
    out.checks.push_back(fit_check("stability exponent", f_tau, tol));
    const double b = log_mean(gap) - f_tau.predicted * log_mean(dev);
    plot.push_back(line_series("tau = " + fmt(f_tau.predicted), dev, f_tau.predicted, b));
  }
  std::ostringstream title;
  title << "N=" << c.dim_n << " k=" << c.k << " alpha=" << c.alpha << " r=" << c.r << (c.singular ? " singular" : "");
  w.file("family.svg", loglog_svg(plot, "||H-H0||_Lr", "rho_e - rho_i", title.str()));
}

GnField bump_field(double radius) {
  return {[radius](const Eigen::VectorXd& x) { return bump_jet(x, radius); }, radius};
}

void run_gn(const ExperimentConfig& c, ExperimentOutcome& out) {
  GnDiscretization disc;
  if (c.resolution > 0) disc.resolution = c.resolution;
  const std::vector<double> lambdas{1, 2, 4, 8};
  const std::vector<GnSpec> specs{{1.0, kInf, 1.0, 1}, {2.0, kInf, 2.0, 1}, {2.0, 2.0, 2.0, 1},
                                  {1.5, kInf, 1.0, 1}, {2.0, kInf, 2.0, 2}};
  std::ostringstream csv;
  csv << "s,p,q,dim,theta_multiplier,lambda,product\n";
  double worst_bal = 0.0, weakest_off = kInf;
  const auto field = bump_field(0.9);
  for (const auto& spec : specs) {
    for (double mult : {1.0, 2.0}) {
      const auto d = dilation_invariance_check(field, spec, lambdas, mult, disc);
      for (std::size_t i = 0; i < d.lambdas.size(); ++i) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", spec.s, spec.p, spec.q, spec.dim, mult,
                      d.lambdas[i], d.products[i]);
        csv << buf;
      }
      if (mult == 1.0) worst_bal = std::max(worst_bal, std::abs(d.slope));
      else weakest_off = std::min(weakest_off, std::abs(d.slope));
    }
  }
  Writer{c, out}.file("gn.csv", csv.str());
  out.checks.push_back({"balanced dilation slope", worst_bal <= 0.05, "max |slope| " + fmt(worst_bal)});
  out.checks.push_back({"mis-balanced control", weakest_off > 0.2, "min |slope| " + fmt(weakest_off)});

  // sin(omega x) on [0, 2 pi]: the minimal constant at eps = 1/omega is exactly 1/2
  const double two_pi = 2 * std::numbers::pi;
  const int m = 400;
  const auto g = gauss_legendre(m, 0.0, two_pi);
  QuadratureRule rule;
  rule.nodes = g.nodes.transpose();
  rule.weights = g.weights;
  double worst = kInf;
  for (double omega : {1.0, 3.0, 7.0}) {
    std::vector<Eigen::VectorXd> mags(3, Eigen::VectorXd(m));
    for (int i = 0; i < m; ++i) {
      const double x = g.nodes(i);
      mags[0](i) = std::abs(std::sin(omega * x));
      mags[1](i) = omega * std::abs(std::cos(omega * x));
      mags[2](i) = omega * omega * std::abs(std::sin(omega * x));
    }
    const double scale = lr_norm(mags[1], rule, 2.0);
    worst = std::min(worst, smoothness_interpolation_margin(mags, rule, 1, 2, 2.0, 1 / omega, 0.5) / scale);
  }
  out.checks.push_back({"interpolation margin", worst >= -1e-12, "min relative margin " + fmt(worst)});
}

void run_stereo(const ExperimentConfig& c, ExperimentOutcome& out) {
  const SphereChart chart{c.dim_n};
  const int sphere_res = c.resolution > 0 ? c.resolution : 24;
  std::mt19937_64 rng(c.seed);
  const double bound = chart.transfer_constant(c.r);
  std::ostringstream csv;
  csv << "trial,flat_norm,sphere_norm,ratio,bound,min_slack\n";
  double worst_ratio = 0.0, worst_slack = kInf;
  for (int trial = 0; trial < c.t_count; ++trial) {
    const auto res = sobolev_transfer(random_ambient_cubic(c.dim_n, rng), chart, c.r, 12, sphere_res);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", trial, res.flat_norm, res.sphere_norm, res.ratio,
                  bound, res.min_slack);
    csv << buf;
    worst_ratio = std::max(worst_ratio, res.ratio);
    worst_slack = std::min(worst_slack, res.min_slack);
  }
  Writer{c, out}.file("stereo.csv", csv.str());
  out.checks.push_back({"transfer ratio", worst_ratio <= bound, "max " + fmt(worst_ratio) + " bound " + fmt(bound)});
  out.checks.push_back({"pointwise derivative inequality", worst_slack >= -1e-10, "min slack " + fmt(worst_slack)});
}

void run_torsion(const ExperimentConfig& c, ExperimentOutcome& out) {
  TorsionMesh mesh;
  if (c.resolution > 0) mesh = {c.resolution, 4 * c.resolution};
  struct Fixture {
    std::string name;
    PolarProfile profile;
  };
  const std::vector<Fixture> fixtures{{"disk", disk_profile(1.0)},
                                      {"ellipse_1_1.1", ellipse_profile(1.0, 1.1)},
                                      {"cos3_0.05", cosine_profile(0.05, 3)}};
  std::ostringstream csv;
  csv << "domain,n_radial,n_angular,lhs,rhs,absolute,relative,order,hopf_quadratic,hopf_linear,flux_error\n";
  for (const auto& fx : fixtures) {
    TorsionSolution s, fine;
    try {
      const auto dom = polar_domain(fx.profile);
      s = solve_torsion(dom, mesh);
      fine = solve_torsion(dom, mesh.refined());
    } catch (const Error&) {
      rethrow_with("torsion " + fx.name + ": ");
    }
    const auto id = fundamental_identity_residual(s), idf = fundamental_identity_residual(fine);
    const auto hopf = hopf_bounds_check(s);
    const double flux = std::abs(s.boundary_flux() / (2 * s.area) - 1);
    const bool disk = fx.name == "disk";
    const double order = disk ? 0.0 : std::log2(id.relative / idf.relative);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", fx.name.c_str(),
                  mesh.n_radial, mesh.n_angular, id.lhs, id.rhs, id.absolute, id.relative, order, hopf.quadratic,
                  hopf.linear, flux);
    csv << buf;
    if (disk) {
      out.checks.push_back({"identity " + fx.name, id.absolute <= 1e-8, "absolute residual " + fmt(id.absolute)});
      out.checks.push_back({"hopf " + fx.name, hopf.quadratic >= 0.5 - 1e-6, "-u/delta^2 >= " + fmt(hopf.quadratic)});
    } else {
      out.checks.push_back({"identity " + fx.name, id.relative <= 0.05 && order >= 1.5,
                            "relative " + fmt(id.relative) + " -> " + fmt(idf.relative) + " order " + fmt(order)});
      out.checks.push_back({"hopf " + fx.name, hopf.quadratic > 0.0, "-u/delta^2 >= " + fmt(hopf.quadratic)});
    }
    out.checks.push_back({"flux " + fx.name, flux <= 0.005, "relative error " + fmt(flux)});
  }
  Writer{c, out}.file("torsion.csv", csv.str());

  std::ostringstream rough;
  rough << "eps,lhs,rhs,ratio\n";
  std::vector<double> ratios;
  for (double eps : {0.01, 0.02, 0.04, 0.08}) {
    const auto rs = rough_stability_check(solve_torsion(polar_domain(cosine_profile(eps, 2)), mesh), 2.0);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", eps, rs.lhs, rs.rhs, rs.ratio);
    rough << buf;
    ratios.push_back(rs.ratio);
  }
  Writer{c, out}.file("rough_stability.csv", rough.str());
  const bool mono = std::is_sorted(ratios.begin(), ratios.end());
  const double top = *std::max_element(ratios.begin(), ratios.end());
  out.checks.push_back({"rough stability", mono && top < 1.0,
                        "ratios " + fmt(ratios.front()) + " .. " + fmt(ratios.back()) + (mono ? " increasing in eps" : " not monotone")});
}

void run_profile(const ExperimentConfig& c, ExperimentOutcome& out) {
  const int n = std::max(c.t_count, 2);
  std::ostringstream csv;
  csv << "eps,bound\n";
  std::vector<double> eps, vals;
  for (int i = 0; i < n; ++i) {
    const double e = std::pow(10.0, -8.0 + 8.0 * i / (n - 1));
    eps.push_back(e);
    vals.push_back(profile_bound(c.dim_n, c.k, c.alpha, c.r, e));
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", e, vals.back());
    csv << buf;
  }
  Writer{c, out}.file("profile.csv", csv.str());
  const bool mono = std::is_sorted(vals.begin(), vals.end());
  std::string regime = "linear";
  if (stability_regime(c.dim_n, c.r) == StabilityRegime::logarithmic) regime = "logarithmic";
  if (stability_regime(c.dim_n, c.r) == StabilityRegime::power)
    regime = "power, tau = " + fmt(stability_exponent(c.dim_n, c.k, c.alpha, c.r));
  out.checks.push_back({"profile monotone", mono, regime});
  Writer{c, out}.file("profile.svg", loglog_svg({{"bound", eps, vals, false}}, "||H-H0||_Lr", "rho_e - rho_i", regime));
}

}  // namespace

void check_stability_hypothesis(int dim_n, double r) {
  if (dim_n < 2) throw ParameterError("dim_n must be >= 2 (got " + std::to_string(dim_n) + ")");
  if (!(r > 1.0)) throw ParameterError("r must exceed 1 (got " + fmt(r) + ")");
  const double lower = (2.0 * dim_n - 2.0) / (dim_n + 1.0);
  if (r < lower - kRegimeTol) throw ParameterError("r must be >= (2N-2)/(N+1) = " + fmt(lower) + " (got " + fmt(r) + ")");
}

StabilityRegime stability_regime(int dim_n, double r) {
  const double crit = (dim_n - 1) / 2.0;
  if (std::abs(r - crit) <= kRegimeTol * crit) return StabilityRegime::logarithmic;
  return r > crit ? StabilityRegime::linear : StabilityRegime::power;
}

double stability_exponent(int dim_n, int k, double alpha, double r) {
  check_stability_hypothesis(dim_n, r);
  if (stability_regime(dim_n, r) != StabilityRegime::power)
    throw ParameterError("stability exponent needs r < (N-1)/2; use profile_bound");
  if (k < 1 || !(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("need k >= 1 and alpha in (0,1]");
  const double e = k + alpha;
  return e / (e + (dim_n - 1 - 2 * r) / r);
}

double profile_bound(int dim_n, int k, double alpha, double r, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  check_stability_hypothesis(dim_n, r);
  switch (stability_regime(dim_n, r)) {
    case StabilityRegime::linear:
      return eps;
    case StabilityRegime::logarithmic:
      return eps * std::max(std::log(1 / eps) / (k + alpha), 1.0);
    case StabilityRegime::power:
      break;
  }
  return std::pow(eps, stability_exponent(dim_n, k, alpha, r));
}

ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, std::optional<double> predicted,
                      bool allow_exclusion) {
  const std::size_t n = x.size();
  if (n != y.size()) throw ParameterError("fit_loglog: x and y differ in length");
  if (n < 4) throw ParameterError("fit_loglog: need at least 4 pairs");
  bool inc = true, dec = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw ParameterError("fit_loglog: data must be positive and finite");
    if (i > 0) {
      inc = inc && x[i] > x[i - 1];
      dec = dec && x[i] < x[i - 1];
    }
  }
  if (!inc && !dec) throw ParameterError("fit_loglog: x must be strictly monotone");

  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const auto solve = [&](int skip) {
    ScalingFit f;
    double mx = 0, my = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == skip) continue;
      mx += lx[i];
      my += ly[i];
      ++m;
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == skip) continue;
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
      syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 1e-24 * std::max(1.0, mx * mx)) throw ParameterError("fit_loglog: degenerate spread in x");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double ss_res = std::max(0.0, syy - f.slope * sxy);
    f.r_squared = syy > 0 ? std::clamp(1 - ss_res / syy, 0.0, 1.0) : 1.0;
    f.used = m;
    f.excluded = skip;
    return f;
  };

  ScalingFit fit = solve(-1);
  if (allow_exclusion) {
    const int last = inc ? static_cast<int>(n) - 1 : 0;
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = std::abs(ly[i] - fit.intercept - fit.slope * lx[i]);
    auto sorted = res;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double median = sorted[n / 2];
    // residuals at rounding level carry no information
    if (res[last] > 2 * median && res[last] > 1e-10) fit = solve(last);
  }
  if (predicted) {
    fit.predicted = *predicted;
    fit.relative_error = std::abs(fit.slope - *predicted) / (*predicted != 0 ? std::abs(*predicted) : 1.0);
  }
  return fit;
}

std::string_view mode_name(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::family: return "family";
    case ExperimentMode::gn: return "gn";
    case ExperimentMode::stereo: return "stereo";
    case ExperimentMode::torsion: return "torsion";
    case ExperimentMode::profile: return "profile";
  }
  return "?";
}

ExperimentMode parse_mode(std::string_view name) {
  for (auto m : {ExperimentMode::family, ExperimentMode::gn, ExperimentMode::stereo, ExperimentMode::torsion,
                 ExperimentMode::profile}) {
    if (mode_name(m) == name) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (t_count < 1) throw ParameterError("t_count must be positive");
  if (resolution < 0) throw ParameterError("resolution must be nonnegative");
  if (t_min && t_max && !(*t_min < *t_max)) throw ParameterError("t_min must be below t_max");
  if (t_min && !(*t_min > 0.0)) throw ParameterError("t_min must be positive");
  switch (mode) {
    case ExperimentMode::family: {
      check_stability_hypothesis(dim_n, r);
      if (t_count < 4) throw ParameterError("family mode needs t_count >= 4 for the slope fits");
      const FamilyParams p{dim_n, k, alpha, t_max.value_or(FamilyParams::t1(dim_n, k))};
      p.validate();
      build_family_surface(p, singular, r);
      break;
    }
    case ExperimentMode::profile:
      check_stability_hypothesis(dim_n, r);
      if (k < 1 || !(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("need k >= 1 and alpha in (0,1]");
      break;
    case ExperimentMode::stereo:
      if (dim_n < 3) throw ParameterError("stereo mode needs dim_n >= 3");
      if (!(r >= 1.0) || !std::isfinite(r)) throw ParameterError("stereo mode uses r as the exponent p >= 1");
      break;
    case ExperimentMode::gn:
    case ExperimentMode::torsion:
      break;
  }
}

std::vector<double> ExperimentConfig::t_grid() const {
  const double hi = t_max.value_or(FamilyParams::t1(dim_n, k));
  const double lo = t_min.value_or(hi / 64);
  if (t_count == 1) return {hi};
  std::vector<double> g(t_count);
  for (int i = 0; i < t_count; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (t_count - 1));
  g.back() = hi;
  return g;
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig c) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    if (val.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for " + key);
    if (key == "mode") c.mode = parse_mode(val);
    else if (key == "dim_n") c.dim_n = static_cast<int>(to_int(key, val));
    else if (key == "k") c.k = static_cast<int>(to_int(key, val));
    else if (key == "alpha") c.alpha = to_double(key, val);
    else if (key == "r") c.r = to_double(key, val);
    else if (key == "t_min") c.t_min = to_double(key, val);
    else if (key == "t_max") c.t_max = to_double(key, val);
    else if (key == "t_count") c.t_count = static_cast<int>(to_int(key, val));
    else if (key == "resolution") c.resolution = static_cast<int>(to_int(key, val));
    else if (key == "out" || key == "out_dir") c.out_dir = val;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, val));
    else if (key == "singular") c.singular = to_bool(key, val);
    else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str(), std::move(base));
}

bool ExperimentOutcome::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  ExperimentOutcome out;
  switch (config.mode) {
    case ExperimentMode::family: run_family(config, out); break;
    case ExperimentMode::gn: run_gn(config, out); break;
    case ExperimentMode::stereo: run_stereo(config, out); break;
    case ExperimentMode::torsion: run_torsion(config, out); break;
    case ExperimentMode::profile: run_profile(config, out); break;
  }
  std::ostringstream s;
  s << "mode " << mode_name(config.mode) << "\n";
  s << "dim_n " << config.dim_n << " k " << config.k << " alpha " << config.alpha << " r " << config.r
    << (config.singular ? " singular" : "") << "\n";
  for (const auto& c : out.checks) s << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  const auto path = config.out_dir / "summary.txt";
  write_text_file(path, s.str());
  out.files.push_back(path);
  return out;
}

}  // namespace sbt
