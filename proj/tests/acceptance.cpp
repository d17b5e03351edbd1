// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "sbt/errors.hpp"
#include "sbt/experiment.hpp"
#include "sbt/gn_interpolation.hpp"
#include "sbt/norms.hpp"
#include "sbt/stereographic.hpp"
#include "sbt/torsion.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

using namespace sbt;
using Eigen::VectorXd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Tuple {
  int n, k;
  double alpha, r;
  bool singular;

  std::string name() const {
    std::ostringstream s;
    s << "(" << n << "," << k << "," << alpha << "," << r << ")";
    return s.str();
  }
};

struct Sweep {
  std::vector<double> t, dev, gap, vol, per;
  std::vector<FamilyReport> reports;
  double seconds = 0.0;
};

Sweep sweep(const Tuple& c, const FamilyRules& rules = {}) {
  const auto t0 = Clock::now();
  Sweep s;
  s.t = default_t_grid(c.n, c.k);
  for (double t : s.t) {
    s.reports.push_back(family_report({c.n, c.k, c.alpha, t}, c.r, rules, c.singular));
    const auto& r = s.reports.back();
    s.dev.push_back(r.dev_Lr);
    s.gap.push_back(r.gap);
    s.vol.push_back(r.vol_dev);
    s.per.push_back(r.per_dev);
  }
  s.seconds = seconds_since(t0);
  return s;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// Runs a criterion, turning an exception into a FAIL line.
void criterion(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(id, title, pass, detail);
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

const std::vector<Tuple> kPower{{6, 1, 1.0, 2.0, false}, {6, 2, 1.0, 2.0, false}, {5, 2, 1.0, 1.6, false},
                                {7, 1, 1.0, 2.0, false}};
const Tuple kSingular{5, 1, 0.8, 2.0, true};

std::map<std::string, Sweep> sweeps;

const Sweep& get(const Tuple& c) {
  auto it = sweeps.find(c.name());
  if (it == sweeps.end()) it = sweeps.emplace(c.name(), sweep(c)).first;
  return it->second;
}

}  // namespace

int main() {
  criterion(1, "power-regime exponent", [] {
    bool ok = true;
    std::string d;
    for (const auto& c : kPower) {
      const auto& s = get(c);
      const auto f = fit_loglog(s.dev, s.gap, stability_exponent(c.n, c.k, c.alpha, c.r));
      const bool pass = f.within(0.05) && s.seconds <= 120.0;
      ok = ok && pass;
      d += c.name() + " slope " + fmt(f.slope) + " tau " + fmt(f.predicted) + " (" + fmt(s.seconds) + "s" +
           (f.excluded >= 0 ? ", largest t excluded" : "") + ") ";
    }
    return std::pair{ok, d};
  });

  criterion(2, "deviation rate", [] {
    bool ok = true;
    std::string d;
    for (const auto& c : kPower) {
      const auto& s = get(c);
      const auto f = fit_loglog(s.t, s.dev, c.k + c.alpha + (c.n - 1 - 2 * c.r) / c.r);
      ok = ok && f.within(0.05);
      d += c.name() + " " + fmt(f.slope) + " vs " + fmt(f.predicted) + " ";
    }
    return std::pair{ok, d};
  });

  criterion(3, "gap rate", [] {
    bool ok = true;
    std::string d;
    for (const auto& c : kPower) {
      const auto& s = get(c);
      const double e = c.k + c.alpha;
      const auto f = fit_loglog(s.t, s.gap, e);
      bool lower = true;
      for (std::size_t i = 0; i < s.t.size(); ++i) lower = lower && s.gap[i] >= 2.0 / 3.0 * std::pow(s.t[i] / 2, e);
      ok = ok && f.within(0.05) && lower;
      d += c.name() + " " + fmt(f.slope) + " vs " + fmt(e) + (lower ? "" : " lower bound violated") + " ";
    }
    return std::pair{ok, d};
  });

  criterion(4, "singular mode", [] {
    const auto& s = get(kSingular);
    const auto f = fit_loglog(s.t, s.dev, 1.8 + (kSingular.n - 1 - 2 * kSingular.r) / kSingular.r);
    double worst = 0.0, growth = kInf;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      const auto b = family_report({kSingular.n, kSingular.k, kSingular.alpha, s.t[i]}, kSingular.r,
                                   FamilyRules{}.refined(), true);
      const auto& a = s.reports[i];
      worst = std::max(worst, std::abs(b.dev_Lr / a.dev_Lr - 1));
      growth = std::min(growth, b.max_curvature_deviation / a.max_curvature_deviation);
    }
    const bool ok = f.within(0.07) && worst <= 0.03 && growth > 1.2;
    return std::pair{ok, "dev slope " + fmt(f.slope) + " vs 1.8, refinement change " + fmt(worst) +
                             ", max |H-H0| grows by >= " + fmt(growth) + "x"};
  });

  criterion(5, "measures and perimeters", [] {
    bool ok = true;
    std::string d;
    auto all = kPower;
    all.push_back(kSingular);
    for (const auto& c : all) {
      const auto& s = get(c);
      const double e = c.k + c.alpha, n1 = c.n - 1;
      const auto fv = fit_loglog(s.t, s.vol, e + n1);
      const auto fp = fit_loglog(s.t, s.per, c.singular ? 2 * c.alpha + n1 : e + n1);
      bool bound = true;
      for (std::size_t i = 0; i < s.t.size(); ++i) bound = bound && s.vol[i] <= sphere_area(c.n - 1) * std::pow(s.t[i], e + n1);
      ok = ok && fv.within(0.05) && fp.within(0.05) && bound;
      d += c.name() + " vol " + fmt(fv.slope) + "/" + fmt(fv.predicted) + " per " + fmt(fp.slope) + "/" +
           fmt(fp.predicted) + (bound ? "" : " vol bound violated") + " ";
    }
    return std::pair{ok, d};
  });

  criterion(6, "sphere calibration", [] {
    const auto t0 = Clock::now();
    double worst_h = 0.0, worst_dev = 0.0, worst_gap = 0.0;
    for (int n = 3; n <= 7; ++n) {
      // graph representation
      const GraphPatch patch{n, [](const VectorXd& x) { return hemisphere_jet(x); }, 0.9};
      const auto rule = ball_rule(n - 1, 0.85, gauss_legendre(6, 0.0, 0.85), sphere_rule(n - 1, 8));
      for (Eigen::Index i = 0; i < rule.size(); ++i)
        worst_h = std::max(worst_h, std::abs(patch.mean_curvature(rule.nodes.col(i)) - 1));
      // radial representation, off-centre
      VectorXd c = VectorXd::LinSpaced(n, 0.1, -0.2);
      const auto sph = round_sphere(c, 1.0);
      const auto dirs = sphere_rule(n, 8);
      Eigen::MatrixXd pts(n, dirs.size());
      VectorXd dh(dirs.size());
      for (Eigen::Index i = 0; i < dirs.size(); ++i) {
        const VectorXd x = dirs.nodes.col(i);
        dh(i) = sph.mean_curvature(x) - 1;
        pts.col(i) = sph.point(x);
      }
      worst_h = std::max(worst_h, dh.cwiseAbs().maxCoeff());
      worst_dev = std::max(worst_dev, lr_norm(dh, dirs, 2.0));
      worst_gap = std::max(worst_gap, radii_gap(pts, c).gap);
      // the unperturbed family row
      const auto rep = family_report({n, 2, 1.0, 0.0}, 2.0);
      worst_gap = std::max(worst_gap, rep.gap);
      worst_dev = std::max({worst_dev, rep.dev_Lr, rep.vol_dev, rep.per_dev, std::abs(rep.H0 - 1)});
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_h <= 1e-10 && worst_gap <= 1e-12 && worst_dev <= 1e-10 && secs <= 5.0;
    return std::pair{ok, "max |H-1| " + fmt(worst_h) + ", gap " + fmt(worst_gap) + ", deviations " + fmt(worst_dev) +
                             ", " + fmt(secs) + "s"};
  });

  criterion(7, "GN suite", [] {
    const GnField bump{[](const VectorXd& x) { return bump_jet(x, 0.9); }, 0.9};
    const std::vector<double> lambdas{1, 2, 4, 8};
    double bal = 0.0, off = kInf;
    for (const GnSpec& spec : {GnSpec{1.0, kInf, 1.0, 1}, GnSpec{2.0, kInf, 2.0, 1}, GnSpec{2.0, 2.0, 2.0, 1},
                               GnSpec{1.5, kInf, 1.0, 1}, GnSpec{2.0, kInf, 2.0, 2}}) {
      bal = std::max(bal, std::abs(dilation_invariance_check(bump, spec, lambdas).slope));
      off = std::min(off, std::abs(dilation_invariance_check(bump, spec, lambdas, 2.0).slope));
    }
    const int m = 400;
    const auto g = gauss_legendre(m, 0.0, 2 * std::numbers::pi);
    QuadratureRule rule;
    rule.nodes = g.nodes.transpose();
    rule.weights = g.weights;
    double margin = kInf, kmin = kInf;
    for (double omega : {1.0, 3.0, 7.0}) {
      std::vector<VectorXd> mags(3, VectorXd(m));
      for (int i = 0; i < m; ++i) {
        const double x = g.nodes(i);
        mags[0](i) = std::abs(std::sin(omega * x));
        mags[1](i) = omega * std::abs(std::cos(omega * x));
        mags[2](i) = omega * omega * std::abs(std::sin(omega * x));
      }
      margin = std::min(margin, smoothness_interpolation_margin(mags, rule, 1, 2, 2.0, 1 / omega, 0.5) /
                                    lr_norm(mags[1], rule, 2.0));
      kmin = std::min(kmin, minimal_interpolation_constant(mags, rule, 1, 2, 2.0, 1 / omega));
    }
    const bool ok = bal <= 0.05 && off > 0.2 && margin >= -1e-12 && kmin >= 0.5 - 1e-10;
    return std::pair{ok, "balanced |slope| <= " + fmt(bal) + ", control |slope| >= " + fmt(off) + ", margin " +
                             fmt(margin) + ", K_min " + fmt(kmin)};
  });

  criterion(8, "stereographic transfer", [] {
    std::mt19937_64 rng(20240611);
    bool ok = true;
    std::string d;
    for (auto [n, p] : {std::pair{3, 2.0}, std::pair{4, 2.0}, std::pair{4, 3.0}}) {
      const SphereChart chart{n};
      std::vector<ScalarJetField> fields{
          [](const VectorXd& x) { return Jet2<double>::constant(x.size(), 1.0); },
          [](const VectorXd& x) {
            Jet2<double> j(x.size());
            j.value = x(x.size() - 1);
            j.gradient(x.size() - 1) = 1.0;
            return j;
          }};
      for (int i = 0; i < 20; ++i) fields.push_back(random_ambient_cubic(n, rng));
      double worst = 0.0, slack = kInf;
      for (const auto& f : fields) {
        const auto r = sobolev_transfer(f, chart, p, 8, 16);
        worst = std::max(worst, r.ratio);
        slack = std::min(slack, r.min_slack);
      }
      ok = ok && worst <= chart.transfer_constant(p) && slack >= -1e-10;
      d += "(" + std::to_string(n) + "," + fmt(p) + ") ratio " + fmt(worst) + "/" + fmt(chart.transfer_constant(p)) +
           " slack " + fmt(slack) + " ";
    }
    return std::pair{ok, d};
  });

  criterion(9, "torsion identity", [] {
    bool ok = true;
    std::string d;
    for (auto [name, prof] : {std::pair{"disk", disk_profile(1.0)}, std::pair{"ellipse", ellipse_profile(1.0, 1.1)},
                              std::pair{"cos3", cosine_profile(0.05, 3)}}) {
      const auto dom = polar_domain(prof);
      const auto s = solve_torsion(dom);
      const auto id = fundamental_identity_residual(s);
      const auto hopf = hopf_bounds_check(s);
      const double flux = std::abs(s.boundary_flux() / (2 * s.area) - 1);
      bool pass = flux <= 0.005;
      d += std::string(name) + ": ";
      if (std::string(name) == "disk") {
        pass = pass && id.absolute <= 1e-8 && hopf.quadratic >= 0.5 - 1e-6;
        d += "residual " + fmt(id.absolute);
      } else {
        const auto fine = fundamental_identity_residual(solve_torsion(dom, TorsionMesh{}.refined()));
        const double order = std::log2(id.relative / fine.relative);
        pass = pass && id.relative <= 0.05 && order >= 1.5 && hopf.quadratic > 0.0;
        d += "relative " + fmt(id.relative) + " order " + fmt(order);
      }
      d += " hopf " + fmt(hopf.quadratic) + " flux " + fmt(flux) + "; ";
      ok = ok && pass;
    }
    return std::pair{ok, d};
  });

  criterion(10, "rough stability consistency", [] {
    std::vector<double> ratios;
    for (double eps : {0.01, 0.02, 0.04, 0.08})
      ratios.push_back(rough_stability_check(solve_torsion(polar_domain(cosine_profile(eps, 2))), 2.0).ratio);
    bool mono = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) mono = mono && ratios[i] > ratios[i - 1];
    const double top = *std::max_element(ratios.begin(), ratios.end());
    std::string d = "ratio at eps 0.01..0.08:";
    for (double r : ratios) d += " " + fmt(r);
    d += mono ? " (decreasing as eps decreases, bounded)" : " (not monotone)";
    return std::pair{mono && top < 1.0, d};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
