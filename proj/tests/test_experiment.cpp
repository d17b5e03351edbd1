#include "doctest.h"

#include "sbt/errors.hpp"
#include "sbt/experiment.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace sbt;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("sbt_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("stability exponent") {
  CHECK(stability_exponent(6, 1, 1.0, 2.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(stability_exponent(6, 2, 1.0, 2.0) == doctest::Approx(6.0 / 7).epsilon(1e-15));
  CHECK(stability_exponent(5, 2, 1.0, 1.6) == doctest::Approx(6.0 / 7).epsilon(1e-15));
  CHECK(stability_exponent(7, 1, 1.0, 2.0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(stability_exponent(6, 100000, 1.0, 2.0) > 0.99999);
  for (int k : {1, 2, 3})
    CHECK(stability_exponent(8, k + 1, 1e-12, 3.0) == doctest::Approx(stability_exponent(8, k, 1.0, 3.0)).epsilon(1e-10));

  // strictly increasing in k + alpha and in r inside the power regime
  for (int n : {6, 8, 11}) {
    const double lo = (2.0 * n - 2) / (n + 1), hi = (n - 1) / 2.0;
    double prev_r = 0.0;
    for (int j = 0; j < 10; ++j) {
      const double r = lo + (hi - lo) * j / 10;
      double prev_e = 0.0;
      for (int k = 1; k <= 3; ++k) {
        for (double a : {0.25, 0.5, 1.0}) {
          const double tau = stability_exponent(n, k, a, r);
          CHECK(tau > 0.0);
          CHECK(tau < 1.0);
          CHECK(tau > prev_e);
          prev_e = tau;
        }
      }
      const double t = stability_exponent(n, 2, 0.5, r);
      CHECK(t > prev_r);
      prev_r = t;
    }
  }

  CHECK_THROWS_AS(stability_exponent(5, 2, 1.0, 2.0), ParameterError);  // r = (N-1)/2
  CHECK_THROWS_AS(stability_exponent(3, 2, 1.0, 1.5), ParameterError);  // linear regime
  CHECK_THROWS_AS(stability_exponent(6, 2, 1.0, 1.2), ParameterError);  // below (2N-2)/(N+1)
  CHECK_THROWS_AS(stability_exponent(6, 2, 1.0, 1.0), ParameterError);
}

TEST_CASE("profile bound") {
  CHECK(stability_regime(3, 1.5) == StabilityRegime::linear);
  CHECK(profile_bound(3, 2, 1.0, 1.5, 1e-3) == 1e-3);
  const double e = std::exp(-3.0);
  CHECK(profile_bound(5, 2, 1.0, 2.0, e) == doctest::Approx(e).epsilon(1e-14));
  CHECK(profile_bound(5, 2, 1.0, 2.0, 1e-6) == doctest::Approx(1e-6 * std::log(1e6) / 3).epsilon(1e-14));
  CHECK(profile_bound(6, 2, 1.0, 2.0, 1e-3) == doctest::Approx(std::pow(1e-3, 6.0 / 7)).epsilon(1e-14));
  CHECK_THROWS_AS(profile_bound(6, 2, 1.0, 2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(profile_bound(6, 2, 1.0, 1.1, 0.1), ParameterError);

  // monotone nondecreasing on (0, 1] in every regime
  struct P {
    int n, k;
    double a, r;
  };
  for (const P& p : {P{3, 1, 0.5, 1.2}, P{5, 1, 0.3, 2.0}, P{5, 3, 1.0, 2.0}, P{6, 1, 1.0, 2.0}, P{9, 2, 0.7, 3.5}}) {
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double eps = std::pow(10.0, -10.0 + 10.0 * i / 400);
      const double b = profile_bound(p.n, p.k, p.a, p.r, eps);
      CHECK(b >= prev);
      prev = b;
    }
  }
}

TEST_CASE("log-log fits") {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(std::pow(2.0, -i));
    y.push_back(x.back() * x.back());
  }
  auto f = fit_loglog(x, y, 2.0);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.relative_error <= 1e-12);
  CHECK(f.excluded == -1);
  CHECK(f.used == 10);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(1e-3 * std::pow(64.0, i / 11.0));
    ys.push_back(3 * std::pow(xs.back(), 0.8) * (1 + 0.01 * noise(rng)));
  }
  f = fit_loglog(xs, ys, 0.8);
  CHECK(std::abs(f.slope - 0.8) <= 0.02);
  CHECK(f.r_squared >= 0.0);
  CHECK(f.r_squared <= 1.0);

  // a contaminated largest-x point is dropped and reported
  auto yc = ys;
  yc.back() *= 1.5;
  f = fit_loglog(xs, yc, 0.8);
  CHECK(f.excluded == 11);
  CHECK(f.used == 11);
  CHECK(std::abs(f.slope - 0.8) <= 0.02);
  CHECK(fit_loglog(xs, yc, 0.8, false).excluded == -1);

  CHECK_THROWS_AS(fit_loglog({1, 2, 3}, {1, 2, 3}), ParameterError);
  CHECK_THROWS_AS(fit_loglog({1, 2, 3, 4}, {1, -2, 3, 4}), ParameterError);
  CHECK_THROWS_AS(fit_loglog({1, 3, 2, 4}, {1, 2, 3, 4}), ParameterError);
  CHECK_THROWS_AS(fit_loglog({1, 1, 1, 1}, {1, 2, 3, 4}), ParameterError);
}

TEST_CASE("config files") {
  const auto c = parse_config("# sweep\nmode = stereo\ndim-n = 4\nk=3  # trailing comment\nalpha = 0.5\n\nr = 3\n"
                              "t_min = 1e-4\nt_max=2e-3\nt_count = 7\nresolution = 16\nout = /tmp/x\nseed = 99\n"
                              "singular = true\n");
  CHECK(c.mode == ExperimentMode::stereo);
  CHECK(c.dim_n == 4);
  CHECK(c.k == 3);
  CHECK(c.alpha == 0.5);
  CHECK(c.r == 3.0);
  CHECK(*c.t_min == 1e-4);
  CHECK(*c.t_max == 2e-3);
  CHECK(c.t_count == 7);
  CHECK(c.resolution == 16);
  CHECK(c.out_dir == "/tmp/x");
  CHECK(c.seed == 99);
  CHECK(c.singular);
  CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = two\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = spectral\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/sbt.cfg"), ConfigError);

  const auto g = parse_config("t_count = 5\n").t_grid();
  REQUIRE(g.size() == 5);
  CHECK(g.back() == FamilyParams::t1(6, 2));
  CHECK(g.front() == doctest::Approx(FamilyParams::t1(6, 2) / 64).epsilon(1e-14));

  ExperimentConfig bad;
  bad.r = 1.2;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = {};
  bad.dim_n = 1;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = {};
  bad.t_count = 3;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = {};
  bad.singular = true;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("CSV round trip is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30.0, 5.0);
  std::vector<FamilyRow> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({std::exp(u(rng)), 1 + std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)),
                    std::exp(u(rng))});
  }
  rows.push_back({0.0, 1.0, 0.0, 0.0, 0.0, 0.0});
  const auto text = family_csv(rows);
  CHECK(text.rfind("t,H0,dev_Lr,gap,vol_dev,per_dev\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(parse_family_csv(text) == rows);
  CHECK_THROWS_AS(parse_family_csv("a,b\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_family_csv("t,H0,dev_Lr,gap,vol_dev,per_dev\n1,2,3\n"), ConfigError);
}

TEST_CASE("svg plot") {
  const auto svg = loglog_svg({{"rows", {1e-4, 1e-3, 1e-2}, {1e-6, 1e-5, 1e-4}, true},
                               {"fit <1>", {1e-4, 1e-2}, {1e-6, 1e-4}, false}},
                              "||H-H0||_Lr", "rho_e - rho_i", "N=6 & k=2");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("||H-H0||_Lr") != std::string::npos);
  CHECK(svg.find("rho_e - rho_i") != std::string::npos);
  CHECK(svg.find("N=6 &amp; k=2") != std::string::npos);
  CHECK(svg.find("fit &lt;1&gt;") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("profile and family runs") {
  ExperimentConfig c;
  c.mode = ExperimentMode::profile;
  c.out_dir = scratch("profile");
  auto out = run_experiment(c);
  CHECK(out.all_pass());
  CHECK(std::filesystem::exists(c.out_dir / "profile.csv"));
  CHECK(slurp(c.out_dir / "summary.txt").find("PASS profile monotone") != std::string::npos);

  c = {};
  c.dim_n = 4;
  c.t_count = 6;
  c.out_dir = scratch("family");
  out = run_experiment(c);
  const auto rows = parse_family_csv(slurp(c.out_dir / "family.csv"));
  REQUIRE(rows.size() == 6);
  CHECK(rows.front().t == doctest::Approx(FamilyParams::t1(4, 2) / 64));
  for (const auto& r : rows) CHECK(r.gap > 0.0);
  CHECK(slurp(c.out_dir / "family.svg").find("rho_e - rho_i") != std::string::npos);
  // N = 4, r = 2 > 3/2: linear regime, so no exponent check
  bool has_tau = false;
  for (const auto& ch : out.checks) {
    has_tau = has_tau || ch.name == "stability exponent";
    CHECK_MESSAGE(ch.pass, ch.name << ": " << ch.detail);
  }
  CHECK_FALSE(has_tau);
}

TEST_CASE("torsion run at a coarse mesh") {
  ExperimentConfig c;
  c.mode = ExperimentMode::torsion;
  c.resolution = 24;
  c.out_dir = scratch("torsion");
  const auto out = run_experiment(c);
  const auto table = slurp(c.out_dir / "torsion.csv");
  CHECK(table.find("disk,24,96") != std::string::npos);
  CHECK(table.find("ellipse_1_1.1") != std::string::npos);
  for (const auto& ch : out.checks) CHECK_MESSAGE(ch.pass, ch.name << ": " << ch.detail);
}
