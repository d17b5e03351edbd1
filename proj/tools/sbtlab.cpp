// sbtlab: sweeps and checks for the soap bubble stability experiments.
#include "sbt/errors.hpp"
#include "sbt/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

struct Flags {
  std::optional<int> dim_n, k, t_count, resolution;
  std::optional<double> alpha, r, t_min, t_max;
  std::optional<std::string> out, config;
  std::optional<std::uint64_t> seed;
  bool singular = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--dim-n", f.dim_n, "ambient dimension N");
  cmd->add_option("--k", f.k, "integer smoothness k");
  cmd->add_option("--alpha", f.alpha, "Holder exponent alpha in (0,1]");
  cmd->add_option("--r", f.r, "Lebesgue exponent r (p in stereo mode)");
  cmd->add_option("--t-min", f.t_min, "smallest t (default t-max/64)");
  cmd->add_option("--t-max", f.t_max, "largest t (default t1)");
  cmd->add_option("--t-count", f.t_count, "number of grid points (trials in stereo mode)");
  cmd->add_option("--resolution", f.resolution, "module resolution, 0 for the default");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_flag("--singular", f.singular, "singular mode (k = 1, alpha < 1)");
  cmd->add_option("--config", f.config, "key = value config file; flags override it");
}

sbt::ExperimentConfig resolve(sbt::ExperimentMode mode, const Flags& f) {
  sbt::ExperimentConfig c;
  if (f.config) c = sbt::load_config(*f.config, c);
  c.mode = mode;
  if (f.dim_n) c.dim_n = *f.dim_n;
  if (f.k) c.k = *f.k;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.r) c.r = *f.r;
  if (f.t_min) c.t_min = *f.t_min;
  if (f.t_max) c.t_max = *f.t_max;
  if (f.t_count) c.t_count = *f.t_count;
  if (f.resolution) c.resolution = *f.resolution;
  if (f.out) c.out_dir = *f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.singular) c.singular = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative soap bubble stability experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<sbt::ExperimentMode> mode;
  for (auto m : {sbt::ExperimentMode::family, sbt::ExperimentMode::gn, sbt::ExperimentMode::stereo,
                 sbt::ExperimentMode::torsion, sbt::ExperimentMode::profile}) {
    const std::string name(sbt::mode_name(m));
    auto* cmd = app.add_subcommand(name, name + " experiment");
    add_flags(cmd, flags);
    cmd->callback([&mode, m] { mode = m; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto config = resolve(*mode, flags);
    const auto outcome = sbt::run_experiment(config);
    for (const auto& c : outcome.checks) std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    for (const auto& p : outcome.files) std::printf("wrote %s\n", p.string().c_str());
    return outcome.all_pass() ? 0 : 1;
  } catch (const sbt::ParameterError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 2;
  } catch (const sbt::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  } catch (const sbt::Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
