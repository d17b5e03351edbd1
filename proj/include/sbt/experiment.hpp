#pragma once

#include "sbt/optimality_family.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sbt {

/// r > 1 and r >= (2N-2)/(N+1); ParameterError otherwise.
void check_stability_hypothesis(int dim_n, double r);

enum class StabilityRegime { linear, logarithmic, power };

/// linear for r > (N-1)/2, logarithmic at r = (N-1)/2, power below.
StabilityRegime stability_regime(int dim_n, double r);

/// tau = (k+alpha) / (k+alpha + (N-1-2r)/r). Power regime only.
double stability_exponent(int dim_n, int k, double alpha, double r);

/// Shape of the stability bound in eps (constant excluded): eps, eps max{log(1/eps)/(k+alpha), 1}, or eps^tau.
double profile_bound(int dim_n, int k, double alpha, double r, double eps);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted = 0.0;
  double relative_error = 0.0;  ///< |slope - predicted| / |predicted|; 0 without a prediction
  int excluded = -1;            ///< index dropped from the fit, -1 if none
  std::size_t used = 0;

  bool within(double tol) const { return relative_error <= tol; }
};

/// Least squares on (log x, log y). Needs >= 4 positive pairs with x strictly monotone.
/// The pair with the largest x is dropped when its residual exceeds twice the median residual.
ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                      std::optional<double> predicted = std::nullopt, bool allow_exclusion = true);

enum class ExperimentMode { family, gn, stereo, torsion, profile };

std::string_view mode_name(ExperimentMode mode);
ExperimentMode parse_mode(std::string_view name);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::family;
  int dim_n = 6;
  int k = 2;
  double alpha = 1.0;
  double r = 2.0;
  std::optional<double> t_min;  ///< defaults to t_max / 64
  std::optional<double> t_max;  ///< defaults to t1(N, k)
  int t_count = 12;
  int resolution = 0;  ///< module-specific; 0 keeps the module default
  std::filesystem::path out_dir = "sbt_out";
  std::uint64_t seed = 20240611;
  bool singular = false;

  /// ParameterError on inconsistent values; family mode requires the stability hypothesis.
  void validate() const;
  std::vector<double> t_grid() const;
};

/// Applies `key = value` lines (# comments, blank lines allowed) on top of base.
/// Unknown keys or malformed values raise ConfigError.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Numeric columns of one family row, as written to CSV.
struct FamilyRow {
  double t = 0.0;
  double H0 = 1.0;
  double dev_Lr = 0.0;
  double gap = 0.0;
  double vol_dev = 0.0;
  double per_dev = 0.0;

  bool operator==(const FamilyRow&) const = default;
};

FamilyRow family_row(const FamilyReport& report);

/// Header t,H0,dev_Lr,gap,vol_dev,per_dev; values with 17 significant digits, LF endings.
std::string family_csv(const std::vector<FamilyRow>& rows);
std::vector<FamilyRow> parse_family_csv(std::string_view text);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  bool markers = true;  ///< points if true, a polyline otherwise
};

/// Self-contained log-log SVG.
std::string loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label, const std::string& y_label,
                       const std::string& title);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentOutcome {
  std::vector<CheckResult> checks;
  std::vector<std::filesystem::path> files;

  bool all_pass() const;
};

/// Runs one mode, writes its tables, plot and summary.txt into out_dir.
/// Component errors are rethrown with the offending parameter set prepended.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sbt
