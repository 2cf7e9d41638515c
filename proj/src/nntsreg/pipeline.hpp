#ifndef NNTSREG_PIPELINE_HPP
#define NNTSREG_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nntsreg/forecast.hpp"
#include "nntsreg/gof.hpp"
#include "nntsreg/linmod.hpp"
#include "nntsreg/sim.hpp"

namespace nntsreg {

enum class LambdaRule { min, one_se };

struct FitOptions {
  int m_min = 1;
  int m_max = 5;
  CircleKind circle_kind = CircleKind::great;
  /// order > 0 switches to the autoregressive path: the design is built from
  /// lagged transformed values and any covariates are ignored.
  int ar_order = 0;
  /// Elastic-net penalty mixing parameter; negative disables regularization
  /// (plain least squares with inference).
  double enet_alpha = -1.0;
  LambdaRule lambda_rule = LambdaRule::min;
  std::uint64_t seed = 1;
};

struct ModelRow {
  int m = 0;
  double alpha = 0.0;  ///< small-circle colatitude; 0 for great circles
  Eigen::VectorXd beta;
  Eigen::VectorXd std_err;   ///< empty under regularization
  Eigen::VectorXd p_values;  ///< empty under regularization
  int selected = 0;          ///< nonzero coefficients (regularized fits)
  double lambda = 0.0;
  double r2 = 0.0;
  double r2cos = 0.0;
  double ssc = 0.0;
  double loglik = 0.0;
  TestResult range, kuiper, watson;
  std::vector<double> pit;
  Eigen::VectorXd a, d, b;  ///< fitted frame; b empty for great circles
  int excluded = 0;  ///< observations dropped from the regression (e^T a = 0)
  bool degenerate = false;
  bool alpha_from_search = false;
};

struct FitReport {
  int schema_version = 1;
  FitOptions options;
  std::vector<std::string> columns;
  int n = 0;
  std::vector<ModelRow> rows;
  double uniform_loglik = 0.0;
  TestResult uniform_range, uniform_kuiper, uniform_watson;
};

/// Runs the full three-step pipeline for every requested M: embed, fit the
/// circle, transform, regress, forecast, and validate. For the regression
/// path x must have as many rows as thetas; for the AR path x may be empty.
/// A generating circle may be supplied to bypass estimation (simulation use).
FitReport fit_dataset(const std::vector<double>& thetas,
                      const Eigen::MatrixXd& x,
                      const std::vector<std::string>& columns,
                      const FitOptions& options,
                      const GeneratingCircle* known_circle = nullptr);

/// In-sample forecasts for a fitted row. For the AR path the design is
/// rebuilt from the transformed series; leading observations without lags
/// reuse the marginal (phi = 0) forecast.
std::vector<DensityForecast> row_forecasts(const ModelRow& row,
                                           const FitOptions& options,
                                           const std::vector<double>& thetas,
                                           const Eigen::MatrixXd& x);

/// Out-of-sample forecast at a covariate vector. Great circles return the
/// single geodesic forecast; small circles default to the combined
/// two-branch forecast (branch = +1 or -1 selects one branch).
DensityForecast forecast_at(const ModelRow& row, const FitOptions& options,
                            const Eigen::VectorXd& x, int branch = 0);

std::string report_to_json(const FitReport& report);
FitReport report_from_json(const std::string& json);

/// Bracket rendering of a Kuiper/Watson p-value, e.g. "<0.01" or
/// "(0.05,0.10)".
std::string bracket_p(double p, bool watson);

}  // namespace nntsreg

#endif
