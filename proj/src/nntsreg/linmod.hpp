#ifndef NNTSREG_LINMOD_HPP
#define NNTSREG_LINMOD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nntsreg {

struct LinearFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd std_err;
  Eigen::VectorXd p_values;  ///< two-sided, t with n-p degrees of freedom
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  double r2 = 0.0;  ///< squared correlation of fitted vs observed
  double sigma2 = 0.0;
  int df = 0;
};

/// No-intercept least squares with t-based inference. Throws on
/// ill-conditioned designs (condition number above 1e12).
LinearFit ols_no_intercept(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct ElasticNetPath {
  std::vector<double> lambdas;
  /// Coefficients on the original column scale, one vector per lambda.
  std::vector<Eigen::VectorXd> coefs;
  std::vector<double> cv_mean;  ///< cross-validated mean squared error
  std::vector<double> cv_se;
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
  Eigen::VectorXd coef_min;
  Eigen::VectorXd coef_1se;
};

/// Coordinate-descent elastic net without intercept. Columns are standardized
/// internally (mean zero, unit variance); coefficients are reported on the
/// original scale. Fold assignment is deterministic in the seed.
/// alpha = 1 is the lasso, alpha = 0 pure ridge. An empty grid selects a
/// log-spaced grid from the smallest lambda that zeroes all coefficients.
ElasticNetPath elastic_net(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double alpha,
                           std::vector<double> lambda_grid = {},
                           int folds = 10, std::uint64_t seed = 1);

struct ArFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd std_err;
  Eigen::VectorXd p_values;
  Eigen::VectorXd residuals;  ///< length n - order
  Eigen::VectorXd fitted;
  double r2 = 0.0;
  double sigma2 = 0.0;
};

/// Zero-mean AR(p) fitted by least squares on the lag design.
ArFit fit_ar(const Eigen::VectorXd& y, int order);

struct AcfPacf {
  std::vector<double> acf;   ///< lags 0..max_lag, biased normalization
  std::vector<double> pacf;  ///< lags 1..max_lag, Durbin-Levinson
  double band = 0.0;         ///< +-1.96/sqrt(n)
};

AcfPacf acf_pacf(const Eigen::VectorXd& y, int max_lag);

}  // namespace nntsreg

#endif
