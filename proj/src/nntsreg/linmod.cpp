#include "nntsreg/linmod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace nntsreg {

namespace {

double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double ma = a.mean(), mb = b.mean();
  const Eigen::VectorXd ca = a.array() - ma, cb = b.array() - mb;
  const double va = ca.squaredNorm(), vb = cb.squaredNorm();
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  const double cov = ca.dot(cb);
  return cov * cov / (va * vb);
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Coordinate descent on an already standardized design.
Eigen::VectorXd enet_descend(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             double alpha, double lambda,
                             Eigen::VectorXd beta) {
  const double n = double(x.rows());
  const Eigen::Index p = x.cols();
  Eigen::VectorXd col_ms(p);  // (1/n) x_j^T x_j
  for (Eigen::Index j = 0; j < p; ++j) col_ms[j] = x.col(j).squaredNorm() / n;
  Eigen::VectorXd r = y - x * beta;
  for (int iter = 0; iter < 10000; ++iter) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_ms[j] <= 0.0) continue;
      const double old = beta[j];
      const double rho = x.col(j).dot(r) / n + col_ms[j] * old;
      const double bj = soft_threshold(rho, lambda * alpha) /
                        (col_ms[j] + lambda * (1.0 - alpha));
      if (bj != old) {
        r += x.col(j) * (old - bj);
        beta[j] = bj;
        max_delta = std::max(max_delta, std::abs(bj - old));
      }
    }
    if (max_delta < 1e-11) break;
  }
  return beta;
}

}  // namespace

LinearFit ols_no_intercept(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (y.size() != n) throw std::invalid_argument("design/response mismatch");
  if (n <= p) throw std::invalid_argument("need n > p for inference");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("non-finite values in regression inputs");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  if (smin <= 0.0 || smax / smin > 1e12)
    throw std::runtime_error("ill-conditioned design matrix");

  LinearFit fit;
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  fit.beta = xtx_inv * (x.transpose() * y);
  fit.fitted = x * fit.beta;
  fit.residuals = y - fit.fitted;
  fit.df = static_cast<int>(n - p);
  fit.sigma2 = fit.residuals.squaredNorm() / fit.df;
  fit.std_err = (fit.sigma2 * xtx_inv.diagonal().array()).sqrt();
  fit.p_values.resize(p);
  const boost::math::students_t dist(fit.df);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double t = fit.beta[j] / fit.std_err[j];
    fit.p_values[j] = 2.0 * boost::math::cdf(dist, -std::abs(t));
  }
  fit.r2 = squared_correlation(fit.fitted, y);
  return fit;
}

ElasticNetPath elastic_net(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double alpha, std::vector<double> lambda_grid,
                           int folds, std::uint64_t seed) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (y.size() != n) throw std::invalid_argument("design/response mismatch");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("non-finite values in elastic net inputs");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha outside [0,1]");

  // Internal standardization; coefficients mapped back by 1/sd at the end.
  Eigen::VectorXd mean(p), sd(p);
  Eigen::MatrixXd xs(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    mean[j] = x.col(j).mean();
    const Eigen::VectorXd c = x.col(j).array() - mean[j];
    sd[j] = std::sqrt(c.squaredNorm() / double(n));
    if (sd[j] <= 0.0) throw std::invalid_argument("constant design column");
    xs.col(j) = c / sd[j];
  }

  if (lambda_grid.empty()) {
    const double denom = std::max(alpha, 1e-3);
    const double lmax =
        (xs.transpose() * y).cwiseAbs().maxCoeff() / (double(n) * denom);
    const int npts = 100;
    for (int i = 0; i < npts; ++i)
      lambda_grid.push_back(lmax * std::pow(1e-4, double(i) / (npts - 1)));
  }
  std::sort(lambda_grid.begin(), lambda_grid.end(), std::greater<>());

  ElasticNetPath path;
  path.lambdas = lambda_grid;

  // Full-data path with warm starts.
  std::vector<Eigen::VectorXd> beta_std;
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(p);
  for (double lambda : lambda_grid) {
    warm = enet_descend(xs, y, alpha, lambda, warm);
    beta_std.push_back(warm);
    path.coefs.push_back(warm.cwiseQuotient(sd));
  }

  // Seeded k-fold cross-validation on the same grid.
  folds = std::min<int>(folds, static_cast<int>(n));
  std::vector<int> assignment(n);
  for (Eigen::Index i = 0; i < n; ++i) assignment[i] = int(i % folds);
  std::mt19937_64 rng(seed);
  std::shuffle(assignment.begin(), assignment.end(), rng);

  const std::size_t nl = lambda_grid.size();
  Eigen::MatrixXd fold_mse(folds, nl);
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < n; ++i)
      (assignment[i] == f ? test : train).push_back(i);
    Eigen::MatrixXd xtr(train.size(), p), xte(test.size(), p);
    Eigen::VectorXd ytr(train.size()), yte(test.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      xtr.row(i) = xs.row(train[i]);
      ytr[i] = y[train[i]];
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      xte.row(i) = xs.row(test[i]);
      yte[i] = y[test[i]];
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    for (std::size_t l = 0; l < nl; ++l) {
      w = enet_descend(xtr, ytr, alpha, lambda_grid[l], w);
      fold_mse(f, l) = (yte - xte * w).squaredNorm() / double(test.size());
    }
  }
  path.cv_mean.resize(nl);
  path.cv_se.resize(nl);
  std::size_t best = 0;
  for (std::size_t l = 0; l < nl; ++l) {
    path.cv_mean[l] = fold_mse.col(l).mean();
    const double var =
        (fold_mse.col(l).array() - path.cv_mean[l]).square().sum() /
        double(folds - 1);
    path.cv_se[l] = std::sqrt(var / folds);
    if (path.cv_mean[l] < path.cv_mean[best]) best = l;
  }
  path.lambda_min = lambda_grid[best];
  path.coef_min = path.coefs[best];
  // Largest lambda within one standard error of the minimum.
  std::size_t one_se = best;
  for (std::size_t l = 0; l < best; ++l) {
    if (path.cv_mean[l] <= path.cv_mean[best] + path.cv_se[best]) {
      one_se = l;
      break;
    }
  }
  path.lambda_1se = lambda_grid[one_se];
  path.coef_1se = path.coefs[one_se];
  return path;
}

ArFit fit_ar(const Eigen::VectorXd& y, int order) {
  const Eigen::Index n = y.size();
  if (order < 1) throw std::invalid_argument("order must be positive");
  if (n <= order + 1) throw std::invalid_argument("series too short");
  const Eigen::Index rows = n - order;
  Eigen::MatrixXd x(rows, order);
  Eigen::VectorXd yy(rows);
  for (Eigen::Index t = 0; t < rows; ++t) {
    yy[t] = y[t + order];
    for (int j = 0; j < order; ++j) x(t, j) = y[t + order - 1 - j];
  }
  const LinearFit ls = ols_no_intercept(x, yy);
  ArFit fit;
  fit.coef = ls.beta;
  fit.std_err = ls.std_err;
  fit.p_values = ls.p_values;
  fit.residuals = ls.residuals;
  fit.fitted = ls.fitted;
  fit.r2 = ls.r2;
  fit.sigma2 = ls.sigma2;
  return fit;
}

AcfPacf acf_pacf(const Eigen::VectorXd& y, int max_lag) {
  const Eigen::Index n = y.size();
  if (max_lag < 1 || max_lag >= n / 2)
    throw std::invalid_argument("max_lag must be in [1, n/2)");
  const double mean = y.mean();
  const Eigen::VectorXd c = y.array() - mean;
  const double c0 = c.squaredNorm() / double(n);
  if (c0 <= 0.0) throw std::invalid_argument("constant series");

  AcfPacf out;
  out.band = 1.96 / std::sqrt(double(n));
  out.acf.resize(max_lag + 1);
  out.acf[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double s = 0.0;
    for (Eigen::Index t = 0; t + k < n; ++t) s += c[t] * c[t + k];
    out.acf[k] = s / double(n) / c0;
  }

  // Durbin-Levinson recursion.
  out.pacf.resize(max_lag);
  std::vector<double> phi(max_lag + 1, 0.0), prev(max_lag + 1, 0.0);
  double v = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double acc = out.acf[k];
    for (int j = 1; j < k; ++j) acc -= prev[j] * out.acf[k - j];
    const double kk = acc / v;
    phi[k] = kk;
    for (int j = 1; j < k; ++j) phi[j] = prev[j] - kk * prev[k - j];
    v *= (1.0 - kk * kk);
    out.pacf[k - 1] = kk;
    prev = phi;
  }
  return out;
}

}  // namespace nntsreg
