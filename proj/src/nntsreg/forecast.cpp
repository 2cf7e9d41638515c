#include "nntsreg/forecast.hpp"

#include <cmath>
#include <stdexcept>

namespace nntsreg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double predict_phi(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& x) {
  if (beta_hat.size() != x.size())
    throw std::invalid_argument("covariate/coefficient length mismatch");
  return std::atan(x.dot(beta_hat));
}

DensityForecast forecast_great(const GreatCircleFit& fit, double phi) {
  DensityForecast f;
  const Eigen::VectorXd c = fit.a * std::cos(phi) + fit.d * std::sin(phi);
  f.params = NntsParams::from_real_vector(c);
  f.branch = Branch::great;
  f.phi_hat = phi;
  return f;
}

DensityForecast forecast_small(const SmallCircleFit& fit, double linear_pred,
                               int branch_sign,
                               const Eigen::VectorXd& covariates) {
  DensityForecast f;
  double phi = std::atan(linear_pred);
  if (branch_sign <= 0) {
    phi = std::fmod(phi + kPi, kTwoPi);
    f.branch = Branch::negative;
  } else {
    f.branch = Branch::positive;
  }
  const Eigen::VectorXd c =
      std::cos(fit.alpha) * fit.b +
      std::sin(fit.alpha) * (fit.a * std::cos(phi) + fit.d * std::sin(phi));
  f.params = NntsParams::from_real_vector(c);
  f.phi_hat = phi;
  f.covariates = covariates;
  return f;
}

DensityForecast combine_branches(const DensityForecast& pos,
                                 const DensityForecast& neg) {
  const Eigen::VectorXd sum =
      pos.params.to_real_vector() + neg.params.to_real_vector();
  const double norm = sum.norm();
  if (norm < 1e-10)
    throw std::runtime_error("antipodal branch forecasts cannot be combined");
  DensityForecast f;
  f.params = NntsParams::from_real_vector(sum / norm);
  f.branch = Branch::combined;
  f.phi_hat = pos.phi_hat;
  f.covariates = pos.covariates;
  return f;
}

double point_predict(const DensityForecast& forecast) {
  const std::complex<double> r = forecast.params.first_trig_moment();
  if (std::abs(r) < 1e-12)
    throw std::runtime_error("zero resultant: no preferred direction");
  return wrap_angle(std::arg(r));
}

}  // namespace nntsreg
