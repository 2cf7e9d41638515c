#ifndef NNTSREG_FORECAST_HPP
#define NNTSREG_FORECAST_HPP

#include <Eigen/Dense>

#include "nntsreg/nnts.hpp"
#include "nntsreg/sphere.hpp"

namespace nntsreg {

enum class Branch { great, positive, negative, combined };

struct DensityForecast {
  NntsParams params = NntsParams::uniform();
  Branch branch = Branch::great;
  double phi_hat = 0.0;
  Eigen::VectorXd covariates;
};

/// Rotation angle from the linear predictor: arctan(x^T beta) in
/// (-pi/2, pi/2).
double predict_phi(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& x);

/// c = a cos(phi) + d sin(phi), mapped back to complex coefficients and
/// canonicalized.
DensityForecast forecast_great(const GreatCircleFit& fit, double phi);

/// c = cos(alpha) b + sin(alpha) {a cos(phi) + d sin(phi)} with the
/// two-branch rotation rule: branch_sign <= 0 shifts phi by pi.
DensityForecast forecast_small(const SmallCircleFit& fit, double linear_pred,
                               int branch_sign,
                               const Eigen::VectorXd& covariates = {});

/// Unit-normalized resultant of the two branch parameter vectors. Throws when
/// the branches are antipodal.
DensityForecast combine_branches(const DensityForecast& pos,
                                 const DensityForecast& neg);

/// Mean direction of the forecast density, in [0, 2*pi). Throws when the
/// resultant length vanishes (no preferred direction).
double point_predict(const DensityForecast& forecast);

}  // namespace nntsreg

#endif
