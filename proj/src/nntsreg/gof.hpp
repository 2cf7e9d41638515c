#ifndef NNTSREG_GOF_HPP
#define NNTSREG_GOF_HPP

#include <vector>

#include "nntsreg/forecast.hpp"

namespace nntsreg {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Probability integral transform: CDF of each forecast density at its
/// observation. Uniform on [0,1] under a correctly specified model.
std::vector<double> pit_series(const std::vector<DensityForecast>& forecasts,
                               const std::vector<double>& thetas);

/// Kuiper V = D+ + D- against the uniform on [0,1]; asymptotic p-value with
/// the small-sample factor sqrt(n) + 0.155 + 0.24/sqrt(n).
TestResult kuiper_test(std::vector<double> u);

/// Watson U^2 with the Stephens small-sample modification; rotation-invariant
/// on the circle.
TestResult watson_test(std::vector<double> u);

/// Circular range W = 2*pi - largest gap of the points 2*pi*u; exact null
/// p-value P(W <= w) from the coverage distribution of the maximum gap.
TestResult range_test(std::vector<double> u);

/// Benjamini-Hochberg step-up adjusted p-values.
std::vector<double> bh_adjust(const std::vector<double>& p_values);

}  // namespace nntsreg

#endif
