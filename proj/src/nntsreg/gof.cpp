#include "nntsreg/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nntsreg {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_unit_interval(const std::vector<double>& u) {
  for (double v : u)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("values outside [0,1]");
}

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

// CDF of the Kolmogorov distribution, L(x) = sum_m (-1)^m exp(-2 m^2 x^2).
// The dual theta series is used for small x where the primary one converges
// slowly.
double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 1.0) {
    const double f = std::sqrt(2.0 * kPi) / x;
    double s = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double term =
          std::exp(-(2 * k + 1) * (2 * k + 1) * kPi * kPi / (8.0 * x * x));
      s += term;
      if (term < 1e-12 * (s + 1e-300)) break;
    }
    return f * s;
  }
  double s = 0.0;
  for (int m = 1; m < 100; ++m) {
    const double term = std::exp(-2.0 * m * m * x * x);
    s += (m % 2 == 1 ? -term : term);
    if (term < 1e-12) break;
  }
  return 1.0 + 2.0 * s;
}

}  // namespace

std::vector<double> pit_series(const std::vector<DensityForecast>& forecasts,
                               const std::vector<double>& thetas) {
  if (forecasts.size() != thetas.size())
    throw std::invalid_argument("forecast/observation length mismatch");
  std::vector<double> u(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k)
    u[k] = forecasts[k].params.cdf(wrap_angle(thetas[k]));
  return u;
}

TestResult kuiper_test(std::vector<double> u) {
  if (u.size() < 5) throw std::invalid_argument("kuiper test needs n >= 5");
  check_unit_interval(u);
  std::sort(u.begin(), u.end());
  const double n = double(u.size());
  double dplus = 0.0, dminus = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dplus = std::max(dplus, (i + 1) / n - u[i]);
    dminus = std::max(dminus, u[i] - i / n);
  }
  TestResult r;
  r.statistic = dplus + dminus;
  const double lambda =
      r.statistic * (std::sqrt(n) + 0.155 + 0.24 / std::sqrt(n));
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double a = 2.0 * j * j * lambda * lambda;
    const double term = 2.0 * (2.0 * a - 1.0) * std::exp(-a);
    p += term;
    if (std::abs(term) < 1e-12 && j > 2) break;
  }
  r.p_value = clamp01(p);
  return r;
}

TestResult watson_test(std::vector<double> u) {
  if (u.size() < 5) throw std::invalid_argument("watson test needs n >= 5");
  check_unit_interval(u);
  std::sort(u.begin(), u.end());
  const double n = double(u.size());
  const double ubar = std::accumulate(u.begin(), u.end(), 0.0) / n;
  double u2 = 1.0 / (12.0 * n) - n * (ubar - 0.5) * (ubar - 0.5);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double z = u[i] - (2.0 * (i + 1) - 1.0) / (2.0 * n);
    u2 += z * z;
  }
  TestResult r;
  r.statistic = u2;
  const double mod = (u2 - 0.1 / n + 0.1 / (n * n)) * (1.0 + 0.8 / n);
  r.p_value = clamp01(1.0 - kolmogorov_cdf(kPi * std::sqrt(std::max(mod, 0.0))));
  return r;
}

TestResult range_test(std::vector<double> u) {
  if (u.size() < 3) throw std::invalid_argument("range test needs n >= 3");
  check_unit_interval(u);
  std::sort(u.begin(), u.end());
  const std::size_t n = u.size();
  // Largest circular gap on the unit circumference.
  double max_gap = 1.0 - u.back() + u.front();
  for (std::size_t i = 1; i < n; ++i)
    max_gap = std::max(max_gap, u[i] - u[i - 1]);
  TestResult r;
  r.statistic = kTwoPi * (1.0 - max_gap);  // circular range W

  // P(W <= w) = P(max gap >= g), g = 1 - w/(2*pi), by inclusion-exclusion
  // over the n spacings.
  const double g = max_gap;
  if (g <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  double p = 0.0, comp = 0.0;  // Kahan summation
  double log_choose = 0.0;     // log C(n, k), updated incrementally
  for (std::size_t k = 1; k <= n && k * g < 1.0; ++k) {
    log_choose += std::log(double(n - k + 1)) - std::log(double(k));
    const double log_term = log_choose + (n - 1) * std::log1p(-double(k) * g);
    const double term = (k % 2 == 1 ? 1.0 : -1.0) * std::exp(log_term);
    const double y = term - comp;
    const double t = p + y;
    comp = (t - p) - y;
    p = t;
    if (std::abs(term) < 1e-16 && k > 4) break;
  }
  r.p_value = clamp01(p);
  return r;
}

std::vector<double> bh_adjust(const std::vector<double>& p_values) {
  check_unit_interval(p_values);
  const std::size_t n = p_values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p_values[a] > p_values[b]; });
  std::vector<double> adjusted(n);
  double running = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t idx = order[i];
    const std::size_t rank = n - i;  // rank in the ascending order
    running = std::min(running, p_values[idx] * double(n) / double(rank));
    adjusted[idx] = running;
  }
  return adjusted;
}

}  // namespace nntsreg
