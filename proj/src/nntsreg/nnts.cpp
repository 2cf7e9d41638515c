#include "nntsreg/nnts.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nntsreg {

namespace {
constexpr double kNormTol = 1e-6;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

NntsParams::NntsParams(std::vector<std::complex<double>> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("empty coefficient vector");
  double norm2 = 0.0;
  for (const auto& c : coeffs) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > kNormTol)
    throw std::invalid_argument("coefficient vector is not unit norm");
  // Canonical phase: rotate so c_0 is real and nonnegative, then renormalize.
  if (std::abs(coeffs[0]) > 0.0) {
    const std::complex<double> phase = std::abs(coeffs[0]) / coeffs[0];
    for (auto& c : coeffs) c *= phase;
    coeffs[0] = std::complex<double>(coeffs[0].real(), 0.0);
  }
  const double norm = std::sqrt(norm2);
  for (auto& c : coeffs) c /= norm;
  coeffs_ = std::move(coeffs);
}

NntsParams NntsParams::uniform() {
  NntsParams p;
  p.coeffs_ = {std::complex<double>(1.0, 0.0)};
  return p;
}

NntsParams NntsParams::from_real_vector(const Eigen::VectorXd& c) {
  if (c.size() % 2 == 0)
    throw std::invalid_argument("real coefficient vector must have odd length");
  const int m = static_cast<int>((c.size() - 1) / 2);
  std::vector<std::complex<double>> coeffs(m + 1);
  coeffs[0] = std::complex<double>(c[0], 0.0);
  for (int k = 1; k <= m; ++k)
    coeffs[k] = std::complex<double>(c[k], c[m + k]);
  return NntsParams(std::move(coeffs));
}

Eigen::VectorXd NntsParams::to_real_vector() const {
  const int m = harmonics();
  Eigen::VectorXd c(2 * m + 1);
  c[0] = coeffs_[0].real();
  for (int k = 1; k <= m; ++k) {
    c[k] = coeffs_[k].real();
    c[m + k] = coeffs_[k].imag();
  }
  return c;
}

double NntsParams::density(double theta) const {
  // sum_k c_k e^{ik*theta} via Horner in e^{i*theta}.
  const std::complex<double> w = std::polar(1.0, theta);
  std::complex<double> acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * w + *it;
  return std::norm(acc) / kTwoPi;
}

double NntsParams::cdf(double theta) const {
  const double t = (theta >= kTwoPi) ? kTwoPi : (theta < 0.0 ? 0.0 : theta);
  const int m = harmonics();
  double f = 0.0;
  // Diagonal terms: |c_k|^2 * t / (2 pi).
  for (const auto& c : coeffs_) f += std::norm(c) * t / kTwoPi;
  // Off-diagonal pairs (k, j), k < j: 2*Re of the termwise integral.
  for (int k = 0; k <= m; ++k) {
    for (int j = k + 1; j <= m; ++j) {
      const int d = k - j;
      const std::complex<double> integ =
          (std::polar(1.0, d * t) - 1.0) / std::complex<double>(0.0, double(d));
      f += 2.0 * (coeffs_[k] * std::conj(coeffs_[j]) * integ).real() / kTwoPi;
    }
  }
  if (f < 0.0) f = 0.0;
  if (f > 1.0) f = 1.0;
  return f;
}

std::complex<double> NntsParams::first_trig_moment() const {
  std::complex<double> r(0.0, 0.0);
  for (std::size_t k = 0; k + 1 < coeffs_.size(); ++k)
    r += coeffs_[k] * std::conj(coeffs_[k + 1]);
  return r;
}

std::vector<double> sample(const NntsParams& params, std::size_t n,
                           std::uint64_t seed) {
  double abs_sum = 0.0;
  for (const auto& c : params.coeffs()) abs_sum += std::abs(c);
  const double envelope = abs_sum * abs_sum / kTwoPi;  // triangle inequality

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double theta = unif(rng) * kTwoPi;
    if (unif(rng) * envelope <= params.density(theta))
      out.push_back(theta);
  }
  return out;
}

LogLik log_likelihood(const std::vector<NntsParams>& params_seq,
                      const std::vector<double>& thetas) {
  if (params_seq.size() != thetas.size())
    throw std::invalid_argument("parameter/observation length mismatch");
  LogLik ll;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double f = params_seq[k].density(thetas[k]);
    if (f <= 0.0) {
      if (!ll.zero_at) ll.zero_at = k;
      ll.value = -std::numeric_limits<double>::infinity();
      continue;
    }
    if (!ll.zero_at) ll.value += std::log(f);
  }
  return ll;
}

LogLik log_likelihood(const NntsParams& params,
                      const std::vector<double>& thetas) {
  LogLik ll;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double f = params.density(thetas[k]);
    if (f <= 0.0) {
      if (!ll.zero_at) ll.zero_at = k;
      ll.value = -std::numeric_limits<double>::infinity();
      continue;
    }
    if (!ll.zero_at) ll.value += std::log(f);
  }
  return ll;
}

}  // namespace nntsreg
