#ifndef NNTSREG_NNTS_HPP
#define NNTSREG_NNTS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace nntsreg {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduce an angle to [0, 2*pi).
double wrap_angle(double theta);

/// Circular density built from a nonnegative trigonometric sum: the squared
/// modulus of sum_k c_k e^{ik*theta}, normalized on [0, 2*pi).
///
/// The coefficient vector lives on the complex unit hypersphere
/// (sum |c_k|^2 = 1) and is kept in canonical phase: c_0 real and >= 0.
class NntsParams {
 public:
  /// Builds from complex coefficients c_0..c_M. The vector is phase-rotated
  /// so c_0 is real nonnegative and renormalized. Inputs whose squared norm
  /// deviates from 1 by more than 1e-6 are rejected.
  explicit NntsParams(std::vector<std::complex<double>> coeffs);

  /// M = 0 uniform density.
  static NntsParams uniform();

  /// Builds from the real image (Re c_0..c_M, Im c_1..c_M), length 2M+1.
  static NntsParams from_real_vector(const Eigen::VectorXd& c);

  /// Real image of the coefficient vector, length 2M+1.
  Eigen::VectorXd to_real_vector() const;

  int harmonics() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

  /// Density value at theta, in 1/radians.
  double density(double theta) const;

  /// F(theta) = integral of the density over [0, theta], evaluated in closed
  /// form by termwise integration of the trigonometric polynomial.
  double cdf(double theta) const;

  /// E[e^{i*theta}] = sum_{k=0}^{M-1} c_k * conj(c_{k+1}). Its modulus is the
  /// mean resultant length, its argument the mean direction.
  std::complex<double> first_trig_moment() const;

  double mean_resultant_length() const { return std::abs(first_trig_moment()); }
  double circular_variance() const { return 1.0 - mean_resultant_length(); }

 private:
  NntsParams() = default;
  std::vector<std::complex<double>> coeffs_;
};

/// i.i.d. draws by rejection sampling with a uniform proposal under the
/// envelope (sum_k |c_k|)^2 / (2*pi). Deterministic for a given seed.
std::vector<double> sample(const NntsParams& params, std::size_t n,
                           std::uint64_t seed);

struct LogLik {
  double value = 0.0;
  /// Index of the first observation whose density underflowed to zero
  /// (value is then -inf), or nullopt.
  std::optional<std::size_t> zero_at;
};

/// Log-likelihood with one parameter vector per observation.
LogLik log_likelihood(const std::vector<NntsParams>& params_seq,
                      const std::vector<double>& thetas);

/// Log-likelihood of a single density over a sample.
LogLik log_likelihood(const NntsParams& params,
                      const std::vector<double>& thetas);

}  // namespace nntsreg

#endif
