#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "nntsreg/nnts.hpp"

using namespace nntsreg;
using cd = std::complex<double>;

namespace {

// Trapezoid rule on [0, 2*pi]; exact for trigonometric polynomials of degree
// below npts, so it serves as an independent oracle for the closed forms.
double quad(const std::function<double(double)>& f, int npts = 512) {
  double h = kTwoPi / npts;
  double s = 0.0;
  for (int i = 0; i < npts; ++i) s += f(i * h);
  return s * h;
}

NntsParams random_params(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<cd> c(m + 1);
  double norm2 = 0.0;
  for (auto& ck : c) {
    ck = cd(gauss(rng), gauss(rng));
    norm2 += std::norm(ck);
  }
  for (auto& ck : c) ck /= std::sqrt(norm2);
  return NntsParams(std::move(c));
}

}  // namespace

TEST_CASE("wrap_angle maps into [0, 2pi)") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(kTwoPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(7.0 * kTwoPi + 1.25) == doctest::Approx(1.25));
  for (double t : {-100.0, -3.0, 0.1, 9.99, 1e6}) {
    double w = wrap_angle(t);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
    CHECK(std::abs(std::sin(w) - std::sin(t)) < 1e-7);
  }
}

TEST_CASE("cardioid special case (c0 = c1 = 1/sqrt 2)") {
  double r = 1.0 / std::sqrt(2.0);
  NntsParams p({cd(r, 0.0), cd(r, 0.0)});
  for (double t = 0.0; t < kTwoPi; t += 0.37) {
    CHECK(p.density(t) == doctest::Approx((1.0 + std::cos(t)) / kTwoPi));
  }
  auto mu = p.first_trig_moment();
  CHECK(mu.real() == doctest::Approx(0.5));
  CHECK(mu.imag() == doctest::Approx(0.0));
  CHECK(p.mean_resultant_length() == doctest::Approx(0.5));
  CHECK(p.circular_variance() == doctest::Approx(0.5));
}

TEST_CASE("uniform density") {
  auto u = NntsParams::uniform();
  CHECK(u.harmonics() == 0);
  CHECK(u.density(1.234) == doctest::Approx(1.0 / kTwoPi));
  CHECK(u.cdf(kTwoPi / 4) == doctest::Approx(0.25));
  CHECK(std::abs(u.first_trig_moment()) == doctest::Approx(0.0));
}

TEST_CASE("density integrates to one and is nonnegative") {
  for (int m = 1; m <= 8; ++m) {
    auto p = random_params(m, 100 + m);
    double mass = quad([&](double t) { return p.density(t); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    for (double t = 0.0; t < kTwoPi; t += 0.05) CHECK(p.density(t) >= 0.0);
  }
}

TEST_CASE("cdf matches quadrature and is a proper distribution function") {
  for (int m : {1, 3, 6}) {
    auto p = random_params(m, 7 * m);
    CHECK(p.cdf(0.0) == doctest::Approx(0.0));
    CHECK(p.cdf(kTwoPi) == doctest::Approx(1.0));
    double prev = 0.0;
    for (int i = 1; i <= 64; ++i) {
      double t = kTwoPi * i / 64;
      double f = p.cdf(t);
      CHECK(f >= prev - 1e-12);
      prev = f;
      // Simpson on [0, t] as the oracle
      int ns = 2048;
      double h = t / ns, acc = p.density(0.0) + p.density(t);
      for (int j = 1; j < ns; ++j)
        acc += p.density(j * h) * (j % 2 ? 4.0 : 2.0);
      CHECK(f == doctest::Approx(acc * h / 3.0).epsilon(1e-7));
    }
  }
}

TEST_CASE("first trig moment equals the quadrature moment") {
  for (int m : {1, 2, 5}) {
    auto p = random_params(m, 31 * m);
    auto mu = p.first_trig_moment();
    double re = quad([&](double t) { return std::cos(t) * p.density(t); });
    double im = quad([&](double t) { return std::sin(t) * p.density(t); });
    CHECK(mu.real() == doctest::Approx(re).epsilon(1e-10));
    CHECK(mu.imag() == doctest::Approx(im).epsilon(1e-10));
  }
}

TEST_CASE("canonical phase and the density's phase invariance") {
  auto p = random_params(3, 9);
  auto c = p.coeffs();
  CHECK(c[0].imag() == doctest::Approx(0.0));
  CHECK(c[0].real() >= 0.0);
  // rotating every coefficient by a common phase leaves the density alone
  cd rot = std::polar(1.0, 1.1);
  std::vector<cd> rotated;
  for (auto ck : c) rotated.push_back(ck * rot);
  NntsParams q(rotated);
  for (double t = 0.0; t < kTwoPi; t += 0.4)
    CHECK(q.density(t) == doctest::Approx(p.density(t)));
  auto cq = q.coeffs();
  for (size_t k = 0; k < c.size(); ++k) {
    CHECK(cq[k].real() == doctest::Approx(c[k].real()));
    CHECK(cq[k].imag() == doctest::Approx(c[k].imag()));
  }
}

TEST_CASE("real vector round trip") {
  auto p = random_params(4, 77);
  auto v = p.to_real_vector();
  CHECK(v.size() == 9);
  CHECK(v.norm() == doctest::Approx(1.0));
  auto q = NntsParams::from_real_vector(v);
  auto c = p.coeffs();
  auto cq = q.coeffs();
  for (size_t k = 0; k < c.size(); ++k)
    CHECK(std::abs(c[k] - cq[k]) < 1e-12);
}

TEST_CASE("non-unit coefficient vectors are rejected") {
  CHECK_THROWS_AS(NntsParams({cd(1.0, 0.0), cd(0.5, 0.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NntsParams({cd(0.0, 0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(NntsParams(std::vector<cd>{}), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and follows the density") {
  auto p = random_params(2, 5);
  auto s1 = sample(p, 500, 42);
  auto s2 = sample(p, 500, 42);
  CHECK(s1 == s2);
  auto s3 = sample(p, 500, 43);
  CHECK(s1 != s3);

  auto big = sample(p, 20000, 7);
  for (double t : big) {
    CHECK(t >= 0.0);
    CHECK(t < kTwoPi);
  }
  // empirical CDF against the model CDF, crude DKW-style bound
  std::sort(big.begin(), big.end());
  double dmax = 0.0;
  for (size_t i = 0; i < big.size(); ++i) {
    double f = p.cdf(big[i]);
    dmax = std::max(dmax, std::abs(f - (i + 1.0) / big.size()));
  }
  CHECK(dmax < 0.02);
}

TEST_CASE("log likelihood sums log densities") {
  auto p = random_params(3, 13);
  std::vector<double> th = {0.1, 1.0, 2.5, 4.0, 6.0};
  auto ll = log_likelihood(p, th);
  double want = 0.0;
  for (double t : th) want += std::log(p.density(t));
  CHECK(ll.value == doctest::Approx(want));
  CHECK(!ll.zero_at.has_value());

  std::vector<NntsParams> seq(th.size(), p);
  auto ll2 = log_likelihood(seq, th);
  CHECK(ll2.value == doctest::Approx(want));
}

TEST_CASE("log likelihood flags a density zero") {
  double r = 1.0 / std::sqrt(2.0);
  NntsParams p({cd(r, 0.0), cd(-r, 0.0)});  // vanishes exactly at 0
  std::vector<double> th = {0.5, 0.0, 1.0};
  auto ll = log_likelihood(p, th);
  CHECK(std::isinf(ll.value));
  CHECK(ll.value < 0.0);
  REQUIRE(ll.zero_at.has_value());
  CHECK(*ll.zero_at == 1);
}
