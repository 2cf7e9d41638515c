#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "nntsreg/nnts.hpp"
#include "nntsreg/sphere.hpp"

using namespace nntsreg;

namespace {

std::vector<Eigen::VectorXd> embed_all(const std::vector<double>& thetas,
                                       int m) {
  std::vector<Eigen::VectorXd> out;
  for (double t : thetas) out.push_back(embed(t, m));
  return out;
}

// Random orthonormal frame in R^dim via QR of a Gaussian matrix.
Eigen::MatrixXd random_frame(int dim, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(dim, cols);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = gauss(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
         Eigen::MatrixXd::Identity(dim, cols);
}

std::vector<double> random_angles(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  std::vector<double> out(n);
  for (auto& t : out) t = unif(rng);
  return out;
}

}  // namespace

TEST_CASE("embedding is unit norm with the documented layout") {
  for (int m : {1, 3, 8}) {
    for (double t : {0.0, 0.7, 3.9, 6.1}) {
      auto e = embed(t, m);
      REQUIRE(e.size() == 2 * m + 1);
      CHECK(e.norm() == doctest::Approx(1.0).epsilon(1e-12));
      double s = 1.0 / std::sqrt(m + 1.0);
      CHECK(e[0] == doctest::Approx(s));
      for (int k = 1; k <= m; ++k) {
        CHECK(e[k] == doctest::Approx(s * std::cos(k * t)));
        CHECK(e[m + k] == doctest::Approx(-s * std::sin(k * t)));
      }
    }
  }
}

TEST_CASE("moment matrix is symmetric PSD with trace n") {
  auto vecs = embed_all(random_angles(23, 4), 3);
  auto em = moment_matrix(vecs);
  CHECK((em - em.transpose()).norm() < 1e-12);
  CHECK(em.trace() == doctest::Approx(23.0).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("great circle fit recovers an exact geodesic") {
  int dim = 7;
  auto frame = random_frame(dim, 2, 11);
  std::vector<Eigen::VectorXd> vecs;
  for (double phi : random_angles(40, 5))
    vecs.push_back(frame.col(0) * std::cos(phi) + frame.col(1) * std::sin(phi));
  auto fit = fit_great_circle(vecs);
  CHECK(fit.ssc == doctest::Approx(40.0).epsilon(1e-10));
  CHECK(fit.r2cos == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.a.norm() == doctest::Approx(1.0));
  CHECK(fit.d.norm() == doctest::Approx(1.0));
  CHECK(std::abs(fit.a.dot(fit.d)) < 1e-10);
  // fitted plane equals the generating plane
  Eigen::MatrixXd p = frame * frame.transpose();
  CHECK((p * fit.a - fit.a).norm() < 1e-8);
  CHECK((p * fit.d - fit.d).norm() < 1e-8);
}

TEST_CASE("great circle SSC against a brute-force subspace search") {
  // dim 3 (M = 1): a plane is a unit normal u, and the sum of squared
  // cosines is n minus the quadratic form in u. Grid-search u directly.
  auto vecs = embed_all(random_angles(6, 9), 1);
  auto em = moment_matrix(vecs);
  double best = 0.0;
  int grid = 400;
  for (int i = 0; i <= grid; ++i) {
    double th = kTwoPi / 2.0 * i / grid;
    for (int j = 0; j < 2 * grid; ++j) {
      double ph = kTwoPi * j / (2 * grid);
      Eigen::Vector3d u(std::sin(th) * std::cos(ph),
                        std::sin(th) * std::sin(ph), std::cos(th));
      best = std::max(best, 6.0 - u.dot(em * u));
    }
  }
  auto fit = fit_great_circle(vecs);
  CHECK(fit.ssc >= best - 1e-9);
  CHECK(fit.ssc == doctest::Approx(best).epsilon(1e-3));
  CHECK(fit.ssc <= 6.0 + 1e-12);
}

TEST_CASE("SSC is bounded by n and invariant under rotations") {
  auto thetas = random_angles(31, 21);
  auto vecs = embed_all(thetas, 4);
  auto fit = fit_great_circle(vecs);
  CHECK(fit.ssc <= 31.0 + 1e-10);
  CHECK(fit.r2cos == doctest::Approx(fit.ssc / 31.0));

  auto q = random_frame(9, 9, 3);
  std::vector<Eigen::VectorXd> rotated;
  for (const auto& v : vecs) rotated.push_back(q * v);
  auto fit2 = fit_great_circle(rotated);
  CHECK(fit2.ssc == doctest::Approx(fit.ssc).epsilon(1e-10));
}

TEST_CASE("small circle fit recovers an exact small circle") {
  int dim = 9;
  auto frame = random_frame(dim, 3, 17);
  Eigen::VectorXd b = frame.col(0), a = frame.col(1), d = frame.col(2);
  double alpha = 0.6;
  // equally spaced phi so the moment matrix cross terms vanish and the
  // generating frame is exactly the eigenframe
  std::vector<Eigen::VectorXd> vecs;
  for (int k = 0; k < 50; ++k) {
    double phi = kTwoPi * k / 50;
    vecs.push_back(std::cos(alpha) * b +
                   std::sin(alpha) * (a * std::cos(phi) + d * std::sin(phi)));
  }
  auto fit = fit_small_circle(vecs);
  CHECK(fit.ssc == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-6));
  CHECK(std::abs(std::abs(fit.b.dot(b)) - 1.0) < 1e-8);
}

TEST_CASE("small circle SSC dominates the great circle SSC") {
  for (std::uint64_t s : {1, 2, 3, 4, 5}) {
    auto vecs = embed_all(random_angles(25, 100 + s), 3);
    auto g = fit_great_circle(vecs);
    auto sm = fit_small_circle(vecs);
    CHECK(sm.ssc >= g.ssc - 1e-10);
    CHECK(sm.ssc <= 25.0 + 1e-10);
  }
}

TEST_CASE("alpha maximizes the small circle SSC") {
  for (std::uint64_t s : {11, 12, 13}) {
    auto vecs = embed_all(random_angles(30, s), 2);
    auto fit = fit_small_circle(vecs);
    double at_hat =
        small_circle_ssc_at(vecs, fit.b, fit.a, fit.d, fit.alpha);
    // ssc reports the top-3 eigenvalue sum, an upper bound for Q(alpha)
    CHECK(fit.ssc >= at_hat - 1e-10);
    for (int i = 0; i <= 360; ++i) {
      double alpha = kTwoPi / 2.0 * i / 360;
      CHECK(small_circle_ssc_at(vecs, fit.b, fit.a, fit.d, alpha) <=
            at_hat + 1e-8);
    }
  }
}

TEST_CASE("alpha is reported in [0, pi/2]") {
  for (std::uint64_t s : {31, 32, 33, 34}) {
    auto fit = fit_small_circle(embed_all(random_angles(20, s), 3));
    CHECK(fit.alpha >= 0.0);
    CHECK(fit.alpha <= kTwoPi / 4.0 + 1e-12);
  }
}

TEST_CASE("degenerate moment matrices are flagged") {
  std::vector<Eigen::VectorXd> vecs;
  for (int i = 0; i < 5; ++i)
    vecs.push_back(Eigen::VectorXd::Unit(5, i));
  CHECK(fit_great_circle(vecs).degenerate);
  CHECK(fit_small_circle(vecs).degenerate);
  auto fine = fit_great_circle(embed_all(random_angles(30, 40), 2));
  CHECK(!fine.degenerate);
}

TEST_CASE("linear transform returns tan phi with the branch sign") {
  auto frame = random_frame(7, 2, 51);
  Eigen::VectorXd a = frame.col(0), d = frame.col(1);
  for (double phi : {0.3, 1.2, 2.0, 4.0, 5.9}) {
    Eigen::VectorXd e = a * std::cos(phi) + d * std::sin(phi);
    auto lp = to_linear(e, a, d);
    CHECK(lp.y == doctest::Approx(std::tan(phi)).epsilon(1e-9));
    CHECK(lp.branch == (std::cos(phi) > 0 ? 1 : -1));
  }
  // e exactly orthogonal to a: undefined y
  auto lp = to_linear(Eigen::VectorXd::Unit(7, 1), Eigen::VectorXd::Unit(7, 0),
                      Eigen::VectorXd::Unit(7, 1));
  CHECK(lp.branch == 0);
}

TEST_CASE("fit preconditions") {
  std::vector<Eigen::VectorXd> one = {embed(0.3, 2)};
  CHECK_THROWS_AS(fit_great_circle(one), std::invalid_argument);
  std::vector<Eigen::VectorXd> two = {embed(0.3, 2), embed(1.0, 2)};
  CHECK_THROWS_AS(fit_small_circle(two), std::invalid_argument);
  std::vector<Eigen::VectorXd> mixed = {embed(0.3, 2), embed(1.0, 3)};
  CHECK_THROWS_AS(moment_matrix(mixed), std::invalid_argument);
}
