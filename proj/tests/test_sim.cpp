#include "doctest.h"

#include <cmath>

#include "nntsreg/nnts.hpp"
#include "nntsreg/sim.hpp"

#include "json.hpp"

using namespace nntsreg;

TEST_CASE("design matrix layout and standardization") {
  auto x = make_design(200, 3);
  REQUIRE(x.rows() == 200);
  REQUIRE(x.cols() == 5);
  for (int i = 0; i < 200; ++i)
    CHECK(std::abs(x(i, 0)) == doctest::Approx(1.0));
  for (int j = 1; j < 5; ++j) {
    CHECK(std::abs(x.col(j).mean()) < 1e-12);
    double sd = std::sqrt(x.col(j).squaredNorm() / 199.0);
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("the design is a fixed table read from the top") {
  auto full = make_design(1000, 9);
  auto part = make_design(64, 9);
  // standardization is in-sample, so compare the unstandardized column 0
  for (int i = 0; i < 64; ++i) CHECK(part(i, 0) == full(i, 0));
  // but the same n must reproduce exactly
  auto again = make_design(64, 9);
  CHECK((again - part).norm() == 0.0);
  auto other = make_design(64, 10);
  CHECK((other - part).norm() > 0.0);
}

TEST_CASE("random generating circles are orthonormal frames") {
  auto g = random_circle(2, CircleKind::great, 5, 0.0);
  CHECK(g.kind == CircleKind::great);
  CHECK(g.a.size() == 5);
  CHECK(g.a.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.d.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(g.a.dot(g.d)) < 1e-10);

  auto s = random_circle(2, CircleKind::small, 5, 0.6);
  CHECK(s.kind == CircleKind::small);
  CHECK(s.alpha == doctest::Approx(0.6));
  CHECK(s.b.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(s.b.dot(s.a)) < 1e-10);
  CHECK(std::abs(s.b.dot(s.d)) < 1e-10);
}

TEST_CASE("simulated datasets are deterministic and drop null columns") {
  SimConfig cfg;
  cfg.m = 1;
  cfg.n = 50;
  cfg.beta = {0.5, std::nullopt, 0.0, std::nullopt, -0.25};
  auto d1 = simulate_dataset(cfg, 3);
  auto d2 = simulate_dataset(cfg, 3);
  auto d3 = simulate_dataset(cfg, 4);
  REQUIRE(d1.thetas.size() == 50);
  REQUIRE(d1.x.cols() == 3);
  REQUIRE(d1.columns == std::vector<int>{1, 3, 5});
  CHECK(d1.true_beta.size() == 3);
  CHECK(d1.true_beta[0] == 0.5);
  CHECK(d1.true_beta[2] == -0.25);
  CHECK(d1.thetas == d2.thetas);
  CHECK(d1.thetas != d3.thetas);
  for (double t : d1.thetas) {
    CHECK(t >= 0.0);
    CHECK(t < kTwoPi);
  }
}

TEST_CASE("study with known circle and null betas holds its size") {
  SimConfig cfg;
  cfg.m = 1;
  cfg.n = 100;
  cfg.replicates = 40;
  cfg.seed = 11;
  auto res = run_study(cfg);
  CHECK(res.replicates_done == 40);
  CHECK(res.replicates_failed == 0);
  REQUIRE(res.mean_abs_beta.size() == 5);
  REQUIRE(res.rejection_rate.size() == 5);
  for (double r : res.rejection_rate) {
    CHECK(r >= 0.0);
    CHECK(r <= 0.25);
  }
  for (double b : res.mean_abs_beta) CHECK(b < 0.15);
  CHECK(res.ar_range >= 0.8);
  CHECK(res.ar_kuiper >= 0.8);
  CHECK(res.ar_watson >= 0.8);
}

TEST_CASE("study detects a strong coefficient") {
  SimConfig cfg;
  cfg.m = 1;
  cfg.n = 200;
  cfg.replicates = 25;
  cfg.seed = 21;
  cfg.beta = {0.0, std::nullopt, std::nullopt, std::nullopt, 0.4};
  auto res = run_study(cfg);
  REQUIRE(res.rejection_rate.size() == 2);
  CHECK(res.rejection_rate[1] > 0.8);
  CHECK(res.mean_abs_beta[1] == doctest::Approx(0.4).epsilon(0.3));
}

TEST_CASE("small circle studies run and report alpha-driven data") {
  SimConfig cfg;
  cfg.m = 2;
  cfg.n = 100;
  cfg.circle_kind = CircleKind::small;
  cfg.replicates = 10;
  cfg.seed = 5;
  auto res = run_study(cfg);
  CHECK(res.replicates_done == 10);
  CHECK(res.ar_range > 0.5);
}

TEST_CASE("estimated eigenvectors with high m are refused") {
  SimConfig cfg;
  cfg.m = 6;
  cfg.known_eigenvectors = false;
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg.allow_high_m_estimated = true;
  cfg.n = 50;
  cfg.replicates = 2;
  auto res = run_study(cfg);  // allowed when overridden
  CHECK(res.replicates_done + res.replicates_failed == 2);
}

TEST_CASE("study results serialize to csv and json") {
  SimConfig cfg;
  cfg.m = 1;
  cfg.n = 60;
  cfg.replicates = 5;
  auto res = run_study(cfg);
  auto csv = res.to_csv();
  CHECK(csv.find("coef") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 5);
  auto parsed = nlohmann::json::parse(res.to_json());
  CHECK(parsed["replicates_done"] == 5);
  CHECK(parsed["mean_abs_beta"].size() == 5);
  CHECK(parsed["ar_range"].is_number());
}
