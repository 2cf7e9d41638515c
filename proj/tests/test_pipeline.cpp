#include "doctest.h"

#include <cmath>
#include <random>

#include "nntsreg/pipeline.hpp"

#include "json.hpp"

using namespace nntsreg;

namespace {

SimDataset great_dataset(int m, int n, std::uint64_t seed) {
  SimConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.beta = {0.6, std::nullopt, std::nullopt, std::nullopt, -0.4};
  cfg.seed = seed;
  return simulate_dataset(cfg, seed);
}

}  // namespace

TEST_CASE("fit_dataset produces one row per harmonic order") {
  auto ds = great_dataset(2, 120, 3);
  FitOptions opt;
  opt.m_min = 1;
  opt.m_max = 4;
  auto rep = fit_dataset(ds.thetas, ds.x, {"x1", "x5"}, opt);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.n == 120);
  CHECK(rep.uniform_loglik ==
        doctest::Approx(-120.0 * std::log(kTwoPi)).epsilon(1e-12));
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    CHECK(row.m == int(i) + 1);
    CHECK(row.ssc <= 120.0 + 1e-9);
    CHECK(row.r2cos == doctest::Approx(row.ssc / 120.0));
    CHECK(row.beta.size() == 2);
    REQUIRE(row.pit.size() == 120);
    for (double u : row.pit) {
      CHECK(u >= 0.0);
      CHECK(u <= 1.0);
    }
    CHECK(std::isfinite(row.loglik));
  }
}

TEST_CASE("known generating circle recovers the coefficients") {
  auto ds = great_dataset(2, 400, 7);
  FitOptions opt;
  opt.m_min = 2;
  opt.m_max = 2;
  auto rep = fit_dataset(ds.thetas, ds.x, {"x1", "x5"}, opt, &ds.circle);
  REQUIRE(rep.rows.size() == 1);
  const auto& row = rep.rows[0];
  CHECK(row.beta[0] == doctest::Approx(0.6).epsilon(0.25));
  CHECK(row.beta[1] == doctest::Approx(-0.4).epsilon(0.35));
  CHECK(row.p_values[0] < 0.01);
  CHECK(row.loglik > rep.uniform_loglik);
  // the model PIT should look uniform under the truth
  CHECK(row.kuiper.p_value > 0.01);
}

TEST_CASE("autoregressive path fits the transformed series") {
  // angles driven by an AR(1) rotation on a fixed great circle
  auto circle = random_circle(2, CircleKind::great, 9, 0.0);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> gauss(0.0, 0.4);
  int n = 300;
  std::vector<double> thetas(n);
  double y = 0.0;
  for (int t = 0; t < n; ++t) {
    y = 0.55 * y + gauss(rng);
    double phi = std::atan(y);
    Eigen::VectorXd c =
        circle.a * std::cos(phi) + circle.d * std::sin(phi);
    thetas[t] = sample(NntsParams::from_real_vector(c), 1, 1000 + t)[0];
  }
  FitOptions opt;
  opt.m_min = 2;
  opt.m_max = 2;
  opt.ar_order = 1;
  auto rep = fit_dataset(thetas, Eigen::MatrixXd(), {}, opt, &circle);
  const auto& row = rep.rows[0];
  REQUIRE(row.beta.size() == 1);
  CHECK(row.beta[0] == doctest::Approx(0.55).epsilon(0.3));
  CHECK(row.loglik > rep.uniform_loglik);
}

TEST_CASE("elastic net path reports lambda and the active set") {
  auto ds = great_dataset(1, 200, 15);
  // pad with pure-noise columns so the lasso has something to drop
  std::mt19937_64 rng(16);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(200, 4);
  x.leftCols(2) = ds.x;
  for (int i = 0; i < 200; ++i)
    for (int j = 2; j < 4; ++j) x(i, j) = gauss(rng);

  FitOptions opt;
  opt.m_min = 1;
  opt.m_max = 1;
  opt.enet_alpha = 1.0;
  opt.lambda_rule = LambdaRule::one_se;
  auto rep =
      fit_dataset(ds.thetas, x, {"x1", "x5", "z1", "z2"}, opt, &ds.circle);
  const auto& row = rep.rows[0];
  CHECK(row.lambda > 0.0);
  CHECK(row.selected >= 1);
  CHECK(row.selected <= 4);
  CHECK(row.std_err.size() == 0);

  opt.lambda_rule = LambdaRule::min;
  auto rep2 =
      fit_dataset(ds.thetas, x, {"x1", "x5", "z1", "z2"}, opt, &ds.circle);
  CHECK(rep2.rows[0].lambda <= row.lambda + 1e-12);
}

TEST_CASE("report json round trip is exact") {
  auto ds = great_dataset(2, 80, 21);
  FitOptions opt;
  opt.m_max = 3;
  opt.circle_kind = CircleKind::small;
  auto rep = fit_dataset(ds.thetas, ds.x, {"x1", "x5"}, opt);
  auto text = report_to_json(rep);
  auto back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(back.rows.size() == rep.rows.size());
  CHECK(back.rows[1].loglik == rep.rows[1].loglik);
  CHECK(back.rows[1].pit == rep.rows[1].pit);
  CHECK((back.rows[2].a - rep.rows[2].a).norm() == 0.0);
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS(report_from_json("not json"));
  CHECK_THROWS(report_from_json("{\"schema_version\": 99}"));
  CHECK_THROWS(report_from_json("{}"));
}

TEST_CASE("out-of-sample forecasts honour the branch argument") {
  auto ds = great_dataset(2, 150, 31);
  FitOptions opt;
  opt.m_min = 2;
  opt.m_max = 2;
  opt.circle_kind = CircleKind::small;
  auto rep = fit_dataset(ds.thetas, ds.x, {"x1", "x5"}, opt);
  const auto& row = rep.rows[0];
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.5;
  auto comb = forecast_at(row, opt, x0);
  CHECK(comb.branch == Branch::combined);
  auto pos = forecast_at(row, opt, x0, +1);
  auto neg = forecast_at(row, opt, x0, -1);
  CHECK(pos.branch == Branch::positive);
  CHECK(neg.branch == Branch::negative);
  CHECK(wrap_angle(neg.phi_hat - pos.phi_hat) ==
        doctest::Approx(kTwoPi / 2).epsilon(1e-9));

  FitOptions gopt;
  gopt.m_min = 2;
  gopt.m_max = 2;
  auto grep = fit_dataset(ds.thetas, ds.x, {"x1", "x5"}, gopt);
  auto gf = forecast_at(grep.rows[0], gopt, x0);
  CHECK(gf.branch == Branch::great);
  CHECK(gf.covariates.size() == 2);
}

TEST_CASE("p value brackets follow the reporting convention") {
  CHECK(bracket_p(0.004, false) == "<0.01");
  CHECK(bracket_p(0.02, false) == "(0.01,0.025)");
  CHECK(bracket_p(0.03, true) == "(0.025,0.05)");
  CHECK(bracket_p(0.07, false) == "(0.05,0.10)");
  CHECK(bracket_p(0.12, false) == "(0.10,0.15)");
  CHECK(bracket_p(0.5, false) == ">0.15");
  CHECK(bracket_p(0.12, true) == ">0.10");
  CHECK(bracket_p(0.5, true) == ">0.10");
}

TEST_CASE("input validation") {
  FitOptions opt;
  CHECK_THROWS_AS(fit_dataset({}, Eigen::MatrixXd(), {}, opt),
                  std::invalid_argument);
  std::vector<double> th = {0.1, 0.5, 1.0};
  Eigen::MatrixXd x(2, 1);
  CHECK_THROWS_AS(fit_dataset(th, x, {"a"}, opt), std::invalid_argument);
}
