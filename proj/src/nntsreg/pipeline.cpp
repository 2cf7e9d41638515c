#include "nntsreg/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace nntsreg {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

struct Transformed {
  Eigen::VectorXd y;        // all observations, may contain inf
  std::vector<int> branch;  // sign of e^T a, 0 when undefined
  std::vector<Eigen::Index> keep;
};

Transformed transform_all(const std::vector<Eigen::VectorXd>& vecs,
                          const Eigen::VectorXd& a, const Eigen::VectorXd& d) {
  Transformed t;
  t.y.resize(vecs.size());
  t.branch.resize(vecs.size());
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    const LinearPoint lp = to_linear(vecs[k], a, d);
    t.y[k] = lp.y;
    t.branch[k] = lp.branch;
    if (lp.branch != 0) t.keep.push_back(static_cast<Eigen::Index>(k));
  }
  return t;
}

DensityForecast make_forecast(const ModelRow& row, const FitOptions& options,
                              double linear_pred, int branch_sign) {
  if (options.circle_kind == CircleKind::great) {
    GreatCircleFit gc;
    gc.a = row.a;
    gc.d = row.d;
    return forecast_great(gc, std::atan(linear_pred));
  }
  SmallCircleFit sc;
  sc.b = row.b;
  sc.a = row.a;
  sc.d = row.d;
  sc.alpha = row.alpha;
  return forecast_small(sc, linear_pred, branch_sign);
}

}  // namespace

FitReport fit_dataset(const std::vector<double>& thetas_in,
                      const Eigen::MatrixXd& x,
                      const std::vector<std::string>& columns,
                      const FitOptions& options,
                      const GeneratingCircle* known_circle) {
  if (thetas_in.empty()) throw std::invalid_argument("no observations");
  if (options.ar_order == 0 &&
      x.rows() != static_cast<Eigen::Index>(thetas_in.size()))
    throw std::invalid_argument("design/observation length mismatch");

  std::vector<double> thetas(thetas_in.size());
  for (std::size_t k = 0; k < thetas.size(); ++k)
    thetas[k] = wrap_angle(thetas_in[k]);

  FitReport report;
  report.options = options;
  report.columns = columns;
  report.n = static_cast<int>(thetas.size());

  // Uniform baseline: loglik = -n log(2 pi), PIT = theta / (2 pi).
  report.uniform_loglik = -double(report.n) * std::log(kTwoPi);
  {
    std::vector<double> u(thetas.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = thetas[k] / kTwoPi;
    report.uniform_range = range_test(u);
    report.uniform_kuiper = kuiper_test(u);
    report.uniform_watson = watson_test(u);
  }

  for (int m = std::max(options.m_min, 1); m <= options.m_max; ++m) {
    ModelRow row;
    row.m = m;
    std::vector<Eigen::VectorXd> vecs;
    vecs.reserve(thetas.size());
    for (double t : thetas) vecs.push_back(embed(t, m));

    const double n = double(vecs.size());
    if (known_circle) {
      row.a = known_circle->a;
      row.d = known_circle->d;
      if (options.circle_kind == CircleKind::small) {
        row.b = known_circle->b;
        row.alpha = known_circle->alpha;
      }
      // Diagnostics still refer to the supplied frame.
      const Eigen::MatrixXd e_hat = moment_matrix(vecs);
      row.ssc = row.a.dot(e_hat * row.a) + row.d.dot(e_hat * row.d);
      if (options.circle_kind == CircleKind::small)
        row.ssc += row.b.dot(e_hat * row.b);
      row.r2cos = row.ssc / n;
    } else if (options.circle_kind == CircleKind::great) {
      const GreatCircleFit fit = fit_great_circle(vecs);
      row.a = fit.a;
      row.d = fit.d;
      row.ssc = fit.ssc;
      row.r2cos = fit.r2cos;
      row.degenerate = fit.degenerate;
    } else {
      const SmallCircleFit fit = fit_small_circle(vecs);
      row.b = fit.b;
      row.a = fit.a;
      row.d = fit.d;
      row.alpha = fit.alpha;
      row.ssc = fit.ssc;
      row.r2cos = fit.r2cos;
      row.degenerate = fit.degenerate;
      row.alpha_from_search = fit.alpha_from_search;
    }

    const Transformed t = transform_all(vecs, row.a, row.d);
    row.excluded = static_cast<int>(vecs.size() - t.keep.size());

    if (options.ar_order > 0) {
      Eigen::VectorXd series(t.keep.size());
      for (std::size_t i = 0; i < t.keep.size(); ++i)
        series[i] = t.y[t.keep[i]];
      const ArFit ar = fit_ar(series, options.ar_order);
      row.beta = ar.coef;
      row.std_err = ar.std_err;
      row.p_values = ar.p_values;
      row.r2 = ar.r2;
    } else {
      Eigen::MatrixXd xk(t.keep.size(), x.cols());
      Eigen::VectorXd yk(t.keep.size());
      for (std::size_t i = 0; i < t.keep.size(); ++i) {
        xk.row(i) = x.row(t.keep[i]);
        yk[i] = t.y[t.keep[i]];
      }
      if (options.enet_alpha >= 0.0) {
        const ElasticNetPath path =
            elastic_net(xk, yk, options.enet_alpha, {}, 10, options.seed);
        const bool use_min = options.lambda_rule == LambdaRule::min;
        row.beta = use_min ? path.coef_min : path.coef_1se;
        row.lambda = use_min ? path.lambda_min : path.lambda_1se;
        for (Eigen::Index j = 0; j < row.beta.size(); ++j)
          if (row.beta[j] != 0.0) ++row.selected;
        const Eigen::VectorXd fitted = xk * row.beta;
        double r2 = 0.0;
        const double my = yk.mean(), mf = fitted.mean();
        const Eigen::VectorXd cy = yk.array() - my, cf = fitted.array() - mf;
        if (cy.squaredNorm() > 0.0 && cf.squaredNorm() > 0.0) {
          const double cov = cy.dot(cf);
          r2 = cov * cov / (cy.squaredNorm() * cf.squaredNorm());
        }
        row.r2 = r2;
      } else {
        const LinearFit fit = ols_no_intercept(xk, yk);
        row.beta = fit.beta;
        row.std_err = fit.std_err;
        row.p_values = fit.p_values;
        row.r2 = fit.r2;
      }
    }

    const auto forecasts = row_forecasts(row, options, thetas, x);
    row.pit = pit_series(forecasts, thetas);
    row.range = range_test(row.pit);
    row.kuiper = kuiper_test(row.pit);
    row.watson = watson_test(row.pit);
    std::vector<NntsParams> per_obs;
    per_obs.reserve(forecasts.size());
    for (const auto& f : forecasts) per_obs.push_back(f.params);
    row.loglik = log_likelihood(per_obs, thetas).value;

    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<DensityForecast> row_forecasts(const ModelRow& row,
                                           const FitOptions& options,
                                           const std::vector<double>& thetas,
                                           const Eigen::MatrixXd& x) {
  std::vector<Eigen::VectorXd> vecs;
  vecs.reserve(thetas.size());
  for (double t : thetas) vecs.push_back(embed(wrap_angle(t), row.m));
  const Transformed t = transform_all(vecs, row.a, row.d);

  std::vector<DensityForecast> out;
  out.reserve(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    double lp = 0.0;
    if (options.ar_order > 0) {
      // Lagged transformed values; leading observations fall back to the
      // central (phi = 0) forecast.
      if (static_cast<int>(k) >= options.ar_order) {
        lp = 0.0;
        for (int j = 0; j < options.ar_order; ++j)
          lp += row.beta[j] * t.y[k - 1 - j];
        if (!std::isfinite(lp)) lp = 0.0;
      }
    } else {
      lp = x.row(static_cast<Eigen::Index>(k)).dot(row.beta);
    }
    const int branch = t.branch[k] == 0 ? 1 : t.branch[k];
    out.push_back(make_forecast(row, options, lp, branch));
  }
  return out;
}

DensityForecast forecast_at(const ModelRow& row, const FitOptions& options,
                            const Eigen::VectorXd& x, int branch) {
  const double lp = x.dot(row.beta);
  if (options.circle_kind == CircleKind::great) {
    GreatCircleFit gc;
    gc.a = row.a;
    gc.d = row.d;
    auto f = forecast_great(gc, std::atan(lp));
    f.covariates = x;
    return f;
  }
  if (branch != 0) return make_forecast(row, options, lp, branch);
  const auto pos = make_forecast(row, options, lp, 1);
  const auto neg = make_forecast(row, options, lp, -1);
  auto f = combine_branches(pos, neg);
  f.covariates = x;
  return f;
}

std::string report_to_json(const FitReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["options"] = {
      {"m_min", report.options.m_min},
      {"m_max", report.options.m_max},
      {"circle", report.options.circle_kind == CircleKind::great ? "great"
                                                                 : "small"},
      {"ar_order", report.options.ar_order},
      {"enet_alpha", report.options.enet_alpha},
      {"lambda_rule",
       report.options.lambda_rule == LambdaRule::min ? "min" : "1se"},
      {"seed", report.options.seed},
  };
  j["columns"] = report.columns;
  j["n"] = report.n;
  j["uniform"] = {
      {"loglik", report.uniform_loglik},
      {"range", {report.uniform_range.statistic, report.uniform_range.p_value}},
      {"kuiper",
       {report.uniform_kuiper.statistic, report.uniform_kuiper.p_value}},
      {"watson",
       {report.uniform_watson.statistic, report.uniform_watson.p_value}},
  };
  j["rows"] = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["m"] = row.m;
    r["alpha"] = row.alpha;
    r["beta"] = vec_to_json(row.beta);
    r["std_err"] = vec_to_json(row.std_err);
    r["p_values"] = vec_to_json(row.p_values);
    r["selected"] = row.selected;
    r["lambda"] = row.lambda;
    r["r2"] = row.r2;
    r["r2cos"] = row.r2cos;
    r["ssc"] = row.ssc;
    r["loglik"] = row.loglik;
    r["range"] = {row.range.statistic, row.range.p_value};
    r["range_bracket"] = bracket_p(row.range.p_value, false);
    r["kuiper"] = {row.kuiper.statistic, row.kuiper.p_value};
    r["kuiper_bracket"] = bracket_p(row.kuiper.p_value, false);
    r["watson"] = {row.watson.statistic, row.watson.p_value};
    r["watson_bracket"] = bracket_p(row.watson.p_value, true);
    r["pit"] = row.pit;
    r["a"] = vec_to_json(row.a);
    r["d"] = vec_to_json(row.d);
    r["b"] = vec_to_json(row.b);
    r["excluded"] = row.excluded;
    r["degenerate"] = row.degenerate;
    r["alpha_from_search"] = row.alpha_from_search;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2);
}

FitReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  FitReport report;
  report.schema_version = j.at("schema_version").get<int>();
  if (report.schema_version != 1)
    throw std::runtime_error("unsupported report schema version");
  const json& o = j.at("options");
  report.options.m_min = o.at("m_min").get<int>();
  report.options.m_max = o.at("m_max").get<int>();
  report.options.circle_kind = o.at("circle").get<std::string>() == "great"
                                   ? CircleKind::great
                                   : CircleKind::small;
  report.options.ar_order = o.at("ar_order").get<int>();
  report.options.enet_alpha = o.at("enet_alpha").get<double>();
  report.options.lambda_rule = o.at("lambda_rule").get<std::string>() == "min"
                                   ? LambdaRule::min
                                   : LambdaRule::one_se;
  report.options.seed = o.at("seed").get<std::uint64_t>();
  report.columns = j.at("columns").get<std::vector<std::string>>();
  report.n = j.at("n").get<int>();
  report.uniform_loglik = j.at("uniform").at("loglik").get<double>();
  auto read_test = [](const json& a) {
    TestResult t;
    t.statistic = a[0].get<double>();
    t.p_value = a[1].get<double>();
    return t;
  };
  report.uniform_range = read_test(j.at("uniform").at("range"));
  report.uniform_kuiper = read_test(j.at("uniform").at("kuiper"));
  report.uniform_watson = read_test(j.at("uniform").at("watson"));
  for (const auto& r : j.at("rows")) {
    ModelRow row;
    row.m = r.at("m").get<int>();
    row.alpha = r.at("alpha").get<double>();
    row.beta = vec_from_json(r.at("beta"));
    row.std_err = vec_from_json(r.at("std_err"));
    row.p_values = vec_from_json(r.at("p_values"));
    row.selected = r.at("selected").get<int>();
    row.lambda = r.at("lambda").get<double>();
    row.r2 = r.at("r2").get<double>();
    row.r2cos = r.at("r2cos").get<double>();
    row.ssc = r.at("ssc").get<double>();
    row.loglik = r.at("loglik").get<double>();
    row.range = read_test(r.at("range"));
    row.kuiper = read_test(r.at("kuiper"));
    row.watson = read_test(r.at("watson"));
    row.pit = r.at("pit").get<std::vector<double>>();
    row.a = vec_from_json(r.at("a"));
    row.d = vec_from_json(r.at("d"));
    row.b = vec_from_json(r.at("b"));
    row.excluded = r.at("excluded").get<int>();
    row.degenerate = r.at("degenerate").get<bool>();
    row.alpha_from_search = r.at("alpha_from_search").get<bool>();
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string bracket_p(double p, bool watson) {
  if (p < 0.01) return "<0.01";
  if (p < 0.025) return "(0.01,0.025)";
  if (p < 0.05) return "(0.025,0.05)";
  if (p < 0.10) return "(0.05,0.10)";
  if (watson) return ">0.10";
  if (p < 0.15) return "(0.10,0.15)";
  return ">0.15";
}

}  // namespace nntsreg
