#include "nntsreg.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include <json.hpp>

#include "nntsreg/forecast.hpp"
#include "nntsreg/gof.hpp"
#include "nntsreg/linmod.hpp"
#include "nntsreg/nnts.hpp"
#include "nntsreg/pipeline.hpp"
#include "nntsreg/sim.hpp"

using namespace nntsreg;

struct nntsreg_params {
  NntsParams impl;
};

struct nntsreg_report {
  FitReport impl;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    return fail(NNTSREG_EINVAL, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(NNTSREG_EPARSE, e.what());
  } catch (const std::exception& e) {
    return fail(NNTSREG_ENUMERIC, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int check_row(const nntsreg_report* r, int row) {
  if (!r || row < 0 || row >= static_cast<int>(r->impl.rows.size()))
    return fail(NNTSREG_EINVAL, "row index out of range");
  return static_cast<int>(NNTSREG_OK);
}

}  // namespace

extern "C" {

const char* nntsreg_strerror(int code) {
  switch (code) {
    case NNTSREG_OK: return "ok";
    case NNTSREG_EINVAL: return "invalid argument";
    case NNTSREG_EDOMAIN: return "result undefined for these inputs";
    case NNTSREG_ENUMERIC: return "numerical failure";
    case NNTSREG_EPARSE: return "parse error";
    default: return "unknown error";
  }
}

const char* nntsreg_last_error(void) { return g_last_error.c_str(); }

void nntsreg_string_free(char* s) { delete[] s; }

int nntsreg_params_create(int m, const double* re, const double* im,
                          nntsreg_params** out) {
  return guarded([&] {
    if (m < 0 || !re || !out)
      return fail(NNTSREG_EINVAL, "bad arguments to params_create");
    std::vector<std::complex<double>> c(m + 1);
    for (int k = 0; k <= m; ++k)
      c[k] = std::complex<double>(re[k], im ? im[k] : 0.0);
    *out = new nntsreg_params{NntsParams(std::move(c))};
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_params_uniform(nntsreg_params** out) {
  if (!out) return fail(NNTSREG_EINVAL, "null out pointer");
  *out = new nntsreg_params{NntsParams::uniform()};
  return static_cast<int>(NNTSREG_OK);
}

void nntsreg_params_free(nntsreg_params* p) { delete p; }

int nntsreg_params_m(const nntsreg_params* p) {
  return p ? p->impl.harmonics() : -1;
}

int nntsreg_params_coeffs(const nntsreg_params* p, double* re, double* im) {
  if (!p || !re || !im) return fail(NNTSREG_EINVAL, "null pointer");
  const auto& c = p->impl.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    re[k] = c[k].real();
    im[k] = c[k].imag();
  }
  return static_cast<int>(NNTSREG_OK);
}

int nntsreg_density(const nntsreg_params* p, double theta, double* out) {
  if (!p || !out) return fail(NNTSREG_EINVAL, "null pointer");
  *out = p->impl.density(wrap_angle(theta));
  return static_cast<int>(NNTSREG_OK);
}

int nntsreg_cdf(const nntsreg_params* p, double theta, double* out) {
  if (!p || !out) return fail(NNTSREG_EINVAL, "null pointer");
  *out = p->impl.cdf(theta);
  return static_cast<int>(NNTSREG_OK);
}

int nntsreg_sample(const nntsreg_params* p, size_t n, uint64_t seed,
                   double* out) {
  return guarded([&] {
    if (!p || !out) return fail(NNTSREG_EINVAL, "null pointer");
    const auto draws = sample(p->impl, n, seed);
    std::memcpy(out, draws.data(), n * sizeof(double));
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_loglik(const nntsreg_params* p, const double* thetas, size_t n,
                   double* out) {
  return guarded([&] {
    if (!p || !thetas || !out) return fail(NNTSREG_EINVAL, "null pointer");
    *out = log_likelihood(p->impl, {thetas, thetas + n}).value;
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_first_trig_moment(const nntsreg_params* p, double* re,
                              double* im) {
  if (!p || !re || !im) return fail(NNTSREG_EINVAL, "null pointer");
  const auto r = p->impl.first_trig_moment();
  *re = r.real();
  *im = r.imag();
  return static_cast<int>(NNTSREG_OK);
}

int nntsreg_point_predict(const nntsreg_params* p, double* out) {
  if (!p || !out) return fail(NNTSREG_EINVAL, "null pointer");
  DensityForecast f;
  f.params = p->impl;
  try {
    *out = point_predict(f);
  } catch (const std::exception& e) {
    return fail(NNTSREG_EDOMAIN, e.what());
  }
  return static_cast<int>(NNTSREG_OK);
}

#define NNTSREG_TEST_IMPL(name, fn)                                       \
  int name(const double* u, size_t n, double* stat, double* p) {          \
    return guarded([&] {                                                  \
      if (!u || !stat || !p) return fail(NNTSREG_EINVAL, "null pointer"); \
      const TestResult r = fn({u, u + n});                                \
      *stat = r.statistic;                                                \
      *p = r.p_value;                                                     \
      return static_cast<int>(NNTSREG_OK);                                                  \
    });                                                                   \
  }

NNTSREG_TEST_IMPL(nntsreg_kuiper_test, kuiper_test)
NNTSREG_TEST_IMPL(nntsreg_watson_test, watson_test)
NNTSREG_TEST_IMPL(nntsreg_range_test, range_test)
#undef NNTSREG_TEST_IMPL

int nntsreg_bh_adjust(const double* p, size_t n, double* out) {
  return guarded([&] {
    if (!p || !out) return fail(NNTSREG_EINVAL, "null pointer");
    const auto adj = bh_adjust({p, p + n});
    std::memcpy(out, adj.data(), n * sizeof(double));
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_acf_pacf(const double* y, size_t n, int max_lag, double* acf,
                     double* pacf) {
  return guarded([&] {
    if (!y || !acf || !pacf) return fail(NNTSREG_EINVAL, "null pointer");
    const Eigen::Map<const Eigen::VectorXd> yy(y, n);
    const AcfPacf r = acf_pacf(yy, max_lag);
    std::memcpy(acf, r.acf.data(), r.acf.size() * sizeof(double));
    std::memcpy(pacf, r.pacf.data(), r.pacf.size() * sizeof(double));
    return static_cast<int>(NNTSREG_OK);
  });
}

void nntsreg_fit_options_init(nntsreg_fit_options* opts) {
  if (!opts) return;
  opts->m_min = 1;
  opts->m_max = 5;
  opts->circle = 0;
  opts->ar_order = 0;
  opts->enet_alpha = -1.0;
  opts->lambda_rule = 0;
  opts->seed = 1;
}

int nntsreg_fit(const double* thetas, size_t n, const double* x, size_t p,
                const char* const* colnames, const nntsreg_fit_options* opts,
                nntsreg_report** out) {
  return guarded([&] {
    if (!thetas || !opts || !out)
      return fail(NNTSREG_EINVAL, "null pointer");
    FitOptions o;
    o.m_min = opts->m_min;
    o.m_max = opts->m_max;
    o.circle_kind = opts->circle == 0 ? CircleKind::great : CircleKind::small;
    o.ar_order = opts->ar_order;
    o.enet_alpha = opts->enet_alpha;
    o.lambda_rule = opts->lambda_rule == 0 ? LambdaRule::min : LambdaRule::one_se;
    o.seed = opts->seed;
    Eigen::MatrixXd design(o.ar_order > 0 ? 0 : n, p);
    if (x && o.ar_order == 0)
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < p; ++j) design(i, j) = x[i * p + j];
    std::vector<std::string> names;
    for (size_t j = 0; j < p; ++j)
      names.push_back(colnames && colnames[j] ? colnames[j]
                                              : "x" + std::to_string(j + 1));
    *out = new nntsreg_report{
        fit_dataset({thetas, thetas + n}, design, names, o)};
    return static_cast<int>(NNTSREG_OK);
  });
}

void nntsreg_report_free(nntsreg_report* r) { delete r; }

int nntsreg_report_to_json(const nntsreg_report* r, char** out) {
  return guarded([&] {
    if (!r || !out) return fail(NNTSREG_EINVAL, "null pointer");
    *out = dup_string(report_to_json(r->impl));
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_report_from_json(const char* json, nntsreg_report** out) {
  return guarded([&] {
    if (!json || !out) return fail(NNTSREG_EINVAL, "null pointer");
    *out = new nntsreg_report{report_from_json(json)};
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_report_num_rows(const nntsreg_report* r) {
  return r ? static_cast<int>(r->impl.rows.size()) : -1;
}

int nntsreg_report_num_coefs(const nntsreg_report* r, int row) {
  if (check_row(r, row) != NNTSREG_OK) return -1;
  return static_cast<int>(r->impl.rows[row].beta.size());
}

int nntsreg_report_row_stats(const nntsreg_report* r, int row,
                             nntsreg_row_stats* out) {
  if (const int rc = check_row(r, row); rc != NNTSREG_OK) return rc;
  if (!out) return fail(NNTSREG_EINVAL, "null pointer");
  const ModelRow& m = r->impl.rows[row];
  *out = nntsreg_row_stats{};
  out->m = m.m;
  out->alpha = m.alpha;
  out->ssc = m.ssc;
  out->r2cos = m.r2cos;
  out->r2 = m.r2;
  out->loglik = m.loglik;
  out->lambda = m.lambda;
  out->range_stat = m.range.statistic;
  out->range_p = m.range.p_value;
  out->kuiper_stat = m.kuiper.statistic;
  out->kuiper_p = m.kuiper.p_value;
  out->watson_stat = m.watson.statistic;
  out->watson_p = m.watson.p_value;
  out->selected = m.selected;
  out->excluded = m.excluded;
  out->degenerate = m.degenerate ? 1 : 0;
  out->uniform_loglik = r->impl.uniform_loglik;
  return static_cast<int>(NNTSREG_OK);
}

int nntsreg_report_row_coefs(const nntsreg_report* r, int row, double* beta,
                             double* se, double* pval) {
  if (const int rc = check_row(r, row); rc != NNTSREG_OK) return rc;
  const ModelRow& m = r->impl.rows[row];
  for (Eigen::Index j = 0; j < m.beta.size(); ++j) {
    if (beta) beta[j] = m.beta[j];
    if (se) se[j] = j < m.std_err.size() ? m.std_err[j] : 0.0;
    if (pval) pval[j] = j < m.p_values.size() ? m.p_values[j] : 0.0;
  }
  return static_cast<int>(NNTSREG_OK);
}

int nntsreg_report_transform(const nntsreg_report* r, int row,
                             const double* thetas, size_t n, double* y,
                             int* branch) {
  return guarded([&] {
    if (const int rc = check_row(r, row); rc != NNTSREG_OK) return rc;
    if (!thetas || !y || !branch) return fail(NNTSREG_EINVAL, "null pointer");
    const ModelRow& m = r->impl.rows[row];
    for (size_t k = 0; k < n; ++k) {
      const LinearPoint p =
          to_linear(embed(wrap_angle(thetas[k]), m.m), m.a, m.d);
      y[k] = p.y;
      branch[k] = p.branch;
    }
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_forecast(const nntsreg_report* r, int row, const double* x,
                     size_t p, int branch, nntsreg_params** out) {
  return guarded([&] {
    if (const int rc = check_row(r, row); rc != NNTSREG_OK) return rc;
    if (!x || !out) return fail(NNTSREG_EINVAL, "null pointer");
    const ModelRow& m = r->impl.rows[row];
    if (static_cast<Eigen::Index>(p) != m.beta.size())
      return fail(NNTSREG_EINVAL, "covariate length mismatch");
    const Eigen::Map<const Eigen::VectorXd> xv(x, p);
    const DensityForecast f = forecast_at(m, r->impl.options, xv, branch);
    *out = new nntsreg_params{f.params};
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_validate(const nntsreg_report* r, int row, const double* thetas,
                     const double* x, size_t n, size_t p, char** out) {
  return guarded([&] {
    if (const int rc = check_row(r, row); rc != NNTSREG_OK) return rc;
    if (!thetas || !out) return fail(NNTSREG_EINVAL, "null pointer");
    const ModelRow& m = r->impl.rows[row];
    const FitOptions& o = r->impl.options;
    if (o.ar_order == 0 &&
        (!x || static_cast<Eigen::Index>(p) != m.beta.size()))
      return fail(NNTSREG_EINVAL, "covariate length mismatch");
    Eigen::MatrixXd design(o.ar_order > 0 ? 0 : n, o.ar_order > 0 ? 0 : p);
    if (o.ar_order == 0)
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < p; ++j) design(i, j) = x[i * p + j];
    std::vector<double> tt(thetas, thetas + n);
    for (double& t : tt) t = wrap_angle(t);
    const auto forecasts = row_forecasts(m, o, tt, design);
    const auto pit = pit_series(forecasts, tt);
    std::vector<NntsParams> per_obs;
    per_obs.reserve(forecasts.size());
    for (const auto& f : forecasts) per_obs.push_back(f.params);
    const TestResult range = range_test(pit), kuiper = kuiper_test(pit),
                     watson = watson_test(pit);
    nlohmann::json j;
    j["pit"] = pit;
    j["loglik"] = log_likelihood(per_obs, tt).value;
    j["range"] = {range.statistic, range.p_value};
    j["kuiper"] = {kuiper.statistic, kuiper.p_value};
    j["watson"] = {watson.statistic, watson.p_value};
    *out = dup_string(j.dump(2));
    return static_cast<int>(NNTSREG_OK);
  });
}

int nntsreg_run_study(const char* config, char** out) {
  return guarded([&] {
    if (!config || !out) return fail(NNTSREG_EINVAL, "null pointer");
    const nlohmann::json j = nlohmann::json::parse(config);
    SimConfig cfg;
    cfg.m = j.value("m", 1);
    cfg.n = j.value("n", 100);
    cfg.circle_kind = j.value("circle", std::string("great")) == "small"
                          ? CircleKind::small
                          : CircleKind::great;
    if (j.contains("beta")) {
      cfg.beta.clear();
      for (const auto& b : j.at("beta"))
        cfg.beta.push_back(b.is_null()
                               ? std::optional<double>{}
                               : std::optional<double>{b.get<double>()});
    }
    cfg.replicates = j.value("replicates", 100);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.known_eigenvectors =
        j.value("eigenvectors", std::string("known")) == "known";
    cfg.small_alpha = j.value("small_alpha", cfg.small_alpha);
    cfg.allow_high_m_estimated = j.value("allow_high_m_estimated", false);
    const StudyResult res = run_study(cfg);
    *out = dup_string(res.to_json());
    return static_cast<int>(NNTSREG_OK);
  });
}

}  // extern "C"
