// Command line front end for the nntsreg shared library.
//
// Subcommands: fit, predict, validate, simulate, plot. Exit codes:
//   0 success
//   1 bad usage (unknown flags, malformed formula or arguments)
//   2 data problem (missing or unreadable input, bad cells, unknown column)
//   3 numerical failure (singular fit, bad report, ...)

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nntsreg.h"

namespace {

constexpr double kTau = 6.283185307179586;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCompute = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

void check_api(int status, const std::string& what) {
  if (status != NNTSREG_OK)
    fail(kExitCompute, what + ": " + nntsreg_last_error());
}

// ---- CSV ----

struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == name) return columns[j];
    fail(kExitData, "no column named '" + name + "'");
  }
  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitData, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail(kExitData, "'" + path + "' is empty");
  Table t;
  t.names = split_csv_line(line);
  t.columns.resize(t.names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != t.names.size())
      fail(kExitData, path + ":" + std::to_string(lineno) +
                          ": wrong number of fields");
    for (std::size_t j = 0; j < cells.size(); ++j) {
      try {
        std::size_t used = 0;
        double v = std::stod(cells[j], &used);
        while (used < cells[j].size() && std::isspace(cells[j][used])) ++used;
        if (used != cells[j].size()) throw std::invalid_argument(cells[j]);
        t.columns[j].push_back(v);
      } catch (const std::exception&) {
        fail(kExitData, path + ":" + std::to_string(lineno) +
                            ": '" + cells[j] + "' is not a number");
      }
    }
  }
  if (t.rows() == 0) fail(kExitData, "'" + path + "' has no data rows");
  return t;
}

// ---- formula mini-language ----
//
// formula := term ('+' term)*
// term    := factor ('*' factor)*
// factor  := column
//          | '(' column ('+'|'-') number ')'        shifted column
//          | 'I(' column cmp number ')'             indicator, cmp in
//                                                   { < <= > >= == }
// Each term contributes one design column named by its own text.

struct FormulaParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit FormulaParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(text[pos])) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(text[pos]) || text[pos] == '_' || text[pos] == '.'))
      ++pos;
    if (pos == start)
      fail(kExitUsage, "formula: expected a column name at position " +
                           std::to_string(start));
    return text.substr(start, pos - start);
  }
  double number() {
    skip_ws();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text.substr(pos), &used);
    } catch (const std::exception&) {
      fail(kExitUsage, "formula: expected a number at position " +
                           std::to_string(pos));
    }
    pos += used;
    return v;
  }
  std::string cmp_op() {
    skip_ws();
    for (const char* op : {"<=", ">=", "==", "<", ">"}) {
      std::size_t len = std::strlen(op);
      if (text.compare(pos, len, op) == 0) {
        pos += len;
        return op;
      }
    }
    fail(kExitUsage, "formula: expected a comparison at position " +
                         std::to_string(pos));
  }

  std::vector<double> factor(const Table& t) {
    skip_ws();
    if (text.compare(pos, 2, "I(") == 0) {
      pos += 2;
      std::string col = ident();
      std::string op = cmp_op();
      double threshold = number();
      if (!eat(')')) fail(kExitUsage, "formula: missing ')' in indicator");
      std::vector<double> v = t.column(col);
      for (double& x : v) {
        bool hit = op == "<="   ? x <= threshold
                   : op == ">=" ? x >= threshold
                   : op == "<"  ? x < threshold
                   : op == ">"  ? x > threshold
                                : x == threshold;
        x = hit ? 1.0 : 0.0;
      }
      return v;
    }
    if (eat('(')) {
      std::string col = ident();
      skip_ws();
      double sign = eat('+') ? 1.0 : eat('-') ? -1.0 : 0.0;
      if (sign == 0.0)
        fail(kExitUsage, "formula: expected '+' or '-' after '(" + col + "'");
      double shift = number();
      if (!eat(')')) fail(kExitUsage, "formula: missing ')' after shift");
      std::vector<double> v = t.column(col);
      for (double& x : v) x += sign * shift;
      return v;
    }
    return t.column(ident());
  }

  std::vector<double> term(const Table& t) {
    auto v = factor(t);
    while (eat('*')) {
      auto w = factor(t);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
    }
    return v;
  }
};

struct Design {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // column major
};

Design build_design(const Table& t, const std::string& formula) {
  Design d;
  std::size_t start = 0;
  int depth = 0;
  auto flush = [&](std::size_t end) {
    std::string part = formula.substr(start, end - start);
    std::size_t a = part.find_first_not_of(" \t");
    std::size_t b = part.find_last_not_of(" \t");
    if (a == std::string::npos) fail(kExitUsage, "formula: empty term");
    part = part.substr(a, b - a + 1);
    FormulaParser parser(part);
    d.columns.push_back(parser.term(t));
    parser.skip_ws();
    if (parser.pos != part.size())
      fail(kExitUsage, "formula: trailing input in term '" + part + "'");
    d.names.push_back(part);
  };
  for (std::size_t i = 0; i < formula.size(); ++i) {
    char c = formula[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '+' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(formula.size());
  return d;
}

// ---- shared helpers ----

std::vector<double> load_angles(const Table& t, const std::string& column,
                                const std::string& units) {
  std::vector<double> out = t.column(column);
  if (units == "deg")
    for (double& v : out) v *= kTau / 360.0;
  for (double& v : out) v = std::fmod(std::fmod(v, kTau) + kTau, kTau);
  return out;
}

// row-major copy for the C API
std::vector<double> flatten(const Design& d) {
  std::vector<double> x;
  if (d.columns.empty()) return x;
  std::size_t n = d.columns[0].size();
  x.resize(n * d.columns.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d.columns.size(); ++j)
      x[i * d.columns.size() + j] = d.columns[j][i];
  return x;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitData, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(kExitData, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(kExitData, "short write to '" + path + "'");
}

struct ReportHandle {
  nntsreg_report* ptr = nullptr;
  ~ReportHandle() { nntsreg_report_free(ptr); }
};

struct ParamsHandle {
  nntsreg_params* ptr = nullptr;
  ~ParamsHandle() { nntsreg_params_free(ptr); }
};

void load_report(const std::string& path, ReportHandle& rep) {
  check_api(nntsreg_report_from_json(read_file(path).c_str(), &rep.ptr),
            "loading report");
}

int row_for_m(const nntsreg_report* rep, int m) {
  int rows = nntsreg_report_num_rows(rep);
  for (int i = 0; i < rows; ++i) {
    nntsreg_row_stats s;
    check_api(nntsreg_report_row_stats(rep, i, &s), "reading report row");
    if (s.m == m) return i;
  }
  fail(kExitUsage, "report has no row with m = " + std::to_string(m));
}

// ---- svg ----

struct Svg {
  std::ostringstream body;
  int width, height;

  Svg(int w, int h) : width(w), height(h) {}

  void line(double x1, double y1, double x2, double y2, const char* color,
            double sw = 1.0) {
    body << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='"
         << y2 << "' stroke='" << color << "' stroke-width='" << sw << "'/>\n";
  }
  void circle(double x, double y, double r, const char* color) {
    body << "<circle cx='" << x << "' cy='" << y << "' r='" << r << "' fill='"
         << color << "'/>\n";
  }
  void text(double x, double y, const std::string& s) {
    body << "<text x='" << x << "' y='" << y
         << "' font-size='11' font-family='sans-serif'>" << s << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const char* color) {
    body << "<polyline fill='none' stroke='" << color
         << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : pts) body << x << ',' << y << ' ';
    body << "'/>\n";
  }
  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
        << "' height='" << height << "' viewBox='0 0 " << width << ' '
        << height << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

// ---- subcommand state ----

struct Options {
  std::string data_path, angle_column, formula, units = "rad";
  std::string report_path, out_path, config_path;
  std::string circle = "great", lambda_rule = "min", branch = "combined";
  std::string plot_kind = "density";
  std::string m_spec = "1..5";
  std::string x_values;
  int ar_order = 0;
  int m_select = 0;
  double alpha_penalty = -1.0;
  std::uint64_t seed = 1;
};

std::pair<int, int> parse_m_range(const std::string& spec) {
  auto dots = spec.find("..");
  try {
    if (dots == std::string::npos) {
      int m = std::stoi(spec);
      return {m, m};
    }
    return {std::stoi(spec.substr(0, dots)), std::stoi(spec.substr(dots + 2))};
  } catch (const std::exception&) {
    fail(kExitUsage, "bad --m value '" + spec + "' (use N or LO..HI)");
  }
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      fail(kExitUsage, "'" + cell + "' is not a number");
    }
  }
  return out;
}

void fill_fit_options(const Options& o, nntsreg_fit_options& fo) {
  nntsreg_fit_options_init(&fo);
  auto [lo, hi] = parse_m_range(o.m_spec);
  fo.m_min = lo;
  fo.m_max = hi;
  fo.circle = o.circle == "small" ? 1 : 0;
  fo.ar_order = o.ar_order;
  fo.enet_alpha = o.alpha_penalty;
  fo.lambda_rule = o.lambda_rule == "1se" ? 1 : 0;
  fo.seed = o.seed;
}

void run_fit_common(const Options& o, std::vector<double>& thetas,
                    Design& design, ReportHandle& rep) {
  Table table = read_csv(o.data_path);
  thetas = load_angles(table, o.angle_column, o.units);
  std::vector<const char*> names;
  std::vector<double> x;
  if (!o.formula.empty()) {
    design = build_design(table, o.formula);
    x = flatten(design);
    for (const auto& n : design.names) names.push_back(n.c_str());
  } else if (o.ar_order == 0) {
    fail(kExitUsage, "either --formula or --ar-order is required");
  }
  nntsreg_fit_options fo;
  fill_fit_options(o, fo);
  check_api(nntsreg_fit(thetas.data(), thetas.size(),
                        x.empty() ? nullptr : x.data(), design.names.size(),
                        names.empty() ? nullptr : names.data(), &fo, &rep.ptr),
            "fit");
}

int cmd_fit(const Options& o) {
  std::vector<double> thetas;
  Design design;
  ReportHandle rep;
  run_fit_common(o, thetas, design, rep);

  char* json_text = nullptr;
  check_api(nntsreg_report_to_json(rep.ptr, &json_text), "serializing report");
  std::string text = json_text;
  nntsreg_string_free(json_text);

  auto parsed = nlohmann::json::parse(text);
  std::printf("%3s %10s %8s %8s %14s %14s %14s\n", "m", "loglik", "r2cos",
              "r2", "range", "kuiper", "watson");
  for (const auto& row : parsed["rows"]) {
    std::printf("%3d %10.3f %8.3f %8.3f %14s %14s %14s\n",
                row["m"].get<int>(), row["loglik"].get<double>(),
                row["r2cos"].get<double>(), row["r2"].get<double>(),
                row["range_bracket"].get<std::string>().c_str(),
                row["kuiper_bracket"].get<std::string>().c_str(),
                row["watson_bracket"].get<std::string>().c_str());
  }
  std::printf("uniform loglik %.3f\n", parsed["uniform"]["loglik"].get<double>());

  if (!o.out_path.empty())
    write_file(o.out_path, text);
  else
    std::cout << text << '\n';
  return 0;
}

int cmd_predict(const Options& o) {
  ReportHandle rep;
  load_report(o.report_path, rep);
  int row = row_for_m(rep.ptr, o.m_select);
  int coefs = nntsreg_report_num_coefs(rep.ptr, row);
  std::vector<double> x;
  if (!o.x_values.empty()) x = parse_doubles(o.x_values);
  if (static_cast<int>(x.size()) != coefs)
    fail(kExitUsage, "--x needs " + std::to_string(coefs) + " values");
  int branch = o.branch == "pos" ? 1 : o.branch == "neg" ? -1 : 0;

  ParamsHandle fc;
  check_api(nntsreg_forecast(rep.ptr, row, x.data(), x.size(), branch, &fc.ptr),
            "forecast");
  double mu = 0.0;
  check_api(nntsreg_point_predict(fc.ptr, &mu), "point prediction");
  double re = 0.0, im = 0.0;
  check_api(nntsreg_first_trig_moment(fc.ptr, &re, &im), "trig moment");

  nlohmann::json out;
  out["m"] = o.m_select;
  out["branch"] = o.branch;
  out["mean_direction"] = o.units == "deg" ? mu * 360.0 / kTau : mu;
  out["units"] = o.units;
  out["resultant_length"] = std::hypot(re, im);
  out["circular_variance"] = 1.0 - std::hypot(re, im);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_validate(const Options& o) {
  ReportHandle rep;
  load_report(o.report_path, rep);
  int row = row_for_m(rep.ptr, o.m_select);

  Table table = read_csv(o.data_path);
  auto thetas = load_angles(table, o.angle_column, o.units);
  std::vector<double> x;
  std::size_t p = 0;
  if (!o.formula.empty()) {
    Design design = build_design(table, o.formula);
    p = design.names.size();
    x = flatten(design);
  }
  char* out = nullptr;
  check_api(nntsreg_validate(rep.ptr, row, thetas.data(),
                             x.empty() ? nullptr : x.data(), thetas.size(), p,
                             &out),
            "validate");
  std::string text = out;
  nntsreg_string_free(out);
  if (!o.out_path.empty())
    write_file(o.out_path, text);
  else
    std::cout << text << '\n';
  return 0;
}

int cmd_simulate(const Options& o) {
  std::string config =
      o.config_path == "-" ? std::string(std::istreambuf_iterator<char>(
                                             std::cin),
                                         {})
                           : read_file(o.config_path);
  char* out = nullptr;
  check_api(nntsreg_run_study(config.c_str(), &out), "simulation study");
  std::string text = out;
  nntsreg_string_free(out);
  if (!o.out_path.empty())
    write_file(o.out_path, text);
  else
    std::cout << text << '\n';
  return 0;
}

int cmd_plot(const Options& o) {
  ReportHandle rep;
  load_report(o.report_path, rep);
  int row = row_for_m(rep.ptr, o.m_select);
  const int w = 640, h = 400, margin = 44;
  Svg svg(w, h);

  if (o.plot_kind == "density") {
    int coefs = nntsreg_report_num_coefs(rep.ptr, row);
    std::vector<double> x(coefs, 0.0);
    if (!o.x_values.empty()) {
      x = parse_doubles(o.x_values);
      if (static_cast<int>(x.size()) != coefs)
        fail(kExitUsage, "--x needs " + std::to_string(coefs) + " values");
    }
    ParamsHandle fc;
    check_api(
        nntsreg_forecast(rep.ptr, row, x.data(), x.size(), 0, &fc.ptr),
        "forecast");
    const int npts = 256;
    std::vector<double> f(npts);
    double fmax = 0.0;
    for (int i = 0; i < npts; ++i) {
      check_api(nntsreg_density(fc.ptr, kTau * i / npts, &f[i]), "density");
      fmax = std::max(fmax, f[i]);
    }
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < npts; ++i)
      pts.emplace_back(margin + (w - 2.0 * margin) * i / (npts - 1),
                       h - margin - (h - 2.0 * margin) * f[i] / fmax);
    svg.polyline(pts, "#1f77b4");
    svg.line(margin, h - margin, w - margin, h - margin, "black");
    svg.line(margin, margin, margin, h - margin, "black");
    svg.text(w / 2 - 40, h - 10, "angle (0 to 2 pi)");
    svg.text(8, margin - 12, "forecast density");
  } else if (o.plot_kind == "acf") {
    Table table = read_csv(o.data_path);
    auto thetas = load_angles(table, o.angle_column, o.units);
    std::vector<double> y(thetas.size());
    std::vector<int> branch(thetas.size());
    check_api(nntsreg_report_transform(rep.ptr, row, thetas.data(),
                                       thetas.size(), y.data(), branch.data()),
              "transform");
    std::vector<double> kept;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (branch[i] != 0) kept.push_back(y[i]);
    int max_lag = std::min<int>(20, static_cast<int>(kept.size()) / 2 - 1);
    if (max_lag < 1) fail(kExitCompute, "series too short for an acf");
    std::vector<double> acf(max_lag + 1), pacf(max_lag);
    check_api(nntsreg_acf_pacf(kept.data(), kept.size(), max_lag, acf.data(),
                               pacf.data()),
              "acf");
    double band = 1.96 / std::sqrt(double(kept.size()));
    double mid = h / 2.0;
    double scale = (h - 2.0 * margin) / 2.0;
    svg.line(margin, mid, w - margin, mid, "black");
    svg.line(margin, mid - band * scale, w - margin, mid - band * scale,
             "#999999", 0.7);
    svg.line(margin, mid + band * scale, w - margin, mid + band * scale,
             "#999999", 0.7);
    for (int k = 0; k <= max_lag; ++k) {
      double px = margin + (w - 2.0 * margin) * k / max_lag;
      svg.line(px, mid, px, mid - acf[k] * scale, "#1f77b4", 2.0);
      if (k >= 1)
        svg.line(px + 3, mid, px + 3, mid - pacf[k - 1] * scale, "#d62728",
                 2.0);
    }
    svg.text(margin, margin - 12, "acf (blue) and pacf (red) of y");
  } else if (o.plot_kind == "scatter") {
    Table table = read_csv(o.data_path);
    auto thetas = load_angles(table, o.angle_column, o.units);
    std::vector<double> y(thetas.size());
    std::vector<int> branch(thetas.size());
    check_api(nntsreg_report_transform(rep.ptr, row, thetas.data(),
                                       thetas.size(), y.data(), branch.data()),
              "transform");
    double ymin = 0.0, ymax = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (branch[i] != 0) {
        ymin = std::min(ymin, y[i]);
        ymax = std::max(ymax, y[i]);
      }
    if (ymax == ymin) ymax = ymin + 1.0;
    svg.line(margin, h - margin, w - margin, h - margin, "black");
    svg.line(margin, margin, margin, h - margin, "black");
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (branch[i] == 0) continue;
      double px = margin + (w - 2.0 * margin) * double(i) / double(y.size());
      double py =
          h - margin - (h - 2.0 * margin) * (y[i] - ymin) / (ymax - ymin);
      svg.circle(px, py, 2.5, branch[i] > 0 ? "#1f77b4" : "#d62728");
    }
    svg.text(w / 2 - 60, h - 10, "observation index");
    svg.text(8, margin - 12, "transformed y (branch sign by color)");
  } else {
    fail(kExitUsage, "unknown plot kind '" + o.plot_kind + "'");
  }

  if (o.out_path.empty()) fail(kExitUsage, "plot requires --out");
  write_file(o.out_path, svg.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circular regression with trigonometric sum densities"};
  app.require_subcommand(1);
  Options o;

  auto add_data_flags = [&](CLI::App* cmd, bool need_angle) {
    cmd->add_option("--data", o.data_path, "input CSV")->required();
    auto* a = cmd->add_option("--angle", o.angle_column, "angle column name");
    if (need_angle) a->required();
    cmd->add_option("--units", o.units, "angle units: rad or deg")
        ->check(CLI::IsMember({"rad", "deg"}));
    cmd->add_option("--formula", o.formula, "design formula");
  };

  auto* fit = app.add_subcommand("fit", "fit models over a range of m");
  add_data_flags(fit, true);
  fit->add_option("--m", o.m_spec, "harmonic order, N or LO..HI");
  fit->add_option("--circle", o.circle, "great or small")
      ->check(CLI::IsMember({"great", "small"}));
  fit->add_option("--ar-order", o.ar_order, "autoregressive order");
  fit->add_option("--alpha-penalty", o.alpha_penalty,
                  "elastic net mixing (negative = plain least squares)");
  fit->add_option("--lambda", o.lambda_rule, "min or 1se")
      ->check(CLI::IsMember({"min", "1se"}));
  fit->add_option("--seed", o.seed, "random seed");
  fit->add_option("--out", o.out_path, "write the JSON report here");

  auto* predict = app.add_subcommand("predict", "forecast at a covariate row");
  predict->add_option("--report", o.report_path, "fitted report")->required();
  predict->add_option("--m", o.m_select, "model row to use")->required();
  predict->add_option("--x", o.x_values, "comma separated covariates");
  predict->add_option("--branch", o.branch, "combined, pos, or neg")
      ->check(CLI::IsMember({"combined", "pos", "neg"}));
  predict->add_option("--units", o.units, "output units")
      ->check(CLI::IsMember({"rad", "deg"}));

  auto* validate = app.add_subcommand("validate", "in-sample diagnostics");
  validate->add_option("--report", o.report_path, "fitted report")->required();
  validate->add_option("--m", o.m_select, "model row to use")->required();
  add_data_flags(validate, true);
  validate->add_option("--out", o.out_path, "write JSON here");

  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo study");
  simulate->add_option("--config", o.config_path, "JSON config ('-' = stdin)")
      ->required();
  simulate->add_option("--out", o.out_path, "write JSON here");

  auto* plot = app.add_subcommand("plot", "emit an SVG figure");
  plot->add_option("--report", o.report_path, "fitted report")->required();
  plot->add_option("--m", o.m_select, "model row to use")->required();
  plot->add_option("--kind", o.plot_kind, "density, acf, or scatter");
  plot->add_option("--x", o.x_values, "covariates for the density plot");
  plot->add_option("--data", o.data_path, "input CSV (acf and scatter)");
  plot->add_option("--angle", o.angle_column, "angle column name");
  plot->add_option("--units", o.units, "angle units")
      ->check(CLI::IsMember({"rad", "deg"}));
  plot->add_option("--out", o.out_path, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(o);
    if (predict->parsed()) return cmd_predict(o);
    if (validate->parsed()) return cmd_validate(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (plot->parsed()) return cmd_plot(o);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitUsage;
}
