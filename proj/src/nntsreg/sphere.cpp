#include "nntsreg/sphere.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nntsreg/nnts.hpp"

namespace nntsreg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed sign convention: first coordinate with magnitude above 1e-12 made
// positive.
void canonicalize_sign(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

struct EigenBasis {
  std::vector<Eigen::VectorXd> vecs;  // by decreasing eigenvalue
  std::vector<double> vals;
  bool degenerate = false;
};

// Top-k eigenpairs of the moment matrix, decreasing eigenvalue order. The
// degeneracy flag fires when the eigenvalue just inside the basis and the one
// just outside are closer than 1e-8*n.
EigenBasis top_eigenvectors(const Eigen::MatrixXd& e_hat, int k, double n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e_hat);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::Index dim = e_hat.rows();
  if (dim < k) throw std::invalid_argument("moment matrix smaller than basis");
  EigenBasis basis;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = solver.eigenvectors().col(dim - 1 - i);
    canonicalize_sign(v);
    basis.vecs.push_back(std::move(v));
    basis.vals.push_back(solver.eigenvalues()[dim - 1 - i]);
  }
  if (dim > k) {
    const double gap =
        solver.eigenvalues()[dim - k] - solver.eigenvalues()[dim - k - 1];
    basis.degenerate = gap < 1e-8 * n;
  }
  return basis;
}

// Projections of each vector onto the small-circle frame: g = e^T b and the
// in-plane norm h = sqrt((e^T a)^2 + (e^T d)^2).
void frame_projections(const std::vector<Eigen::VectorXd>& vectors,
                       const Eigen::VectorXd& b, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& d, std::vector<double>& g,
                       std::vector<double>& h) {
  g.resize(vectors.size());
  h.resize(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    g[k] = vectors[k].dot(b);
    h[k] = std::hypot(vectors[k].dot(a), vectors[k].dot(d));
  }
}

double ssc_alpha(const std::vector<double>& g, const std::vector<double>& h,
                 double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  double q = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g[k] * c + h[k] * s;
    q += t * t;
  }
  return q;
}

// Golden-section refinement of the maximizer of SSC(alpha) over [0, pi).
double maximize_alpha(const std::vector<double>& g,
                      const std::vector<double>& h) {
  const int grid = 720;
  double best = 0.0, best_q = ssc_alpha(g, h, 0.0);
  for (int i = 1; i < grid; ++i) {
    const double alpha = kPi * i / grid;
    const double q = ssc_alpha(g, h, alpha);
    if (q > best_q) {
      best_q = q;
      best = alpha;
    }
  }
  double lo = best - kPi / grid, hi = best + kPi / grid;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double q1 = ssc_alpha(g, h, x1), q2 = ssc_alpha(g, h, x2);
  while (hi - lo > 1e-12) {
    if (q1 < q2) {
      lo = x1;
      x1 = x2;
      q1 = q2;
      x2 = lo + gr * (hi - lo);
      q2 = ssc_alpha(g, h, x2);
    } else {
      hi = x2;
      x2 = x1;
      q2 = q1;
      x1 = hi - gr * (hi - lo);
      q1 = ssc_alpha(g, h, x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Eigen::VectorXd embed(double theta, int m) {
  if (m < 1) throw std::invalid_argument("embedding needs m >= 1");
  Eigen::VectorXd e(2 * m + 1);
  const double scale = 1.0 / std::sqrt(double(m + 1));
  e[0] = scale;
  for (int k = 1; k <= m; ++k) {
    e[k] = std::cos(k * theta) * scale;
    e[m + k] = -std::sin(k * theta) * scale;
  }
  return e;
}

Eigen::MatrixXd moment_matrix(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("no vectors");
  const Eigen::Index dim = vectors.front().size();
  Eigen::MatrixXd e_hat = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& v : vectors) {
    if (v.size() != dim)
      throw std::invalid_argument("inconsistent embedding dimension");
    e_hat.selfadjointView<Eigen::Lower>().rankUpdate(v);
  }
  return e_hat.selfadjointView<Eigen::Lower>();
}

GreatCircleFit fit_great_circle(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.size() < 2)
    throw std::invalid_argument("great-circle fit needs n >= 2");
  const double n = double(vectors.size());
  const auto basis = top_eigenvectors(moment_matrix(vectors), 2, n);
  GreatCircleFit fit;
  fit.m = static_cast<int>((vectors.front().size() - 1) / 2);
  fit.a = basis.vecs[0];
  fit.d = basis.vecs[1];
  fit.ssc = basis.vals[0] + basis.vals[1];
  fit.r2cos = fit.ssc / n;
  fit.degenerate = basis.degenerate;
  return fit;
}

SmallCircleFit fit_small_circle(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.size() < 3)
    throw std::invalid_argument("small-circle fit needs n >= 3");
  const double n = double(vectors.size());
  const auto basis = top_eigenvectors(moment_matrix(vectors), 3, n);
  SmallCircleFit fit;
  fit.m = static_cast<int>((vectors.front().size() - 1) / 2);
  fit.b = basis.vecs[0];
  fit.a = basis.vecs[1];
  fit.d = basis.vecs[2];
  fit.ssc = basis.vals[0] + basis.vals[1] + basis.vals[2];
  fit.r2cos = fit.ssc / n;
  fit.degenerate = basis.degenerate;

  std::vector<double> g, h;
  frame_projections(vectors, fit.b, fit.a, fit.d, g, h);

  // SSC(alpha) is an exact sinusoid in 2*alpha because h >= 0, so the
  // stationary condition tan(2*alpha) = 2*sum(gh) / sum(g^2 - h^2) is the
  // exact closed form. The quadrant-aware arctangent puts 2*alpha in
  // (-pi, pi].
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    num += g[k] * h[k];
    den += g[k] * g[k] - h[k] * h[k];
  }
  double alpha = 0.5 * std::atan2(2.0 * num, den);
  if (alpha < 0.0) alpha += kPi;
  // The arctangent identifies a stationary pair alpha, alpha + pi/2; keep the
  // one with the larger objective.
  {
    double other = alpha + kPi / 2.0;
    if (other >= kPi) other -= kPi;
    if (ssc_alpha(g, h, other) > ssc_alpha(g, h, alpha)) alpha = other;
  }
  const double alpha_search = maximize_alpha(g, h);
  double diff = std::abs(alpha - alpha_search);
  diff = std::min(diff, kPi - diff);
  if (diff > 1e-6) {
    fit.alpha_from_search = true;
    alpha = alpha_search;
  }
  // Canonical colatitude in [0, pi/2]; the axis sign absorbs the rest.
  if (alpha > kPi / 2.0) {
    alpha = kPi - alpha;
    fit.b = -fit.b;
  }
  fit.alpha = alpha;
  return fit;
}

double small_circle_ssc_at(const std::vector<Eigen::VectorXd>& vectors,
                           const Eigen::VectorXd& b, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& d, double alpha) {
  std::vector<double> g, h;
  frame_projections(vectors, b, a, d, g, h);
  return ssc_alpha(g, h, alpha);
}

LinearPoint to_linear(const Eigen::VectorXd& e, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& d) {
  LinearPoint p;
  const double ta = e.dot(a);
  const double td = e.dot(d);
  if (ta == 0.0) {
    p.branch = 0;
    p.y = td >= 0.0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
    return p;
  }
  p.branch = ta > 0.0 ? 1 : -1;
  p.y = td / ta;
  return p;
}

}  // namespace nntsreg
