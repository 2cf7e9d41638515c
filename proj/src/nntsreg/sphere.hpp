#ifndef NNTSREG_SPHERE_HPP
#define NNTSREG_SPHERE_HPP

#include <vector>

#include <Eigen/Dense>

namespace nntsreg {

/// Unit-norm trigonometric moment vector of an angle:
/// (1, cos t, ..., cos Mt, -sin t, ..., -sin Mt) / sqrt(M+1).
Eigen::VectorXd embed(double theta, int m);

/// E = sum_k e_k e_k^T over a consistent set of embedded vectors.
/// Symmetric PSD with trace n.
Eigen::MatrixXd moment_matrix(const std::vector<Eigen::VectorXd>& vectors);

struct GreatCircleFit {
  int m = 0;
  Eigen::VectorXd a;  ///< first eigenvector of the moment matrix
  Eigen::VectorXd d;  ///< second eigenvector
  double ssc = 0.0;
  double r2cos = 0.0;
  /// Set when the trailing eigenvalue gap is below 1e-8*n and the fitted
  /// plane is ill-determined.
  bool degenerate = false;
};

struct SmallCircleFit {
  int m = 0;
  Eigen::VectorXd b;  ///< axis vector (first eigenvector)
  Eigen::VectorXd a;
  Eigen::VectorXd d;
  double alpha = 0.0;  ///< colatitude, canonical range [0, pi/2]
  double ssc = 0.0;
  double r2cos = 0.0;
  bool degenerate = false;
  /// Set when the closed-form alpha disagreed with the 1-D SSC(alpha)
  /// maximizer by more than 1e-6 and the maximizer value was used.
  bool alpha_from_search = false;
};

/// Best-fit geodesic: a and d span the top-2 eigenspace of the moment
/// matrix; ssc is the maximized sum of squared cosines, r2cos = ssc/n.
GreatCircleFit fit_great_circle(const std::vector<Eigen::VectorXd>& vectors);

/// Best-fit small circle: b, a, d are the top-3 eigenvectors; alpha is the
/// colatitude maximizing the sum of squared cosines to the circle itself.
SmallCircleFit fit_small_circle(const std::vector<Eigen::VectorXd>& vectors);

/// Sum of squared cosines to the small circle at colatitude alpha, given the
/// fitted (b, a, d) frame. Used as the independent check on the closed-form
/// alpha estimate.
double small_circle_ssc_at(const std::vector<Eigen::VectorXd>& vectors,
                           const Eigen::VectorXd& b, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& d, double alpha);

struct LinearPoint {
  double y = 0.0;  ///< tan of the in-plane rotation angle
  int branch = 0;  ///< sign of e^T a; 0 flags an undefined (infinite) y
};

/// Transformed linear variable y = (e^T d) / (e^T a) with the branch sign
/// retained for the small-circle forecast rule.
LinearPoint to_linear(const Eigen::VectorXd& e, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& d);

}  // namespace nntsreg

#endif
