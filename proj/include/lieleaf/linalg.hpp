#pragma once

// Small dense linear algebra: numerical rank, null spaces, span comparison
// and least squares. Matrices here are at most ~20x20.

#include <Eigen/Dense>

#include <vector>

namespace lieleaf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-9;

namespace detail {
inline Eigen::JacobiSVD<Mat> svd(const Mat& m, int options) { return Eigen::JacobiSVD<Mat>(m, options); }
}  // namespace detail

/// Number of singular values above tol * (largest singular value).
inline int numericalRank(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Vec s = detail::svd(m, 0).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

/// Orthonormal basis of the null space of `m`, with the same relative
/// tolerance semantics as numericalRank.
inline std::vector<Vec> kernelBasis(const Mat& m, double tol) {
  std::vector<Vec> basis;
  const Eigen::Index cols = m.cols();
  if (cols == 0) return basis;
  if (m.rows() == 0) {
    for (Eigen::Index j = 0; j < cols; ++j) basis.push_back(Vec::Unit(cols, j));
    return basis;
  }
  auto svd = detail::svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cut = s.size() > 0 ? tol * s(0) : 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    bool null = j >= s.size() || s(j) <= cut;
    if (null) basis.push_back(svd.matrixV().col(j));
  }
  return basis;
}

/// Stacks vectors as the columns of a matrix with `rows` rows.
inline Mat columns(const std::vector<Vec>& vs, Eigen::Index rows) {
  Mat m(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

/// True iff the column spaces of a and b coincide at tolerance tol.
inline bool spanEqual(const Mat& a, const Mat& b, double tol) {
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  const int ra = numericalRank(a, tol);
  return ra == numericalRank(b, tol) && ra == numericalRank(ab, tol);
}

enum class LeastSquaresMethod { Svd, PivotedQr };

/// Solves min |m x - rhs|. The SVD route returns the minimum-norm solution
/// (singular values below tol * max are dropped); the pivoted QR route
/// returns a basic solution.
inline Vec leastSquares(const Mat& m, const Vec& rhs, double tol,
                        LeastSquaresMethod method = LeastSquaresMethod::Svd) {
  if (method == LeastSquaresMethod::Svd) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tol);
    return svd.solve(rhs);
  }
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(tol);
  return qr.solve(rhs);
}

}  // namespace lieleaf
