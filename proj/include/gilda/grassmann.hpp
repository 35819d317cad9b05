#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <string>

#include "gilda/types.hpp"

namespace gilda {

/// True iff ||Z^T Z - I_p||_F <= tol.
inline bool is_on_manifold(const AmbientMatrix& Z, double tol) {
  detail::require(tol > 0.0, "is_on_manifold: tol must be positive");
  const Eigen::Index p = Z.cols();
  return (Z.transpose() * Z - Matrix::Identity(p, p)).norm() <= tol;
}

/// Projection of an ambient point Z onto the tangent space at Y:
///
///   pi(Z) = Y * 1/2 (Y^T Z - Z^T Y) + (I_m - Y Y^T) Z
///
/// evaluated in the algebraically identical form Z - Y sym(Y^T Z) so that
/// no m x m intermediate is formed. The output X satisfies the tangency
/// condition Y^T X + X^T Y = 0.
inline AmbientMatrix tangent_project(const GrassmannPoint& Y,
                                     const AmbientMatrix& Z) {
  const Matrix& B = Y.basis();
  detail::require(B.rows() == Z.rows() && B.cols() == Z.cols(),
                  "tangent_project: dimension mismatch");
  const Matrix BtZ = B.transpose() * Z;
  return Z - B * (0.5 * (BtZ + BtZ.transpose()));
}

/// Manifold gradient at Y of an objective with Euclidean gradient G:
///   grad = G - Y G^T Y.
inline AmbientMatrix riemannian_gradient(const GrassmannPoint& Y,
                                         const AmbientMatrix& euclid_grad) {
  const Matrix& B = Y.basis();
  detail::require(
      B.rows() == euclid_grad.rows() && B.cols() == euclid_grad.cols(),
      "riemannian_gradient: dimension mismatch");
  return euclid_grad - B * euclid_grad.transpose() * B;
}

/// Polar retraction: for the thin SVD Z = U S V^T returns U V^T, the
/// closest matrix with orthonormal columns in Frobenius norm. Z must have
/// full column rank (smallest singular value > 1e-12 * largest).
inline GrassmannPoint retract(const AmbientMatrix& Z) {
  Eigen::JacobiSVD<Matrix> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > 1e-12 * smax) || !(smax > 0.0))
    throw RankDeficientError("retract: rank-deficient input (sigma_min " +
                             std::to_string(smin) + ", sigma_max " +
                             std::to_string(smax) + ")");
  return GrassmannPoint(svd.matrixU() * svd.matrixV().transpose());
}

}  // namespace gilda
