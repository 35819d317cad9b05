#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gilda/types.hpp"

namespace gilda {

/// Within-class and between-class scatter of a labeled dataset:
///
///   S_W = sum_i (x_i - mu_{c_i})(x_i - mu_{c_i})^T
///   S_B = sum_i (mu_{c_i} - mu)(mu_{c_i} - mu)^T
///
/// Both sums run over all N samples, so each class contributes its mean
/// deviation once per sample: S_B = sum_c n_c (mu_c - mu)(mu_c - mu)^T.
inline ScatterPair scatter_matrices(const LabeledDataset& ds) {
  ds.validate();
  const Eigen::Index m = ds.dim();
  const Eigen::Index n = ds.size();
  const int n_classes = ds.n_classes;

  const Vector mu = ds.data.rowwise().mean();
  Matrix class_means = Matrix::Zero(m, n_classes);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(n_classes), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    class_means.col(ds.labels[static_cast<std::size_t>(i)]) += ds.data.col(i);
    ++counts[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])];
  }
  for (int c = 0; c < n_classes; ++c)
    class_means.col(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

  Matrix centered = ds.data;
  for (Eigen::Index i = 0; i < n; ++i)
    centered.col(i) -= class_means.col(ds.labels[static_cast<std::size_t>(i)]);
  Matrix within = centered * centered.transpose();

  Matrix between = Matrix::Zero(m, m);
  for (int c = 0; c < n_classes; ++c) {
    const Vector d = class_means.col(c) - mu;
    between += static_cast<double>(counts[static_cast<std::size_t>(c)]) *
               (d * d.transpose());
  }

  within = 0.5 * (within + within.transpose()).eval();
  between = 0.5 * (between + between.transpose()).eval();
  return ScatterPair{std::move(within), std::move(between)};
}

namespace detail {

inline double projected_within_trace(const Matrix& basis,
                                     const ScatterPair& s) {
  require(s.within.rows() == basis.rows() && s.within.cols() == basis.rows() &&
              s.between.rows() == basis.rows() &&
              s.between.cols() == basis.rows(),
          "scatter pair does not match the projection dimension");
  const double den = (basis.transpose() * s.within * basis).trace();
  if (den <= 1e-12 * s.within.trace())
    throw DegenerateDenominatorError(
        "trace(R^T S_W R) = " + std::to_string(den) +
        " is degenerate relative to trace(S_W)");
  return den;
}

}  // namespace detail

/// Trace-ratio objective f = -trace(R^T S_B R) / trace(R^T S_W R).
/// Always <= 0 for positive semidefinite S_B; lower is better.
inline double trace_ratio_objective(const GrassmannPoint& R,
                                    const ScatterPair& s) {
  const Matrix& B = R.basis();
  const double den = detail::projected_within_trace(B, s);
  const double num = (B.transpose() * s.between * B).trace();
  return -num / den;
}

/// Euclidean gradient of the trace-ratio objective with respect to R
/// (quotient rule; S_B and S_W are symmetric):
///
///   df/dR = -[2 S_B R tr(R^T S_W R) - tr(R^T S_B R) 2 S_W R] / tr(R^T S_W R)^2
inline AmbientMatrix objective_gradient(const GrassmannPoint& R,
                                        const ScatterPair& s) {
  const Matrix& B = R.basis();
  const double den = detail::projected_within_trace(B, s);
  const Matrix sb_r = s.between * B;
  const Matrix sw_r = s.within * B;
  const double num = B.cwiseProduct(sb_r).sum();
  return -(2.0 * den * sb_r - 2.0 * num * sw_r) / (den * den);
}

/// Eigenvector baseline: orthonormalization of the top-p eigenvectors of
/// S_W^{-1} S_B, eigenvalues sorted by descending real part (stable, ties
/// broken by original index). S_W is ridge-regularized with
/// 1e-10 * trace(S_W)/m before inversion; a SingularWithinError is raised
/// if its condition number still exceeds 1e12.
inline GrassmannPoint eigenvector_solution(const ScatterPair& s, int p) {
  const Eigen::Index m = s.within.rows();
  detail::require(p >= 1 && p < m, "eigenvector_solution: need 1 <= p < m");
  detail::require(s.within.cols() == m && s.between.rows() == m &&
                      s.between.cols() == m,
                  "eigenvector_solution: scatter matrices must be m x m");

  const double ridge = 1e-10 * s.within.trace() / static_cast<double>(m);
  const Matrix w_reg = s.within + ridge * Matrix::Identity(m, m);
  Eigen::SelfAdjointEigenSolver<Matrix> wes(w_reg);
  const double wmin = wes.eigenvalues()(0);
  const double wmax = wes.eigenvalues()(m - 1);
  if (!(wmin > 0.0) || wmax > 1e12 * wmin)
    throw SingularWithinError(
        "within-class scatter is numerically singular (condition " +
        std::to_string(wmax / (wmin > 0.0 ? wmin : 1e-300)) + ")");

  const Matrix target = w_reg.llt().solve(s.between);
  Eigen::EigenSolver<Matrix> es(target);
  detail::require(es.info() == Eigen::Success,
                  "eigenvector_solution: eigensolver failed");

  const Eigen::VectorXcd lambda = es.eigenvalues();
  // S_W^{-1} S_B is similar to a symmetric PSD matrix, so its spectrum is
  // real in exact arithmetic; only roundoff-sized imaginary parts pass.
  const double scale = lambda.cwiseAbs().maxCoeff();
  if (scale > 0.0 && lambda.imag().cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw Error("complex-eigenvalues",
                "eigenvector_solution: eigenvalues have non-negligible "
                "imaginary parts");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&lambda](Eigen::Index a, Eigen::Index b) {
                     return lambda(a).real() > lambda(b).real();
                   });

  Matrix top(m, p);
  for (int j = 0; j < p; ++j)
    top.col(j) = es.eigenvectors().col(order[static_cast<std::size_t>(j)]).real();

  Eigen::HouseholderQR<Matrix> qr(top);
  Matrix q = qr.householderQ() * Matrix::Identity(m, p);
  return GrassmannPoint(std::move(q));
}

}  // namespace gilda
