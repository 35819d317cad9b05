#pragma once

// Test-only helpers: seeded generators and independent oracle
// implementations that deliberately avoid the library's code paths
// (explicit loops, literal formulas, dense fallbacks).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <random>

#include "gilda/types.hpp"

namespace gilda::test {

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = gauss(rng);
  return g;
}

inline Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols,
                                 std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

/// SPD matrix with eigenvalues in roughly [0.5, 2.5].
inline Matrix random_spd(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix a = gaussian_matrix(n, n, rng);
  return a * a.transpose() / static_cast<double>(n) +
         0.5 * Matrix::Identity(n, n);
}

/// PSD matrix of rank min(n, k).
inline Matrix random_psd(Eigen::Index n, Eigen::Index k,
                         std::mt19937_64& rng) {
  const Matrix a = gaussian_matrix(n, k, rng);
  return a * a.transpose() / static_cast<double>(k);
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Scatter matrices accumulated term by term with explicit entry loops.
inline ScatterPair scatter_bruteforce(const LabeledDataset& ds) {
  const Eigen::Index m = ds.dim();
  const Eigen::Index n = ds.size();
  Vector mu = Vector::Zero(m);
  for (Eigen::Index i = 0; i < n; ++i) mu += ds.data.col(i);
  mu /= static_cast<double>(n);

  std::vector<Vector> class_mean(static_cast<std::size_t>(ds.n_classes),
                                 Vector::Zero(m));
  std::vector<int> counts(static_cast<std::size_t>(ds.n_classes), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    class_mean[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])] +=
        ds.data.col(i);
    ++counts[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])];
  }
  for (int c = 0; c < ds.n_classes; ++c)
    class_mean[static_cast<std::size_t>(c)] /=
        static_cast<double>(counts[static_cast<std::size_t>(c)]);

  Matrix within = Matrix::Zero(m, m);
  Matrix between = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector& cm =
        class_mean[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])];
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) {
        within(a, b) +=
            (ds.data(a, i) - cm(a)) * (ds.data(b, i) - cm(b));
        between(a, b) += (cm(a) - mu(a)) * (cm(b) - mu(b));
      }
  }
  return ScatterPair{within, between};
}

/// Total scatter sum_i (x_i - mu)(x_i - mu)^T by explicit loops.
inline Matrix total_scatter_bruteforce(const LabeledDataset& ds) {
  const Eigen::Index m = ds.dim();
  const Eigen::Index n = ds.size();
  Vector mu = Vector::Zero(m);
  for (Eigen::Index i = 0; i < n; ++i) mu += ds.data.col(i);
  mu /= static_cast<double>(n);
  Matrix total = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        total(a, b) += (ds.data(a, i) - mu(a)) * (ds.data(b, i) - mu(b));
  return total;
}

/// trace(R^T S R) with explicit index loops.
inline double projected_trace_loops(const Matrix& R, const Matrix& S) {
  double trace = 0.0;
  for (Eigen::Index i = 0; i < R.cols(); ++i)
    for (Eigen::Index a = 0; a < R.rows(); ++a)
      for (Eigen::Index b = 0; b < R.rows(); ++b)
        trace += R(a, i) * S(a, b) * R(b, i);
  return trace;
}

/// Trace-ratio objective evaluated on an arbitrary ambient matrix (no
/// orthonormality requirement); the finite-difference reference.
inline double objective_ambient(const Matrix& R, const ScatterPair& s) {
  return -projected_trace_loops(R, s.between) /
         projected_trace_loops(R, s.within);
}

/// Central finite differences of the ambient objective, entry by entry.
inline Matrix objective_gradient_fd(const Matrix& R, const ScatterPair& s,
                                    double h = 1e-6) {
  Matrix g(R.rows(), R.cols());
  for (Eigen::Index j = 0; j < R.cols(); ++j)
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
      Matrix plus = R, minus = R;
      plus(i, j) += h;
      minus(i, j) -= h;
      g(i, j) =
          (objective_ambient(plus, s) - objective_ambient(minus, s)) / (2 * h);
    }
  return g;
}

/// Literal transcription of the tangent projection, m x m identity and all.
inline Matrix tangent_project_literal(const Matrix& Y, const Matrix& Z) {
  const Eigen::Index m = Y.rows();
  return Y * (0.5 * (Y.transpose() * Z - Z.transpose() * Y)) +
         (Matrix::Identity(m, m) - Y * Y.transpose()) * Z;
}

/// Literal manifold-gradient formula.
inline Matrix riemannian_gradient_literal(const Matrix& Y, const Matrix& G) {
  return G - Y * G.transpose() * Y;
}

/// Largest generalized eigenvalue of S_B x = lambda S_W x via the dense
/// self-adjoint solver (independent of the library's eigen route).
inline double lambda_max_oracle(const ScatterPair& s) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(s.between, s.within);
  return ges.eigenvalues().maxCoeff();
}

/// Orthogonal projector onto the span of the top-p generalized eigenvectors,
/// from the same independent dense solver.
inline Matrix top_subspace_projector_oracle(const ScatterPair& s, int p) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(s.between, s.within);
  const Eigen::Index m = s.within.rows();
  Matrix top(m, p);
  for (int j = 0; j < p; ++j) top.col(j) = ges.eigenvectors().col(m - 1 - j);
  Eigen::HouseholderQR<Matrix> qr(top);
  const Matrix q = qr.householderQ() * Matrix::Identity(m, p);
  return q * q.transpose();
}

/// Relative error with a floor tied to the comparison scale, so entries
/// crossing zero do not blow up the quotient.
inline double relative_error(double a, double b, double scale_floor) {
  const double denom = std::max({std::abs(a), std::abs(b), scale_floor});
  return denom > 0.0 ? std::abs(a - b) / denom : 0.0;
}

}  // namespace gilda::test
