#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gilda {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Unconstrained m x p matrix living in ambient Euclidean space.
/// Holds proxy matrices, gradients and raw iterates; no orthonormality
/// is implied.
using AmbientMatrix = Eigen::MatrixXd;

/// Frobenius-norm tolerance used for orthonormality checks throughout.
inline constexpr double kOrthonormalTol = 1e-10;

/// Base class for recoverable numerical failures. tag() is a stable
/// machine-readable identifier; the benchmark harness writes it into the
/// status column of result files.
class Error : public std::runtime_error {
 public:
  Error(std::string tag, const std::string& what)
      : std::runtime_error(what), tag_(std::move(tag)) {}
  [[nodiscard]] const std::string& tag() const noexcept { return tag_; }

 private:
  std::string tag_;
};

/// trace(R^T S_W R) vanished: the data collapsed in the projected subspace.
class DegenerateDenominatorError : public Error {
 public:
  explicit DegenerateDenominatorError(const std::string& what)
      : Error("degenerate-denominator", what) {}
};

/// The within-class scatter is numerically singular even after ridge
/// regularization.
class SingularWithinError : public Error {
 public:
  explicit SingularWithinError(const std::string& what)
      : Error("singular-within", what) {}
};

/// A matrix that must have full column rank lost it.
class RankDeficientError : public Error {
 public:
  explicit RankDeficientError(const std::string& what)
      : Error("rank-deficient", what) {}
};

/// The proxy spectrum collapsed past the configured floor; the retraction
/// is no longer reliably differentiable there.
class DegenerateSpectrumError : public Error {
 public:
  explicit DegenerateSpectrumError(const std::string& what)
      : Error("degenerate-spectrum", what) {}
};

/// The eigenvector baseline objective is (numerically) zero, so improvement
/// relative to it is undefined.
class DegenerateBaselineError : public Error {
 public:
  explicit DegenerateBaselineError(const std::string& what)
      : Error("degenerate-baseline", what) {}
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) throw std::invalid_argument(what);
}

}  // namespace detail

/// Labeled data matrix: one sample per column, class ids in 0..n_classes-1.
struct LabeledDataset {
  Matrix data;              // m x N, one sample per column
  std::vector<int> labels;  // size N
  int n_classes = 0;

  [[nodiscard]] Eigen::Index dim() const { return data.rows(); }
  [[nodiscard]] Eigen::Index size() const { return data.cols(); }

  /// Throws std::invalid_argument unless well formed: one label per column,
  /// every class id in 0..C-1 present, m >= 2, N >= C >= 2, finite entries.
  void validate() const {
    detail::require(data.rows() >= 2, "LabeledDataset: need at least 2 features");
    detail::require(n_classes >= 2, "LabeledDataset: need at least 2 classes");
    detail::require(static_cast<Eigen::Index>(labels.size()) == data.cols(),
                    "LabeledDataset: one label per column required");
    detail::require(data.cols() >= n_classes,
                    "LabeledDataset: need at least one sample per class");
    detail::require(data.allFinite(), "LabeledDataset: non-finite entries");
    std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
    for (int label : labels) {
      detail::require(label >= 0 && label < n_classes,
                      "LabeledDataset: label out of range");
      seen[static_cast<std::size_t>(label)] = true;
    }
    for (bool s : seen)
      detail::require(s, "LabeledDataset: every class id must appear");
  }
};

/// Within-class and between-class scatter matrices (both m x m symmetric
/// positive semidefinite).
struct ScatterPair {
  Matrix within;
  Matrix between;
};

/// A point on the Grassmann manifold, represented by an m x p basis with
/// orthonormal columns (m > p >= 1). Construction enforces the invariant,
/// so holding a GrassmannPoint certifies membership.
class GrassmannPoint {
 public:
  explicit GrassmannPoint(Matrix basis) : basis_(std::move(basis)) {
    const Eigen::Index m = basis_.rows();
    const Eigen::Index p = basis_.cols();
    detail::require(p >= 1 && m > p, "GrassmannPoint: need m > p >= 1");
    const double defect =
        (basis_.transpose() * basis_ - Matrix::Identity(p, p)).norm();
    detail::require(defect <= kOrthonormalTol,
                    "GrassmannPoint: columns not orthonormal (defect " +
                        std::to_string(defect) + ")");
  }

  [[nodiscard]] const Matrix& basis() const noexcept { return basis_; }
  [[nodiscard]] Eigen::Index ambient_dim() const { return basis_.rows(); }
  [[nodiscard]] Eigen::Index subspace_dim() const { return basis_.cols(); }

 private:
  Matrix basis_;
};

}  // namespace gilda
