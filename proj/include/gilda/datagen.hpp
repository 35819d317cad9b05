#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gilda/types.hpp"

namespace gilda {

using Rng = std::mt19937_64;

/// splitmix64 mixing step; used to derive well-separated RNG seeds from
/// structured inputs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Parameters of the synthetic Gaussian benchmark distribution: C classes
/// in dim dimensions, class means with i.i.d. N(0, mean_std^2) coordinates,
/// per-class random covariance whose eccentricity excess is drawn from
/// Exponential(mean = ecc_mean).
struct DataSpec {
  int dim = 2;
  int n_classes = 2;
  int n_per_class = 1;
  double ecc_mean = 2.0;
  double mean_std = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(dim >= 2, "DataSpec: dim must be >= 2");
    detail::require(n_classes >= 2, "DataSpec: n_classes must be >= 2");
    detail::require(n_per_class >= 1, "DataSpec: n_per_class must be >= 1");
    detail::require(ecc_mean > 0.0, "DataSpec: ecc_mean must be positive");
    detail::require(mean_std >= 0.0, "DataSpec: mean_std must be >= 0");
  }
};

/// Haar-distributed random orthogonal matrix: QR of a standard Gaussian
/// draw with the triangular factor's diagonal forced positive, which
/// removes the factorization sign ambiguity.
inline Matrix random_orthogonal(int dim, Rng& rng) {
  detail::require(dim >= 1, "random_orthogonal: dim must be >= 1");
  std::normal_distribution<double> gauss;
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

/// SPD covariance with condition number exactly 1 + excess: eigenvalues
/// geometrically spaced from 1 down to 1/(1 + excess), uniformly random
/// orientation.
inline Matrix covariance_with_eccentricity(int dim, double excess, Rng& rng) {
  detail::require(dim >= 2, "covariance_with_eccentricity: dim must be >= 2");
  detail::require(excess >= 0.0,
                  "covariance_with_eccentricity: excess must be >= 0");
  const Matrix q = random_orthogonal(dim, rng);
  Vector lambda(dim);
  const double cond = 1.0 + excess;
  for (int k = 0; k < dim; ++k)
    lambda(k) = std::pow(cond, -static_cast<double>(k) /
                                   static_cast<double>(dim - 1));
  Matrix s = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose()).eval();
}

/// Random covariance with uniformly distributed orientation and
/// exponentially distributed eccentricity excess of the given mean.
inline Matrix random_covariance(int dim, double ecc_mean, Rng& rng) {
  detail::require(ecc_mean > 0.0, "random_covariance: ecc_mean must be positive");
  std::exponential_distribution<double> excess(1.0 / ecc_mean);
  return covariance_with_eccentricity(dim, excess(rng), rng);
}

/// Ground-truth parameters of one generated class.
struct ClassParams {
  Vector mean;
  Matrix covariance;
  double condition_number = 1.0;
};

struct GeneratedDataset {
  LabeledDataset dataset;
  std::vector<ClassParams> classes;
};

/// Draws the full synthetic dataset and keeps the per-class ground truth
/// around. Columns are ordered class by class; the draw is a pure function
/// of spec (including its seed).
inline GeneratedDataset generate_dataset_with_params(const DataSpec& spec) {
  spec.validate();
  Rng rng(splitmix64(spec.seed));
  std::normal_distribution<double> gauss;
  std::exponential_distribution<double> excess_draw(1.0 / spec.ecc_mean);

  const Eigen::Index n_total =
      static_cast<Eigen::Index>(spec.n_classes) * spec.n_per_class;
  GeneratedDataset out;
  out.dataset.data.resize(spec.dim, n_total);
  out.dataset.labels.assign(static_cast<std::size_t>(n_total), 0);
  out.dataset.n_classes = spec.n_classes;
  out.classes.reserve(static_cast<std::size_t>(spec.n_classes));

  for (int c = 0; c < spec.n_classes; ++c) {
    ClassParams params;
    params.mean.resize(spec.dim);
    for (int i = 0; i < spec.dim; ++i)
      params.mean(i) = spec.mean_std * gauss(rng);
    const double excess = excess_draw(rng);
    params.covariance = covariance_with_eccentricity(spec.dim, excess, rng);
    params.condition_number = 1.0 + excess;

    const Matrix chol = params.covariance.llt().matrixL();
    Vector z(spec.dim);
    for (int k = 0; k < spec.n_per_class; ++k) {
      for (int i = 0; i < spec.dim; ++i) z(i) = gauss(rng);
      const Eigen::Index col =
          static_cast<Eigen::Index>(c) * spec.n_per_class + k;
      out.dataset.data.col(col) = params.mean + chol * z;
      out.dataset.labels[static_cast<std::size_t>(col)] = c;
    }
    out.classes.push_back(std::move(params));
  }
  return out;
}

/// Same draw as generate_dataset_with_params, ground truth discarded.
inline LabeledDataset generate_dataset(const DataSpec& spec) {
  return generate_dataset_with_params(spec).dataset;
}

}  // namespace gilda
