#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <cstring>
#include <random>

#include "gilda/datagen.hpp"
#include "test_support.hpp"

using namespace gilda;

TEST_CASE("zero eccentricity excess gives the identity covariance") {
  Rng rng(1);
  const Matrix s = covariance_with_eccentricity(2, 0.0, rng);
  CHECK((s - Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("random covariance is symmetric positive definite") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 7);
    const Matrix s = random_covariance(dim, 2.0, rng);
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    CHECK(es.eigenvalues()(0) > 0.0);
  }
}

TEST_CASE("covariance condition number follows the exponential law") {
  Rng rng(3);
  double sum_excess = 0.0;
  const int n_draws = 10000;
  for (int k = 0; k < n_draws; ++k) {
    const Matrix s = random_covariance(5, 2.0, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    sum_excess += es.eigenvalues()(4) / es.eigenvalues()(0) - 1.0;
  }
  const double mean_excess = sum_excess / n_draws;
  CHECK(std::abs(mean_excess - 2.0) <= 0.05 * 2.0);
}

TEST_CASE("drawn covariances match their recorded condition number") {
  DataSpec spec;
  spec.dim = 6;
  spec.n_classes = 4;
  spec.n_per_class = 2;
  spec.ecc_mean = 3.0;
  spec.seed = 99;
  const GeneratedDataset generated = generate_dataset_with_params(spec);
  REQUIRE(generated.classes.size() == 4);
  for (const ClassParams& params : generated.classes) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(params.covariance);
    CHECK(es.eigenvalues()(0) > 0.0);
    const double cond = es.eigenvalues()(5) / es.eigenvalues()(0);
    CHECK(test::relative_error(cond, params.condition_number, 0.0) <= 1e-8);
  }
}

TEST_CASE("centred spec pools to a near-zero sample mean") {
  DataSpec spec;
  spec.dim = 3;
  spec.n_classes = 2;
  spec.n_per_class = 5000;
  spec.ecc_mean = 1e-9;  // effectively isotropic unit covariance
  spec.mean_std = 0.0;
  spec.seed = 4;
  const LabeledDataset ds = generate_dataset(spec);
  const double n = static_cast<double>(ds.size());
  CHECK(ds.data.rowwise().mean().norm() <=
        5.0 * static_cast<double>(spec.dim) / std::sqrt(n));
}

TEST_CASE("generation is a pure function of the spec") {
  DataSpec spec;
  spec.dim = 5;
  spec.n_classes = 3;
  spec.n_per_class = 40;
  spec.seed = 1234;
  const LabeledDataset a = generate_dataset(spec);
  const LabeledDataset b = generate_dataset(spec);
  REQUIRE(a.data.size() == b.data.size());
  CHECK(std::memcmp(a.data.data(), b.data.data(),
                    sizeof(double) * static_cast<std::size_t>(a.data.size())) ==
        0);
  CHECK(a.labels == b.labels);

  spec.seed = 1235;
  const LabeledDataset c = generate_dataset(spec);
  CHECK(std::memcmp(a.data.data(), c.data.data(),
                    sizeof(double) * static_cast<std::size_t>(a.data.size())) !=
        0);
}

TEST_CASE("labels are balanced and class-ordered") {
  DataSpec spec;
  spec.dim = 4;
  spec.n_classes = 3;
  spec.n_per_class = 7;
  spec.seed = 5;
  const LabeledDataset ds = generate_dataset(spec);
  CHECK_NOTHROW(ds.validate());
  REQUIRE(ds.size() == 21);
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < 7; ++k)
      CHECK(ds.labels[static_cast<std::size_t>(c * 7 + k)] == c);
}

TEST_CASE("sample covariance approaches the drawn covariance") {
  DataSpec spec;
  spec.dim = 4;
  spec.n_classes = 3;
  spec.n_per_class = 5000;
  spec.ecc_mean = 2.0;
  spec.mean_std = 1.0;
  spec.seed = 7;
  const GeneratedDataset generated = generate_dataset_with_params(spec);
  for (int c = 0; c < 3; ++c) {
    const auto block = generated.dataset.data.middleCols(
        static_cast<Eigen::Index>(c) * spec.n_per_class, spec.n_per_class);
    const Vector mean = block.rowwise().mean();
    const Matrix centered = block.colwise() - mean;
    const Matrix sample_cov =
        centered * centered.transpose() / static_cast<double>(spec.n_per_class);
    const Matrix& truth =
        generated.classes[static_cast<std::size_t>(c)].covariance;
    CHECK((sample_cov - truth).norm() <= 0.10 * truth.norm());
  }
}

TEST_CASE("spec validation rejects bad parameters") {
  DataSpec spec;
  spec.dim = 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = DataSpec{};
  spec.n_classes = 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = DataSpec{};
  spec.n_per_class = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = DataSpec{};
  spec.ecc_mean = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = DataSpec{};
  spec.mean_std = -0.1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
