#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gilda/grassmann.hpp"
#include "gilda/lda.hpp"
#include "gilda/types.hpp"

namespace gilda {

struct OptConfig {
  double step_size = 1e-2;    // beta
  int max_iters = 1000;
  double rel_tol = 1e-9;      // early stop on relative objective change
  double svd_gap_min = 1e-6;  // spectrum floor for the differentiable retraction
  double momentum = 0.0;      // classical momentum; 0 = plain descent

  void validate() const {
    detail::require(step_size > 0.0, "OptConfig: step_size must be positive");
    detail::require(max_iters >= 1, "OptConfig: max_iters must be >= 1");
    detail::require(rel_tol >= 0.0, "OptConfig: rel_tol must be >= 0");
    detail::require(svd_gap_min > 0.0, "OptConfig: svd_gap_min must be positive");
    detail::require(momentum >= 0.0 && momentum < 1.0,
                    "OptConfig: momentum must lie in [0, 1)");
  }
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
};

/// Outcome of one optimizer run. trace records the best objective seen up
/// to each iteration (entry 0 is the initial objective), so the sequence is
/// non-increasing and its last entry equals final_objective. final_point is
/// the best retracted point encountered, not necessarily the last iterate.
struct OptRun {
  GrassmannPoint final_point;
  double final_objective = 0.0;
  std::vector<TracePoint> trace;
  int iterations_used = 0;
  bool converged = false;
};

/// Invoked after evaluating each iterate (including the initial point).
using IterationObserver =
    std::function<void(int iteration, const GrassmannPoint&, double objective)>;

/// Vector-Jacobian product of the polar retraction r(P) = U V^T: given
/// upstream = dL/dr(P), returns dL/dP. With the thin SVD P = U S V^T,
///
///   A = U^T G V,   B_ij = (A_ij - A_ji) / (s_i + s_j)
///   dL/dP = U B V^T + (I - U U^T) G V S^{-1} V^T.
///
/// The retraction loses differentiability as P approaches rank deficiency;
/// spectra with s_min < svd_gap_min * s_max are rejected. Repeated singular
/// values are fine: the polar factor stays differentiable there and the
/// formula contains no 1/(s_i - s_j) terms.
inline AmbientMatrix retraction_vjp(const AmbientMatrix& P,
                                    const AmbientMatrix& upstream,
                                    double svd_gap_min = 1e-6) {
  detail::require(P.rows() == upstream.rows() && P.cols() == upstream.cols(),
                  "retraction_vjp: dimension mismatch");
  detail::require(svd_gap_min > 0.0, "retraction_vjp: svd_gap_min must be positive");
  const Eigen::Index p = P.cols();

  Eigen::JacobiSVD<Matrix> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(p - 1);
  if (!(smax > 0.0) || !(smin >= svd_gap_min * smax) || !std::isfinite(smax))
    throw DegenerateSpectrumError(
        "retraction_vjp: singular value floor violated (sigma_min " +
        std::to_string(smin) + ", sigma_max " + std::to_string(smax) + ")");

  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();
  const Matrix A = U.transpose() * upstream * V;
  Matrix B(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      B(i, j) = (A(i, j) - A(j, i)) / (s(i) + s(j));

  const Matrix horizontal = upstream - U * (U.transpose() * upstream);
  return U * B * V.transpose() +
         horizontal * (V * s.cwiseInverse().asDiagonal() * V.transpose());
}

/// Gaussian ambient matrix, handy as a random optimizer start.
inline AmbientMatrix random_ambient(Eigen::Index m, Eigen::Index p,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  AmbientMatrix Z(m, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < m; ++i) Z(i, j) = gauss(rng);
  return Z;
}

namespace detail {

[[noreturn]] inline void rethrow_at_iteration(const Error& e, int iteration) {
  const std::string what =
      "iteration " + std::to_string(iteration) + ": " + e.what();
  if (e.tag() == "degenerate-spectrum") throw DegenerateSpectrumError(what);
  if (e.tag() == "degenerate-denominator") throw DegenerateDenominatorError(what);
  if (e.tag() == "rank-deficient") throw RankDeficientError(what);
  throw Error(e.tag(), what);
}

}  // namespace detail

/// Proxy matrix optimization: gradient descent on an unconstrained ambient
/// proxy P whose retraction r(P) is the manifold iterate. Each step
/// evaluates the objective at Y = r(P), maps the Euclidean gradient to the
/// manifold gradient (grad = G - Y G^T Y), pulls it back through the
/// retraction via retraction_vjp and updates P <- P - beta * grad_P.
/// Stops after max_iters updates or when the objective change falls to
/// |f_new - f| <= rel_tol * |f|.
inline OptRun pmo_optimize(const ScatterPair& scatter, const AmbientMatrix& P0,
                           const OptConfig& cfg,
                           const IterationObserver& observer = {}) {
  cfg.validate();
  detail::require(P0.allFinite(), "pmo_optimize: P0 has non-finite entries");
  detail::require(P0.cols() >= 1 && P0.cols() < P0.rows(),
                  "pmo_optimize: need 1 <= p < m");

  AmbientMatrix P = P0;
  auto evaluate = [&scatter](const AmbientMatrix& proxy, int iteration) {
    try {
      GrassmannPoint Y = retract(proxy);
      const double f = trace_ratio_objective(Y, scatter);
      return std::make_pair(std::move(Y), f);
    } catch (const Error& e) {
      detail::rethrow_at_iteration(e, iteration);
    }
  };

  auto [Y, f] = evaluate(P, 0);
  GrassmannPoint best_point = Y;
  double best_f = f;
  std::vector<TracePoint> trace{{0, best_f}};
  if (observer) observer(0, Y, f);

  AmbientMatrix velocity = AmbientMatrix::Zero(P.rows(), P.cols());
  bool converged = false;
  int used = 0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    try {
      const AmbientMatrix euclid = objective_gradient(Y, scatter);
      const AmbientMatrix manifold_grad = riemannian_gradient(Y, euclid);
      const AmbientMatrix grad_p =
          retraction_vjp(P, manifold_grad, cfg.svd_gap_min);
      if (cfg.momentum > 0.0)
        velocity = cfg.momentum * velocity + grad_p;
      else
        velocity = grad_p;
      P -= cfg.step_size * velocity;
    } catch (const Error& e) {
      detail::rethrow_at_iteration(e, it);
    }

    auto [Y_new, f_new] = evaluate(P, it);
    used = it;
    if (f_new < best_f) {
      best_f = f_new;
      best_point = Y_new;
    }
    trace.push_back({it, best_f});
    if (observer) observer(it, Y_new, f_new);
    const bool stop = std::abs(f_new - f) <= cfg.rel_tol * std::abs(f);
    Y = std::move(Y_new);
    f = f_new;
    if (stop) {
      converged = true;
      break;
    }
  }

  return OptRun{std::move(best_point), best_f, std::move(trace), used,
                converged};
}

/// Two-step baseline: take an ambient gradient step from the current
/// manifold point, project the displacement onto the tangent space at R_i
/// and retract back to the manifold:
///
///   Z    = R_i - beta * df/dR
///   R_i+1 = retract(R_i + pi_{T,R_i}(Z - R_i))
///
/// Stopping rule and best-point reporting match pmo_optimize.
inline OptRun two_step_optimize(const ScatterPair& scatter,
                                const GrassmannPoint& R0, const OptConfig& cfg,
                                const IterationObserver& observer = {}) {
  cfg.validate();
  detail::require(R0.subspace_dim() < R0.ambient_dim(),
                  "two_step_optimize: need p < m");

  GrassmannPoint R = R0;
  double f = trace_ratio_objective(R, scatter);
  GrassmannPoint best_point = R;
  double best_f = f;
  std::vector<TracePoint> trace{{0, best_f}};
  if (observer) observer(0, R, f);

  AmbientMatrix velocity =
      AmbientMatrix::Zero(R0.ambient_dim(), R0.subspace_dim());
  bool converged = false;
  int used = 0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    double f_new = 0.0;
    try {
      const AmbientMatrix euclid = objective_gradient(R, scatter);
      if (cfg.momentum > 0.0)
        velocity = cfg.momentum * velocity + euclid;
      else
        velocity = euclid;
      const AmbientMatrix Z = R.basis() - cfg.step_size * velocity;
      const AmbientMatrix step = tangent_project(R, Z - R.basis());
      R = retract(R.basis() + step);
      f_new = trace_ratio_objective(R, scatter);
    } catch (const Error& e) {
      detail::rethrow_at_iteration(e, it);
    }

    used = it;
    if (f_new < best_f) {
      best_f = f_new;
      best_point = R;
    }
    trace.push_back({it, best_f});
    if (observer) observer(it, R, f_new);
    if (std::abs(f_new - f) <= cfg.rel_tol * std::abs(f)) {
      converged = true;
      f = f_new;
      break;
    }
    f = f_new;
  }

  return OptRun{std::move(best_point), best_f, std::move(trace), used,
                converged};
}

}  // namespace gilda
