// Copyright 2026 The htglb Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace htglb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an iterative numerical routine fails to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Metric { V, Vinv };

/**
 * Symmetric positive definite d x d matrix V together with a maintained
 * inverse.
 *
 * The inverse is kept current with Sherman-Morrison rank-one corrections and
 * recomputed from a Cholesky factorization every `refresh_interval` updates,
 * which keeps ||V * V^-1 - I||_inf well below 1e-8 over long runs.
 */
class SpdState {
 public:
  static constexpr std::size_t kDefaultRefreshInterval = 1000;

  SpdState() = default;

  /// V = lambda * I_d.
  SpdState(Eigen::Index dim, double lambda,
           std::size_t refresh_interval = kDefaultRefreshInterval)
      : refresh_interval_(refresh_interval) {
    if (dim < 1) throw std::invalid_argument("SpdState: dimension must be >= 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("SpdState: lambda must be positive");
    }
    if (refresh_interval_ == 0) {
      throw std::invalid_argument("SpdState: refresh interval must be >= 1");
    }
    mat_ = lambda * Matrix::Identity(dim, dim);
    inv_ = (1.0 / lambda) * Matrix::Identity(dim, dim);
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  const Matrix& inv() const { return inv_; }
  std::size_t updates_since_refresh() const { return updates_since_refresh_; }
  std::size_t refresh_interval() const { return refresh_interval_; }

  /// V <- V + c x x^T. A zero vector or c == 0 leaves the state untouched.
  void rank_one_update(const Vector& x, double c) {
    if (c < 0.0) throw std::invalid_argument("rank_one_update: c must be >= 0");
    if (c == 0.0 || x.isZero(0.0)) return;
    mat_.noalias() += c * x * x.transpose();
    const Vector w = inv_ * x;
    const double denom = 1.0 + c * x.dot(w);
    inv_.noalias() -= (c / denom) * w * w.transpose();
    if (++updates_since_refresh_ >= refresh_interval_) refresh();
  }

  /// Recompute the inverse from a fresh Cholesky factorization of V.
  void refresh() {
    Eigen::LLT<Matrix> llt(mat_);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("SpdState::refresh: matrix is not positive definite");
    }
    inv_ = llt.solve(Matrix::Identity(dim(), dim()));
    // Symmetrize away round-off from the triangular solves.
    inv_ = 0.5 * (inv_ + inv_.transpose()).eval();
    updates_since_refresh_ = 0;
  }

  /// ||V * V^-1 - I||_inf (max absolute row sum).
  double inverse_residual() const {
    const Matrix r = mat_ * inv_ - Matrix::Identity(dim(), dim());
    return r.cwiseAbs().rowwise().sum().maxCoeff();
  }

 private:
  Matrix mat_;
  Matrix inv_;
  std::size_t updates_since_refresh_ = 0;
  std::size_t refresh_interval_ = kDefaultRefreshInterval;
};

/// sqrt(x^T M x) with M = V or V^-1.
inline double quad_norm(const SpdState& state, const Vector& x, Metric metric = Metric::Vinv) {
  const Matrix& m = metric == Metric::V ? state.mat() : state.inv();
  const double q = x.dot(m * x);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

struct ProjectionOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

/**
 * Projection of u onto the Euclidean ball {||theta||_2 <= radius} in the
 * V-metric, i.e. argmin ||theta - u||_V^2 subject to ||theta||_2 <= radius.
 *
 * Outside the ball the minimizer is theta(rho) = (V + rho I)^-1 V u for the
 * unique rho > 0 with ||theta(rho)||_2 = radius. ||theta(rho)|| is strictly
 * decreasing in rho, so the root is bracketed by doubling an upper bound and
 * then located by Newton steps on 1/||theta(rho)|| - 1/radius (nearly linear
 * in rho), falling back to bisection whenever a step leaves the bracket.
 */
inline Vector project_ball(const Matrix& v, const Vector& u, double radius,
                           const ProjectionOptions& opts = {}) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_ball: radius must be positive");
  if (u.norm() <= radius) return u;

  const Eigen::Index d = v.rows();
  const Vector vu = v * u;
  const Matrix identity = Matrix::Identity(d, d);

  struct Eval {
    Vector theta;
    double norm = 0.0;
    double slope = 0.0;  // d/drho of 1/||theta(rho)||
  };
  auto evaluate = [&](double rho) {
    Eigen::LLT<Matrix> llt(v + rho * identity);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("project_ball: shifted matrix is not positive definite");
    }
    Eval e;
    e.theta = llt.solve(vu);
    e.norm = e.theta.norm();
    const Vector w = llt.solve(e.theta);
    e.slope = e.theta.dot(w) / (e.norm * e.norm * e.norm);
    return e;
  };

  double lo = 0.0;
  double hi = std::max(1.0, v.diagonal().maxCoeff());
  Eval at_hi = evaluate(hi);
  int iter = 0;
  while (at_hi.norm > radius) {
    lo = hi;
    hi *= 2.0;
    at_hi = evaluate(hi);
    if (++iter > opts.max_iterations) {
      throw NumericalError("project_ball: failed to bracket the multiplier");
    }
  }
  if (std::abs(at_hi.norm - radius) <= opts.tolerance) return at_hi.theta;

  double rho = hi;
  Eval cur = at_hi;
  for (int i = 0; i < opts.max_iterations; ++i) {
    const double residual = 1.0 / cur.norm - 1.0 / radius;
    double next = rho - residual / cur.slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    rho = next;
    cur = evaluate(rho);
    if (std::abs(cur.norm - radius) <= opts.tolerance) return cur.theta;
    if (cur.norm > radius) {
      lo = rho;
    } else {
      hi = rho;
    }
    if (hi - lo <= 1e-300) break;
  }
  throw NumericalError("project_ball: multiplier search did not converge");
}

inline Vector project_ball(const SpdState& state, const Vector& u, double radius,
                           const ProjectionOptions& opts = {}) {
  return project_ball(state.mat(), u, radius, opts);
}

}  // namespace htglb
