// Copyright 2026 The nvcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvcool/fit/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvcool/error.hpp"

namespace nvcool::fit {

namespace {

struct Problem {
  const Model& model;
  const Series& data;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> free;

  Eigen::VectorXd residuals(std::span<const double> p) const {
    const auto m = model(data.x, p);
    if (m.size() != data.size()) throw DimensionError("fit: model returned wrong number of values");
    Eigen::VectorXd r(static_cast<Eigen::Index>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double s = data.sigma.empty() ? 1.0 : data.sigma[i];
      r[static_cast<Eigen::Index>(i)] = (data.y[i] - m[i]) / s;
    }
    if (!r.allFinite()) throw InvalidArgument("fit: model produced non-finite values");
    return r;
  }

  // Jacobian of the weighted model values (not residuals) over free parameters.
  Eigen::MatrixXd jacobian(const std::vector<double>& p, double rel_step) const {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(free.size()));
    std::vector<double> q = p;
    for (std::size_t c = 0; c < free.size(); ++c) {
      const int k = free[c];
      const double h = rel_step * std::max(std::abs(p[k]), 1e-3);
      double hi = std::min(p[k] + h, upper[k]);
      double lo = std::max(p[k] - h, lower[k]);
      q[k] = hi;
      const Eigen::VectorXd rp = residuals(q);
      q[k] = lo;
      const Eigen::VectorXd rm = residuals(q);
      q[k] = p[k];
      if (!(hi > lo)) throw SingularSystem("fit: bounds leave no room for parameter " + std::to_string(k));
      j.col(static_cast<Eigen::Index>(c)) = (rm - rp) / (hi - lo);
    }
    return j;
  }
};

void check_rank(const Eigen::MatrixXd& j) {
  if (j.cols() == 0) return;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
  qr.setThreshold(1e-12);
  if (qr.rank() < j.cols()) {
    throw SingularSystem("fit: Jacobian is rank deficient (rank " + std::to_string(qr.rank()) +
                         " of " + std::to_string(j.cols()) +
                         "); rescale the parameters or fix the redundant ones");
  }
}

}  // namespace

void Series::validate() const {
  if (x.size() != y.size()) throw InvalidArgument("series: x and y lengths differ");
  if (!sigma.empty() && sigma.size() != x.size()) {
    throw InvalidArgument("series: sigma length differs from x");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidArgument("series: non-finite value at point " + std::to_string(i));
    }
    if (!sigma.empty() && !(sigma[i] > 0.0 && std::isfinite(sigma[i]))) {
      throw InvalidArgument("series: sigma must be positive at point " + std::to_string(i));
    }
  }
}

Model pointwise(PointModel f) {
  return [f = std::move(f)](std::span<const double> x, std::span<const double> p) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i], p);
    return out;
  };
}

double residual_sum_of_squares(const Model& model, const Series& data,
                               std::span<const double> params) {
  Problem pr{model, data, {}, {}, {}};
  return pr.residuals(params).squaredNorm();
}

FitResult fit_least_squares(const Model& model, const Series& data, std::vector<double> init,
                            const FitOptions& opts) {
  data.validate();
  const std::size_t np = init.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Problem pr{model, data, opts.lower, opts.upper, {}};
  if (pr.lower.empty()) pr.lower.assign(np, -inf);
  if (pr.upper.empty()) pr.upper.assign(np, inf);
  if (pr.lower.size() != np || pr.upper.size() != np) {
    throw InvalidArgument("fit: bounds must match the parameter count");
  }
  if (!opts.fixed.empty() && opts.fixed.size() != np) {
    throw InvalidArgument("fit: fixed mask must match the parameter count");
  }
  for (std::size_t k = 0; k < np; ++k) {
    if (!std::isfinite(init[k])) throw InvalidArgument("fit: initial parameters must be finite");
    if (init[k] < pr.lower[k] || init[k] > pr.upper[k]) {
      throw InvalidArgument("fit: initial parameter " + std::to_string(k) + " lies outside its bounds");
    }
    if (opts.fixed.empty() || !opts.fixed[k]) pr.free.push_back(static_cast<int>(k));
  }
  const int nfree = static_cast<int>(pr.free.size());
  if (static_cast<int>(data.size()) < nfree) {
    throw InvalidArgument("fit: fewer data points than free parameters");
  }

  FitResult out;
  out.dof = static_cast<int>(data.size()) - nfree;
  std::vector<double> p = std::move(init);
  Eigen::VectorXd r = pr.residuals(p);
  double rss = r.squaredNorm();
  double mu = opts.mu0;

  Eigen::MatrixXd j = pr.jacobian(p, opts.rel_step);
  check_rank(j);
  bool need_jacobian = false;
  while (out.iterations < opts.max_iter && nfree > 0) {
    if (need_jacobian) j = pr.jacobian(p, opts.rel_step);
    ++out.iterations;
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    Eigen::MatrixXd damped = a;
    const double dmax = a.diagonal().maxCoeff();
    for (int k = 0; k < nfree; ++k) damped(k, k) += mu * std::max(a(k, k), 1e-12 * dmax);
    const Eigen::VectorXd delta = damped.ldlt().solve(g);

    std::vector<double> trial = p;
    double pnorm = 0.0;
    for (int c = 0; c < nfree; ++c) {
      const int k = pr.free[c];
      trial[k] = std::clamp(p[k] + delta[c], pr.lower[k], pr.upper[k]);
      pnorm += p[k] * p[k];
    }
    double step = 0.0;
    for (int c = 0; c < nfree; ++c) step += std::pow(trial[pr.free[c]] - p[pr.free[c]], 2);
    step = std::sqrt(step);

    const Eigen::VectorXd rt = pr.residuals(trial);
    const double rss_t = rt.squaredNorm();
    if (rss_t <= rss) {
      const double reduction = rss > 0.0 ? (rss - rss_t) / rss : 0.0;
      p = std::move(trial);
      r = rt;
      rss = rss_t;
      mu = std::max(mu / 10.0, 1e-15);
      need_jacobian = true;
      if (reduction < opts.rel_tol || step < opts.step_tol * (std::sqrt(pnorm) + opts.step_tol) ||
          rss == 0.0) {
        out.converged = true;
        break;
      }
    } else {
      mu *= 10.0;
      need_jacobian = false;
      if (step < opts.step_tol * (std::sqrt(pnorm) + opts.step_tol) || mu > 1e20) {
        out.converged = true;
        break;
      }
    }
  }
  if (nfree == 0) out.converged = true;

  out.params = p;
  out.rss = rss;
  out.covariance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
  out.uncertainties.assign(np, 0.0);
  if (nfree > 0) {
    j = pr.jacobian(p, opts.rel_step);
    check_rank(j);
    const double scale = out.dof > 0 ? rss / out.dof : 0.0;
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::MatrixXd cov = a.inverse() * scale;
    for (int c = 0; c < nfree; ++c) {
      for (int d = 0; d < nfree; ++d) out.covariance(pr.free[c], pr.free[d]) = 0.5 * (cov(c, d) + cov(d, c));
    }
    for (int c = 0; c < nfree; ++c) {
      out.uncertainties[pr.free[c]] = std::sqrt(std::max(0.0, out.covariance(pr.free[c], pr.free[c])));
    }
  }
  return out;
}

}  // namespace nvcool::fit
