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

#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nvcool::fit {

/// Data series (x, y, sigma). An empty sigma means unit weights.
struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;

  std::size_t size() const noexcept { return x.size(); }
  void validate() const;
};

/// Evaluates the model at every x for one parameter vector.
using Model = std::function<std::vector<double>(std::span<const double> x,
                                                std::span<const double> params)>;
using PointModel = std::function<double(double x, std::span<const double> params)>;

Model pointwise(PointModel f);

struct FitOptions {
  /// Entries set to true are held at their initial value.
  std::vector<bool> fixed;
  std::vector<double> lower;
  std::vector<double> upper;
  int max_iter = 500;
  double rel_tol = 1e-10;
  double step_tol = 1e-12;
  double mu0 = 1e-3;
  double rel_step = 1e-6;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> uncertainties;
  /// Full-size covariance; rows and columns of fixed parameters are zero.
  Eigen::MatrixXd covariance;
  double rss = 0.0;
  int dof = 0;
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt with a central-difference Jacobian. Throws
/// SingularSystem when the Jacobian of the free parameters is rank deficient.
FitResult fit_least_squares(const Model& model, const Series& data, std::vector<double> init,
                            const FitOptions& opts = {});

/// Weighted residual sum of squares of `model` at `params`.
double residual_sum_of_squares(const Model& model, const Series& data,
                               std::span<const double> params);

}  // namespace nvcool::fit
