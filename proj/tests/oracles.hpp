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

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nvcool/cooling/moments.hpp"
#include "nvcool/fit/registry.hpp"
#include "nvcool/linalg/dense.hpp"

namespace nvcool::test {

using cooling::Complex;
using cooling::CoolingParams;
using cooling::kNumMoments;
using cooling::MomentsSystem;
using linalg::ComplexMatrix;
using namespace cooling;

inline constexpr Complex kI{0.0, 1.0};

inline ComplexMatrix trunc_annihilation(int d) {
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

inline ComplexMatrix kron2(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

// Two bosonic modes: a (mechanics) and b (collective spin, J- = b) with the
// Lindblad generator written out directly on operators.
struct BosonOracle {
  int d = 6;
  ComplexMatrix a, b, ad, bd, h, parity;
  std::vector<std::pair<ComplexMatrix, double>> jumps;
  double dephasing = 0.0;

  explicit BosonOracle(const CoolingParams& p) {
    const ComplexMatrix one = ComplexMatrix::Identity(d, d);
    const ComplexMatrix low = trunc_annihilation(d);
    ComplexMatrix par = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) par(k, k) = (k % 2) ? -1.0 : 1.0;
    a = kron2(low, one);
    b = kron2(one, low);
    ad = a.adjoint();
    bd = b.adjoint();
    parity = kron2(one, par);
    h = p.omega_m * (ad * a + bd * b) + p.lambda_eff * (b + bd) * (a + ad);
    const double g = p.gamma();
    jumps = {{a, 0.5 * g * (p.n_th + 1.0)}, {ad, 0.5 * g * p.n_th}, {b, 0.5 * p.gamma_perp}};
    dephasing = 0.5 * p.gamma_par;
  }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    ComplexMatrix out = -kI * (h * x - x * h);
    for (const auto& [c, r] : jumps) {
      const ComplexMatrix cd = c.adjoint();
      out += r * (2.0 * c * x * cd - cd * c * x - x * cd * c);
    }
    out += dephasing * (parity * x * parity - x);
    return out;
  }

  std::array<ComplexMatrix, kNumMoments> observables() const {
    std::array<ComplexMatrix, kNumMoments> o;
    o[ada] = ad * a;
    o[jpjm] = bd * b;
    o[jp_ad] = bd * ad;
    o[jm_ad] = b * ad;
    o[jp_a] = bd * a;
    o[jm_a] = b * a;
    o[jmjm] = b * b;
    o[jpjp] = bd * bd;
    o[adad] = ad * ad;
    o[aa] = a * a;
    return o;
  }

  ComplexMatrix random_low(std::mt19937_64& rng, int support) const {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix x = ComplexMatrix::Zero(d * d, d * d);
    for (int i1 = 0; i1 <= support; ++i1) {
      for (int i2 = 0; i2 <= support; ++i2) {
        for (int j1 = 0; j1 <= support; ++j1) {
          for (int j2 = 0; j2 <= support; ++j2) x(i1 * d + i2, j1 * d + j2) = Complex(n(rng), n(rng));
        }
      }
    }
    return x;
  }
};

// Recovers (M, b) from tr(O_i L[X]) = sum_j M_ij tr(O_j X) + b_i tr(X).
inline MomentsSystem brute_force_system(const CoolingParams& p, std::uint64_t seed) {
  const BosonOracle o(p);
  const auto obs = o.observables();
  std::mt19937_64 rng(seed);
  const int samples = 40;
  Eigen::MatrixXcd features(samples, kNumMoments + 1);
  Eigen::MatrixXcd targets(samples, kNumMoments);
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix x = o.random_low(rng, 2);
    const ComplexMatrix lx = o.apply(x);
    for (int j = 0; j < kNumMoments; ++j) {
      features(s, j) = (obs[j] * x).trace();
      targets(s, j) = (obs[j] * lx).trace();
    }
    features(s, kNumMoments) = x.trace();
  }
  const Eigen::MatrixXcd coef = features.colPivHouseholderQr().solve(targets);
  MomentsSystem out;
  for (int i = 0; i < kNumMoments; ++i) {
    for (int j = 0; j < kNumMoments; ++j) out.m(i, j) = coef(j, i);
    out.b(i) = coef(kNumMoments, i);
  }
  return out;
}

struct RoundTripCase {
  std::string name;
  std::vector<double> x;
  std::vector<double> truth;
  std::vector<double> init;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

inline fit::ModelSettings round_trip_settings() {
  fit::ModelSettings settings;
  settings.slopes = {8e-4, -2e-4, -6e-4};
  return settings;
}

inline std::vector<RoundTripCase> fit_round_trip_cases() {
  return {
      {"linear_zero_intercept", linspace(0.5, 4.0, 8), {13.5}, {10.0}},
      {"linear", linspace(-2.0, 3.0, 9), {0.7, 2.1}, {1.0, 0.0}},
      {"lorentzian", linspace(-5.0, 5.0, 101), {2.0, 0.3, 1.5, 0.2}, {1.5, 0.0, 1.0, 0.0}},
      {"esr_triplet", linspace(-6.0, 6.0, 241), {-0.2, 0.5, 0.3, 0.5, 0.1, 1.0},
       {-0.15, 0.4, 0.35, 0.6, 0.0, 1.0}},
      {"spectrum", linspace(40.0, 120.0, 401), {50.0, 2.0, 9.0, 1.2, 80.0},
       {40.0, 2.5, 8.0, 1.0, 80.3}},
      {"gs_rabi", linspace(0.0, 2000.0, 200), {1.7, 900.0, 150.0}, {1.65, 1000.0, 120.0}},
  };
}

}  // namespace nvcool::test
