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

#include "nvcool/nv/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"
#include "nvcool/numerics/quadrature.hpp"
#include "nvcool/parallel.hpp"

namespace nvcool::nv {

using constants::pi;

void EnsembleProfile::validate() const {
  if (!(gamma0 >= 0.0)) throw InvalidArgument("ensemble: gamma0 must be non-negative");
  if (!(kappa_psf > 0.0)) throw InvalidArgument("ensemble: kappa_psf must be positive");
  if (!(lambda_strain > 0.0)) throw InvalidArgument("ensemble: lambda_strain must be positive");
  if (n_z < 50) throw InvalidArgument("ensemble: n_z must be at least 50");
  if (!(z_max > z0)) {
    throw InvalidArgument("ensemble: z_max must exceed the focus depth z0");
  }
}

double EnsembleProfile::pumping_rate(double z) const {
  const double x = kappa_psf * (z - z0);
  if (std::abs(x) < 1e-8) return gamma0;
  const double s = std::sin(x) / x;
  return gamma0 * s * s;
}

double EnsembleProfile::strain_factor(double z) const {
  return std::abs(std::sin(2.0 * pi * z / lambda_strain));
}

PsfGrid make_psf_grid(const EnsembleProfile& prof) {
  prof.validate();
  std::vector<double> breaks;
  const double half = 0.5 * prof.lambda_strain;
  for (double z = half; z < prof.z_max; z += half) breaks.push_back(z);
  const double lobe = pi / prof.kappa_psf;
  for (double m : {-4.0, -1.0, 0.0, 1.0, 4.0}) breaks.push_back(prof.z0 + m * lobe);
  // Count panels first so the total node count tracks n_z.
  auto probe = numerics::composite_gauss_legendre(0.0, prof.z_max, breaks, 1);
  const int panels = static_cast<int>(probe.nodes.size());
  const int per_panel = std::max(8, (prof.n_z + panels - 1) / panels);
  const auto rule = numerics::composite_gauss_legendre(0.0, prof.z_max, breaks, per_panel);

  PsfGrid g;
  g.z = rule.nodes;
  g.weight.resize(g.z.size());
  g.gamma_opt.resize(g.z.size());
  g.strain_factor.resize(g.z.size());
  for (std::size_t i = 0; i < g.z.size(); ++i) {
    g.gamma_opt[i] = prof.pumping_rate(g.z[i]);
    g.strain_factor[i] = prof.strain_factor(g.z[i]);
    g.weight[i] = rule.weights[i] * g.gamma_opt[i];
    g.norm += g.weight[i];
  }
  return g;
}

double psf_average(const EnsembleSignal& signal, const EnsembleProfile& prof, double omega0_mhz,
                   int threads) {
  const PsfGrid g = make_psf_grid(prof);
  if (!(g.norm > 0.0)) throw InvalidArgument("psf_average: PSF has zero weight");
  std::vector<double> values(g.z.size(), 0.0);
  parallel_for(static_cast<std::int64_t>(g.z.size()), threads, [&](std::int64_t i) {
    if (g.weight[i] != 0.0) values[i] = signal(g.gamma_opt[i], omega0_mhz * g.strain_factor[i]);
  });
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += g.weight[i] * values[i];
  return s / g.norm;
}

double hyperfine_sum(const std::function<double(double)>& p, double a_plus, double a_zero,
                     double a_minus, double a_par_mhz) {
  if (a_plus < 0.0 || a_zero < 0.0 || a_minus < 0.0) {
    throw InvalidArgument("hyperfine_sum: weights must be non-negative");
  }
  if (std::abs(a_plus + a_zero + a_minus - 1.0) > 1e-9) {
    throw InvalidArgument("hyperfine_sum: weights must sum to 1");
  }
  return a_plus * p(0.0) + a_zero * p(a_par_mhz) + a_minus * p(2.0 * a_par_mhz);
}

}  // namespace nvcool::nv
