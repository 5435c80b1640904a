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

#include "nvcool/nv/measurement.hpp"

#include <cmath>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"

namespace nvcool::nv {

using linalg::ComplexVector;

namespace {

ComplexMatrix dense_liouvillian(const NvParams& p, const DriveParams& d) {
  return build_nv_liouvillian(p, d).to_dense();
}

double contrast(double value, const Initialization& init) {
  const double span = init.s_max - init.s_min;
  if (!(std::abs(span) > 1e-300)) {
    throw InvalidArgument("measurement: initialization produced no spin contrast (gamma_opt = 0?)");
  }
  return (value - init.s_min) / span;
}

}  // namespace

ComplexMatrix rk4_step_map(const ComplexMatrix& liouvillian, double h) {
  const auto n = liouvillian.rows();
  const ComplexMatrix x = h * liouvillian;
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  ComplexMatrix out = term;
  for (int k = 1; k <= 4; ++k) {
    term = (term * x / static_cast<double>(k)).eval();
    out += term;
  }
  return out;
}

ComplexMatrix propagator(const ComplexMatrix& liouvillian, double t, double max_step) {
  if (t < 0.0) throw InvalidArgument("propagator: negative evolution time");
  if (!(max_step > 0.0)) throw InvalidArgument("propagator: step must be positive");
  const auto n = liouvillian.rows();
  if (t == 0.0) return ComplexMatrix::Identity(n, n);
  const auto steps = static_cast<long long>(std::ceil(t / max_step - 1e-9));
  const ComplexMatrix step = rk4_step_map(liouvillian, t / static_cast<double>(steps));
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix base = step;
  for (long long e = steps; e > 0; e >>= 1) {
    if (e & 1) result = (result * base).eval();
    if (e > 1) base = (base * base).eval();
  }
  return result;
}

ComplexMatrix thermal_ground_state() {
  ComplexMatrix rho = ComplexMatrix::Zero(kNumLevels, kNumLevels);
  for (int g : {g_plus, g_zero, g_minus}) rho(g, g) = 1.0 / 3.0;
  return rho;
}

ComplexMatrix pi_pulse(const ComplexMatrix& rho) {
  ComplexMatrix out = rho;
  out.row(g_zero).swap(out.row(g_minus));
  out.col(g_zero).swap(out.col(g_minus));
  return out;
}

MeasurementModel::MeasurementModel(NvParams p, double max_step_us)
    : p_(std::move(p)), max_step_(max_step_us) {
  p_.validate();
  if (!(max_step_ > 0.0)) throw InvalidArgument("MeasurementModel: step must be positive");
  relax_map_ = propagator(dense_liouvillian(p_, {}), kRelaxTime, max_step_);
}

ComplexMatrix MeasurementModel::evolve(const ComplexMatrix& rho, const DriveParams& d,
                                       double t_us) const {
  const ComplexMatrix u = propagator(dense_liouvillian(p_, d), t_us, max_step_);
  return linalg::devectorize(u * linalg::vectorize(rho), kNumLevels);
}

ComplexMatrix MeasurementModel::relax(const ComplexMatrix& rho) const {
  return linalg::devectorize(relax_map_ * linalg::vectorize(rho), kNumLevels);
}

Initialization MeasurementModel::initialize(double gamma_opt) const {
  if (gamma_opt < 0.0) throw InvalidArgument("initialize: pumping rate must be non-negative");
  DriveParams pump;
  pump.gamma_opt = gamma_opt;
  ComplexMatrix rho = thermal_ground_state();
  if (gamma_opt > 0.0) rho = relax(evolve(rho, pump, kPumpTime));
  Initialization init;
  init.rho0 = pi_pulse(rho);
  init.s_min = init.rho0(g_zero, g_zero).real();
  init.s_max = init.rho0(g_minus, g_minus).real();
  return init;
}

double MeasurementModel::s2(double tau_opt_ns, double gamma_opt) const {
  return s2(tau_opt_ns, gamma_opt, initialize(gamma_opt));
}

double MeasurementModel::s2(double tau_opt_ns, double gamma_opt, const Initialization& init) const {
  if (tau_opt_ns < 0.0) throw InvalidArgument("s2: tau_opt must be non-negative");
  DriveParams pump;
  pump.gamma_opt = gamma_opt;
  const ComplexMatrix rho2 = relax(evolve(init.rho0, pump, tau_opt_ns / constants::ns_per_us));
  return contrast(rho2(g_minus, g_minus).real(), init);
}

double MeasurementModel::driven_population(double tau_opt_ns, const DriveParams& d) const {
  return driven_population(tau_opt_ns, d, initialize(d.gamma_opt));
}

double MeasurementModel::driven_population(double tau_opt_ns, const DriveParams& d,
                                           const Initialization& init) const {
  if (tau_opt_ns < 0.0) throw InvalidArgument("driven_population: tau_opt must be non-negative");
  const double t = tau_opt_ns / constants::ns_per_us;
  DriveParams pump;
  pump.gamma_opt = d.gamma_opt;
  const ComplexMatrix rho2 = relax(evolve(init.rho0, pump, t));
  DriveParams driven = d;
  driven.omega_mag_mhz = 0.0;
  const ComplexMatrix rho1 = relax(evolve(init.rho0, driven, t));
  const double span = init.s_max - init.s_min;
  if (!(std::abs(span) > 1e-300)) {
    throw InvalidArgument("driven_population: initialization produced no spin contrast");
  }
  return (rho2(g_minus, g_minus).real() - rho1(g_minus, g_minus).real()) / span;
}

}  // namespace nvcool::nv
