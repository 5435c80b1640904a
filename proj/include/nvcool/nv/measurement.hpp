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

#include "nvcool/linalg/dense.hpp"
#include "nvcool/nv/model.hpp"

namespace nvcool::nv {

/// Dense one-step map exp(hL) ~ I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24 of the
/// classical fourth-order Runge-Kutta scheme for a linear system.
ComplexMatrix rk4_step_map(const ComplexMatrix& liouvillian, double h);

/// Superoperator propagator over time t (us) using RK4 steps no longer than max_step.
ComplexMatrix propagator(const ComplexMatrix& liouvillian, double t, double max_step);

/// (1/3) sum over the ground-state levels.
ComplexMatrix thermal_ground_state();

/// Instantaneous pi-pulse on g0 <-> g-1: rho -> P rho P^T.
ComplexMatrix pi_pulse(const ComplexMatrix& rho);

struct Initialization {
  ComplexMatrix rho0;
  double s_min = 0.0;
  double s_max = 0.0;
};

/// Pulsed-measurement simulator. All methods are const and safe to call concurrently.
class MeasurementModel {
 public:
  static constexpr double kPumpTime = 10.0;   // us
  static constexpr double kRelaxTime = 5.0;   // us
  static constexpr double kDefaultStep = 5e-5;  // us

  explicit MeasurementModel(NvParams p = {}, double max_step_us = kDefaultStep);

  const NvParams& params() const noexcept { return p_; }
  double max_step() const noexcept { return max_step_; }

  /// Evolves rho for t_us under the given drives.
  ComplexMatrix evolve(const ComplexMatrix& rho, const DriveParams& d, double t_us) const;
  /// Free relaxation for 5 us with every drive off.
  ComplexMatrix relax(const ComplexMatrix& rho) const;

  Initialization initialize(double gamma_opt) const;

  /// Normalized re-initialization signal; 1 at tau = 0, 0 when fully re-initialized.
  double s2(double tau_opt_ns, double gamma_opt) const;
  double s2(double tau_opt_ns, double gamma_opt, const Initialization& init) const;

  /// Normalized S2 - S1 with the mechanical drive active during the optical window.
  double driven_population(double tau_opt_ns, const DriveParams& d) const;
  double driven_population(double tau_opt_ns, const DriveParams& d,
                           const Initialization& init) const;

 private:
  NvParams p_;
  double max_step_;
  ComplexMatrix relax_map_;
};

}  // namespace nvcool::nv
