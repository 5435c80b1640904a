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
#include <complex>
#include <vector>

#include <Eigen/Dense>

// Second-moment dynamics of the two-level (bosonized) cooling model. Rates
// and frequencies share one time unit, rad/s unless stated otherwise.
namespace nvcool::cooling {

using Complex = std::complex<double>;

struct CoolingParams {
  double lambda_eff = 0.0;
  double omega_m = 0.0;
  double quality = 1.0;
  double n_th = 0.0;
  double gamma_perp = 0.0;
  double gamma_par = 0.0;

  double gamma() const noexcept { return omega_m / quality; }
  void validate() const;
};

/// n_th = k_B T / (hbar omega), or the Bose-Einstein occupation when `bose` is set.
double thermal_occupancy(double temperature_k, double omega, bool bose = false);

enum Moment : int {
  ada = 0,   // <a^dag a>
  jpjm = 1,  // <J+ J->
  jp_ad = 2, // <J+ a^dag>
  jm_ad = 3, // <J- a^dag>
  jp_a = 4,  // <J+ a>
  jm_a = 5,  // <J- a>
  jmjm = 6,  // <J- J->
  jpjp = 7,  // <J+ J+>
  adad = 8,  // <a^dag a^dag>
  aa = 9,    // <a a>
};
inline constexpr int kNumMoments = 10;

using MomentsVector = std::array<Complex, kNumMoments>;
using MomentsMatrix = Eigen::Matrix<Complex, kNumMoments, kNumMoments>;
using MomentsColumn = Eigen::Matrix<Complex, kNumMoments, 1>;

/// Coefficient of Gamma_par in the J-J- and J+J+ equations: `derived` uses
/// the value that follows from the master equation, `as_printed` uses 1/2.
enum class MomentClosure { derived, as_printed };

/// d m / dt = M m + b.
struct MomentsSystem {
  MomentsMatrix m;
  MomentsColumn b;
};

MomentsSystem moments_system(const CoolingParams& p, MomentClosure closure = MomentClosure::derived);

MomentsVector moments_rhs(const MomentsVector& m, const CoolingParams& p,
                          MomentClosure closure = MomentClosure::derived);

/// Thermal fixed point of the uncoupled system: <a^dag a> = n_th, rest zero.
MomentsVector thermal_moments(double n_th);

struct SteadyMoments {
  double n_f = 0.0;
  MomentsVector m{};
  double imag_residue = 0.0;
};

/// Solves M m = -b. Throws SingularSystem for an undamped system.
SteadyMoments steady_state_moments(const CoolingParams& p,
                                   MomentClosure closure = MomentClosure::derived);

struct MomentsTrajectory {
  std::vector<double> t;
  std::vector<MomentsVector> m;
};

/// Fixed-step RK4 from m0 to t_end recording every `record_every` steps (and
/// the end point). Requires dt <= 0.05 / omega_m when omega_m > 0.
MomentsTrajectory evolve_moments(const MomentsVector& m0, const CoolingParams& p, double t_end,
                                 double dt, MomentClosure closure = MomentClosure::derived,
                                 int record_every = 1);

}  // namespace nvcool::cooling
