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

#include <iosfwd>
#include <string>
#include <vector>

// Euler-Bernoulli flexural modes of a doubly-clamped beam or a cantilever.
// Geometry is quoted in um, E in GPa and density in g/cm^3; results are SI
// unless a name says otherwise.
namespace nvcool::mech {

enum class ResonatorKind { beam, cantilever };

std::string to_string(ResonatorKind kind);
ResonatorKind parse_kind(const std::string& name);

struct ResonatorGeometry {
  ResonatorKind kind = ResonatorKind::beam;
  double l = 3.3;
  double t = 1.6;
  double w = 1.0;
  double youngs_gpa = 1200.0;
  double density_g_cm3 = 3.515;
  int mode_index = 0;

  /// Throws on non-positive sizes or t >= l.
  void validate() const;
  /// True above the slender-body bound t/l > 0.6.
  bool slender_warning() const noexcept { return t / l > 0.6; }
};

/// n-th positive root (n = 0, 1, ...) of cos(x) cosh(x) = -1 (cantilever)
/// or +1 (beam, x = 0 excluded).
double mode_wavevector(ResonatorKind kind, int n);

/// a_n / b_n of u = a (cos kz - cosh kz) - b (sin kz - sinh kz).
double amplitude_ratio(ResonatorKind kind, int n);

struct ModeSolution {
  ResonatorKind kind = ResonatorKind::beam;
  double kl = 0.0;
  double k = 0.0;       // 1/um
  double a = 0.0;       // um
  double b = 0.0;       // um
  double omega = 0.0;   // rad/s
  double length = 0.0;  // um
  /// (1/2) E I int (u'')^2 dz divided by hbar omega / 2.
  double energy_ratio = 0.0;

  /// Derivative of order `order` (0..3) of u at z (um), in um^(1-order).
  double displacement(double z_um, int order = 0) const;
};

ModeSolution mode_shape(const ResonatorGeometry& g);

/// kappa_n = (k_n l)^2 sqrt(E / 12 rho) in m/s (numerically GHz*um times 1e3).
double kappa(ResonatorKind kind, int n, double youngs_gpa = 1200.0, double density_g_cm3 = 3.515);

/// Fundamental (or mode_index) angular frequency, both forms cross-checked.
double eigenfrequency(const ResonatorGeometry& g);

/// Strain -y u''(z) of the zero-point-normalized mode; y and z in um.
double zero_point_strain(const ResonatorGeometry& g, double y_um, double z_um);
double zero_point_strain(const ResonatorGeometry& g, const ModeSolution& m, double y_um,
                         double z_um);

struct LambdaEffResult {
  double quadrature = 0.0;   // rad/s
  double closed_form = 0.0;  // rad/s
  int points = 0;
};

/// Collective coupling d sqrt(alpha rho w int int eps0^2 dy dz) by doubling
/// Gauss-Legendre quadrature, plus the closed form sqrt(hbar omega / E) form.
/// rho in cm^-3, d_perp as nu in GHz per unit strain.
LambdaEffResult lambda_eff(const ResonatorGeometry& g, double rho_nv_cm3, double alpha,
                           double d_perp_ghz);

/// Angular frequencies of modes 0..n_max.
std::vector<double> higher_mode_frequencies(const ResonatorGeometry& g, int n_max);

struct Design {
  double l = 0.0;
  double t = 0.0;
  bool slender_warning = false;
};

/// (l, t) in um with t = aspect * l and kappa_0 t / l^2 = omega.
Design design_for_frequency(double omega, ResonatorKind kind, double aspect,
                            double youngs_gpa = 1200.0, double density_g_cm3 = 3.515);

/// CSV table z, u, u'', eps0 at y = t/2 (um, um, 1/um, dimensionless).
void write_mode_table(std::ostream& os, const ResonatorGeometry& g, int points = 101);

}  // namespace nvcool::mech
