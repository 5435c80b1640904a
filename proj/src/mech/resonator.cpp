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

#include "nvcool/mech/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"
#include "nvcool/numerics/quadrature.hpp"

namespace nvcool::mech {

using constants::pi;

namespace {

double sign_of(ResonatorKind kind) { return kind == ResonatorKind::beam ? 1.0 : -1.0; }

// cos x - s sech x; same roots as cos x cosh x - s without the overflow.
double root_function(double x, double s) { return std::cos(x) - s / std::cosh(x); }
double root_derivative(double x, double s) {
  return -std::sin(x) + s * std::tanh(x) / std::cosh(x);
}

// r - 1 for r = a/b, written so that the cancellation between sinh and cosh
// is done analytically.
double ratio_minus_one(ResonatorKind kind, double x) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double decay = std::exp(-x);
  if (kind == ResonatorKind::beam) return (s - c + decay) / (c - std::cosh(x));
  return (s - c - decay) / (c + std::cosh(x));
}

struct Shape {
  double k;     // 1/um
  double rinv;  // b/a
  double dm;    // (r - 1)/r
  double dp;    // (r + 1)/r
};

Shape make_shape(ResonatorKind kind, double kl, double l_um) {
  const double rm1 = ratio_minus_one(kind, kl);
  const double r = 1.0 + rm1;
  return {kl / l_um, 1.0 / r, rm1 / r, (r + 1.0) / r};
}

// d^order/dz^order of the unit-amplitude shape.
double phi(const Shape& sh, double z, int order) {
  const double x = sh.k * z;
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double ep = sh.dm == 0.0 ? 0.0 : sh.dm * std::exp(x);
  const double em = sh.dp * std::exp(-x);
  const double even = -0.5 * (ep + em);
  const double odd = -0.5 * (ep - em);
  switch (order) {
    case 0:
      return c - sh.rinv * s + even;
    case 1:
      return sh.k * (-s - sh.rinv * c + odd);
    case 2:
      return sh.k * sh.k * (-c + sh.rinv * s + even);
    case 3:
      return sh.k * sh.k * sh.k * (s + sh.rinv * c + odd);
    default:
      throw InvalidArgument("mode shape derivative order must be 0..3");
  }
}

double wave_speed(double youngs_gpa, double density_g_cm3) {
  return std::sqrt(youngs_gpa * constants::pa_per_gpa /
                   (12.0 * density_g_cm3 * constants::kg_m3_per_g_cm3));
}

double integrate_curvature_squared(const Shape& sh, double l_um, int per_panel) {
  // Panels of one wavelength keep the oscillatory part well resolved.
  const int panels = std::max(1, static_cast<int>(std::ceil(sh.k * l_um / pi)));
  std::vector<double> breaks;
  for (int p = 1; p < panels; ++p) breaks.push_back(l_um * p / panels);
  const auto rule = numerics::composite_gauss_legendre(0.0, l_um, breaks, per_panel);
  return numerics::integrate(rule, [&](double z) {
    const double v = phi(sh, z, 2);
    return v * v;
  });
}

}  // namespace

std::string to_string(ResonatorKind kind) {
  return kind == ResonatorKind::beam ? "beam" : "cantilever";
}

ResonatorKind parse_kind(const std::string& name) {
  if (name == "beam") return ResonatorKind::beam;
  if (name == "cantilever") return ResonatorKind::cantilever;
  throw InvalidArgument("unknown resonator kind '" + name + "' (expected beam or cantilever)");
}

void ResonatorGeometry::validate() const {
  if (!(l > 0.0) || !(t > 0.0) || !(w > 0.0)) {
    throw InvalidArgument("geometry: l, t and w must be positive");
  }
  if (!(t < l)) throw InvalidArgument("geometry: thickness must be smaller than length");
  if (!(youngs_gpa > 0.0) || !(density_g_cm3 > 0.0)) {
    throw InvalidArgument("geometry: E and density must be positive");
  }
  if (mode_index < 0) throw InvalidArgument("geometry: mode index must be non-negative");
}

double mode_wavevector(ResonatorKind kind, int n) {
  if (n < 0) throw InvalidArgument("mode_wavevector: n must be non-negative");
  const double s = sign_of(kind);
  const double shift = kind == ResonatorKind::beam ? 1.0 : 0.0;
  double lo = (n + shift + 0.25) * pi;
  double hi = (n + shift + 0.75) * pi;
  double flo = root_function(lo, s);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = root_function(mid, s);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double dx = root_function(x, s) / root_derivative(x, s);
    x -= dx;
    if (std::abs(dx) < 1e-15 * x) break;
  }
  return x;
}

double amplitude_ratio(ResonatorKind kind, int n) {
  return 1.0 + ratio_minus_one(kind, mode_wavevector(kind, n));
}

double ModeSolution::displacement(double z_um, int order) const {
  const Shape sh = make_shape(kind, kl, length);
  return a * phi(sh, z_um, order);
}

double kappa(ResonatorKind kind, int n, double youngs_gpa, double density_g_cm3) {
  const double kl = mode_wavevector(kind, n);
  return kl * kl * wave_speed(youngs_gpa, density_g_cm3);
}

double eigenfrequency(const ResonatorGeometry& g) {
  g.validate();
  const double l = g.l * constants::m_per_um;
  const double t = g.t * constants::m_per_um;
  const double w = g.w * constants::m_per_um;
  const double k = mode_wavevector(g.kind, g.mode_index) / l;
  const double e = g.youngs_gpa * constants::pa_per_gpa;
  const double rho = g.density_g_cm3 * constants::kg_m3_per_g_cm3;
  const double inertia = w * t * t * t / 12.0;
  const double direct = k * k * std::sqrt(e * inertia / (rho * w * t));
  const double scaled = kappa(g.kind, g.mode_index, g.youngs_gpa, g.density_g_cm3) * t / (l * l);
  if (std::abs(direct - scaled) > 1e-12 * direct) {
    throw Error("eigenfrequency: the two frequency forms disagree");
  }
  return direct;
}

ModeSolution mode_shape(const ResonatorGeometry& g) {
  g.validate();
  ModeSolution m;
  m.kind = g.kind;
  m.kl = mode_wavevector(g.kind, g.mode_index);
  m.length = g.l;
  m.k = m.kl / g.l;
  m.omega = eigenfrequency(g);
  const double l = g.l * constants::m_per_um;
  const double t = g.t * constants::m_per_um;
  const double w = g.w * constants::m_per_um;
  const double e = g.youngs_gpa * constants::pa_per_gpa;
  const double inertia = w * t * t * t / 12.0;
  const double k = m.kl / l;
  const double a_m = std::sqrt(constants::hbar * m.omega / (e * inertia * std::pow(k, 4) * l));
  m.a = a_m / constants::m_per_um;
  m.b = m.a / (1.0 + ratio_minus_one(g.kind, m.kl));

  const Shape sh = make_shape(g.kind, m.kl, g.l);
  // int (u'')^2 dz in SI: a^2 [m^2] * (phi'' in 1/um^2)^2 * dz [um] -> m^2 m^-4 m.
  const double curvature = integrate_curvature_squared(sh, g.l, 48) * a_m * a_m *
                           std::pow(constants::m_per_um, -3);
  m.energy_ratio = 0.5 * e * inertia * curvature / (0.5 * constants::hbar * m.omega);
  return m;
}

double zero_point_strain(const ResonatorGeometry& g, const ModeSolution& m, double y_um,
                         double z_um) {
  if (std::abs(y_um) > 0.5 * g.t * (1.0 + 1e-12) || z_um < -1e-12 * g.l ||
      z_um > g.l * (1.0 + 1e-12)) {
    throw InvalidArgument("zero_point_strain: (y, z) outside the resonator");
  }
  // u'' carries um^-1; times y in um gives a dimensionless strain.
  return -y_um * m.displacement(z_um, 2);
}

double zero_point_strain(const ResonatorGeometry& g, double y_um, double z_um) {
  return zero_point_strain(g, mode_shape(g), y_um, z_um);
}

LambdaEffResult lambda_eff(const ResonatorGeometry& g, double rho_nv_cm3, double alpha,
                           double d_perp_ghz) {
  if (rho_nv_cm3 < 0.0 || alpha < 0.0) {
    throw InvalidArgument("lambda_eff: density and alpha must be non-negative");
  }
  const ModeSolution m = mode_shape(g);
  const double d = constants::ghz_to_rad_per_s(d_perp_ghz);
  const double rho = rho_nv_cm3 * constants::per_m3_per_per_cm3;
  const double w = g.w * constants::m_per_um;

  auto strain_integral = [&](int n) {
    const auto ry = numerics::gauss_legendre(n, -0.5 * g.t, 0.5 * g.t);
    const auto rz = numerics::gauss_legendre(n, 0.0, g.l);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double curv = m.displacement(rz.nodes[i], 2);
      double inner = 0.0;
      for (int j = 0; j < n; ++j) {
        const double eps = -ry.nodes[j] * curv;
        inner += ry.weights[j] * eps * eps;
      }
      s += rz.weights[i] * inner;
    }
    return s * constants::m_per_um * constants::m_per_um;
  };

  LambdaEffResult out;
  int n = 32;
  double prev = strain_integral(n);
  double cur = prev;
  while (true) {
    n *= 2;
    cur = strain_integral(n);
    if (std::abs(cur - prev) <= 1e-3 * std::abs(cur)) break;
    if (n >= 1024) {
      throw ConvergenceError("lambda_eff: strain quadrature did not settle", std::abs(cur - prev),
                             n);
    }
    prev = cur;
  }
  out.points = n;
  out.quadrature = d * std::sqrt(alpha * rho * w * cur);

  const double k0 = kappa(g.kind, g.mode_index, g.youngs_gpa, g.density_g_cm3);
  const double e = g.youngs_gpa * constants::pa_per_gpa;
  const double g0 = d * std::sqrt(constants::hbar * k0 * alpha * rho / e);
  out.closed_form = g0 * std::sqrt(g.t * constants::m_per_um) / (g.l * constants::m_per_um);
  return out;
}

std::vector<double> higher_mode_frequencies(const ResonatorGeometry& g, int n_max) {
  if (n_max < 1) throw InvalidArgument("higher_mode_frequencies: n_max must be at least 1");
  std::vector<double> out;
  ResonatorGeometry h = g;
  for (int n = 0; n <= n_max; ++n) {
    h.mode_index = n;
    out.push_back(eigenfrequency(h));
  }
  return out;
}

Design design_for_frequency(double omega, ResonatorKind kind, double aspect, double youngs_gpa,
                            double density_g_cm3) {
  if (!(omega > 0.0)) throw InvalidArgument("design_for_frequency: omega must be positive");
  if (!(aspect > 0.0) || !(aspect < 1.0)) {
    throw InvalidArgument("design_for_frequency: aspect ratio must lie in (0, 1)");
  }
  Design d;
  const double l = kappa(kind, 0, youngs_gpa, density_g_cm3) * aspect / omega;
  d.l = l / constants::m_per_um;
  d.t = aspect * d.l;
  d.slender_warning = aspect >= 0.6;
  return d;
}

void write_mode_table(std::ostream& os, const ResonatorGeometry& g, int points) {
  if (points < 2) throw InvalidArgument("write_mode_table: need at least two points");
  const ModeSolution m = mode_shape(g);
  os << "z_um,u_um,u2_per_um,eps0_top\n";
  os.precision(12);
  for (int i = 0; i < points; ++i) {
    const double z = g.l * i / (points - 1);
    const double u2 = m.displacement(z, 2);
    os << z << ',' << m.displacement(z, 0) << ',' << u2 << ',' << -0.5 * g.t * u2 << '\n';
  }
}

}  // namespace nvcool::mech
