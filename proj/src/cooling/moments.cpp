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

#include "nvcool/cooling/moments.hpp"

#include <cmath>
#include <string>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"

namespace nvcool::cooling {

namespace {

constexpr Complex kI{0.0, 1.0};

MomentsColumn to_column(const MomentsVector& m) {
  MomentsColumn c;
  for (int i = 0; i < kNumMoments; ++i) c(i) = m[i];
  return c;
}

MomentsVector to_array(const MomentsColumn& c) {
  MomentsVector m;
  for (int i = 0; i < kNumMoments; ++i) m[i] = c(i);
  return m;
}

double norm(const MomentsColumn& c) { return c.norm(); }

}  // namespace

void CoolingParams::validate() const {
  if (lambda_eff < 0.0 || omega_m < 0.0 || n_th < 0.0 || gamma_perp < 0.0 || gamma_par < 0.0) {
    throw InvalidArgument("CoolingParams: rates, n_th and coupling must be non-negative");
  }
  if (!(quality > 0.0)) throw InvalidArgument("CoolingParams: Q must be positive");
}

double thermal_occupancy(double temperature_k, double omega, bool bose) {
  if (temperature_k < 0.0) throw InvalidArgument("thermal_occupancy: negative temperature");
  if (!(omega > 0.0)) throw InvalidArgument("thermal_occupancy: frequency must be positive");
  if (temperature_k == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_boltzmann * temperature_k);
  return bose ? 1.0 / std::expm1(x) : 1.0 / x;
}

MomentsSystem moments_system(const CoolingParams& p, MomentClosure closure) {
  p.validate();
  const double l = p.lambda_eff;
  const double w = p.omega_m;
  const double g = p.gamma();
  const double gp = p.gamma_perp;
  const double gl = p.gamma_par;
  const double jj_dephasing = closure == MomentClosure::as_printed ? 0.5 * gl : 0.0;
  const Complex mi = -kI * l;
  const Complex pl = kI * l;

  MomentsSystem s;
  auto& m = s.m;
  m.setZero();
  s.b.setZero();

  m(ada, jp_ad) += mi;
  m(ada, jm_a) -= mi;
  m(ada, jp_a) -= mi;
  m(ada, jm_ad) += mi;
  m(ada, ada) -= g;
  s.b(ada) = g * p.n_th;

  m(jpjm, jp_ad) += mi;
  m(jpjm, jm_a) -= mi;
  m(jpjm, jm_ad) -= mi;
  m(jpjm, jp_a) += mi;
  m(jpjm, jpjm) -= gp;

  for (int k : {adad, jpjp, jpjm, ada}) m(jp_ad, k) += pl;
  s.b(jp_ad) = pl;
  m(jp_ad, jp_ad) -= 0.5 * gp + 0.5 * g - 2.0 * kI * w + gl;

  m(jm_ad, ada) += mi;
  m(jm_ad, adad) += mi;
  m(jm_ad, jpjm) -= mi;
  m(jm_ad, jmjm) -= mi;
  m(jm_ad, jm_ad) -= 0.5 * gp + 0.5 * g + gl;

  m(jp_a, ada) += pl;
  m(jp_a, aa) += pl;
  m(jp_a, jpjm) -= pl;
  m(jp_a, jpjp) -= pl;
  m(jp_a, jp_a) -= 0.5 * gp + 0.5 * g + gl;

  for (int k : {aa, jmjm, jpjm, ada}) m(jm_a, k) += mi;
  s.b(jm_a) = mi;
  m(jm_a, jm_a) -= 0.5 * gp + 0.5 * g + 2.0 * kI * w + gl;

  m(jmjm, jm_ad) += 2.0 * mi;
  m(jmjm, jm_a) += 2.0 * mi;
  m(jmjm, jmjm) -= gp + 2.0 * kI * w + jj_dephasing;

  m(jpjp, jp_ad) += 2.0 * pl;
  m(jpjp, jp_a) += 2.0 * pl;
  m(jpjp, jpjp) -= gp - 2.0 * kI * w + jj_dephasing;

  m(adad, jp_ad) += 2.0 * pl;
  m(adad, jm_ad) += 2.0 * pl;
  m(adad, adad) -= g - 2.0 * kI * w;

  m(aa, jp_a) += 2.0 * mi;
  m(aa, jm_a) += 2.0 * mi;
  m(aa, aa) -= g + 2.0 * kI * w;
  return s;
}

MomentsVector moments_rhs(const MomentsVector& m, const CoolingParams& p, MomentClosure closure) {
  const auto s = moments_system(p, closure);
  return to_array(s.m * to_column(m) + s.b);
}

MomentsVector thermal_moments(double n_th) {
  MomentsVector m{};
  m[ada] = n_th;
  return m;
}

SteadyMoments steady_state_moments(const CoolingParams& p, MomentClosure closure) {
  const auto s = moments_system(p, closure);
  Eigen::FullPivLU<MomentsMatrix> lu(s.m);
  lu.setThreshold(1e-14);
  if (!lu.isInvertible()) {
    throw SingularSystem("steady_state_moments: moment system is singular (undamped resonance)");
  }
  const MomentsColumn x = lu.solve(-s.b);
  SteadyMoments out;
  out.m = to_array(x);
  out.n_f = x(ada).real();
  out.imag_residue = std::abs(x(ada).imag());
  if (out.imag_residue > 1e-9 * std::max(p.n_th, 1e-300) && out.imag_residue > 1e-12) {
    throw Error("steady_state_moments: <a^dag a> has an imaginary part of " +
                std::to_string(out.imag_residue));
  }
  return out;
}

MomentsTrajectory evolve_moments(const MomentsVector& m0, const CoolingParams& p, double t_end,
                                 double dt, MomentClosure closure, int record_every) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw InvalidArgument("evolve_moments: bad time grid");
  if (p.omega_m > 0.0 && dt > 0.05 / p.omega_m * (1.0 + 1e-12)) {
    throw InvalidArgument("evolve_moments: dt must resolve 2 omega_m (dt <= 0.05 / omega_m)");
  }
  if (record_every < 1) throw InvalidArgument("evolve_moments: record_every must be >= 1");
  const auto s = moments_system(p, closure);
  auto f = [&](const MomentsColumn& y) -> MomentsColumn { return s.m * y + s.b; };

  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
  MomentsColumn y = to_column(m0);
  double scale = std::max(norm(y), 1.0);
  try {
    scale = std::max(scale, norm(to_column(steady_state_moments(p, closure).m)));
  } catch (const SingularSystem&) {
  }
  const double limit = 1e6 * scale;
  MomentsTrajectory tr;
  tr.t.push_back(0.0);
  tr.m.push_back(m0);
  for (long long i = 1; i <= steps; ++i) {
    const MomentsColumn k1 = f(y);
    const MomentsColumn k2 = f(y + 0.5 * h * k1);
    const MomentsColumn k3 = f(y + 0.5 * h * k2);
    const MomentsColumn k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(norm(y) <= limit)) {
      throw ConvergenceError("evolve_moments: solution grew beyond 1e6 times its scale", norm(y),
                             static_cast<int>(i));
    }
    if (i % record_every == 0 || i == steps) {
      tr.t.push_back(h * static_cast<double>(i));
      tr.m.push_back(to_array(y));
    }
  }
  return tr;
}

}  // namespace nvcool::cooling
