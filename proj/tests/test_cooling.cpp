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

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "nvcool/constants.hpp"
#include "nvcool/cooling/curve.hpp"
#include "nvcool/cooling/full_system.hpp"
#include "nvcool/cooling/moments.hpp"
#include "nvcool/error.hpp"
#include "nvcool/nv/model.hpp"
#include "nvcool/solver/steady_state.hpp"
#include "oracles.hpp"

using namespace nvcool;
using namespace nvcool::cooling;
using linalg::ComplexMatrix;
using test::brute_force_system;
using test::kron2;

namespace {

CoolingParams sample_params() {
  CoolingParams p;
  p.lambda_eff = 0.37;
  p.omega_m = 1.3;
  p.quality = 2.0;
  p.n_th = 1.7;
  p.gamma_perp = 0.9;
  p.gamma_par = 0.45;
  return p;
}

double slowest_decay(const CoolingParams& p) {
  const auto s = moments_system(p);
  Eigen::ComplexEigenSolver<MomentsMatrix> es(s.m);
  double rate = 1e300;
  for (int i = 0; i < kNumMoments; ++i) rate = std::min(rate, -es.eigenvalues()(i).real());
  return rate;
}

ComplexMatrix nv_steady_state(const nv::NvParams& p, const nv::DriveParams& d) {
  const ComplexMatrix a = nv::build_nv_liouvillian(p, d).to_dense();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a);
  Eigen::Index k = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&k);
  ComplexMatrix rho = linalg::devectorize(es.eigenvectors().col(k), nv::kNumLevels);
  rho /= rho.trace();
  return rho;
}

}  // namespace

TEST_CASE("moment equations match the bosonized brute-force derivation") {
  for (auto p : {sample_params(), [] {
         auto q = sample_params();
         q.lambda_eff = 0.0;
         q.gamma_par = 1.1;
         q.quality = 7.0;
         return q;
       }()}) {
    const auto want = brute_force_system(p, 99);
    const auto got = moments_system(p, MomentClosure::derived);
    for (int i = 0; i < kNumMoments; ++i) {
      CAPTURE(i);
      for (int j = 0; j < kNumMoments; ++j) {
        CAPTURE(j);
        CHECK(std::abs(got.m(i, j) - want.m(i, j)) < 1e-9);
      }
      CHECK(std::abs(got.b(i) - want.b(i)) < 1e-9);
    }
  }
  SUBCASE("the printed closure differs only in the J J dephasing") {
    const auto p = sample_params();
    const auto d = moments_system(p, MomentClosure::derived);
    const auto q = moments_system(p, MomentClosure::as_printed);
    MomentsMatrix diff = q.m - d.m;
    CHECK(std::abs(diff(jmjm, jmjm) + 0.5 * p.gamma_par) < 1e-15);
    CHECK(std::abs(diff(jpjp, jpjp) + 0.5 * p.gamma_par) < 1e-15);
    diff(jmjm, jmjm) = 0.0;
    diff(jpjp, jpjp) = 0.0;
    CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("moments rhs examples") {
  CoolingParams p = sample_params();
  p.lambda_eff = 0.0;
  for (auto v : moments_rhs(thermal_moments(p.n_th), p)) CHECK(std::abs(v) < 1e-15);
  const auto r = moments_rhs(thermal_moments(0.0), p);
  CHECK(r[ada].real() == doctest::Approx(p.gamma() * p.n_th));
}

TEST_CASE("moments rhs preserves conjugate pairs") {
  const auto p = sample_params();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  auto c = [&] { return Complex(n(rng), n(rng)); };
  for (int trial = 0; trial < 20; ++trial) {
    MomentsVector m{};
    m[ada] = std::abs(n(rng));
    m[jpjm] = std::abs(n(rng));
    m[jp_ad] = c();
    m[jm_a] = std::conj(m[jp_ad]);
    m[jm_ad] = c();
    m[jp_a] = std::conj(m[jm_ad]);
    m[jpjp] = c();
    m[jmjm] = std::conj(m[jpjp]);
    m[adad] = c();
    m[aa] = std::conj(m[adad]);
    for (auto closure : {MomentClosure::derived, MomentClosure::as_printed}) {
      const auto r = moments_rhs(m, p, closure);
      CHECK(std::abs(r[aa] - std::conj(r[adad])) < 1e-14);
      CHECK(std::abs(r[jm_a] - std::conj(r[jp_ad])) < 1e-14);
      CHECK(std::abs(r[jmjm] - std::conj(r[jpjp])) < 1e-14);
      CHECK(std::abs(r[jp_a] - std::conj(r[jm_ad])) < 1e-14);
      CHECK(std::abs(r[ada].imag()) < 1e-14);
      CHECK(std::abs(r[jpjm].imag()) < 1e-14);
    }
  }
}

TEST_CASE("steady-state moments") {
  CoolingParams p = sample_params();
  p.lambda_eff = 0.0;
  CHECK(steady_state_moments(p).n_f == p.n_th);

  p = sample_params();
  const auto s = steady_state_moments(p);
  CHECK(s.n_f < p.n_th);
  CHECK(s.n_f > 0.0);
  CHECK(s.m[jpjm].real() >= 0.0);
  CHECK(s.imag_residue < 1e-9 * p.n_th);
  for (double v : {0.0, 1e-3}) {
    CoolingParams u;
    u.omega_m = 1.0;
    u.quality = 1e300;
    u.lambda_eff = v;
    CHECK_THROWS_AS(steady_state_moments(u), SingularSystem);
  }
  CoolingParams bad;
  bad.gamma_perp = -1.0;
  CHECK_THROWS_AS(steady_state_moments(bad), InvalidArgument);
}

TEST_CASE("moment trajectories") {
  SUBCASE("steady state is a fixed point") {
    CoolingParams p = sample_params();
    const auto ss = steady_state_moments(p);
    const double tau = 1.0 / slowest_decay(p);
    const auto tr = evolve_moments(ss.m, p, tau, 0.05 / p.omega_m);
    CHECK(std::abs(tr.m.back()[ada] - ss.m[ada]) < 1e-9 * ss.n_f);
  }
  SUBCASE("free relaxation follows the analytic exponential") {
    CoolingParams p = sample_params();
    p.lambda_eff = 0.0;
    const auto tr = evolve_moments(thermal_moments(0.0), p, 5.0, 0.01);
    for (std::size_t i = 0; i < tr.t.size(); i += 50) {
      const double want = p.n_th * (1.0 - std::exp(-p.gamma() * tr.t[i]));
      CHECK(tr.m[i][ada].real() == doctest::Approx(want).epsilon(1e-10));
    }
  }
  SUBCASE("3x3 grid approaches the linear-solve steady state") {
    for (double lambda : {0.02, 0.05, 0.1}) {
      for (double q : {20.0, 50.0, 100.0}) {
        CoolingParams p;
        p.omega_m = 1.0;
        p.quality = q;
        p.lambda_eff = lambda;
        p.n_th = 3.0;
        p.gamma_perp = 0.3;
        p.gamma_par = 0.2;
        const double tau = 1.0 / slowest_decay(p);
        const auto tr = evolve_moments(thermal_moments(p.n_th), p, 20.0 * tau, 0.05, MomentClosure::derived,
                                       1000000);
        const double want = steady_state_moments(p).n_f;
        CHECK(tr.m.back()[ada].real() == doctest::Approx(want).epsilon(1e-6));
      }
    }
  }
  SUBCASE("time step must resolve the counter-rotating phase") {
    CHECK_THROWS_AS(evolve_moments(thermal_moments(1.0), sample_params(), 1.0, 0.1), InvalidArgument);
  }
  SUBCASE("parametric instability is detected") {
    CoolingParams p;
    p.omega_m = 1.0;
    p.lambda_eff = 2.0;
    p.quality = 1e4;
    p.n_th = 1.0;
    p.gamma_perp = 1e-3;
    CHECK_THROWS_AS(evolve_moments(thermal_moments(1.0), p, 500.0, 0.05), ConvergenceError);
  }
}

TEST_CASE("thermal occupancy") {
  const double w = constants::ghz_to_rad_per_s(2.9);
  const double n = thermal_occupancy(300.0, w);
  CHECK(n == doctest::Approx(1.380649e-23 * 300.0 / (1.054571817e-34 * w)).epsilon(1e-15));
  CHECK(std::abs(n - 2155.5) < 0.5);
  CHECK(thermal_occupancy(600.0, w) == doctest::Approx(2.0 * n).epsilon(1e-15));
  CHECK(thermal_occupancy(0.0, w, true) == 0.0);
  CHECK(thermal_occupancy(300.0, w, true) == doctest::Approx(n - 0.5).epsilon(1e-6));
  CHECK_THROWS_AS(thermal_occupancy(-1.0, w), InvalidArgument);
}

TEST_CASE("cooling curve") {
  CurveConfig cfg;
  cfg.densities_cm3 = log_grid(1e15, 1e21, 50);
  cfg.threads = 4;
  const auto t0 = std::chrono::steady_clock::now();
  const CoolingCurve c = cooling_curve(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 60.0);
  CHECK(c.rows.size() == 4 * (50 + 3));
  CHECK(std::abs(constants::rad_per_s_to_ghz(c.omega_m) - 2.9) < 1e-9);
  CHECK(c.n_th == doctest::Approx(thermal_occupancy(300.0, c.omega_m)));
  CHECK(std::abs(c.alpha - 0.017) <= 0.002);

  int annotated = 0;
  for (const auto& r : c.rows) {
    CHECK(r.ratio > 0.0);
    CHECK(r.ratio <= 1.0);
    if (!r.annotation.empty()) ++annotated;
    if (r.density_cm3 == 1.1e18 && r.quality == 2e6) {
      CHECK(std::abs(r.ratio - 0.92) <= 0.02);
      CHECK(r.annotation == "single-crystal");
    }
  }
  CHECK(annotated == 12);

  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    const auto& a = c.rows[i - 1];
    const auto& b = c.rows[i];
    if (a.quality == b.quality) {
      CHECK(b.density_cm3 > a.density_cm3);
      CHECK(b.ratio <= a.ratio);
    }
  }
  const std::size_t per_q = c.rows.size() / 4;
  for (std::size_t k = 1; k < 4; ++k) {
    for (std::size_t i = 0; i < per_q; ++i) {
      const auto& lo = c.rows[(k - 1) * per_q + i];
      const auto& hi = c.rows[k * per_q + i];
      REQUIRE(lo.density_cm3 == hi.density_cm3);
      CHECK(hi.quality > lo.quality);
      CHECK(hi.ratio <= lo.ratio);
    }
  }
  SUBCASE("vanishing density approaches the thermal value") {
    CurveConfig small = cfg;
    small.densities_cm3 = {1e6};
    small.include_reference = false;
    for (const auto& r : cooling_curve(small).rows) CHECK(r.ratio > 1.0 - 1e-9);
  }
  SUBCASE("zero coupling override gives exactly n_th") {
    CurveConfig zero = cfg;
    zero.densities_cm3 = {1e18};
    zero.include_reference = false;
    zero.lambda_override = 0.0;
    for (const auto& r : cooling_curve(zero).rows) {
      CHECK(r.n_f == c.n_th);
      CHECK(r.ratio == 1.0);
    }
  }
  SUBCASE("thread count does not change results") {
    CurveConfig one = cfg;
    one.threads = 1;
    const auto c1 = cooling_curve(one);
    REQUIRE(c1.rows.size() == c.rows.size());
    for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(c1.rows[i].n_f == c.rows[i].n_f);
  }
  CHECK_THROWS_AS(log_grid(1.0, 0.5, 3), InvalidArgument);
}

TEST_CASE("full system structure") {
  ValidationScenario s;
  s.n_ph = 9;
  s.n_th = 0.25;
  s.lambda_mhz = 0.0;
  const auto sys = build_full_system(s);
  CHECK(sys.dim == 63);
  CHECK(sys.liouvillian.rows() == 63 * 63);

  SUBCASE("zero coupling gives a product steady state") {
    solver::SolverConfig cfg;
    cfg.tol = 1e-12;
    const auto ss = solver::steady_state(sys.liouvillian, sys.dim, cfg);
    ComplexMatrix thermal = ComplexMatrix::Zero(s.n_ph, s.n_ph);
    const double q = s.n_th / (s.n_th + 1.0);
    double z = 0.0;
    for (int k = 0; k < s.n_ph; ++k) z += std::pow(q, k);
    for (int k = 0; k < s.n_ph; ++k) thermal(k, k) = std::pow(q, k) / z;
    const ComplexMatrix want = kron2(nv_steady_state(s.nv, s.drive), thermal);
    CHECK((ss.rho - want).cwiseAbs().maxCoeff() < 1e-8);
    const ComplexMatrix ph = phonon_marginal(ss.rho, s.n_ph);
    double n = 0.0;
    for (int k = 0; k < s.n_ph; ++k) n += k * ph(k, k).real();
    CHECK(n == doctest::Approx(truncated_thermal_mean(s.n_th, s.n_ph)).epsilon(1e-8));
    CHECK(std::abs(truncated_thermal_mean(s.n_th, s.n_ph) - s.n_th) < 1e-4);
  }
  SUBCASE("zero coupling validation has zero error") {
    const auto r = validate_two_level(s);
    CHECK(r.n_f_full == doctest::Approx(s.n_th).epsilon(1e-8));
    CHECK(r.n_f_two == s.n_th);
    CHECK(r.relative_error < 1e-8);
  }
  SUBCASE("shipped scenarios stay below ten nonzeros per row") {
    ValidationScenario one;
    one.n_ph = 20;
    CHECK(build_full_system(one).liouvillian.mean_nnz_per_row() < 10.0);
    ValidationScenario two;
    two.n_nv = 2;
    two.n_ph = 12;
    CHECK(build_full_system(two).liouvillian.mean_nnz_per_row() < 10.0);
  }
  SUBCASE("budget and truncation checks") {
    ValidationScenario big;
    big.n_nv = 3;
    big.n_ph = 20;
    big.memory_budget_bytes = std::size_t{1} << 30;
    try {
      build_full_system(big);
      FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
      CHECK(std::string(e.what()).find("N = 6860") != std::string::npos);
    }
    CHECK(estimated_memory(big) > big.memory_budget_bytes);
    ValidationScenario shallow;
    shallow.n_ph = 10;
    shallow.n_th = 2.0;
    CHECK_THROWS_AS(build_full_system(shallow), InvalidArgument);
    CHECK_THROWS_AS(phonon_marginal(ComplexMatrix::Identity(10, 10), 3), DimensionError);
  }
}

TEST_CASE("one-NV validation") {
  std::vector<ValidationResult> results;
  for (double n_th : {0.1, 0.5, 1.0, 2.0}) {
    ValidationScenario s;
    s.n_th = n_th;
    const auto r = validate_two_level(s);
    CHECK(r.trace_error < 1e-12);
    CHECK(r.hermiticity < 1e-12);
    CHECK(r.min_eigenvalue > -1e-8);
    CHECK(r.mean_nnz_per_row < 10.0);
    results.push_back(r);
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    CHECK(results[i].relative_error < results[i - 1].relative_error);
  }
  CHECK(results.back().relative_error < 0.0075);

  SUBCASE("four more Fock levels change n_f by under one percent") {
    ValidationScenario s;
    s.n_th = 2.0;
    s.n_ph = 24;
    const auto r = validate_two_level(s);
    CHECK(std::abs(r.n_f_full - results.back().n_f_full) < 0.01 * results.back().n_f_full);
  }
}

TEST_CASE("two-level model is an upper bound on the full model" * doctest::may_fail()) {
  for (double n_th : {0.1, 1.0}) {
    ValidationScenario s;
    s.n_th = n_th;
    const auto r = validate_two_level(s);
    CHECK(r.n_f_two >= r.n_f_full);
  }
}
