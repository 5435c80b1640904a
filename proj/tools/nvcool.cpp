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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nvcool/constants.hpp"
#include "nvcool/cooling/curve.hpp"
#include "nvcool/cooling/full_system.hpp"
#include "nvcool/error.hpp"
#include "nvcool/fit/csv.hpp"
#include "nvcool/fit/least_squares.hpp"
#include "nvcool/fit/registry.hpp"
#include "nvcool/io/config.hpp"
#include "nvcool/io/manifest.hpp"
#include "nvcool/mech/resonator.hpp"
#include "nvcool/nv/model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nvcool::io::format_number;

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  bool verbose = false;
  std::string data;
  std::string model;
};

struct Run {
  nvcool::io::RunConfig cfg;
  fs::path out;
  int threads = 1;
};

std::string fmt_num(double v) { return format_number(v); }

std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '"'; },
                  ';');
  return s;
}

bool finish(nvcool::io::Manifest& m, const Run& run, const std::string& name) {
  const fs::path path = run.out / (name + "_manifest.json");
  m.write(path);
  for (const auto& o : m.oracles()) {
    if (o.passed) {
      spdlog::info("oracle {}: pass {}", o.name, o.detail);
    } else {
      spdlog::warn("oracle {}: FAIL {}", o.name, o.detail);
    }
  }
  spdlog::info("wrote {}", path.string());
  return m.all_passed();
}

bool cmd_cooling_curve(const Run& run) {
  const auto cc = run.cfg.curve_config(run.threads);
  const auto curve = nvcool::cooling::cooling_curve(cc);
  nvcool::io::Manifest man("cooling-curve", nvcool::io::to_json(run.cfg));

  const fs::path csv = run.out / "cooling_curve.csv";
  nvcool::io::CsvWriter w(csv, {"density_cm3", "quality", "lambda_eff_rad_s", "n_th", "n_f",
                                "n_f_over_n_th", "annotation"});
  for (const auto& r : curve.rows) {
    w.row({fmt_num(r.density_cm3), fmt_num(r.quality), fmt_num(r.lambda_eff), fmt_num(curve.n_th),
           fmt_num(r.n_f), fmt_num(r.ratio), r.annotation});
  }
  w.close();
  man.add_output(csv);

  auto& res = man.results();
  res["alpha"] = curve.alpha;
  res["omega_m_rad_s"] = curve.omega_m;
  res["n_th"] = curve.n_th;
  res["geometry_length_um"] = curve.geometry.l;
  res["geometry_thickness_um"] = curve.geometry.t;
  res["rows"] = curve.rows.size();

  // Rows are grouped by Q in cfg order, then by ascending density.
  const std::size_t nq = cc.qualities.size();
  const std::size_t nd = curve.rows.size() / nq;
  bool dens_ok = true;
  bool bounded = true;
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t i = 0; i < nd; ++i) {
      const auto& r = curve.rows[q * nd + i];
      if (r.ratio > 1.0 + 1e-9 || r.ratio < 0.0) bounded = false;
      if (i > 0 && r.ratio > curve.rows[q * nd + i - 1].ratio * (1.0 + 1e-12)) dens_ok = false;
    }
  }
  man.add_oracle("ratio_in_unit_interval", bounded);
  man.add_oracle("monotone_in_density", dens_ok);

  std::vector<std::size_t> order(nq);
  for (std::size_t i = 0; i < nq; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cc.qualities[a] < cc.qualities[b]; });
  bool q_ok = true;
  for (std::size_t k = 1; k < nq; ++k) {
    for (std::size_t i = 0; i < nd; ++i) {
      const double hi = curve.rows[order[k] * nd + i].ratio;
      const double lo = curve.rows[order[k - 1] * nd + i].ratio;
      if (hi > lo * (1.0 + 1e-12)) q_ok = false;
    }
  }
  man.add_oracle("monotone_in_quality", q_ok);

  if (cc.lambda_override && *cc.lambda_override == 0.0) {
    bool unity = true;
    for (const auto& r : curve.rows) unity = unity && r.ratio == 1.0;
    man.add_oracle("zero_coupling_gives_thermal", unity);
  }

  const bool operating_point = !cc.lambda_override && !cc.alpha_override && !cc.bose &&
                               cc.frequency_ghz && std::abs(*cc.frequency_ghz - 2.9) < 1e-12 &&
                               cc.temperature_k == 300.0;
  if (operating_point) {
    for (const auto& r : curve.rows) {
      if (std::abs(r.density_cm3 - 1.1e18) < 1e6 && r.quality == 2e6) {
        man.add_oracle("headline_ratio", std::abs(r.ratio - 0.92) <= 0.02,
                       "n_f/n_th = " + fmt_num(r.ratio) + " (expected 0.92 +- 0.02)");
      }
    }
  }
  return finish(man, run, "cooling_curve");
}

nvcool::cooling::ValidationScenario scenario(const nvcool::io::RunConfig& cfg, int n_nv, int n_ph,
                                             double n_th, int threads) {
  const auto& v = cfg.validate;
  nvcool::cooling::ValidationScenario s;
  s.n_nv = n_nv;
  s.n_ph = n_ph;
  s.n_th = n_th;
  s.lambda_mhz = v.lambda_mhz;
  s.omega_m_mhz = v.omega_m_mhz;
  s.quality = v.quality;
  s.nv = cfg.nv;
  s.drive = {0.0, 0.0, v.omega_mag_mhz, v.gamma_opt};
  s.memory_budget_bytes = static_cast<std::size_t>(v.memory_budget_mib * 1024.0 * 1024.0);
  s.solver = cfg.solver;
  s.solver.threads = threads;
  return s;
}

bool cmd_validate(const Run& run) {
  const auto& v = run.cfg.validate;
  nvcool::io::Manifest man("validate", nvcool::io::to_json(run.cfg));
  man.results()["matching"] =
      "two-level lambda_eff = lambda * sqrt(n_nv * alpha), alpha from the single-NV steady "
      "state at the same drive; gamma_perp = 1/T1e, gamma_par = 1/T2e; full n_f rescaled by "
      "n_th over the truncated thermal mean";

  struct Point {
    int n_nv;
    int n_ph;
    double n_th;
  };
  std::vector<Point> points;
  for (int n_nv : v.n_nv) {
    if (n_nv == 1) {
      for (double n : v.n_th) points.push_back({1, v.n_ph, n});
    }
    for (double n : v.n_th_multi) points.push_back({n_nv, v.n_ph_multi, n});
  }

  const fs::path csv = run.out / "validate.csv";
  nvcool::io::CsvWriter w(csv, {"n_nv", "n_ph", "n_th", "n_f_full", "n_f_two", "relative_error",
                                "iterations", "residual", "trace_error", "hermiticity",
                                "min_eigenvalue", "mean_nnz_per_row", "dim"});
  bool physical = true;
  bool sparse = true;
  bool upper = true;
  std::vector<std::pair<Point, nvcool::cooling::ValidationResult>> results;
  for (const auto& p : points) {
    auto s = scenario(run.cfg, p.n_nv, p.n_ph, p.n_th, run.threads);
    try {
      s.validate();
    } catch (const nvcool::BudgetExceeded& e) {
      throw nvcool::BudgetExceeded(std::string(e.what()) +
                                   "; lower validate.n_ph or raise validate.memory_budget_mib");
    }
    spdlog::info("validate n_nv={} n_ph={} n_th={} (N = {})", p.n_nv, p.n_ph, p.n_th,
                 s.hilbert_dim());
    const auto r = nvcool::cooling::validate_two_level(s);
    spdlog::info("  n_f_full={} n_f_two={} error={} iterations={}", r.n_f_full, r.n_f_two,
                 r.relative_error, r.iterations);
    w.row({std::to_string(p.n_nv), std::to_string(p.n_ph), fmt_num(p.n_th), fmt_num(r.n_f_full),
           fmt_num(r.n_f_two), fmt_num(r.relative_error), std::to_string(r.iterations),
           fmt_num(r.residual), fmt_num(r.trace_error), fmt_num(r.hermiticity),
           fmt_num(r.min_eigenvalue), fmt_num(r.mean_nnz_per_row), std::to_string(r.dim)});
    physical = physical && r.trace_error < 1e-8 && r.hermiticity < 1e-8 && r.min_eigenvalue > -1e-8;
    sparse = sparse && r.mean_nnz_per_row < 10.0;
    if (p.n_th > 0.0) upper = upper && r.n_f_two >= r.n_f_full;
    results.emplace_back(p, r);
  }
  w.close();
  man.add_output(csv);

  // Slope table: error against n_th per NV count on the shared grid.
  const fs::path slopes = run.out / "validate_slopes.csv";
  nvcool::io::CsvWriter sw(slopes, {"n_nv", "n_ph", "slope_per_n_th", "error_first", "error_last"});
  std::map<int, std::vector<std::pair<double, double>>> by_count;
  for (const auto& [p, r] : results) {
    if (p.n_ph == v.n_ph_multi) by_count[p.n_nv].push_back({p.n_th, r.relative_error});
  }
  for (const auto& [n_nv, pts] : by_count) {
    const double slope = pts.size() > 1 ? (pts.back().second - pts.front().second) /
                                               (pts.back().first - pts.front().first)
                                         : 0.0;
    sw.row({std::to_string(n_nv), std::to_string(v.n_ph_multi), fmt_num(slope),
            fmt_num(pts.front().second), fmt_num(pts.back().second)});
  }
  sw.close();
  man.add_output(slopes);

  man.add_oracle("steady_states_physical", physical, "trace, Hermiticity and positivity within 1e-8");
  man.add_oracle("mean_nnz_per_row_below_10", sparse);
  double last_one = -1.0;
  for (const auto& [p, r] : results) {
    if (p.n_nv == 1 && p.n_ph == v.n_ph) last_one = r.relative_error;
  }
  if (last_one >= 0.0) {
    man.add_oracle("one_nv_error_levels_off", last_one < v.error_bound,
                   "largest-n_th error " + fmt_num(last_one) + " vs bound " +
                       fmt_num(v.error_bound));
  }
  man.add_oracle("two_level_is_upper_bound", upper, "n_f_two >= n_f_full at every point");
  if (by_count.count(1) && by_count.count(2)) {
    bool grows = true;
    const auto& a = by_count[1];
    const auto& b = by_count[2];
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      grows = grows && b[i].second > a[i].second;
    }
    man.add_oracle("error_grows_with_nv_count", grows);
  }
  return finish(man, run, "validate");
}

bool cmd_fit(const Run& run, const Options& opt) {
  const auto& f = run.cfg.fit;
  const std::string model_name = opt.model.empty() ? f.model : opt.model;
  const auto model = nvcool::fit::make_model(model_name, f.settings);
  json cfg_json = nvcool::io::to_json(run.cfg);
  cfg_json["fit"]["model"] = model_name;
  nvcool::io::Manifest man("fit", cfg_json);

  auto resolve = [&](const std::map<std::string, double>& m, std::vector<double> base) {
    for (const auto& [k, val] : m) base[model.index_of(k)] = val;
    return base;
  };
  std::vector<double> init = resolve(f.initial, model.defaults);

  nvcool::fit::Series data;
  const std::string data_path = opt.data.empty() ? f.data : opt.data;
  const bool synthetic = data_path.empty();
  std::vector<double> truth;
  if (synthetic) {
    if (f.synthetic_x.empty()) {
      throw nvcool::InvalidArgument("fit: no data file and no fit.synthetic.x grid");
    }
    truth = resolve(f.synthetic_truth, model.defaults);
    data.x = f.synthetic_x;
    data.y = model.model(data.x, truth);
    std::mt19937_64 rng(run.cfg.seed);
    std::normal_distribution<double> noise(0.0, f.synthetic_noise > 0.0 ? f.synthetic_noise : 1.0);
    for (double& y : data.y) {
      if (f.synthetic_noise > 0.0) y += noise(rng);
    }
    const fs::path syn = run.out / "fit_synthetic.csv";
    nvcool::io::CsvWriter sw(syn, {"x", "y"});
    for (std::size_t i = 0; i < data.size(); ++i) sw.row({fmt_num(data.x[i]), fmt_num(data.y[i])});
    sw.close();
    man.add_output(syn);
  } else {
    data = nvcool::fit::read_series(fs::path(data_path));
  }

  nvcool::fit::FitOptions fo;
  fo.max_iter = f.max_iter;
  fo.fixed.assign(model.params.size(), false);
  for (const auto& name : f.fixed) fo.fixed[model.index_of(name)] = true;
  if (!f.lower.empty()) {
    fo.lower = resolve(f.lower, std::vector<double>(model.params.size(),
                                                   -std::numeric_limits<double>::infinity()));
  }
  if (!f.upper.empty()) {
    fo.upper = resolve(f.upper, std::vector<double>(model.params.size(),
                                                   std::numeric_limits<double>::infinity()));
  }
  auto result = nvcool::fit::fit_least_squares(model.model, data, init, fo);
  result.names = model.params;

  json out;
  out["model"] = model_name;
  out["points"] = data.size();
  out["rss"] = result.rss;
  out["dof"] = result.dof;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  for (std::size_t i = 0; i < model.params.size(); ++i) {
    out["params"][model.params[i]] = {{"value", result.params[i]},
                                      {"uncertainty", result.uncertainties[i]},
                                      {"fixed", static_cast<bool>(fo.fixed[i])}};
  }
  json cov = json::array();
  for (Eigen::Index i = 0; i < result.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < result.covariance.cols(); ++j) row.push_back(result.covariance(i, j));
    cov.push_back(row);
  }
  out["covariance"] = cov;
  const fs::path jpath = run.out / "fit_result.json";
  fs::create_directories(run.out);
  {
    std::ofstream js(jpath, std::ios::binary);
    js << out.dump(2) << '\n';
    if (!js) throw nvcool::Error("cannot write '" + jpath.string() + "'");
  }
  man.add_output(jpath);

  const auto fitted = model.model(data.x, result.params);
  const fs::path rpath = run.out / "fit_residuals.csv";
  nvcool::io::CsvWriter rw(rpath, {"x", "y", "model", "residual"});
  for (std::size_t i = 0; i < data.size(); ++i) {
    rw.row({fmt_num(data.x[i]), fmt_num(data.y[i]), fmt_num(fitted[i]),
            fmt_num(data.y[i] - fitted[i])});
  }
  rw.close();
  man.add_output(rpath);
  man.results() = out;

  man.add_oracle("converged", result.converged,
                 "after " + std::to_string(result.iterations) + " iterations");
  if (synthetic && f.synthetic_noise == 0.0) {
    bool exact = true;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      exact = exact && std::abs(result.params[i] - truth[i]) <= 1e-6 * std::abs(truth[i]) + 1e-300;
    }
    man.add_oracle("zero_noise_round_trip", exact, "parameters within 1e-6 relative");
  }
  return finish(man, run, "fit");
}

bool cmd_alpha(const Run& run) {
  const auto& a = run.cfg.alpha;
  nvcool::io::Manifest man("alpha", nvcool::io::to_json(run.cfg));
  const fs::path csv = run.out / "alpha.csv";
  nvcool::io::CsvWriter w(csv, {"omega_mag_mhz", "gamma_opt", "alpha", "status"});
  int failures = 0;
  bool in_range = true;
  auto scfg = run.cfg.solver;
  scfg.threads = run.threads;
  for (double om : a.omega_mag_mhz) {
    for (double g : a.gamma_opt) {
      try {
        const auto r = nvcool::nv::steady_state_alpha(om, g, run.cfg.nv, scfg);
        w.row({fmt_num(om), fmt_num(g), fmt_num(r.alpha), "ok"});
        in_range = in_range && r.alpha >= -1e-12 && r.alpha <= 1.0;
      } catch (const nvcool::Error& e) {
        ++failures;
        spdlog::error("alpha at omega_mag={} gamma_opt={}: {}", om, g, e.what());
        w.row({fmt_num(om), fmt_num(g), "nan", sanitize(e.what())});
      }
    }
  }
  w.close();
  man.add_output(csv);
  man.results()["failed_points"] = failures;
  man.add_oracle("all_points_solved", failures == 0, std::to_string(failures) + " failures");
  man.add_oracle("alpha_in_unit_interval", in_range);
  return finish(man, run, "alpha");
}

bool cmd_resonator(const Run& run) {
  const auto& g = run.cfg.geometry;
  const auto& r = run.cfg.resonator;
  g.validate();
  nvcool::io::Manifest man("resonator", nvcool::io::to_json(run.cfg));
  if (g.slender_warning()) spdlog::warn("t/l = {} exceeds the slender-body bound 0.6", g.t / g.l);

  const auto freqs = nvcool::mech::higher_mode_frequencies(g, r.modes - 1);
  const fs::path csv = run.out / "resonator_modes.csv";
  nvcool::io::CsvWriter w(csv, {"mode", "kl", "amplitude_ratio", "frequency_ghz",
                                "kappa_ghz_um", "isolation_margin"});
  for (int n = 0; n < r.modes; ++n) {
    const double f = nvcool::constants::rad_per_s_to_ghz(freqs[static_cast<std::size_t>(n)]);
    const double f0 = nvcool::constants::rad_per_s_to_ghz(freqs[0]);
    w.row({std::to_string(n), fmt_num(nvcool::mech::mode_wavevector(g.kind, n)),
           fmt_num(nvcool::mech::amplitude_ratio(g.kind, n)), fmt_num(f),
           fmt_num(nvcool::mech::kappa(g.kind, n, g.youngs_gpa, g.density_g_cm3) /
                   nvcool::constants::m_per_s_per_ghz_um),
           fmt_num((f - f0) / f0)});
  }
  w.close();
  man.add_output(csv);

  const fs::path shape = run.out / "resonator_mode_shape.csv";
  {
    fs::create_directories(run.out);
    std::ofstream os(shape, std::ios::binary);
    nvcool::mech::write_mode_table(os, g, r.table_points);
    if (!os) throw nvcool::Error("cannot write '" + shape.string() + "'");
  }
  man.add_output(shape);

  const auto lam = nvcool::mech::lambda_eff(g, r.density_cm3, r.alpha, run.cfg.nv.d_perp_e_ghz);
  const double agree =
      lam.closed_form > 0.0 ? std::abs(lam.quadrature - lam.closed_form) / lam.closed_form : 0.0;
  auto& res = man.results();
  res["omega_ghz"] = nvcool::constants::rad_per_s_to_ghz(freqs[0]);
  res["lambda_eff_quadrature_rad_s"] = lam.quadrature;
  res["lambda_eff_closed_form_rad_s"] = lam.closed_form;
  res["lambda_eff_points"] = lam.points;
  res["slender_warning"] = g.slender_warning();

  const auto mode = nvcool::mech::mode_shape(g);
  bool neutral = true;
  for (int i = 0; i <= 10; ++i) {
    neutral = neutral && nvcool::mech::zero_point_strain(g, mode, 0.0, g.l * i / 10.0) == 0.0;
  }
  man.add_oracle("neutral_axis_strain_zero", neutral);
  man.add_oracle("lambda_eff_closed_form_agreement", agree <= 1e-3,
                 "relative difference " + fmt_num(agree));
  return finish(man, run, "resonator");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nvcool: NV-ensemble spin-strain cooling of diamond resonators"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "output directory (overrides output.dir)");
  app.add_option("--threads", opt.threads, "cap on worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", opt.verbose, "log progress and oracle outcomes");

  auto* curve = app.add_subcommand("cooling-curve", "n_f / n_th against density for several Q");
  auto* validate = app.add_subcommand("validate", "two-level model against the full Liouvillian");
  auto* fit = app.add_subcommand("fit", "least-squares fit of a named model to CSV data");
  fit->add_option("--data", opt.data, "CSV with x, y[, sigma] columns");
  fit->add_option("--model", opt.model, "model name");
  auto* alpha = app.add_subcommand("alpha", "driven-population fraction over a drive grid");
  auto* res = app.add_subcommand("resonator", "mode report for the configured geometry");
  for (auto* s : {curve, validate, fit, alpha, res}) s->fallthrough();

  CLI11_PARSE(app, argc, argv);

  auto logger = spdlog::stderr_color_mt("nvcool");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(opt.verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    Run run;
    run.cfg = opt.config.empty() ? nvcool::io::parse_config("{}")
                                 : nvcool::io::load_config(opt.config);
    run.out = opt.out.empty() ? fs::path(run.cfg.output_dir) : fs::path(opt.out);
    run.threads = opt.threads;
    fs::create_directories(run.out);

    bool ok = false;
    if (*curve) {
      ok = cmd_cooling_curve(run);
    } else if (*validate) {
      ok = cmd_validate(run);
    } else if (*fit) {
      ok = cmd_fit(run, opt);
    } else if (*alpha) {
      ok = cmd_alpha(run);
    } else if (*res) {
      ok = cmd_resonator(run);
    }
    if (!ok) {
      std::cerr << "nvcool: one or more embedded oracles failed (see manifest)\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "nvcool: error: " << e.what() << '\n';
    return 2;
  }
}
