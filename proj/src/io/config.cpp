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

#include "nvcool/io/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nvcool/error.hpp"

namespace nvcool::io {

namespace {

// A mapping node whose keys must all be consumed.
class Block {
 public:
  Block(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw InvalidArgument("config: '" + path_ + "' must be a mapping");
    }
  }

  ~Block() noexcept(false) {
    if (std::uncaught_exceptions() > 0 || !node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw InvalidArgument("config: unknown key '" + where(key) + "'");
    }
  }

  Block(const Block&) = delete;
  Block& operator=(const Block&) = delete;

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  YAML::Node child(const std::string& key) {
    used_.insert(key);
    if (!node_ || !node_.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
  }

  template <class T>
  void get(const std::string& key, T& out) {
    const YAML::Node n = child(key);
    if (!n || n.IsNull()) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      throw InvalidArgument("config: bad value for '" + where(key) + "'");
    }
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    const YAML::Node n = child(key);
    if (!n) return;
    if (n.IsNull()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

void read_nv(Block b, nv::NvParams& p) {
  b.get("k42", p.k42);
  b.get("k31", p.k31);
  b.get("k45", p.k45);
  b.get("k35", p.k35);
  b.get("k52", p.k52);
  b.get("k51", p.k51);
  b.get("t2e_ns", p.t2e_ns);
  b.get("t1e_ns", p.t1e_ns);
  b.get("t2g_ns", p.t2g_ns);
  b.get("d0g_ghz", p.d0g_ghz);
  b.get("d0e_ghz", p.d0e_ghz);
  b.get("gamma_nv_mhz_per_g", p.gamma_nv_mhz_per_g);
  b.get("a_par_g_mhz", p.a_par_g_mhz);
  b.get("a_par_e_mhz", p.a_par_e_mhz);
  b.get("d_perp_g_ghz", p.d_perp_g_ghz);
  b.get("d_perp_e_ghz", p.d_perp_e_ghz);
}

void read_ensemble(Block b, nv::EnsembleProfile& e) {
  b.get("gamma0", e.gamma0);
  b.get("z0_um", e.z0);
  b.get("kappa_psf_per_um", e.kappa_psf);
  b.get("lambda_strain_um", e.lambda_strain);
  b.get("z_max_um", e.z_max);
  b.get("n_z", e.n_z);
}

void read_geometry(Block b, mech::ResonatorGeometry& g) {
  std::string kind = mech::to_string(g.kind);
  b.get("kind", kind);
  g.kind = mech::parse_kind(kind);
  b.get("length_um", g.l);
  b.get("thickness_um", g.t);
  b.get("width_um", g.w);
  b.get("youngs_gpa", g.youngs_gpa);
  b.get("density_g_cm3", g.density_g_cm3);
  b.get("mode_index", g.mode_index);
}

void read_cooling(Block b, CoolingBlock& c) {
  {
    Block d(b.child("densities"), b.where("densities"));
    d.get("lo_cm3", c.densities.lo);
    d.get("hi_cm3", c.densities.hi);
    d.get("n", c.densities.n);
    d.get("values_cm3", c.densities.values);
  }
  b.get("qualities", c.qualities);
  b.get("frequency_ghz", c.frequency_ghz);
  b.get("temperature_k", c.temperature_k);
  b.get("bose", c.bose);
  b.get("omega_mag_mhz", c.omega_mag_mhz);
  b.get("gamma_opt", c.gamma_opt);
  b.get("alpha", c.alpha);
  b.get("lambda_eff_rad_s", c.lambda_eff);
  b.get("include_reference", c.include_reference);
  std::string closure = c.closure == cooling::MomentClosure::derived ? "derived" : "as_printed";
  b.get("closure", closure);
  if (closure == "derived") {
    c.closure = cooling::MomentClosure::derived;
  } else if (closure == "as_printed") {
    c.closure = cooling::MomentClosure::as_printed;
  } else {
    throw InvalidArgument("config: cooling.closure must be 'derived' or 'as_printed'");
  }
}

void read_solver(Block b, solver::SolverConfig& s) {
  b.get("tol", s.tol);
  b.get("max_iter", s.max_iter);
  b.get("restart", s.restart);
  std::string pc(solver::to_string(s.preconditioner));
  b.get("preconditioner", pc);
  s.preconditioner = solver::parse_preconditioner(pc);
  b.get("threads", s.threads);
  b.get("record_history", s.record_history);
}

void read_validate(Block b, ValidateBlock& v) {
  b.get("n_nv", v.n_nv);
  b.get("n_th", v.n_th);
  b.get("n_th_multi", v.n_th_multi);
  b.get("n_ph", v.n_ph);
  b.get("n_ph_multi", v.n_ph_multi);
  b.get("lambda_mhz", v.lambda_mhz);
  b.get("omega_m_mhz", v.omega_m_mhz);
  b.get("quality", v.quality);
  b.get("omega_mag_mhz", v.omega_mag_mhz);
  b.get("gamma_opt", v.gamma_opt);
  b.get("memory_budget_mib", v.memory_budget_mib);
  b.get("error_bound", v.error_bound);
}

void read_fit(Block b, FitBlock& f) {
  b.get("model", f.model);
  b.get("data", f.data);
  b.get("initial", f.initial);
  b.get("fixed", f.fixed);
  b.get("lower", f.lower);
  b.get("upper", f.upper);
  b.get("max_iter", f.max_iter);
  {
    Block s(b.child("settings"), b.where("settings"));
    s.get("s_plus", f.settings.slopes.s_plus);
    s.get("s_zero", f.settings.slopes.s_zero);
    s.get("s_minus", f.settings.slopes.s_minus);
    s.get("a_par_e_mhz", f.settings.a_par_e_mhz);
    s.get("a_par_g_mhz", f.settings.a_par_g_mhz);
    s.get("gamma_nv", f.settings.gamma_nv);
  }
  {
    Block s(b.child("synthetic"), b.where("synthetic"));
    s.get("x", f.synthetic_x);
    s.get("truth", f.synthetic_truth);
    s.get("noise", f.synthetic_noise);
  }
}

void read_alpha(Block b, AlphaBlock& a) {
  b.get("omega_mag_mhz", a.omega_mag_mhz);
  b.get("gamma_opt", a.gamma_opt);
}

void read_resonator(Block b, ResonatorBlock& r) {
  b.get("modes", r.modes);
  b.get("table_points", r.table_points);
  b.get("density_cm3", r.density_cm3);
  b.get("alpha", r.alpha);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument("config: " + msg);
}

}  // namespace

std::vector<double> DensityGrid::expand() const {
  if (!values.empty()) return values;
  return cooling::log_grid(lo, hi, n);
}

void RunConfig::check() const {
  nv.validate();
  ensemble.validate();
  geometry.validate();
  solver.validate();
  require(!cooling.qualities.empty(), "cooling.qualities must not be empty");
  for (double q : cooling.qualities) require(q > 0.0, "cooling.qualities must be positive");
  if (cooling.densities.values.empty()) {
    require(cooling.densities.lo > 0.0 && cooling.densities.hi >= cooling.densities.lo &&
                cooling.densities.n >= 1,
            "cooling.densities needs 0 < lo <= hi and n >= 1");
  }
  for (double d : cooling.densities.values) require(d >= 0.0, "densities must be >= 0");
  require(cooling.temperature_k >= 0.0, "cooling.temperature_k must be >= 0");
  require(!cooling.frequency_ghz || *cooling.frequency_ghz > 0.0,
          "cooling.frequency_ghz must be positive");
  require(cooling.omega_mag_mhz >= 0.0 && cooling.gamma_opt >= 0.0,
          "cooling drive fields must be >= 0");
  require(!cooling.alpha || (*cooling.alpha >= 0.0 && *cooling.alpha <= 1.0),
          "cooling.alpha must lie in [0, 1]");
  require(!cooling.lambda_eff || *cooling.lambda_eff >= 0.0, "cooling.lambda_eff must be >= 0");
  for (int n : validate.n_nv) require(n >= 1 && n <= 3, "validate.n_nv entries must be 1..3");
  for (double n : validate.n_th) require(n >= 0.0, "validate.n_th must be >= 0");
  for (double n : validate.n_th_multi) require(n >= 0.0, "validate.n_th_multi must be >= 0");
  require(validate.n_ph >= 2 && validate.n_ph_multi >= 2, "validate.n_ph must be >= 2");
  require(validate.omega_m_mhz > 0.0 && validate.quality > 0.0,
          "validate.omega_m_mhz and quality must be positive");
  require(validate.lambda_mhz >= 0.0, "validate.lambda_mhz must be >= 0");
  require(validate.memory_budget_mib > 0.0, "validate.memory_budget_mib must be positive");
  const auto known = fit::model_names();
  require(std::find(known.begin(), known.end(), fit.model) != known.end(),
          "unknown fit.model '" + fit.model + "'");
  require(fit.synthetic_noise >= 0.0, "fit.synthetic.noise must be >= 0");
  require(fit.max_iter >= 1, "fit.max_iter must be >= 1");
  for (double w : alpha.omega_mag_mhz) require(w >= 0.0, "alpha.omega_mag_mhz must be >= 0");
  for (double g : alpha.gamma_opt) require(g >= 0.0, "alpha.gamma_opt must be >= 0");
  require(resonator.modes >= 1 && resonator.table_points >= 2,
          "resonator.modes >= 1 and table_points >= 2");
  require(resonator.density_cm3 >= 0.0 && resonator.alpha >= 0.0,
          "resonator.density_cm3 and alpha must be >= 0");
  require(!output_dir.empty(), "output.dir must not be empty");
}

cooling::CurveConfig RunConfig::curve_config(int threads) const {
  cooling::CurveConfig c;
  c.densities_cm3 = cooling.densities.expand();
  c.qualities = cooling.qualities;
  c.geometry = geometry;
  c.frequency_ghz = cooling.frequency_ghz;
  c.temperature_k = cooling.temperature_k;
  c.bose = cooling.bose;
  c.omega_mag_mhz = cooling.omega_mag_mhz;
  c.gamma_opt = cooling.gamma_opt;
  c.nv = nv;
  c.alpha_override = cooling.alpha;
  c.lambda_override = cooling.lambda_eff;
  c.include_reference = cooling.include_reference;
  c.closure = cooling.closure;
  c.threads = threads;
  return c;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(std::string("config: YAML parse error: ") + e.what());
  }
  RunConfig cfg;
  {
    Block b(root, "");
    read_nv(Block(b.child("nv"), "nv"), cfg.nv);
    read_ensemble(Block(b.child("ensemble"), "ensemble"), cfg.ensemble);
    read_geometry(Block(b.child("geometry"), "geometry"), cfg.geometry);
    read_cooling(Block(b.child("cooling"), "cooling"), cfg.cooling);
    read_solver(Block(b.child("solver"), "solver"), cfg.solver);
    read_validate(Block(b.child("validate"), "validate"), cfg.validate);
    read_fit(Block(b.child("fit"), "fit"), cfg.fit);
    read_alpha(Block(b.child("alpha"), "alpha"), cfg.alpha);
    read_resonator(Block(b.child("resonator"), "resonator"), cfg.resonator);
    {
      Block o(b.child("output"), "output");
      o.get("dir", cfg.output_dir);
    }
    b.get("seed", cfg.seed);
  }
  cfg.check();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["nv"] = {{"k42", c.nv.k42},
             {"k31", c.nv.k31},
             {"k45", c.nv.k45},
             {"k35", c.nv.k35},
             {"k52", c.nv.k52},
             {"k51", c.nv.k51},
             {"t2e_ns", c.nv.t2e_ns},
             {"t1e_ns", c.nv.t1e_ns},
             {"t2g_ns", c.nv.t2g_ns ? json(*c.nv.t2g_ns) : json(nullptr)},
             {"d0g_ghz", c.nv.d0g_ghz},
             {"d0e_ghz", c.nv.d0e_ghz},
             {"gamma_nv_mhz_per_g", c.nv.gamma_nv_mhz_per_g},
             {"a_par_g_mhz", c.nv.a_par_g_mhz},
             {"a_par_e_mhz", c.nv.a_par_e_mhz},
             {"d_perp_g_ghz", c.nv.d_perp_g_ghz},
             {"d_perp_e_ghz", c.nv.d_perp_e_ghz}};
  j["ensemble"] = {{"gamma0", c.ensemble.gamma0},
                   {"z0_um", c.ensemble.z0},
                   {"kappa_psf_per_um", c.ensemble.kappa_psf},
                   {"lambda_strain_um", c.ensemble.lambda_strain},
                   {"z_max_um", c.ensemble.z_max},
                   {"n_z", c.ensemble.n_z}};
  j["geometry"] = {{"kind", mech::to_string(c.geometry.kind)},
                   {"length_um", c.geometry.l},
                   {"thickness_um", c.geometry.t},
                   {"width_um", c.geometry.w},
                   {"youngs_gpa", c.geometry.youngs_gpa},
                   {"density_g_cm3", c.geometry.density_g_cm3},
                   {"mode_index", c.geometry.mode_index}};
  const auto& k = c.cooling;
  j["cooling"] = {
      {"densities",
       {{"lo_cm3", k.densities.lo}, {"hi_cm3", k.densities.hi}, {"n", k.densities.n},
        {"values_cm3", k.densities.values}}},
      {"qualities", k.qualities},
      {"frequency_ghz", k.frequency_ghz ? json(*k.frequency_ghz) : json(nullptr)},
      {"temperature_k", k.temperature_k},
      {"bose", k.bose},
      {"omega_mag_mhz", k.omega_mag_mhz},
      {"gamma_opt", k.gamma_opt},
      {"alpha", k.alpha ? json(*k.alpha) : json(nullptr)},
      {"lambda_eff_rad_s", k.lambda_eff ? json(*k.lambda_eff) : json(nullptr)},
      {"include_reference", k.include_reference},
      {"closure", k.closure == cooling::MomentClosure::derived ? "derived" : "as_printed"}};
  j["solver"] = {{"tol", c.solver.tol},
                 {"max_iter", c.solver.max_iter},
                 {"restart", c.solver.restart},
                 {"preconditioner", std::string(solver::to_string(c.solver.preconditioner))},
                 {"threads", c.solver.threads},
                 {"record_history", c.solver.record_history}};
  const auto& v = c.validate;
  j["validate"] = {{"n_nv", v.n_nv},
                   {"n_th", v.n_th},
                   {"n_th_multi", v.n_th_multi},
                   {"n_ph", v.n_ph},
                   {"n_ph_multi", v.n_ph_multi},
                   {"lambda_mhz", v.lambda_mhz},
                   {"omega_m_mhz", v.omega_m_mhz},
                   {"quality", v.quality},
                   {"omega_mag_mhz", v.omega_mag_mhz},
                   {"gamma_opt", v.gamma_opt},
                   {"memory_budget_mib", v.memory_budget_mib},
                   {"error_bound", v.error_bound}};
  const auto& f = c.fit;
  j["fit"] = {{"model", f.model},
              {"data", f.data},
              {"initial", f.initial},
              {"fixed", f.fixed},
              {"lower", f.lower},
              {"upper", f.upper},
              {"max_iter", f.max_iter},
              {"settings",
               {{"s_plus", f.settings.slopes.s_plus},
                {"s_zero", f.settings.slopes.s_zero},
                {"s_minus", f.settings.slopes.s_minus},
                {"a_par_e_mhz", f.settings.a_par_e_mhz},
                {"a_par_g_mhz", f.settings.a_par_g_mhz},
                {"gamma_nv", f.settings.gamma_nv}}},
              {"synthetic",
               {{"x", f.synthetic_x}, {"truth", f.synthetic_truth}, {"noise", f.synthetic_noise}}}};
  j["alpha"] = {{"omega_mag_mhz", c.alpha.omega_mag_mhz}, {"gamma_opt", c.alpha.gamma_opt}};
  j["resonator"] = {{"modes", c.resonator.modes},
                    {"table_points", c.resonator.table_points},
                    {"density_cm3", c.resonator.density_cm3},
                    {"alpha", c.resonator.alpha}};
  j["output"] = {{"dir", c.output_dir}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace nvcool::io
