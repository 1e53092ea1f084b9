#include "helmdd/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "helmdd/errors.hpp"
#include "helmdd/linear_solvers.hpp"
#include "helmdd/orderings.hpp"
#include "json.hpp"

namespace helmdd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "ras_fixed_point" || name == "ras") return Method::ras_fixed_point;
  if (name == "ras_gmres" || name == "gmres") return Method::ras_gmres;
  if (name == "rms") return Method::rms;
  throw ConfigError("unknown method '" + name + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::ras_fixed_point: return "ras_fixed_point";
    case Method::ras_gmres: return "ras_gmres";
    case Method::rms: return "rms";
  }
  return "?";
}

Schedule parse_schedule(const std::string& name) {
  if (name == "lexicographic" || name == "lex" || name == "forward_backward") return Schedule::lexicographic;
  if (name == "snake") return Schedule::snake;
  throw ConfigError("unknown schedule '" + name + "'");
}

std::string to_string(Schedule s) { return s == Schedule::snake ? "snake" : "lexicographic"; }

Profile parse_profile(const std::string& name) {
  if (name == "desk") return Profile::desk;
  if (name == "paper") return Profile::paper;
  throw ConfigError("unknown profile '" + name + "'");
}

std::vector<double> default_wavenumbers(Profile p) {
  if (p == Profile::paper) return {100, 150, 200, 250, 300, 350};
  return {15, 20, 30, 40};
}

Decomposition ExperimentConfig::decomposition() const {
  if (strip) return make_strip(dims[0], delta, kappa, effective_kappa0());
  return make_checkerboard(dims, delta, kappa, effective_kappa0());
}

int ExperimentConfig::rho_budget() const {
  if (method == Method::rms) return 1;
  return dims[0] + dims[1] - 1;
}

void ExperimentConfig::validate() const {
  if (!(tol > 0 && tol < 1)) throw ConfigError("tol must lie in (0, 1)");
  if (dims[0] < 1 || dims[1] < 1) throw ConfigError("decomposition dimensions must be positive");
  if (strip && dims[1] != 1) throw ConfigError("a strip has one cell in y");
  if (dims[0] * dims[1] > 64) throw ConfigError("at most 64 subdomains are supported");
  if (!(delta > 0) || !(kappa > 0)) throw ConfigError("delta and kappa must be positive");
  if (!(effective_kappa0() > 0)) throw ConfigError("kappa0 must be positive");
  if (wave_case < 1 || wave_case > 3) throw ConfigError("wave_speed must be case 1, 2 or 3");
  if (diffusion == DiffusionKind::custom) throw ConfigError("custom diffusion is not configurable");
  if (max_iters < 1 || gmres_maxit < 1) throw ConfigError("iteration limits must be positive");
  if (degree != 1 && degree != 2) throw ConfigError("degree must be 1 or 2");
  if (!(h_exponent > 0)) throw ConfigError("h_exponent must be positive");
  if (elements_per_unit < 0) throw ConfigError("elements_per_unit must be nonnegative");
  if (method == Method::rms && gmres) throw ConfigError("GMRES acceleration is only available for RAS");
  for (double k : ks)
    if (!(k > 0)) throw ConfigError("wavenumbers must be positive");
}

namespace {

template <typename T>
T require(const toml::node& node, const std::string& key) {
  auto v = node.value<T>();
  if (!v) throw ConfigError("config key '" + key + "' has the wrong type");
  return *v;
}

ExperimentConfig parse_one(const toml::table& t, const ExperimentConfig& base) {
  static const std::set<std::string> known = {
      "name", "k", "decomposition", "N", "dims", "delta", "kappa", "kappa0", "wave_speed",
      "diffusion", "absorber", "alpha", "kappa_lin", "cap_amplitude", "cap_order", "method",
      "schedule", "gmres", "tol", "max_iters", "gmres_maxit", "x0", "load_support", "initial_guess",
      "seed", "degree", "h_exponent", "elements_per_unit", "max_dofs"};
  ExperimentConfig c = base;
  for (const auto& [key, node] : t) {
    std::string k(key.str());
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
    if (k == "name") c.name = require<std::string>(node, k);
    else if (k == "k") {
      c.ks.clear();
      if (auto arr = node.as_array()) {
        for (const auto& e : *arr) c.ks.push_back(require<double>(e, k));
      } else {
        c.ks.push_back(require<double>(node, k));
      }
    } else if (k == "decomposition") {
      std::string d = require<std::string>(node, k);
      if (d == "strip") c.strip = true;
      else if (d == "checkerboard") c.strip = false;
      else throw ConfigError("decomposition must be 'strip' or 'checkerboard'");
    } else if (k == "N") {
      c.dims = {static_cast<int>(require<int64_t>(node, k)), 1};
    } else if (k == "dims") {
      auto arr = node.as_array();
      if (!arr || arr->size() != 2) throw ConfigError("dims must be a two-element array");
      c.dims = {static_cast<int>(require<int64_t>((*arr)[0], k)), static_cast<int>(require<int64_t>((*arr)[1], k))};
    } else if (k == "delta") c.delta = require<double>(node, k);
    else if (k == "kappa") c.kappa = require<double>(node, k);
    else if (k == "kappa0") c.kappa0 = require<double>(node, k);
    else if (k == "wave_speed") {
      if (node.is_integer()) c.wave_case = static_cast<int>(require<int64_t>(node, k));
      else {
        WaveSpeedCase w = parse_wave_speed(require<std::string>(node, k));
        if (w == WaveSpeedCase::custom) throw ConfigError("custom wave speed is not configurable");
        c.wave_case = static_cast<int>(w) + 1;
      }
    } else if (k == "diffusion") c.diffusion = parse_diffusion(require<std::string>(node, k));
    else if (k == "absorber") c.absorber.kind = parse_absorber(require<std::string>(node, k));
    else if (k == "alpha") c.absorber.alpha = require<double>(node, k);
    else if (k == "kappa_lin") c.absorber.kappa_lin = require<double>(node, k);
    else if (k == "cap_amplitude") c.absorber.cap_amplitude = require<double>(node, k);
    else if (k == "cap_order") c.absorber.cap_order = static_cast<int>(require<int64_t>(node, k));
    else if (k == "method") c.method = parse_method(require<std::string>(node, k));
    else if (k == "schedule") c.schedule = parse_schedule(require<std::string>(node, k));
    else if (k == "gmres") c.gmres = require<bool>(node, k);
    else if (k == "tol") c.tol = require<double>(node, k);
    else if (k == "max_iters") c.max_iters = static_cast<int>(require<int64_t>(node, k));
    else if (k == "gmres_maxit") c.gmres_maxit = static_cast<int>(require<int64_t>(node, k));
    else if (k == "x0") {
      auto arr = node.as_array();
      if (!arr || arr->size() != 2) throw ConfigError("x0 must be a two-element array");
      c.x0 = Point(require<double>((*arr)[0], k), require<double>((*arr)[1], k));
    } else if (k == "load_support") {
      std::string s = require<std::string>(node, k);
      if (s == "interior") c.load_interior_only = true;
      else if (s == "full") c.load_interior_only = false;
      else throw ConfigError("load_support must be 'interior' or 'full'");
    } else if (k == "initial_guess") {
      std::string s = require<std::string>(node, k);
      if (s == "zero") c.random_initial_guess = false;
      else if (s == "random") c.random_initial_guess = true;
      else throw ConfigError("initial_guess must be 'zero' or 'random'");
    } else if (k == "seed") c.seed = static_cast<unsigned>(require<int64_t>(node, k));
    else if (k == "degree") c.degree = static_cast<int>(require<int64_t>(node, k));
    else if (k == "h_exponent") c.h_exponent = require<double>(node, k);
    else if (k == "elements_per_unit") c.elements_per_unit = static_cast<int>(require<int64_t>(node, k));
    else if (k == "max_dofs") c.max_dofs = require<int64_t>(node, k);
  }
  if (c.strip && c.dims[1] != 1) throw ConfigError("strip decompositions take N, not dims");
  c.validate();
  return c;
}

}  // namespace

std::vector<ExperimentConfig> parse_configs(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
  ExperimentConfig base;
  for (const auto& [key, node] : root) {
    std::string k(key.str());
    if (k != "defaults" && k != "config") throw ConfigError("unknown top-level key '" + k + "'");
  }
  if (auto d = root["defaults"].as_table()) {
    base = parse_one(*d, base);
  }
  std::vector<ExperimentConfig> out;
  auto arr = root["config"].as_array();
  if (!arr) throw ConfigError("no [[config]] tables found");
  for (const auto& e : *arr) {
    auto t = e.as_table();
    if (!t) throw ConfigError("config entries must be tables");
    out.push_back(parse_one(*t, base));
  }
  return out;
}

std::vector<ExperimentConfig> load_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_configs(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Problem build_problem(const ExperimentConfig& cfg, double k, int threads) {
  cfg.validate();
  auto t0 = Clock::now();
  Problem p;
  p.k = k;
  p.dec = cfg.decomposition();
  HRule rule;
  rule.exponent = cfg.h_exponent;
  rule.elements_per_unit = cfg.elements_per_unit;
  rule.breakpoints = p.dec.breakpoints();
  p.mesh = build_mesh(p.dec.L1, p.dec.L2, cfg.kappa, k, cfg.degree, rule);
  long dofs = static_cast<long>(p.mesh.nx) * p.mesh.ny;
  if (dofs > cfg.max_dofs)
    throw BudgetError("problem has " + std::to_string(dofs) + " unknowns, over the budget of " +
                      std::to_string(cfg.max_dofs));
  p.c = wave_speed_case(cfg.wave_case);
  p.A = cfg.diffusion == DiffusionKind::badA ? diffusion_badA() : diffusion_identity();
  p.global = assemble_global(p.mesh, cfg.absorber, p.c, p.A, k);
  p.f = assemble_load(p.mesh, k, cfg.x0, cfg.load_interior_only);
  p.u_ref = Factorization(p.global.matrix).solve(p.f);
  p.u0 = CVector::Zero(p.f.size());
  if (cfg.random_initial_guess) {
    std::mt19937 gen(cfg.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < p.u0.size(); ++i) {
      double re = U(gen), im = U(gen);
      if (!p.global.dirichlet[i]) p.u0[i] = Complex(re, im);
    }
  }
  p.pou = build_pou(p.dec, p.mesh);
  std::vector<Transfer> transfers = transfer_operators(p.dec, p.mesh, p.pou);
  std::vector<Factorization> local;
  for (int j = 0; j < p.dec.size(); ++j)
    local.emplace_back(assemble_local(j, p.dec, p.mesh, cfg.absorber, p.c, p.A, k).matrix);
  p.pre = RasPreconditioner(std::move(transfers), std::move(local), threads);
  p.setup_ms = ms_since(t0);
  return p;
}

namespace {

std::string dims_label(const ExperimentConfig& cfg) {
  if (cfg.strip) return std::to_string(cfg.dims[0]);
  return std::to_string(cfg.dims[0]) + "x" + std::to_string(cfg.dims[1]);
}

std::string case_label(const ExperimentConfig& cfg) {
  std::string s = "case" + std::to_string(cfg.wave_case);
  if (cfg.diffusion != DiffusionKind::identity) s += "-" + to_string(cfg.diffusion);
  if (std::abs(cfg.kappa - 1.0 / 40) > 1e-12) s += "-kappa" + fmt("%g", cfg.kappa);
  if (cfg.absorber.kind != AbsorberKind::pml_cubic) s += "-" + to_string(cfg.absorber.kind);
  return s;
}

std::vector<Ordering> schedule_for(const ExperimentConfig& cfg) {
  return cfg.schedule == Schedule::snake ? generate_snake(cfg.dims) : generate_lexicographic(cfg.dims);
}

}  // namespace

ReportRow run_case(const ExperimentConfig& cfg, double k, const RunOptions& opts) {
  auto t0 = Clock::now();
  Problem p = build_problem(cfg, k, opts.threads);
  ReportRow row;
  row.k = k;
  row.method = to_string(cfg.method);
  if (cfg.method == Method::rms) row.method += "-" + to_string(cfg.schedule);
  row.N_or_dims = dims_label(cfg);
  row.case_label = case_label(cfg);
  row.dofs = p.f.size();
  row.config = cfg.name;
  row.rho_budget = cfg.rho_budget();

  ResidualMetric metric(p.global.matrix, p.f, p.u_ref, p.u0);
  StopRule stop;
  stop.max_iters = std::max(cfg.max_iters, row.rho_budget);
  stop.tol = cfg.tol;
  stop.min_iters = row.rho_budget;

  if (cfg.method != Method::ras_gmres) {
    SchwarzResult r = cfg.method == Method::rms
                          ? run_sequential(p.pre, p.global.matrix, p.f, p.u0, schedule_for(cfg), stop, metric)
                          : run_parallel(p.pre, p.global.matrix, p.f, p.u0, stop, metric);
    row.fp_trace = std::move(r.trace);
    row.iters_fp = row.fp_trace.iterations;
    row.diverged = row.fp_trace.diverged;
    if (static_cast<int>(row.fp_trace.rel_residual.size()) > row.rho_budget)
      row.rho = row.fp_trace.rel_residual[row.rho_budget];
  }

  if (cfg.method == Method::ras_gmres || cfg.gmres) {
    const CSparse& A = p.global.matrix;
    auto op = [&](const CVector& x) { return p.pre.apply(CVector(A * x)); };
    CVector b = p.pre.apply(p.f);
    GmresOptions<Complex> go;
    go.tol = cfg.tol;
    go.maxit = cfg.gmres_maxit;
    std::vector<double>& hist = row.gmres_residuals;
    hist.push_back(metric(p.u0));
    go.monitor = [&](int, const CVector& x) {
      hist.push_back(metric(CVector(p.u0 + x)));
      return hist.back() < cfg.tol;
    };
    KrylovTrace kt;
    // Left-preconditioned system for the correction e = u - u0.
    CVector rhs = b - op(p.u0);
    gmres<Complex>(op, rhs, CVector(CVector::Zero(b.size())), go, kt);
    for (std::size_t n = 0; n < hist.size(); ++n) {
      if (hist[n] < cfg.tol) {
        row.iters_gmres = static_cast<int>(n);
        break;
      }
    }
    if (cfg.method == Method::ras_gmres) {
      row.diverged = row.iters_gmres < 0;
      if (static_cast<int>(hist.size()) > row.rho_budget) row.rho = hist[row.rho_budget];
    }
  }
  row.wall_ms = ms_since(t0);
  return row;
}

Report run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Report rep;
  std::vector<double> ks = cfg.ks.empty() ? default_wavenumbers(opts.profile) : cfg.ks;
  for (double k : ks) {
    rep.rows.push_back(run_case(cfg, k, opts));
    if (opts.on_row) opts.on_row(rep.rows.back());
  }
  return rep;
}

Report run_experiments(const std::vector<ExperimentConfig>& cfgs, const RunOptions& opts) {
  Report rep;
  for (const ExperimentConfig& cfg : cfgs) {
    Report r = run_experiment(cfg, opts);
    for (ReportRow& row : r.rows) rep.rows.push_back(std::move(row));
  }
  return rep;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("unknown report format '" + name + "'");
}

std::string report_csv(const Report& report) {
  std::ostringstream out;
  out << "k,method,N_or_dims,case,iters_fp,iters_gmres,rho,diverged,dofs,wall_ms\n";
  for (const ReportRow& r : report.rows) {
    out << fmt("%g", r.k) << ',' << r.method << ',' << r.N_or_dims << ',' << r.case_label << ','
        << r.iters_fp << ',' << r.iters_gmres << ',' << fmt("%.6e", r.rho) << ','
        << (r.diverged ? "true" : "false") << ',' << r.dofs << ',' << fmt("%.1f", r.wall_ms) << '\n';
  }
  return out.str();
}

std::string report_json(const Report& report) {
  nlohmann::ordered_json j;
  j["metadata"] = {{"gmres", report.gmres_convention},
                   {"rms_iteration", report.rms_convention},
                   {"residual", "||A(u - u^n)|| / ||A(u - u^0)||"}};
  j["rows"] = nlohmann::ordered_json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["k"] = r.k;
    row["method"] = r.method;
    row["N_or_dims"] = r.N_or_dims;
    row["case"] = r.case_label;
    row["iters_fp"] = r.iters_fp;
    row["iters_gmres"] = r.iters_gmres;
    row["rho"] = std::isfinite(r.rho) ? nlohmann::ordered_json(r.rho) : nlohmann::ordered_json(nullptr);
    row["diverged"] = r.diverged;
    row["dofs"] = r.dofs;
    row["wall_ms"] = r.wall_ms;
    row["config"] = r.config;
    row["rho_budget"] = r.rho_budget;
    row["fp_residuals"] = r.fp_trace.rel_residual;
    row["gmres_residuals"] = r.gmres_residuals;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

void emit_report(const Report& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file " + path);
  out << (format == ReportFormat::csv ? report_csv(report) : report_json(report));
  out.close();
  if (!out) throw std::runtime_error("failed writing report file " + path);
}

}  // namespace helmdd
