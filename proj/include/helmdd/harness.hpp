#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "helmdd/absorber.hpp"
#include "helmdd/assembly.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/media.hpp"
#include "helmdd/mesh.hpp"
#include "helmdd/schwarz.hpp"

namespace helmdd {

enum class Method { ras_fixed_point, ras_gmres, rms };
Method parse_method(const std::string& name);
std::string to_string(Method m);

enum class Schedule { lexicographic, snake };
Schedule parse_schedule(const std::string& name);
std::string to_string(Schedule s);

enum class Profile { desk, paper };
Profile parse_profile(const std::string& name);
std::vector<double> default_wavenumbers(Profile p);

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<double> ks;  // empty: the profile's default grid
  bool strip = true;
  std::array<int, 2> dims{2, 1};
  double delta = 1.0 / 40;
  double kappa = 1.0 / 40;
  double kappa0 = -1.0;  // negative: same as kappa
  int wave_case = 1;
  DiffusionKind diffusion = DiffusionKind::identity;
  AbsorberSpec absorber;
  Method method = Method::ras_fixed_point;
  Schedule schedule = Schedule::lexicographic;
  bool gmres = false;  // also run GMRES with the RAS preconditioner
  double tol = 1e-6;
  int max_iters = 50;
  int gmres_maxit = 100;
  Point x0{0.5, 0.5};
  bool load_interior_only = true;
  bool random_initial_guess = false;
  unsigned seed = 0;
  int degree = 2;
  double h_exponent = 1.25;
  int elements_per_unit = 0;  // 0: derived from h_exponent and k
  long max_dofs = 400000;

  double effective_kappa0() const { return kappa0 < 0 ? kappa : kappa0; }
  Decomposition decomposition() const;
  // Iteration index at which rho is reported.
  int rho_budget() const;
  // Throws ConfigError on inconsistent values.
  void validate() const;
};

std::vector<ExperimentConfig> parse_configs(std::string_view toml_text);
std::vector<ExperimentConfig> load_configs(const std::string& path);

// Everything needed to run a Schwarz method for one wavenumber.
struct Problem {
  double k = 0.0;
  Decomposition dec;
  StructuredMesh mesh;
  WaveSpeedField c;
  DiffusionField A;
  SparseComplexSystem global;
  CVector f;
  CVector u_ref;
  CVector u0;
  PartitionOfUnity pou;
  RasPreconditioner pre;
  double setup_ms = 0.0;
};

Problem build_problem(const ExperimentConfig& cfg, double k, int threads = 1);

struct ReportRow {
  double k = 0.0;
  std::string method;
  std::string N_or_dims;
  std::string case_label;
  int iters_fp = -1;
  int iters_gmres = -1;
  double rho = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  long dofs = 0;
  double wall_ms = 0.0;

  std::string config;
  int rho_budget = 0;
  IterationTrace fp_trace;
  std::vector<double> gmres_residuals;  // relative residual of the GMRES iterates, entry n after n steps
};

struct Report {
  std::vector<ReportRow> rows;
  std::string gmres_convention = "left preconditioning with the RAS preconditioner, initial guess 0";
  std::string rms_convention =
      "one iteration is one pass over the ordering sequence: forward plus backward sweep for strips, "
      "all vertex orderings for checkerboards";
};

struct RunOptions {
  int threads = 1;
  Profile profile = Profile::desk;
  std::function<void(const ReportRow&)> on_row;
};

ReportRow run_case(const ExperimentConfig& cfg, double k, const RunOptions& opts = {});
Report run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});
Report run_experiments(const std::vector<ExperimentConfig>& cfgs, const RunOptions& opts = {});

enum class ReportFormat { csv, json };
ReportFormat parse_format(const std::string& name);

std::string report_csv(const Report& report);
std::string report_json(const Report& report);
void emit_report(const Report& report, ReportFormat format, const std::string& path);

}  // namespace helmdd
