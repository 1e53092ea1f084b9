#include "helmdd/cli.hpp"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/errors.hpp"
#include "helmdd/harness.hpp"
#include "helmdd/orderings.hpp"
#include "helmdd/rays.hpp"

namespace helmdd {

namespace {

// "4x5" or "4,5" -> {4, 5}; "3" -> {3, 1}.
std::array<int, 2> parse_dims(const std::string& s) {
  std::array<int, 2> d{1, 1};
  auto whole = [&](const std::string& t) {
    std::size_t used = 0;
    int v = std::stoi(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  };
  auto x = s.find_first_of("x,");
  try {
    if (x == std::string::npos) {
      d[0] = whole(s);
    } else {
      d[0] = whole(s.substr(0, x));
      d[1] = whole(s.substr(x + 1));
    }
  } catch (const std::exception&) {
    throw ConfigError("cannot parse dimensions '" + s + "'");
  }
  if (d[0] < 1 || d[1] < 1) throw ConfigError("dimensions must be positive");
  return d;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse integer list '" + s + "'");
    }
  }
  return out;
}

Point parse_point(const std::string& s) {
  std::stringstream ss(s);
  std::string a, b;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) throw ConfigError("expected a pair 'x,y'");
  try {
    return Point(std::stod(a), std::stod(b));
  } catch (const std::exception&) {
    throw ConfigError("cannot parse pair '" + s + "'");
  }
}

// "lex", "snake", or explicit orderings "1,2,3;3,2,1" with 1-based ids.
std::vector<Ordering> parse_sequence(const std::string& s, std::array<int, 2> dims) {
  if (s == "lex" || s == "lexicographic") return generate_lexicographic(dims);
  if (s == "snake") return generate_snake(dims);
  std::vector<Ordering> seq;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ';')) {
    std::vector<int> ids = parse_ints(part);
    std::vector<int> zero;
    for (int v : ids) zero.push_back(v - 1);
    if (static_cast<int>(zero.size()) != dims[0] * dims[1])
      throw ConfigError("ordering length does not match the number of subdomains");
    seq.emplace_back(zero);
  }
  return seq;
}

void print_tableau(std::ostream& out, const Ordering& o, std::array<int, 2> dims) {
  for (const auto& row : ordering_tableau(o, dims)) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << '\n';
  }
}

struct GeometryArgs {
  std::string dims = "2";
  double delta = 1.0 / 40;
  double kappa = 1.0 / 40;
  double kappa0 = 1.0 / 40;
  int wave_case = 1;

  void add(CLI::App* app) {
    app->add_option("--dims", dims, "Strip N or checkerboard N1xN2");
    app->add_option("--delta", delta, "Overlap");
    app->add_option("--kappa", kappa, "Outer PML width");
    app->add_option("--kappa0", kappa0, "Subdomain PML width");
    app->add_option("--case", wave_case, "Wave-speed case 1, 2 or 3")->check(CLI::Range(1, 3));
  }
  Decomposition decomposition() const { return make_checkerboard(parse_dims(dims), delta, kappa, kappa0); }
};

int selftest(std::ostream& out) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    failures += !ok;
  };

  {
    Decomposition dec = make_checkerboard({2, 2}, 1.0 / 40, 1.0 / 40, 1.0 / 40);
    HRule rule;
    rule.breakpoints = dec.breakpoints();
    StructuredMesh mesh = build_mesh(1, 1, dec.kappa, 10, 1, rule);
    PartitionOfUnity pou = build_pou(dec, mesh);
    RVector sum = RVector::Zero(mesh.nx * mesh.ny);
    for (const RVector& c : pou.chi) sum += c;
    report("partition of unity sums to one", (sum.array() - 1.0).abs().maxCoeff() < 1e-12);
    auto transfers = transfer_operators(dec, mesh, pou);
    CVector v = CVector::Random(sum.size());
    CVector w = CVector::Zero(sum.size());
    for (const Transfer& t : transfers) t.add_weighted_prolong(t.restrict_vec(v), w);
    report("weighted prolongation reconstructs", (w - v).norm() <= 1e-14 * v.norm());
  }
  report("lexicographic 3x3 sequence is exhaustive",
         check_exhaustive(generate_lexicographic({3, 3}), {3, 3}).exhaustive);
  {
    Decomposition strip = make_strip(3, 1.0 / 40, 1.0 / 40, 1.0 / 40);
    WaveSpeedField c1 = wave_speed_case(1);
    report("word (1,2,1) is not allowed on a strip", !is_allowed({0, 1, 0}, strip, c1));
    report("word (1,2,3) is allowed on a strip", is_allowed({0, 1, 2}, strip, c1));
    Decomposition cb = make_checkerboard({4, 5}, 1.0 / 40, 1.0 / 40, 1.0 / 40);
    report("capital N of a 4x5 checkerboard is 8", compute_capital_N(cb, c1).value == 8);
  }
  {
    ExperimentConfig cfg;
    cfg.dims = {2, 1};
    cfg.degree = 1;
    Problem p = build_problem(cfg, 10);
    ResidualMetric metric(p.global.matrix, p.f, p.u_ref, p.u0);
    StopRule stop;
    stop.max_iters = 3;
    SchwarzResult r = run_parallel(p.pre, p.global.matrix, p.f, p.u_ref, stop, metric);
    double worst = 0;
    for (double x : r.trace.rel_residual) worst = std::max(worst, x);
    report("RAS keeps the direct solution fixed", worst < 1e-10);
  }
  out << (failures ? "selftest: FAILED\n" : "selftest: ok\n");
  return failures ? 3 : 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Overlapping Schwarz methods for PML-truncated Helmholtz problems"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run experiments from a TOML config");
  std::string config, out_path, format = "csv", profile = "desk";
  int threads = 1;
  run->add_option("--config", config, "Experiment config (TOML)")->required();
  run->add_option("--out", out_path, "Report path (stdout when omitted)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "Threads for local solves")->check(CLI::PositiveNumber);
  run->add_option("--profile", profile, "Default wavenumber grid: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));

  auto* rays = app.add_subcommand("rays", "Word and ray queries");
  rays->require_subcommand(1);
  GeometryArgs geo_n, geo_a;
  bool enumerate = false;
  auto* rays_n = rays->add_subcommand("N", "Longest allowed word");
  geo_n.add(rays_n);
  rays_n->add_flag("--enumerate", enumerate, "Enumerate words instead of using the formula");
  auto* rays_allowed = rays->add_subcommand("allowed", "Whether a word is allowed");
  geo_a.add(rays_allowed);
  std::string word;
  rays_allowed->add_option("--word", word, "Comma-separated subdomain ids (1-based)")->required();
  auto* rays_trace = rays->add_subcommand("trace", "Integrate one ray and dump it as CSV");
  std::string x0 = "0.1,0.5", xi0 = "1,0", trace_out;
  double T = 0.5, dt = 2e-3;
  int trace_case = 1;
  rays_trace->add_option("--x0", x0, "Start position 'x,y'");
  rays_trace->add_option("--xi", xi0, "Start covector 'xi1,xi2'");
  rays_trace->add_option("--time", T, "Duration");
  rays_trace->add_option("--dt", dt, "Time step");
  rays_trace->add_option("--case", trace_case, "Wave-speed case")->check(CLI::Range(1, 3));
  rays_trace->add_option("--out", trace_out, "CSV path")->required();

  auto* ord = app.add_subcommand("orderings", "Sweep orderings");
  ord->require_subcommand(1);
  std::string gen_dims = "3x3", gen_kind = "lex", chk_dims = "3x3", chk_seq = "lex";
  auto* ord_gen = ord->add_subcommand("generate", "Print an ordering sequence");
  ord_gen->add_option("--dims", gen_dims, "N1xN2");
  ord_gen->add_option("--kind", gen_kind, "lex or snake")->check(CLI::IsMember({"lex", "snake"}));
  auto* ord_chk = ord->add_subcommand("check", "Check that a sequence is exhaustive");
  ord_chk->add_option("--dims", chk_dims, "N1xN2");
  ord_chk->add_option("--seq", chk_seq, "lex, snake, or orderings like '1,2,3,4;4,3,2,1'");

  auto* self = app.add_subcommand("selftest", "Run a quick invariant suite");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      RunOptions opts;
      opts.threads = threads;
      opts.profile = parse_profile(profile);
      opts.on_row = [&](const ReportRow& r) {
        err << r.config << " k=" << r.k << " iters_fp=" << r.iters_fp << " iters_gmres=" << r.iters_gmres
            << " rho=" << r.rho << (r.diverged ? " diverged" : "") << '\n';
      };
      Report rep = run_experiments(load_configs(config), opts);
      ReportFormat f = parse_format(format);
      if (out_path.empty()) out << (f == ReportFormat::csv ? report_csv(rep) : report_json(rep));
      else emit_report(rep, f, out_path);
    } else if (rays_n->parsed()) {
      CapitalN n = compute_capital_N(geo_n.decomposition(), wave_speed_case(geo_n.wave_case), {}, enumerate);
      out << n.value << (n.lower_bound ? " (lower bound)" : "") << '\n';
    } else if (rays_allowed->parsed()) {
      Word w;
      for (int v : parse_ints(word)) w.push_back(v - 1);
      bool ok = is_allowed(w, geo_a.decomposition(), wave_speed_case(geo_a.wave_case));
      out << "allowed: " << (ok ? "true" : "false") << '\n';
    } else if (rays_trace->parsed()) {
      Trajectory tr = flow({parse_point(x0), parse_point(xi0)}, T, wave_speed_case(trace_case), dt);
      write_trajectory_csv(tr, trace_out);
    } else if (ord_gen->parsed()) {
      auto dims = parse_dims(gen_dims);
      auto seq = gen_kind == "snake" ? generate_snake(dims) : generate_lexicographic(dims);
      for (std::size_t i = 0; i < seq.size(); ++i) {
        out << "ordering " << i + 1 << ": " << to_string(seq[i]) << '\n';
        print_tableau(out, seq[i], dims);
      }
    } else if (ord_chk->parsed()) {
      auto dims = parse_dims(chk_dims);
      ExhaustiveResult r = check_exhaustive(parse_sequence(chk_seq, dims), dims);
      out << "exhaustive: " << (r.exhaustive ? "true" : "false") << '\n';
      if (!r.exhaustive) {
        out << "missed chain:";
        for (int v : r.witness) out << ' ' << v + 1;
        out << '\n';
      }
    } else if (self->parsed()) {
      return selftest(out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace helmdd
