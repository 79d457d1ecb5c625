// catsynth: command-line front end for the cat-state cascade toolkit.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catsynth/error.hpp"
#include "catsynth/report.hpp"

namespace fs = std::filesystem;
using namespace catsynth;
using report::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitZeroProbability = 3;
constexpr int kExitReproduction = 4;

constexpr double kVerifyFidelity = 1e-9;
constexpr double kVerifyProbability = 1e-8;

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t cutoff = 0;
  fs::path out = ".";
  int threads = 0;
  bool verify_oracle = false;
  std::string command_line;
  Clock clock;
};

class Writer {
 public:
  Writer(const Globals& g, std::string digest, std::uint64_t seed) : g_(g), digest_(std::move(digest)), seed_(seed) {}

  fs::path path(const std::string& name) const { return g_.out / name; }

  void text(const std::string& name, const std::string& body) const {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path(name).string());
    out << body;
    out.close();
    manifest(name);
  }
  void csv(const std::string& name, const report::CsvTable& t) const {
    t.write(path(name));
    manifest(name);
  }

 private:
  void manifest(const std::string& name) const {
    report::write_manifest(path(name), {g_.command_line, digest_, seed_, CATSYNTH_VERSION, g_.clock.seconds()});
    std::cout << "wrote " << path(name).string() << '\n';
  }

  const Globals& g_;
  std::string digest_;
  std::uint64_t seed_;
};

std::uint64_t effective_seed(const Globals& g, std::uint64_t fallback) { return g.seed.value_or(fallback); }

void apply_globals(const Globals& g, report::Job& job) {
  if (g.seed) job.budget.seed = *g.seed;
  if (g.threads > 0) job.budget.threads = g.threads;
  if (g.cutoff > 0) job.space.fixed.cutoff = std::max(job.space.fixed.cutoff, g.cutoff);
}

// ---- scq -------------------------------------------------------------------

struct ScqArgs {
  std::size_t n = 0;
  std::string parity = "even";
  std::optional<double> beta;
  std::vector<double> range;  // lo hi step
  std::string alpha_mode = "fixed";
  double alpha = 0.0;
  bool emit_roots = false;
};

int cmd_scq(const Globals& g, const ScqArgs& a) {
  const Parity parity = parse_parity(a.parity);
  std::vector<double> betas;
  if (a.beta) {
    betas.push_back(*a.beta);
  } else {
    if (a.range.size() != 3 || !(a.range[2] > 0.0) || a.range[1] < a.range[0]) {
      throw Error(ErrorKind::InvalidArgument, "--beta-range needs LO HI STEP with LO <= HI and STEP > 0");
    }
    const auto steps = static_cast<long>(std::floor((a.range[1] - a.range[0]) / a.range[2] + 1e-9));
    for (long i = 0; i <= steps; ++i) betas.push_back(a.range[0] + static_cast<double>(i) * a.range[2]);
  }
  for (double b : betas) {
    if (!(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be > 0");
  }
  if (a.alpha_mode != "fixed" && a.alpha_mode != "maximized") {
    throw Error(ErrorKind::InvalidArgument, "--alpha-mode must be fixed or maximized");
  }

  report::CsvTable table({"beta", "fidelity_upper_bound", "alpha_used"});
  report::CsvTable roots({"beta", "index", "re", "im"});
  for (double b : betas) {
    double alpha = a.alpha, f = 0.0;
    if (a.alpha_mode == "maximized") {
      const ScqBound best = scq_fidelity_max_alpha(a.n, parity, b);
      alpha = best.alpha;
      f = best.fidelity;
    } else {
      f = scq_fidelity(a.n, CatSpec(b, parity, alpha));
    }
    table.add_row({report::format_number(b), report::format_number(f), report::format_number(alpha)});
    std::cout << "beta=" << report::format_number(b) << " fidelity=" << report::format_number(f)
              << " alpha=" << report::format_number(alpha) << '\n';
    if (a.emit_roots && a.n > 0) {
      const auto z = polynomial_roots(scq_polynomial(a.n, CatSpec(b, parity, alpha)));
      for (std::size_t j = 0; j < z.roots.size(); ++j) {
        roots.add_row({report::format_number(b), std::to_string(j), report::format_number(z.roots[j].real()),
                       report::format_number(z.roots[j].imag())});
        std::cout << "  z" << j << " = " << report::format_number(z.roots[j].real()) << " "
                  << report::format_number(z.roots[j].imag()) << "i\n";
      }
    }
  }
  json canon = {{"n", a.n}, {"parity", a.parity}, {"betas", betas}, {"alpha_mode", a.alpha_mode}, {"alpha", a.alpha}};
  Writer w(g, report::config_digest(canon), effective_seed(g, 0));
  w.csv("scq.csv", table);
  if (a.emit_roots) w.csv("scq_roots.csv", roots);
  return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

// Mismatch description, empty when all applicable cross-checks agree.
std::string verify(const SchemeConfig& config, const ConditionalResult& result) {
  std::string issues;
  auto compare = [&](const char* who, const FockVector& state, double probability) {
    const double f = fidelity_pure(result.state, state);
    const double rel = std::abs(probability - result.success_probability) / result.success_probability;
    std::cout << "verify " << who << ": fidelity " << report::format_number(f) << ", probability rel. error "
              << report::format_number(rel) << '\n';
    if (f < 1.0 - kVerifyFidelity || rel > kVerifyProbability) issues += std::string(" ") + who;
  };
  if (config.modes() <= 4) {
    const OracleResult o = polynomial_oracle(config);
    compare("polynomial", o.state, o.probability);
  }
  const InputSpec& in = config.input;
  const bool coherent_like = in.kind == InputSpec::Kind::Coherent || in.kind == InputSpec::Kind::Vacuum;
  if (coherent_like && config.modes() == 1) {
    const auto a = analytic_conditional_m1(in.gamma, config.bs_theta[0], config.aux_alpha[0], config.aux_photons[0],
                                           config.alpha0, result.state.cutoff());
    compare("analytic-m1", a.state, a.probability);
  } else if (coherent_like && config.modes() == 2) {
    const auto a = analytic_conditional_m2(in.gamma, config.bs_theta[0], config.bs_theta[1], config.aux_alpha[0],
                                           config.aux_alpha[1], config.aux_photons[0], config.aux_photons[1],
                                           config.alpha0, result.state.cutoff());
    compare("analytic-m2", a.state, a.probability);
  }
  return issues;
}

int cmd_simulate(const Globals& g, const fs::path& file) {
  report::Job job = report::load_job(file);
  apply_globals(g, job);
  if (!job.fully_specified()) {
    throw Error(ErrorKind::InvalidArgument, "simulate needs bs_theta, aux_alpha and alpha0 fixed (no \"free\")");
  }
  const ConditionalResult r = run_scheme(job.space.fixed, job.target());
  json out = report::to_json(r);
  out["config"] = report::to_json(job.space.fixed);
  std::cout << "success_probability=" << report::format_number(r.success_probability);
  if (r.fidelity) std::cout << " fidelity=" << report::format_number(*r.fidelity);
  std::cout << '\n';

  Writer w(g, report::config_digest(job.canonical), effective_seed(g, 0));
  w.text("simulate.json", out.dump(2) + "\n");
  if (g.verify_oracle) {
    const std::string issues = verify(job.space.fixed, r);
    if (!issues.empty()) {
      std::cerr << "oracle mismatch:" << issues << '\n';
      return kExitReproduction;
    }
  }
  return kExitOk;
}

// ---- optimize / sweep ----------------------------------------------------------

struct BudgetArgs {
  std::optional<int> restarts;
  std::optional<int> max_evaluations;
};

void apply_budget(const BudgetArgs& b, OptimizerBudget& budget) {
  if (b.restarts) budget.restarts = *b.restarts;
  if (b.max_evaluations) budget.max_evaluations = *b.max_evaluations;
  if (budget.restarts < 1 || budget.max_evaluations < 1) {
    throw Error(ErrorKind::InvalidArgument, "restarts and max-evaluations must be >= 1");
  }
}

report::Job load_search_job(const Globals& g, const fs::path& file, const BudgetArgs& b) {
  report::Job job = report::load_job(file);
  apply_globals(g, job);
  apply_budget(b, job.budget);
  if (!job.target_parity) throw Error(ErrorKind::InvalidArgument, "config needs target.parity");
  if (job.space.free.empty()) throw Error(ErrorKind::InvalidArgument, "config has no \"free\" parameter to optimize");
  return job;
}

int cmd_optimize(const Globals& g, const fs::path& file, const BudgetArgs& b) {
  const report::Job job = load_search_job(g, file, b);
  if (!job.target_beta) throw Error(ErrorKind::InvalidArgument, "optimize needs target.beta");
  const OptimizationOutcome best = optimize(job.space, *job.target(), job.budget);
  const ConditionalResult r = run_scheme(best.best_config, job.target());
  json out = report::to_json(best);
  out["result"] = report::to_json(r);
  const std::size_t n = job.space.fixed.total_photons();
  const ScqBound bound = scq_fidelity_max_alpha(n, *job.target_parity, *job.target_beta);
  out["scq_bound"] = {{"photons", n}, {"fidelity", bound.fidelity}, {"alpha", bound.alpha}};
  std::cout << "fidelity=" << report::format_number(best.fidelity)
            << " probability=" << report::format_number(best.success_probability)
            << " scq_bound=" << report::format_number(bound.fidelity) << '\n';
  Writer(g, report::config_digest(job.canonical), job.budget.seed).text("optimize.json", out.dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep(const Globals& g, const fs::path& file, const BudgetArgs& b, double lo, double hi, double step) {
  const report::Job job = load_search_job(g, file, b);
  const auto points = sweep_beta(job.space, *job.target_parity, lo, hi, step, job.budget);
  report::CsvTable t({"beta", "fidelity", "probability", "scq_bound_alpha0", "scq_bound_max", "scq_alpha", "error"});
  for (const auto& p : points) {
    t.add_row({report::format_number(p.beta), report::format_number(p.fidelity), report::format_number(p.probability),
               report::format_number(p.scq_bound_alpha0), report::format_number(p.scq_bound_max),
               report::format_number(p.scq_bound_alpha), p.error.value_or("")});
  }
  json canon = job.canonical;
  canon["sweep"] = {lo, hi, step};
  Writer(g, report::config_digest(canon), job.budget.seed).csv("sweep.csv", t);
  return kExitOk;
}

// ---- reproduce -------------------------------------------------------------------

int cmd_reproduce(const Globals& g, const std::string& name, const BudgetArgs& b) {
  OptimizerBudget budget;
  budget.restarts = 32;
  if (g.seed) budget.seed = *g.seed;
  if (g.threads > 0) budget.threads = g.threads;
  apply_budget(b, budget);

  std::vector<report::RecipeRow> rows;
  std::vector<std::string> cases;
  report::CsvTable bounds({"case", "parity", "beta", "photons", "scq_bound_alpha0", "scq_bound_max", "scq_alpha"});
  if (report::is_table_recipe(name)) {
    for (const auto& cell : report::table_cells(name)) {
      rows.push_back(report::run_cell(cell, budget));
      const auto& r = rows.back();
      std::cout << cell.case_name << " " << to_string(cell.parity) << " beta=" << report::format_number(cell.beta)
                << " F=" << report::format_number(r.fidelity) << " P=" << report::format_number(r.probability);
      if (cell.ref_fidelity) std::cout << " ref F=" << report::format_number(*cell.ref_fidelity);
      if (cell.ref_probability && r.probability > 0.0) {
        std::cout << " P/ref=" << report::format_number(r.probability / *cell.ref_probability);
      }
      std::cout << (r.pass ? " pass" : " FAIL") << (r.error ? " (" + *r.error + ")" : std::string()) << '\n';
    }
  } else {
    for (const auto& s : report::figure_series(name)) {
      if (std::find(cases.begin(), cases.end(), s.case_name) == cases.end()) cases.push_back(s.case_name);
      const auto points = sweep_beta(report::cell_space(s.input, s.aux_photons), s.parity, s.beta_lo, s.beta_hi,
                                     s.beta_step, budget);
      const std::size_t photons = report::cell_space(s.input, s.aux_photons).fixed.total_photons();
      for (const auto& p : points) {
        bounds.add_row({s.case_name, std::string(to_string(s.parity)), report::format_number(p.beta),
                        std::to_string(photons), report::format_number(p.scq_bound_alpha0),
                        report::format_number(p.scq_bound_max), report::format_number(p.scq_bound_alpha)});
        report::RecipeRow r;
        r.cell = {s.case_name, s.input, s.aux_photons, s.parity, p.beta, std::nullopt, std::nullopt, 2000};
        r.fidelity = p.fidelity;
        r.probability = p.probability;
        r.scq_bound_max = p.scq_bound_max;
        r.error = p.error;
        r.pass = !p.error;
        rows.push_back(std::move(r));
      }
      std::cout << s.case_name << " " << to_string(s.parity) << ": " << points.size() << " points\n";
    }
  }

  json canon = {{"recipe", name}, {"restarts", budget.restarts}, {"max_evaluations", budget.max_evaluations}};
  Writer w(g, report::config_digest(canon), budget.seed);
  const std::string csv = name + ".csv";
  w.csv(csv, report::recipe_table(rows));
  if (!cases.empty()) {
    w.csv(name + "_bounds.csv", bounds);
    w.text(name + ".gp", report::gnuplot_script(csv, cases));
  }
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
  return ok ? kExitOk : kExitReproduction;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroProbability:
    case ErrorKind::AllStartsInfeasible: return kExitZeroProbability;
    default: return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional linear-optical generation of Schroedinger cat states"};
  app.set_version_flag("--version", CATSYNTH_VERSION);
  app.require_subcommand(1);

  Globals g;
  for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
  app.add_option("--seed", g.seed, "Optimizer seed");
  app.add_option("--cutoff", g.cutoff, "Raise the Fock cutoff to at least this value");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--verify-oracle", g.verify_oracle, "Cross-check simulate against the independent oracles");

  ScqArgs scq;
  auto* c_scq = app.add_subcommand("scq", "Fidelity bound of genuine cat qudits");
  c_scq->add_option("--n", scq.n, "Qudit order")->required();
  c_scq->add_option("--parity", scq.parity, "even | odd")->capture_default_str();
  auto* beta_opt = c_scq->add_option("--beta", scq.beta, "Cat amplitude");
  auto* range_opt = c_scq->add_option("--beta-range", scq.range, "LO HI STEP")->expected(3);
  beta_opt->excludes(range_opt);
  c_scq->add_option("--alpha-mode", scq.alpha_mode, "fixed | maximized")->capture_default_str();
  c_scq->add_option("--alpha", scq.alpha, "Representation displacement for fixed mode");
  c_scq->add_flag("--emit-roots", scq.emit_roots, "Also list polynomial roots");

  fs::path config;
  BudgetArgs budget;
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--restarts", budget.restarts, "Optimizer restarts");
    c->add_option("--max-evaluations", budget.max_evaluations, "Objective evaluations per restart");
  };
  auto* c_sim = app.add_subcommand("simulate", "Run one fully specified cascade");
  c_sim->add_option("config", config, "JSON config")->required();
  auto* c_opt = app.add_subcommand("optimize", "Maximize fidelity over the free parameters");
  c_opt->add_option("config", config, "JSON config")->required();
  add_budget(c_opt);
  double lo = 0, hi = 0, step = 0.25;
  auto* c_sweep = app.add_subcommand("sweep", "Optimize across a range of target amplitudes");
  c_sweep->add_option("config", config, "JSON config")->required();
  c_sweep->add_option("--beta-lo", lo)->required();
  c_sweep->add_option("--beta-hi", hi)->required();
  c_sweep->add_option("--beta-step", step)->capture_default_str();
  add_budget(c_sweep);
  std::string recipe;
  auto* c_rep = app.add_subcommand("reproduce", "Regenerate a reference table or figure");
  c_rep->add_option("recipe", recipe, "table1 | table2 | table3 | fig2 | fig3 | fig7 | fig8")
      ->required()
      ->check(CLI::IsMember(report::recipe_names()));
  add_budget(c_rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g.threads > 0) omp_set_num_threads(g.threads);
    fs::create_directories(g.out);
    if (*c_scq) return cmd_scq(g, scq);
    if (*c_sim) return cmd_simulate(g, config);
    if (*c_opt) return cmd_optimize(g, config, budget);
    if (*c_sweep) return cmd_sweep(g, config, budget, lo, hi, step);
    if (*c_rep) return cmd_reproduce(g, recipe, budget);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
