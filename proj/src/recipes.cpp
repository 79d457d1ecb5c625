// Reference cells and sweep definitions for the reproduce subcommand.

#include <algorithm>
#include <sstream>

#include "catsynth/error.hpp"
#include "catsynth/report.hpp"

namespace catsynth::report {

namespace {

using Photons = std::vector<std::size_t>;

InputSpec kitten_for(double beta_in, Parity parity) { return InputSpec::kitten(beta_in, parity); }

void add_pair(std::vector<RecipeCell>& out, const std::string& name, const InputSpec& even_in, const InputSpec& odd_in,
              const Photons& aux, double beta, double f_even, double f_odd, double p_even, double p_odd,
              int evaluations = 2000) {
  out.push_back({name, even_in, aux, Parity::Even, beta, f_even, p_even, evaluations});
  out.push_back({name, odd_in, aux, Parity::Odd, beta, f_odd, p_odd, evaluations});
}

}  // namespace

std::vector<std::string> recipe_names() { return {"table1", "table2", "table3", "fig2", "fig3", "fig7", "fig8"}; }

bool is_table_recipe(const std::string& name) {
  return name == "table1" || name == "table2" || name == "table3" || name == "fig2";
}

std::vector<RecipeCell> table_cells(const std::string& name) {
  std::vector<RecipeCell> out;
  if (name == "table1") {
    add_pair(out, "(iii) 4-4-4", InputSpec::fock(4), InputSpec::fock(4), {4, 4}, 2.5, 0.957, 0.947, 18.8e-3, 7.5e-3);
    add_pair(out, "(ii) 3-3-3-3", InputSpec::fock(3), InputSpec::fock(3), {3, 3, 3}, 2.5, 0.971, 0.967, 4.7e-3,
             6.0e-3);
    add_pair(out, "(i) 4-2-2-2", InputSpec::fock(4), InputSpec::fock(4), {2, 2, 2}, 2.25, 0.970, 0.963, 4.2e-3,
             5.1e-3);
  } else if (name == "table2") {
    add_pair(out, "kitten 0.5 (4-4)", kitten_for(0.5, Parity::Even), kitten_for(0.5, Parity::Odd), {4, 4}, 2.5, 0.963,
             0.951, 19e-3, 15e-3);
  } else if (name == "table3") {
    add_pair(out, "kitten 1 (1-1)", kitten_for(1.0, Parity::Even), kitten_for(1.0, Parity::Odd), {1, 1}, 1.75, 0.963,
             0.977, 36e-3, 56e-3);
    add_pair(out, "kitten 1 (2-2)", kitten_for(1.0, Parity::Even), kitten_for(1.0, Parity::Odd), {2, 2}, 2.0, 0.981,
             0.958, 72e-3, 79e-3);
    add_pair(out, "kitten 1 (4-4)", kitten_for(1.0, Parity::Even), kitten_for(1.0, Parity::Odd), {4, 4}, 2.5, 0.984,
             0.980, 35e-3, 26e-3);
  } else if (name == "fig2") {
    out.push_back({"vacuum 2-2-2-2-2", InputSpec::vacuum(), {2, 2, 2, 2, 2}, Parity::Even, 2.0, 0.98,
                   std::nullopt, 8000});
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown table recipe '" + name + "'");
  }
  return out;
}

SearchSpace cell_space(const InputSpec& input, const std::vector<std::size_t>& aux_photons) {
  SchemeConfig tmpl;
  tmpl.input = input;
  tmpl.aux_photons = aux_photons;
  return SearchSpace::all_free(std::move(tmpl));
}

RecipeRow run_cell(const RecipeCell& cell, const OptimizerBudget& budget) {
  RecipeRow row;
  row.cell = cell;
  const SearchSpace space = cell_space(cell.input, cell.aux_photons);
  row.photons = space.fixed.total_photons();
  try {
    row.scq_bound_max = scq_fidelity_max_alpha(row.photons, cell.parity, cell.beta).fidelity;
    OptimizerBudget b = budget;
    b.max_evaluations = std::max(b.max_evaluations, cell.max_evaluations);
    const OptimizationOutcome best = optimize(space, CatSpec(cell.beta, cell.parity), b);
    row.fidelity = best.fidelity;
    row.probability = best.success_probability;
    row.best_config = best.best_config;
    row.pass = !cell.ref_fidelity || row.fidelity >= *cell.ref_fidelity - kFidelitySlack;
  } catch (const Error& e) {
    row.error = e.what();
    row.pass = false;
  }
  return row;
}

std::vector<FigureSeries> figure_series(const std::string& name) {
  std::vector<FigureSeries> out;
  auto both = [&](const std::string& c, const InputSpec& even_in, const InputSpec& odd_in, Photons aux, double lo,
                  double hi) {
    out.push_back({c, even_in, aux, Parity::Even, lo, hi, 0.25});
    out.push_back({c, odd_in, aux, Parity::Odd, lo, hi, 0.25});
  };
  if (name == "fig3") {
    both("(i) 4-2-2-2", InputSpec::fock(4), InputSpec::fock(4), {2, 2, 2}, 1.0, 3.0);
    both("(ii) 3-3-3-3", InputSpec::fock(3), InputSpec::fock(3), {3, 3, 3}, 1.0, 3.0);
    both("(iii) 4-4-4", InputSpec::fock(4), InputSpec::fock(4), {4, 4}, 1.0, 3.0);
  } else if (name == "fig7") {
    both("kitten 0.5 (4-4)", kitten_for(0.5, Parity::Even), kitten_for(0.5, Parity::Odd), {4, 4}, 0.5, 3.0);
  } else if (name == "fig8") {
    for (std::size_t k : {1u, 2u, 4u}) {
      const std::string c = "kitten 1 (" + std::to_string(k) + "-" + std::to_string(k) + ")";
      both(c, kitten_for(1.0, Parity::Even), kitten_for(1.0, Parity::Odd), {k, k}, 1.0, 3.0);
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown figure recipe '" + name + "'");
  }
  return out;
}

CsvTable recipe_table(const std::vector<RecipeRow>& rows) {
  CsvTable t({"case", "parity", "beta", "fidelity", "probability", "paper_fidelity", "paper_probability", "pass"});
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    t.add_row({r.cell.case_name, std::string(to_string(r.cell.parity)), format_number(r.cell.beta),
               r.error ? std::string("nan") : format_number(r.fidelity),
               r.error ? std::string("nan") : format_number(r.probability), opt(r.cell.ref_fidelity),
               opt(r.cell.ref_probability), r.pass ? "true" : "false"});
  }
  return t;
}

std::string gnuplot_script(const std::string& csv_name, const std::vector<std::string>& cases) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 'beta'\n"
     << "set ylabel 'fidelity'\n"
     << "set yrange [0:1.02]\n"
     << "set multiplot layout 1,2\n";
  for (const char* parity : {"even", "odd"}) {
    os << "set title '" << parity << "'\n"
       << "plot";
    for (std::size_t i = 0; i < cases.size(); ++i) {
      os << (i ? ", \\\n    " : " ") << "'" << csv_name << "' using 3:((strcol(1) eq '" << cases[i]
         << "' && strcol(2) eq '" << parity << "') ? $4 : 1/0) with linespoints title '" << cases[i] << "'";
    }
    os << '\n';
  }
  os << "unset multiplot\n";
  return os.str();
}

}  // namespace catsynth::report
