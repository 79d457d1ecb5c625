#pragma once

// Config ingestion, machine-readable outputs and the table/figure recipes
// behind the command-line front end.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "catsynth/optimizer.hpp"

namespace catsynth::report {

using nlohmann::json;

/// A parsed JSON job document:
///   {input: {kind, k0?, gamma?: [re, im] | "free", beta_in?, parity?, two_term?},
///    aux_photons: [int], bs_theta: [real] | "free", aux_alpha: [[re, im]] | "free",
///    alpha0: real | "free", target?: {beta?, parity}, cutoff?: int,
///    optimizer?: {restarts?, seed?, max_evaluations?, tolerance?,
///                 bounds?: {theta?: [lo, hi], alpha?, alpha0?, gamma?}}}
/// Schema violations raise Error(InvalidArgument).
struct Job {
  SearchSpace space;  // every "free" field becomes a free parameter
  std::optional<double> target_beta;
  std::optional<Parity> target_parity;
  OptimizerBudget budget;
  json canonical;     // the document as parsed, keys sorted

  bool fully_specified() const noexcept { return space.free.empty(); }
  std::optional<CatSpec> target() const;
};

Job parse_job(const json& doc);
Job load_job(const std::filesystem::path& file);

json to_json(const SchemeConfig& config);
json to_json(const ConditionalResult& result);
json to_json(const OptimizationOutcome& outcome);

/// 64-bit FNV-1a of the compact dump of a (key-sorted) JSON value, as 16
/// lowercase hex digits.
std::string config_digest(const json& canonical);

struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string tool_version;
  double wall_time_seconds = 0.0;

  json to_json() const;
};

/// Writes <data_file>.manifest.json next to the data file.
void write_manifest(const std::filesystem::path& data_file, const RunManifest& manifest);

/// 9 significant digits, '.' separator, independent of the C locale.
std::string format_number(double value);

/// RFC-4180-style table: header row, CRLF-free, quoted only when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& file) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---- reproduction recipes -------------------------------------------------

struct RecipeCell {
  std::string case_name;
  InputSpec input;
  std::vector<std::size_t> aux_photons;
  Parity parity = Parity::Even;
  double beta = 0.0;
  std::optional<double> ref_fidelity;
  std::optional<double> ref_probability;  // absolute, not x1e3
  int max_evaluations = 2000;
};

struct RecipeRow {
  RecipeCell cell;
  double fidelity = 0.0;
  double probability = 0.0;
  double scq_bound_max = 0.0;
  std::size_t photons = 0;  // total photon number n of the cascade
  bool pass = false;
  std::optional<SchemeConfig> best_config;
  std::optional<std::string> error;
};

/// Slack below the reference fidelity that still counts as reproduced.
inline constexpr double kFidelitySlack = 0.005;

std::vector<std::string> recipe_names();
bool is_table_recipe(const std::string& name);

/// Cells of table1/table2/table3 (fixed beta, reference values) or the
/// fig2 single-point claim. InvalidArgument for unknown names.
std::vector<RecipeCell> table_cells(const std::string& name);

/// Optimizes one cell; pass <=> fidelity >= ref_fidelity - kFidelitySlack.
RecipeRow run_cell(const RecipeCell& cell, const OptimizerBudget& budget);

struct FigureSeries {
  std::string case_name;
  InputSpec input;
  std::vector<std::size_t> aux_photons;
  Parity parity;
  double beta_lo, beta_hi, beta_step;
};

/// Sweep definitions of fig3/fig7/fig8.
std::vector<FigureSeries> figure_series(const std::string& name);

SearchSpace cell_space(const InputSpec& input, const std::vector<std::size_t>& aux_photons);

/// CSV with columns case, parity, beta, fidelity, probability,
/// ref_fidelity, ref_probability, pass.
CsvTable recipe_table(const std::vector<RecipeRow>& rows);

/// gnuplot script plotting fidelity against beta per case from a recipe CSV.
std::string gnuplot_script(const std::string& csv_name, const std::vector<std::string>& cases);

}  // namespace catsynth::report
