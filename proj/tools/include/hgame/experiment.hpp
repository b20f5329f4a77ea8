#pragma once

// Declarative experiments: a JSON document names a game family, one or more
// solvers, a seed list and an optional one-parameter sweep. Every
// (sweep point, seed) pair draws its own instance and starting point; all
// solvers of the spec run on that same instance. See docs/experiment_schema.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hgame/run_report.hpp"

namespace hgame::experiment {

using nlohmann::json;

struct SolverSpec {
  std::string label;
  std::string method;  // vr-spp | sg | arspbr
  json config;         // method-specific fields, budget included
};

struct Sweep {
  std::string path;  // dotted path into the document, e.g. "game.n_leaders"
  std::vector<json> values;
};

struct ExperimentSpec {
  std::string name;
  json document;  // the validated input, sweep not yet applied
  std::vector<SolverSpec> solvers;
  std::vector<std::uint64_t> seeds;
  std::optional<Sweep> sweep;
  std::string output;  // default output directory; may be empty

  std::size_t n_points() const { return sweep ? sweep->values.size() : 1; }
  // "path=value" for sweep point p, "-" without a sweep.
  std::string sweep_key(std::size_t p) const;
  // The document with sweep point p applied.
  json resolved(std::size_t p) const;
};

// Throws ValidationError listing every offending field.
ExperimentSpec parse_spec(const json& document);
ExperimentSpec load_spec(const std::filesystem::path& file);

struct RunOptions {
  std::uint64_t root_seed = 0;
  int jobs = 1;
  bool deterministic = false;  // zero the wall-clock column
};

struct RunRecord {
  std::size_t point = 0;
  std::size_t seed_index = 0;
  std::size_t solver = 0;
  std::string sweep_key;
  std::uint64_t seed = 0;
  RunReport report;
  bool failed = false;
  std::string error;
};

struct AggregateRow {
  std::string solver;
  std::string sweep_key;
  int runs = 0;
  int failed = 0;
  double mean_residual = 0.0;
  double std_residual = 0.0;
  double mean_wall_ms = 0.0;
  double mean_samples = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // ordered by (point, seed, solver)
  std::vector<AggregateRow> rows;
  bool any_failed() const;
};

// Streams: root(root_seed).derive(point).derive(seed index).derive(seed value);
// below that 0 = instance, 1 = start, 2 + 2s = solver s, 3 + 2s = its residual.
// Runs execute on `jobs` workers; output order never depends on scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options);

// Samples a solver would use under its budget, without running it.
std::int64_t planned_samples(const ExperimentSpec& spec, std::size_t point, std::size_t solver);

// CSV with columns sweep_key,seed,iter,residual,residual_stderr,samples_cum,wall_ms.
struct CsvRow {
  std::string sweep_key;
  std::uint64_t seed = 0;
  std::int64_t iter = 0;
  double residual = 0.0;
  double residual_stderr = 0.0;
  std::int64_t samples_cum = 0;
  double wall_ms = 0.0;
};

void write_csv(const std::vector<const RunRecord*>& runs, const std::filesystem::path& path);
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

// Final-iteration statistics per (sweep key) over the seeds present in `rows`,
// in order of first appearance.
std::vector<AggregateRow> aggregate(const std::string& solver, const std::vector<CsvRow>& rows);

std::string summary_csv(const std::vector<AggregateRow>& rows);
std::string markdown_tables(const std::vector<AggregateRow>& rows);

// <dir>/<solver>.csv for each solver, summary.csv, summary.md, spec.json.
void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result, const std::filesystem::path& dir);

// Recomputes the aggregates from the per-run CSV files in `dir`.
std::vector<AggregateRow> aggregate_directory(const std::filesystem::path& dir);

// Gnuplot data: one file per (solver, sweep key) with columns
// iter, mean residual, standard error, mean samples over the seeds.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace hgame::experiment
