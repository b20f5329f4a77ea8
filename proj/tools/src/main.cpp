// hgame: run declarative experiments and turn their CSV output into tables.
//
//   hgame run --spec table2.json --out results/table2 --seed 1 --jobs 4
//   hgame validate --spec table2.json
//   hgame tables --in results/table2
//   hgame plotdata --in results/table2 --out results/table2/plot
//
// Exit codes: 0 ok, 1 invalid spec or arguments, 2 runtime failure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "hgame/errors.hpp"
#include "hgame/experiment.hpp"

namespace ex = hgame::experiment;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

int cmd_run(const std::string& spec_file, std::string out, std::uint64_t seed, int jobs, bool deterministic) {
  const ex::ExperimentSpec spec = ex::load_spec(spec_file);
  if (out.empty()) out = spec.output.empty() ? "results/" + spec.name : spec.output;
  std::fprintf(stderr, "%s: %zu sweep point(s) x %zu seed(s) x %zu solver(s), %d job(s)\n", spec.name.c_str(),
               spec.n_points(), spec.seeds.size(), spec.solvers.size(), jobs);
  const ex::ExperimentResult result = ex::run_experiment(spec, {seed, jobs, deterministic});
  ex::write_outputs(spec, result, out);
  std::cout << ex::markdown_tables(result.rows);
  if (result.any_failed()) {
    for (const ex::RunRecord& r : result.runs)
      if (r.failed)
        std::fprintf(stderr, "failed: %s %s seed %llu: %s\n", spec.solvers[r.solver].label.c_str(),
                     r.sweep_key.c_str(), static_cast<unsigned long long>(r.seed), r.error.c_str());
    return kRuntime;
  }
  std::fprintf(stderr, "wrote %s\n", out.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic hierarchical game experiments"};
  app.require_subcommand(1);

  std::string spec_file, out_dir, in_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool deterministic = false;

  CLI::App* run = app.add_subcommand("run", "Run every sweep point, seed and solver of a spec");
  run->add_option("--spec", spec_file, "Experiment JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (default: spec 'output' or results/<name>)");
  run->add_option("--seed", seed, "Root seed");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--deterministic", deterministic, "Write 0 for wall-clock times so outputs are byte-identical");

  CLI::App* validate = app.add_subcommand("validate", "Check a spec without running it");
  validate->add_option("--spec", spec_file, "Experiment JSON")->required()->check(CLI::ExistingFile);

  CLI::App* tables = app.add_subcommand("tables", "Markdown tables recomputed from run CSV files");
  tables->add_option("--in", in_dir, "Directory written by 'run'")->required();

  CLI::App* plot = app.add_subcommand("plotdata", "Seed-averaged trajectories as gnuplot data files");
  plot->add_option("--in", in_dir, "Directory written by 'run'")->required();
  plot->add_option("--out", out_dir, "Output directory (default: <in>/plot)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) return cmd_run(spec_file, out_dir, seed, jobs, deterministic);
    if (*validate) {
      const ex::ExperimentSpec spec = ex::load_spec(spec_file);
      std::printf("%s: ok (%zu sweep point(s), %zu seed(s), %zu solver(s))\n", spec.name.c_str(), spec.n_points(),
                  spec.seeds.size(), spec.solvers.size());
      return kOk;
    }
    if (*tables) {
      std::cout << ex::markdown_tables(ex::aggregate_directory(in_dir));
      return kOk;
    }
    if (*plot) {
      for (const auto& f : ex::write_plot_data(in_dir, out_dir.empty() ? in_dir + "/plot" : out_dir))
        std::printf("%s\n", f.string().c_str());
      return kOk;
    }
  } catch (const hgame::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kOk;
}
