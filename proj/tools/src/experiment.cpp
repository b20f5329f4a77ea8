#include "hgame/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "build.hpp"
#include "hgame/errors.hpp"
#include "hgame/stats.hpp"

namespace hgame::experiment {

namespace {

struct Task {
  std::size_t point, seed_index, solver;
};

RunRecord execute(const ExperimentSpec& spec, const json& doc, const Task& t, const RunOptions& opt) {
  RunRecord rec;
  rec.point = t.point;
  rec.seed_index = t.seed_index;
  rec.solver = t.solver;
  rec.sweep_key = spec.sweep_key(t.point);
  rec.seed = spec.seeds[t.seed_index];
  const RandomStream base =
      RandomStream(opt.root_seed).derive(t.point).derive(t.seed_index).derive(rec.seed);
  try {
    std::vector<std::string> bad;
    RandomStream inst = base.derive(0);
    const detail::GameInstance g = detail::make_game(doc.at("game"), inst, bad);
    RandomStream xs = base.derive(1);
    const Vector x0 = detail::make_start(doc, g, xs, bad);
    const json& sj = doc.at("solvers").at(t.solver);
    const std::string method = sj.at("method").get<std::string>();
    const std::int64_t iters = detail::iterations(doc, t.solver, bad);
    const ResidualHook hook = detail::make_hook(doc, sj, g, base.derive(3 + 2 * t.solver), bad);
    const RandomStream solver_stream = base.derive(2 + 2 * t.solver);
    if (method == "vr-spp") {
      VrSppConfig c = detail::vr_config(sj, bad, "solver");
      c.outer_iters = iters;
      if (!bad.empty()) throw ValidationError(bad);
      rec.report = vr_spp::run(*g.game, c, x0, solver_stream, hook);
    } else if (method == "sg") {
      SgConfig c = detail::sg_config(sj, bad, "solver");
      c.total_iters = iters;
      if (!bad.empty()) throw ValidationError(bad);
      rec.report = sg::run(*g.game, c, x0, solver_stream, hook);
    } else {
      const SmoothingParams sp =
          detail::smoothing(sj.contains("smoothing") ? &sj.at("smoothing") : nullptr, bad, "solver.smoothing");
      ArspbrConfig c = detail::arspbr_config(sj, bad, "solver");
      c.outer_iters = iters;
      if (!bad.empty()) throw ValidationError(bad);
      rec.report = arspbr::run(*g.game, sp, c, x0, solver_stream, hook);
    }
    if (opt.deterministic)
      for (TracePoint& p : rec.report.trace) p.wall_ms = 0.0;
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.report = RunReport{};
  }
  return rec;
}

std::vector<CsvRow> rows_of(const std::vector<const RunRecord*>& runs) {
  std::vector<CsvRow> rows;
  for (const RunRecord* r : runs) {
    if (r->failed) {
      const double nan = std::nan("");
      rows.push_back({r->sweep_key, r->seed, -1, nan, nan, 0, 0.0});
      continue;
    }
    for (const TracePoint& t : r->report.trace)
      rows.push_back({r->sweep_key, r->seed, t.k, t.residual, t.residual_stderr, t.samples_cum, t.wall_ms});
  }
  return rows;
}

std::vector<const RunRecord*> runs_of(const ExperimentResult& result, std::size_t solver) {
  std::vector<const RunRecord*> out;
  for (const RunRecord& r : result.runs)
    if (r.solver == solver) out.push_back(&r);
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

const char* kHeader = "sweep_key,seed,iter,residual,residual_stderr,samples_cum,wall_ms";

}  // namespace

bool ExperimentResult::any_failed() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.failed; });
}

std::int64_t planned_samples(const ExperimentSpec& spec, std::size_t point, std::size_t solver) {
  const json doc = spec.resolved(point);
  std::vector<std::string> bad;
  const std::int64_t iters = detail::iterations(doc, solver, bad);
  if (!bad.empty()) throw ValidationError(bad);
  return detail::samples_for(doc.at("solvers").at(solver), iters);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  std::vector<json> docs;
  for (std::size_t p = 0; p < spec.n_points(); ++p) docs.push_back(spec.resolved(p));
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < spec.n_points(); ++p)
    for (std::size_t s = 0; s < spec.seeds.size(); ++s)
      for (std::size_t v = 0; v < spec.solvers.size(); ++v) tasks.push_back({p, s, v});

  ExperimentResult result;
  result.runs.resize(tasks.size());
  // Each worker claims the next task index and fills its own slot, so the
  // result order is the task order whatever the scheduling.
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
      result.runs[i] = execute(spec, docs[tasks[i].point], tasks[i], options);
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (std::size_t v = 0; v < spec.solvers.size(); ++v) {
    const auto rows = aggregate(spec.solvers[v].label, rows_of(runs_of(result, v)));
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  return result;
}

void write_csv(const std::vector<const RunRecord*>& runs, const std::filesystem::path& path) {
  const std::vector<CsvRow> rows = rows_of(runs);
  if (rows.empty()) throw ValidationError({"csv: no iterates to write for '" + path.string() + "'"});
  std::string text = std::string(kHeader) + "\n";
  for (const CsvRow& r : rows) {
    text += r.sweep_key + "," + std::to_string(r.seed) + "," + std::to_string(r.iter) + "," + g17(r.residual) + "," +
            g17(r.residual_stderr) + "," + std::to_string(r.samples_cum) + "," + g17(r.wall_ms) + "\n";
  }
  write_text(path, text);
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ValidationError({path.string() + ": unexpected header"});
  std::vector<CsvRow> rows;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 7) throw ValidationError({path.string() + ":" + std::to_string(n) + ": expected 7 columns"});
    try {
      rows.push_back({cells[0], std::stoull(cells[1]), std::stoll(cells[2]), std::strtod(cells[3].c_str(), nullptr),
                      std::strtod(cells[4].c_str(), nullptr), std::stoll(cells[5]),
                      std::strtod(cells[6].c_str(), nullptr)});
    } catch (const std::exception&) {
      throw ValidationError({path.string() + ":" + std::to_string(n) + ": malformed number"});
    }
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::string& solver, const std::vector<CsvRow>& rows) {
  // Last row of each (sweep key, seed) run is its final iterate.
  std::vector<std::string> keys;
  std::map<std::string, std::vector<std::pair<std::uint64_t, const CsvRow*>>> finals;
  for (const CsvRow& r : rows) {
    auto& runs = finals[r.sweep_key];
    if (runs.empty()) keys.push_back(r.sweep_key);
    if (!runs.empty() && runs.back().first == r.seed) {
      if (r.iter >= runs.back().second->iter) runs.back().second = &r;
    } else {
      runs.emplace_back(r.seed, &r);
    }
  }
  std::vector<AggregateRow> out;
  for (const std::string& key : keys) {
    AggregateRow a;
    a.solver = solver;
    a.sweep_key = key;
    std::vector<double> res, wall, samples;
    for (const auto& [seed, row] : finals[key]) {
      ++a.runs;
      if (row->iter < 0) {
        ++a.failed;
        continue;
      }
      res.push_back(row->residual);
      wall.push_back(row->wall_ms);
      samples.push_back(static_cast<double>(row->samples_cum));
    }
    const double nan = std::nan("");
    a.mean_residual = res.empty() ? nan : stats::mean(res);
    a.std_residual = res.empty() ? nan : stats::stddev(res);
    a.mean_wall_ms = wall.empty() ? nan : stats::mean(wall);
    a.mean_samples = samples.empty() ? nan : stats::mean(samples);
    out.push_back(a);
  }
  return out;
}

std::string summary_csv(const std::vector<AggregateRow>& rows) {
  std::string text = "solver,sweep_key,runs,failed,mean_residual,std_residual,mean_wall_ms,mean_samples\n";
  for (const AggregateRow& a : rows)
    text += a.solver + "," + a.sweep_key + "," + std::to_string(a.runs) + "," + std::to_string(a.failed) + "," +
            g17(a.mean_residual) + "," + g17(a.std_residual) + "," + g17(a.mean_wall_ms) + "," + g17(a.mean_samples) +
            "\n";
  return text;
}

std::string markdown_tables(const std::vector<AggregateRow>& rows) {
  std::vector<std::string> solvers, keys;
  std::map<std::pair<std::string, std::string>, const AggregateRow*> cell;
  for (const AggregateRow& a : rows) {
    if (std::find(solvers.begin(), solvers.end(), a.solver) == solvers.end()) solvers.push_back(a.solver);
    if (std::find(keys.begin(), keys.end(), a.sweep_key) == keys.end()) keys.push_back(a.sweep_key);
    cell[{a.solver, a.sweep_key}] = &a;
  }
  std::string head = "| sweep |", rule = "|---|";
  for (const std::string& s : solvers) {
    head += " " + s + " res | " + s + " std | " + s + " ms | " + s + " samples |";
    rule += "---:|---:|---:|---:|";
  }
  std::string text = head + "\n" + rule + "\n";
  for (const std::string& k : keys) {
    text += "| " + k + " |";
    for (const std::string& s : solvers) {
      const auto it = cell.find({s, k});
      if (it == cell.end()) {
        text += " | | | |";
        continue;
      }
      const AggregateRow& a = *it->second;
      char ms[32], n[32];
      std::snprintf(ms, sizeof ms, "%.1f", a.mean_wall_ms);
      std::snprintf(n, sizeof n, "%.0f", a.mean_samples);
      text += " " + sci(a.mean_residual) + (a.failed ? " (" + std::to_string(a.failed) + " failed)" : "") + " | " +
              sci(a.std_residual) + " | " + ms + " | " + n + " |";
    }
    text += "\n";
  }
  return text;
}

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  for (std::size_t v = 0; v < spec.solvers.size(); ++v)
    write_csv(runs_of(result, v), dir / (spec.solvers[v].label + ".csv"));
  write_text(dir / "summary.csv", summary_csv(result.rows));
  write_text(dir / "summary.md", "## " + spec.name + "\n\n" + markdown_tables(result.rows));
  json doc = spec.document;
  if (spec.sweep) doc["sweep"] = {{"path", spec.sweep->path}, {"values", spec.sweep->values}};
  write_text(dir / "spec.json", doc.dump(2) + "\n");
}

namespace {

// Solver CSVs in spec order when spec.json is present, by name otherwise.
std::vector<std::pair<std::string, std::filesystem::path>> solver_files(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::filesystem::path>> files;
  if (!std::filesystem::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  const std::filesystem::path spec = dir / "spec.json";
  if (std::filesystem::exists(spec)) {
    std::ifstream in(spec);
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_object() && doc.contains("solvers") && doc["solvers"].is_array())
      for (const json& s : doc["solvers"]) {
        const std::string label = s.value("label", s.value("method", ""));
        if (std::filesystem::exists(dir / (label + ".csv"))) files.emplace_back(label, dir / (label + ".csv"));
      }
  }
  if (files.empty()) {
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".csv" && e.path().filename() != "summary.csv")
        files.emplace_back(e.path().stem().string(), e.path());
    std::sort(files.begin(), files.end());
  }
  if (files.empty()) throw IoError("no run CSV files in '" + dir.string() + "'");
  return files;
}

}  // namespace

std::vector<AggregateRow> aggregate_directory(const std::filesystem::path& dir) {
  std::vector<AggregateRow> out;
  for (const auto& [solver, path] : solver_files(dir)) {
    const auto rows = aggregate(solver, read_csv(path));
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& in, const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw IoError("cannot create '" + out.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [solver, path] : solver_files(in)) {
    const std::vector<CsvRow> rows = read_csv(path);
    std::vector<std::string> keys;
    std::map<std::string, std::map<std::int64_t, std::vector<const CsvRow*>>> by;
    for (const CsvRow& r : rows) {
      if (r.iter < 0) continue;
      if (!by.count(r.sweep_key)) keys.push_back(r.sweep_key);
      by[r.sweep_key][r.iter].push_back(&r);
    }
    for (const std::string& key : keys) {
      std::string name = solver + "_" + key;
      for (char& c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) c = '_';
      std::string text = "# solver " + solver + ", sweep " + key + "\n# iter mean_residual stderr mean_samples\n";
      for (const auto& [iter, pts] : by[key]) {
        std::vector<double> res, smp;
        for (const CsvRow* p : pts) {
          if (std::isnan(p->residual)) continue;
          res.push_back(p->residual);
          smp.push_back(static_cast<double>(p->samples_cum));
        }
        if (res.empty()) continue;
        text += std::to_string(iter) + " " + g17(stats::mean(res)) + " " + g17(stats::standard_error(res)) + " " +
                g17(stats::mean(smp)) + "\n";
      }
      const std::filesystem::path file = out / (name + ".dat");
      write_text(file, text);
      written.push_back(file);
    }
  }
  return written;
}

}  // namespace hgame::experiment
