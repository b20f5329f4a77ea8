#include <fstream>
#include <set>
#include <sstream>

#include "build.hpp"
#include "hgame/errors.hpp"
#include "hgame/experiment.hpp"

namespace hgame::experiment {

namespace {

const std::set<std::string> kFamilies = {"mlmf", "mlmf-constrained", "bilevel"};
const std::set<std::string> kMethods = {"vr-spp", "sg", "arspbr"};

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  return parts;
}

bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

// Returns the slot `path` names in `doc`, creating the last object key if
// needed; nullptr when an intermediate component is missing.
json* locate(json& doc, const std::string& path) {
  const std::vector<std::string> parts = split_path(path);
  if (parts.empty()) return nullptr;
  json* cur = &doc;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool last = i + 1 == parts.size();
    if (cur->is_array() && is_index(parts[i])) {
      const std::size_t idx = std::stoul(parts[i]);
      if (idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else if (cur->is_object()) {
      if (!cur->contains(parts[i]) && !last) return nullptr;
      cur = &(*cur)[parts[i]];
    } else {
      return nullptr;
    }
  }
  return cur;
}

}  // namespace

std::string ExperimentSpec::sweep_key(std::size_t p) const {
  if (!sweep) return "-";
  const json& v = sweep->values.at(p);
  return split_path(sweep->path).back() + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
}

json ExperimentSpec::resolved(std::size_t p) const {
  json doc = document;
  if (sweep) {
    json* slot = locate(doc, sweep->path);
    if (!slot) throw ValidationError({"sweep.path: '" + sweep->path + "' does not name a field"});
    *slot = sweep->values.at(p);
  }
  return doc;
}

ExperimentSpec parse_spec(const json& document) {
  std::vector<std::string> bad;
  ExperimentSpec spec;
  if (!document.is_object()) throw ValidationError({"spec: top level must be a JSON object"});
  json doc = document;

  spec.name = doc.value("name", "experiment");
  if (doc.contains("output")) {
    if (doc["output"].is_string())
      spec.output = doc["output"].get<std::string>();
    else
      bad.emplace_back("output: must be a string");
  }

  if (!doc.contains("game") || !doc["game"].is_object()) {
    bad.emplace_back("game: required object");
  } else if (!doc["game"].contains("family") || !doc["game"]["family"].is_string() ||
             !kFamilies.count(doc["game"]["family"].get<std::string>())) {
    bad.emplace_back("game.family: must be one of mlmf, mlmf-constrained, bilevel");
  }

  // A single "solver" object is shorthand for a one-element "solvers" array.
  if (doc.contains("solver") && !doc.contains("solvers")) doc["solvers"] = json::array({doc["solver"]});
  doc.erase("solver");
  if (!doc.contains("solvers") || !doc["solvers"].is_array() || doc["solvers"].empty()) {
    bad.emplace_back("solvers: need at least one solver");
  } else {
    std::set<std::string> labels;
    for (std::size_t s = 0; s < doc["solvers"].size(); ++s) {
      json& sj = doc["solvers"][s];
      const std::string where = "solvers." + std::to_string(s);
      if (!sj.is_object()) {
        bad.push_back(where + ": must be an object");
        continue;
      }
      const std::string method = sj.value("method", "");
      if (!kMethods.count(method)) {
        bad.push_back(where + ".method: must be one of vr-spp, sg, arspbr");
        // keep the label so later `match` references do not pile on
        if (sj.contains("label") && sj["label"].is_string()) labels.insert(sj["label"].get<std::string>());
        continue;
      }
      if (!sj.contains("label")) sj["label"] = method;
      const std::string label = sj["label"].is_string() ? sj["label"].get<std::string>() : "";
      if (label.empty() || label.find_first_of("/\\ ,") != std::string::npos)
        bad.push_back(where + ".label: must be a nonempty name without spaces, commas or slashes");
      else if (!labels.insert(label).second)
        bad.push_back(where + ".label: duplicate label '" + label + "'");
      if (sj.contains("match") && (!sj["match"].is_string() || !labels.count(sj["match"].get<std::string>()) ||
                                   sj["match"].get<std::string>() == label))
        bad.push_back(where + ".match: must name an earlier solver");
      spec.solvers.push_back({label, method, sj});
    }
  }

  if (doc.contains("seeds")) {
    const json& sj = doc["seeds"];
    if (!sj.is_array() || sj.empty()) {
      bad.emplace_back("seeds: need a nonempty list of nonnegative integers");
    } else {
      for (const json& v : sj) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
          bad.emplace_back("seeds: entries must be nonnegative integers");
          break;
        }
        spec.seeds.push_back(v.get<std::uint64_t>());
      }
    }
  } else {
    const json n = doc.value("n_seeds", json(20));
    if (!n.is_number_integer() || n.get<std::int64_t>() < 1)
      bad.emplace_back("n_seeds: must be an integer >= 1");
    else
      for (std::int64_t s = 0; s < n.get<std::int64_t>(); ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
  }

  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    if (!sw.is_object() || !sw.contains("path") || !sw["path"].is_string() || !sw.contains("values") ||
        !sw["values"].is_array() || sw["values"].empty()) {
      bad.emplace_back("sweep: needs a string 'path' and a nonempty 'values' list");
    } else {
      spec.sweep = Sweep{sw["path"].get<std::string>(), sw["values"].get<std::vector<json>>()};
      json probe = doc;
      probe.erase("sweep");
      if (!locate(probe, spec.sweep->path)) bad.push_back("sweep.path: '" + spec.sweep->path + "' does not name a field");
    }
  }
  if (doc.contains("residual") && !doc["residual"].is_object()) bad.emplace_back("residual: must be an object");
  if (doc.contains("x0") && !doc["x0"].is_object()) bad.emplace_back("x0: must be an object");

  if (!bad.empty()) throw ValidationError(std::move(bad));

  doc.erase("sweep");
  spec.document = doc;
  // Build every sweep point once so that type and range errors surface now.
  for (std::size_t p = 0; p < spec.n_points(); ++p) {
    std::vector<std::string> local;
    try {
      detail::check_point(spec.resolved(p), local);
    } catch (const ValidationError& e) {
      local.insert(local.end(), e.fields().begin(), e.fields().end());
    } catch (const std::exception& e) {
      local.emplace_back(e.what());
    }
    const std::string where = spec.sweep ? "sweep point " + spec.sweep_key(p) + ": " : "";
    for (const std::string& f : local) bad.push_back(where + f);
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read spec file '" + file.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("spec: not valid JSON: ") + e.what()});
  }
  return parse_spec(doc);
}

}  // namespace hgame::experiment
