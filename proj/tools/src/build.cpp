#include "build.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hgame/errors.hpp"

namespace hgame::experiment::detail {

Fields::Fields(const json& obj, std::string where, std::vector<std::string>& bad)
    : obj_(obj), where_(std::move(where)), bad_(bad) {
  if (!obj_.is_object()) bad_.push_back(where_ + ": must be an object");
}

void Fields::error(const std::string& key, const std::string& msg) {
  bad_.push_back(where_ + (where_.empty() ? "" : ".") + key + ": " + msg);
}

const json* Fields::raw(const std::string& key) {
  used_.insert(key);
  if (!obj_.is_object() || !obj_.contains(key)) return nullptr;
  return &obj_.at(key);
}

double Fields::number(const std::string& key, double fallback) {
  const json* v = raw(key);
  if (!v) return fallback;
  if (!v->is_number()) {
    error(key, "must be a number");
    return fallback;
  }
  return v->get<double>();
}

std::int64_t Fields::integer(const std::string& key, std::int64_t fallback) {
  const json* v = raw(key);
  if (!v) return fallback;
  if (v->is_number_integer()) return v->get<std::int64_t>();
  // Accept 1e6-style literals that are whole numbers.
  if (v->is_number_float() && std::floor(v->get<double>()) == v->get<double>() && std::abs(v->get<double>()) < 9e18)
    return static_cast<std::int64_t>(v->get<double>());
  error(key, "must be an integer");
  return fallback;
}

bool Fields::boolean(const std::string& key, bool fallback) {
  const json* v = raw(key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    error(key, "must be true or false");
    return fallback;
  }
  return v->get<bool>();
}

std::string Fields::text(const std::string& key, const std::string& fallback) {
  const json* v = raw(key);
  if (!v) return fallback;
  if (!v->is_string()) {
    error(key, "must be a string");
    return fallback;
  }
  return v->get<std::string>();
}

void Fields::finish() {
  if (!obj_.is_object()) return;
  for (const auto& [key, value] : obj_.items())
    if (!used_.count(key)) error(key, "unknown field");
}

namespace {

template <class F>
void guarded(std::vector<std::string>& bad, const std::string& where, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    for (const auto& field : e.fields()) bad.push_back(where + ": " + field);
  } catch (const std::exception& e) {
    bad.push_back(where + ": " + e.what());
  }
}

const json& empty_object() {
  static const json e = json::object();
  return e;
}

}  // namespace

GameInstance make_game(const json& game, RandomStream& stream, std::vector<std::string>& bad) {
  Fields f(game, "game", bad);
  const std::string family = f.text("family", "");
  GameInstance out;
  if (family == "mlmf" || family == "mlmf-constrained") {
    const auto n = static_cast<int>(f.integer("n_leaders", 13));
    const auto m = static_cast<int>(f.integer("n_followers", 10));
    const double c_lo = f.number("c_lo", 0.0), c_hi = f.number("c_hi", 100.0);
    const double fc = f.number("follower_cost", 50.0), cap = f.number("cap", 5.0);
    const double b = f.number("b", 7.0), a_lo = f.number("a_lo", 33.0), a_hi = f.number("a_hi", 37.0);
    const double cap_noise = f.number("cap_noise", 1.0);
    guarded(bad, "game", [&] {
      MlmfParams p = MlmfParams::random_instance(n, m, stream, c_lo, c_hi, fc, cap);
      p.b = b;
      p.a_lo = a_lo;
      p.a_hi = a_hi;
      p.cap_noise = cap_noise;
      if (family == "mlmf")
        out.game = std::make_unique<MlmfGame>(p);
      else
        out.game = std::make_unique<ConstrainedMlmfGame>(p);
      out.n_players = n;
    });
  } else if (family == "bilevel") {
    const auto n = static_cast<int>(f.integer("n_players", 13));
    const bool coincident = f.boolean("coincident", false);
    const double a_lo = f.number("a_lo", 33.0), a_hi = f.number("a_hi", 37.0);
    const double mu = f.number("mu", 0.0), w = f.number("interaction", 3.0);
    const bool boxed = f.boolean("boxed", false);
    const double box_lo = f.number("box_lo", 0.0), box_hi = f.number("box_hi", 0.0);
    guarded(bad, "game", [&] {
      BilevelParams p = coincident ? BilevelParams::coincident_instance(n, stream)
                                   : BilevelParams::random_instance(n, stream);
      p.a_lo = a_lo;
      p.a_hi = a_hi;
      p.mu = mu;
      p.interaction = w;
      p.boxed = boxed;
      p.box_lo = box_lo;
      p.box_hi = box_hi;
      out.game = std::make_unique<BilevelGame>(p);
      out.bilevel = p;
      out.n_players = n;
    });
  }
  f.finish();
  return out;
}

Vector make_start(const json& doc, const GameInstance& g, RandomStream& stream, std::vector<std::string>& bad) {
  Fields f(doc.contains("x0") ? doc.at("x0") : empty_object(), "x0", bad);
  const double lo = f.number("lo", 0.0), hi = f.number("hi", 1.0);
  f.finish();
  if (!(lo <= hi)) {
    bad.emplace_back("x0: lo must not exceed hi");
    return {};
  }
  if (!g.game) return {};
  // Players first; any multiplier block starts at zero.
  Vector x0 = Vector::Zero(g.game->layout().total_dim());
  for (int i = 0; i < g.n_players; ++i) x0[i] = stream.uniform(lo, hi);
  g.game->feasible().project_in_place(x0);
  return x0;
}

namespace {

void ignore_common(Fields& f) {
  for (const char* k : {"method", "label", "outer_iters", "iters", "max_samples", "match", "residual"}) f.ignore(k);
}

}  // namespace

VrSppConfig vr_config(const json& solver, std::vector<std::string>& bad, const std::string& where) {
  Fields f(solver, where, bad);
  ignore_common(f);
  VrSppConfig c;
  c.lambda = f.number("lambda", c.lambda);
  c.theta = f.number("theta", c.theta);
  c.min_inner_steps = f.integer("min_inner_steps", c.min_inner_steps);
  c.increasing_floor = f.boolean("increasing_floor", c.increasing_floor);
  if (const json* s = f.raw("schedule")) {
    Fields sf(*s, where + ".schedule", bad);
    const std::string kind = sf.text("kind", "geometric-base");
    if (kind == "polynomial")
      c.schedule.kind = ScheduleKind::kPolynomial;
    else if (kind == "geometric")
      c.schedule.kind = ScheduleKind::kGeometric;
    else if (kind == "geometric-base")
      c.schedule.kind = ScheduleKind::kGeometricBase;
    else if (kind == "constant")
      c.schedule.kind = ScheduleKind::kConstant;
    else
      sf.error("kind", "must be polynomial, geometric, geometric-base or constant");
    c.schedule.param = sf.number("param", c.schedule.param);
    c.schedule.n_max = sf.integer("n_max", c.schedule.n_max);
    sf.finish();
  }
  f.finish();
  guarded(bad, where, [&] { c.validate(); });
  return c;
}

SgConfig sg_config(const json& solver, std::vector<std::string>& bad, const std::string& where) {
  Fields f(solver, where, bad);
  ignore_common(f);
  SgConfig c;
  c.alpha0 = f.number("alpha0", c.alpha0);
  f.finish();
  guarded(bad, where, [&] { c.validate(); });
  return c;
}

SmoothingParams smoothing(const json* obj, std::vector<std::string>& bad, const std::string& where) {
  SmoothingParams sp;
  if (!obj) return sp;
  Fields f(*obj, where, bad);
  sp.eta = f.number("eta", sp.eta);
  sp.prox_weight = f.number("prox_weight", sp.prox_weight);
  sp.zeta = f.number("zeta", sp.zeta);
  sp.batch_base = f.number("batch_base", sp.batch_base);
  sp.batch_scale = f.number("batch_scale", sp.batch_scale);
  sp.batch_cap = f.integer("batch_cap", sp.batch_cap);
  if (const json* steps = f.raw("steps")) {
    if (steps->is_string() && steps->get<std::string>() == "log") {
      sp.steps_rule = StepsRule::kLogPower;
    } else if (steps->is_number_integer()) {
      sp.steps_rule = StepsRule::kFixed;
      sp.fixed_steps = steps->get<std::int64_t>();
    } else {
      f.error("steps", "must be \"log\" or an integer");
    }
  }
  const std::string est = f.text("estimator", "symmetric");
  if (est == "symmetric")
    sp.estimator = ZoEstimator::kSymmetric;
  else if (est == "centered")
    sp.estimator = ZoEstimator::kCentered;
  else if (est == "single-point")
    sp.estimator = ZoEstimator::kSinglePoint;
  else
    f.error("estimator", "must be symmetric, centered or single-point");
  f.finish();
  guarded(bad, where, [&] { sp.validate(); });
  return sp;
}

ArspbrConfig arspbr_config(const json& solver, std::vector<std::string>& bad, const std::string& where) {
  Fields f(solver, where, bad);
  ignore_common(f);
  f.ignore("smoothing");
  ArspbrConfig c;
  c.power = f.number("power", c.power);
  if (const json* r = f.raw("relaxation")) {
    if (r->is_string() && r->get<std::string>() == "unrelaxed") {
      c.relaxation = RelaxationKind::kUnrelaxed;
    } else if (r->is_string() && r->get<std::string>() == "power") {
      c.relaxation = RelaxationKind::kPower;
    } else if (r->is_array() && !r->empty() && std::all_of(r->begin(), r->end(), [](const json& v) { return v.is_number(); })) {
      c.relaxation = RelaxationKind::kCustom;
      c.custom = r->get<std::vector<double>>();
    } else {
      f.error("relaxation", "must be \"unrelaxed\", \"power\" or a list of numbers");
    }
  }
  if (const json* p = f.raw("player_probs")) {
    if (p->is_array() && std::all_of(p->begin(), p->end(), [](const json& v) { return v.is_number(); }))
      c.player_probs = p->get<std::vector<double>>();
    else
      f.error("player_probs", "must be a list of numbers");
  }
  f.finish();
  return c;
}

namespace {

// Oracle samples used by iteration k (0-based) of the solver.
std::function<std::int64_t(std::int64_t)> step_cost(const json& solver) {
  std::vector<std::string> ignored;  // configuration errors are reported by check_point
  const std::string method = solver.value("method", "");
  if (method == "sg") return [](std::int64_t) { return std::int64_t{1}; };
  if (method == "vr-spp") {
    const VrSppConfig c = vr_config(solver, ignored, "solver");
    return [c](std::int64_t k) { return c.inner_steps(k); };
  }
  const SmoothingParams sp = smoothing(solver.contains("smoothing") ? &solver.at("smoothing") : nullptr, ignored, "solver");
  return [sp](std::int64_t k) { return sp.zsol_samples(sp.zsol_steps(k + 1)); };
}

// Largest iteration count whose planned samples stay within `budget`.
std::int64_t iterations_within(const json& solver, std::int64_t budget) {
  if (solver.value("method", "") == "sg") return budget;
  const auto cost = step_cost(solver);
  std::int64_t iters = 0, used = 0;
  while (iters < 100'000'000) {
    const std::int64_t next = cost(iters);
    if (used + next > budget) break;
    used += next;
    ++iters;
  }
  return iters;
}

}  // namespace

std::int64_t samples_for(const json& solver, std::int64_t iters) {
  const auto cost = step_cost(solver);
  std::int64_t total = 0;
  for (std::int64_t k = 0; k < iters; ++k) total += cost(k);
  return total;
}

std::int64_t iterations(const json& doc, std::size_t s, std::vector<std::string>& bad) {
  const json& solvers = doc.at("solvers");
  const json& solver = solvers.at(s);
  const std::string where = "solvers." + std::to_string(s);
  const std::string method = solver.value("method", "");
  int given = 0;
  for (const char* k : {"outer_iters", "iters", "max_samples", "match"}) given += solver.contains(k);
  if (given > 1) bad.push_back(where + ": give at most one of outer_iters, iters, max_samples, match");

  const auto count = [&](const char* key) -> std::int64_t {
    const json& v = solver.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      bad.push_back(where + "." + key + ": must be a nonnegative integer");
      return 0;
    }
    return v.get<std::int64_t>();
  };
  if (solver.contains("match")) {
    const std::string label = solver.at("match").get<std::string>();
    for (std::size_t t = 0; t < s; ++t)
      if (solvers.at(t).value("label", "") == label) {
        const std::int64_t budget = samples_for(solvers.at(t), iterations(doc, t, bad));
        return iterations_within(solver, budget);
      }
    bad.push_back(where + ".match: no earlier solver labelled '" + label + "'");
    return 0;
  }
  if (solver.contains("max_samples")) return iterations_within(solver, count("max_samples"));
  if (method == "sg") {
    if (solver.contains("outer_iters")) bad.push_back(where + ".outer_iters: sg takes 'iters'");
    return solver.contains("iters") ? count("iters") : SgConfig{}.total_iters;
  }
  if (solver.contains("iters")) bad.push_back(where + ".iters: " + method + " takes 'outer_iters'");
  if (solver.contains("outer_iters")) return count("outer_iters");
  return method == "vr-spp" ? VrSppConfig{}.outer_iters : ArspbrConfig{}.outer_iters;
}

ResidualHook make_hook(const json& doc, const json& solver, const GameInstance& g, const RandomStream& stream,
                       std::vector<std::string>& bad) {
  const json& spec = solver.contains("residual") ? solver.at("residual")
                     : doc.contains("residual")  ? doc.at("residual")
                                                 : empty_object();
  Fields f(spec, "residual", bad);
  const std::string method = solver.value("method", "");
  const std::string kind = f.text("kind", method == "arspbr" ? "br" : "yosida");
  Cadence cadence{f.integer("every", 0), f.integer("sample_stride", 0)};
  if (cadence.every < 0 || cadence.sample_stride < 0) bad.emplace_back("residual: every and sample_stride must be >= 0");
  ResidualHook hook{{}, cadence};
  if (kind == "yosida") {
    ResidualConfig rc;
    rc.lambda = f.number("lambda", rc.lambda);
    rc.theta = f.number("theta", rc.theta);
    rc.inner_steps = f.integer("inner_steps", rc.inner_steps);
    rc.samples_per_step = f.integer("samples_per_step", rc.samples_per_step);
    rc.repeats = static_cast<int>(f.integer("repeats", rc.repeats));
    guarded(bad, "residual", [&] { rc.validate(); });
    if (g.game) hook = yosida_hook(*g.game, rc, stream, cadence);
  } else if (kind == "br") {
    std::vector<std::string> ignored;  // the solver's own check reports these
    SmoothingParams mp =
        smoothing(method == "arspbr" && solver.contains("smoothing") ? &solver.at("smoothing") : nullptr, ignored, "");
    mp.zeta = f.number("zeta", 0.005);
    mp.batch_base = f.number("batch_base", 1.01);
    mp.batch_scale = f.number("batch_scale", 500.0);
    mp.eta = f.number("eta", mp.eta);
    const std::int64_t steps = f.integer("zsol_steps", 200);
    if (steps < 1) bad.emplace_back("residual.zsol_steps: must be >= 1");
    guarded(bad, "residual", [&] { mp.validate(); });
    if (g.game && !g.game->has_objective()) bad.emplace_back("residual.kind: br needs a game with objective samples");
    if (g.game && g.game->has_objective()) hook = br_hook(*g.game, mp, steps, stream, cadence);
  } else if (kind == "distance") {
    if (!g.bilevel) {
      bad.emplace_back("residual.kind: distance needs the bilevel family");
    } else {
      Vector target;
      guarded(bad, "residual", [&] { target = direct_equilibrium(*g.bilevel); });
      hook.fn = [target](const Vector& x, std::int64_t) { return ResidualValue{(x - target).norm(), 0.0}; };
    }
  } else if (kind != "none") {
    f.error("kind", "must be yosida, br, distance or none");
  }
  f.finish();
  return hook;
}

void check_point(const json& doc, std::vector<std::string>& bad) {
  Fields top(doc, "", bad);
  for (const char* k : {"name", "output", "game", "solvers", "seeds", "n_seeds", "residual", "x0"}) top.ignore(k);
  top.finish();

  RandomStream scratch(0);
  const GameInstance g = make_game(doc.at("game"), scratch, bad);
  make_start(doc, g, scratch, bad);
  const json& solvers = doc.at("solvers");
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    const json& sj = solvers[s];
    const std::string where = "solvers." + std::to_string(s);
    const std::string method = sj.value("method", "");
    if (method == "vr-spp") {
      vr_config(sj, bad, where);
    } else if (method == "sg") {
      sg_config(sj, bad, where);
    } else {
      if (g.game && !g.game->has_objective()) bad.push_back(where + ": arspbr needs a game with objective samples");
      smoothing(sj.contains("smoothing") ? &sj.at("smoothing") : nullptr, bad, where + ".smoothing");
      const ArspbrConfig c = arspbr_config(sj, bad, where);
      if (g.game) guarded(bad, where, [&] { c.validate(g.game->layout().n_players()); });
    }
    iterations(doc, s, bad);
    make_hook(doc, sj, g, scratch, bad);
  }
}

}  // namespace hgame::experiment::detail
