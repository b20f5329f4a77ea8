#pragma once

// Turns resolved experiment documents into games, starting points, solver
// configurations and residual hooks.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hgame/hgame.hpp"

namespace hgame::experiment::detail {

using nlohmann::json;

// Typed field access that records problems instead of throwing, and flags
// keys nobody asked for.
class Fields {
 public:
  Fields(const json& obj, std::string where, std::vector<std::string>& bad);

  double number(const std::string& key, double fallback);
  std::int64_t integer(const std::string& key, std::int64_t fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  const json* raw(const std::string& key);  // nullptr when absent
  void error(const std::string& key, const std::string& msg);
  void ignore(const std::string& key) { used_.insert(key); }
  // Reports keys that were never read.
  void finish();

 private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& bad_;
  std::set<std::string> used_;
};

struct GameInstance {
  std::unique_ptr<GameOracle> game;
  std::optional<BilevelParams> bilevel;
  int n_players = 0;
};

GameInstance make_game(const json& game, RandomStream& stream, std::vector<std::string>& bad);
Vector make_start(const json& doc, const GameInstance& g, RandomStream& stream, std::vector<std::string>& bad);

VrSppConfig vr_config(const json& solver, std::vector<std::string>& bad, const std::string& where);
SgConfig sg_config(const json& solver, std::vector<std::string>& bad, const std::string& where);
SmoothingParams smoothing(const json* obj, std::vector<std::string>& bad, const std::string& where);
ArspbrConfig arspbr_config(const json& solver, std::vector<std::string>& bad, const std::string& where);

// Iteration count for `solvers[s]` after resolving max_samples and match.
std::int64_t iterations(const json& doc, std::size_t s, std::vector<std::string>& bad);
std::int64_t samples_for(const json& solver, std::int64_t iters);

ResidualHook make_hook(const json& doc, const json& solver, const GameInstance& g, const RandomStream& stream,
                       std::vector<std::string>& bad);

// Builds everything one run would need, on throwaway streams.
void check_point(const json& doc, std::vector<std::string>& bad);

}  // namespace hgame::experiment::detail
