#include "hgame/game.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "hgame/errors.hpp"

namespace hgame {

PlayerLayout::PlayerLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ParameterError("PlayerLayout: need at least one player");
  offsets_.reserve(dims_.size());
  for (int d : dims_) {
    if (d < 1) throw ParameterError("PlayerLayout: every player dimension must be >= 1");
    offsets_.push_back(total_);
    total_ += d;
  }
}

PlayerLayout PlayerLayout::scalar(int n_players) {
  if (n_players < 1) throw ParameterError("PlayerLayout: need at least one player");
  return PlayerLayout(std::vector<int>(static_cast<std::size_t>(n_players), 1));
}

PlayerSet PlayerSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw ParameterError("box: lo/hi size mismatch");
  for (Eigen::Index k = 0; k < lo.size(); ++k)
    if (!(lo[k] <= hi[k])) throw ParameterError("box: lo must not exceed hi");
  return {SetKind::kBox, std::move(lo), std::move(hi)};
}

PlayerSet PlayerSet::box(int dim, double lo, double hi) {
  return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

FeasibleSet::FeasibleSet(PlayerLayout layout, std::vector<PlayerSet> sets)
    : layout_(std::move(layout)), sets_(std::move(sets)) {
  if (static_cast<int>(sets_.size()) != layout_.n_players())
    throw ParameterError("FeasibleSet: one set per player required");
  for (int i = 0; i < layout_.n_players(); ++i) {
    const auto& s = sets_[static_cast<std::size_t>(i)];
    if (s.kind == SetKind::kBox && s.lo.size() != layout_.dim(i))
      throw ParameterError("FeasibleSet: box dimension does not match player dimension");
  }
}

FeasibleSet FeasibleSet::uniform(const PlayerLayout& layout, const PlayerSet& set) {
  return FeasibleSet(layout, std::vector<PlayerSet>(static_cast<std::size_t>(layout.n_players()), set));
}

void FeasibleSet::project_block(int i, VectorRef v) const {
  const PlayerSet& s = sets_.at(static_cast<std::size_t>(i));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::isnan(v[k])) throw NumericError("project: NaN input");
    switch (s.kind) {
      case SetKind::kWholeSpace:
        break;
      case SetKind::kNonnegative:
        v[k] = std::max(v[k], 0.0);
        break;
      case SetKind::kBox:
        v[k] = std::clamp(v[k], s.lo[k], s.hi[k]);
        break;
    }
  }
}

void FeasibleSet::project_in_place(VectorRef x) const {
  if (x.size() != layout_.total_dim()) throw ParameterError("project: dimension mismatch");
  for (int i = 0; i < layout_.n_players(); ++i) project_block(i, x.segment(layout_.offset(i), layout_.dim(i)));
}

Vector FeasibleSet::project(const Vector& x) const {
  Vector out = x;
  project_in_place(out);
  return out;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != layout_.total_dim()) return false;
  for (int i = 0; i < layout_.n_players(); ++i) {
    const PlayerSet& s = sets_[static_cast<std::size_t>(i)];
    for (int k = 0; k < layout_.dim(i); ++k) {
      const double v = x[layout_.offset(i) + k];
      if (std::isnan(v)) return false;
      if (s.kind == SetKind::kNonnegative && v < -tol) return false;
      if (s.kind == SetKind::kBox && (v < s.lo[k] - tol || v > s.hi[k] + tol)) return false;
    }
  }
  return true;
}

double GameOracle::objective_sample(int, const Vector&, RandomStream&) const {
  throw UnsupportedCase(name() + ": objective samples are not available");
}

double GameOracle::constraint_sample(int, const Vector&, RandomStream&) const {
  throw UnsupportedCase(name() + ": game has no expectation constraints");
}

void GameOracle::constraint_gradient_apply(int, const Vector&, double, VectorRef) const {
  throw UnsupportedCase(name() + ": game has no expectation constraints");
}

Vector GameOracle::operator_sample(const Vector& x, RandomStream& stream) const {
  Vector out(layout().total_dim());
  operator_sample(x, stream, out);
  return out;
}

MeanEstimate estimate_mean_operator(const GameOracle& game, const Vector& x, std::int64_t n_samples,
                                    RandomStream& stream) {
  if (n_samples < 1) throw ParameterError("estimate_mean_operator: n_samples must be >= 1");
  const Eigen::Index n = game.layout().total_dim();
  Vector sample(n);
  Vector mean = Vector::Zero(n);
  Vector m2 = Vector::Zero(n);
  // Welford, componentwise.
  for (std::int64_t s = 1; s <= n_samples; ++s) {
    game.operator_sample(x, stream, sample);
    const Vector delta = sample - mean;
    mean += delta / static_cast<double>(s);
    m2.array() += delta.array() * (sample - mean).array();
  }
  MeanEstimate est;
  est.mean = std::move(mean);
  est.n_samples = n_samples;
  if (n_samples > 1) {
    const double nn = static_cast<double>(n_samples);
    est.stderr_ = (m2.array() / (nn - 1.0) / nn).sqrt().matrix();
  } else {
    est.stderr_ = Vector::Zero(n);
  }
  return est;
}

void require_finite(const Vector& x, const char* what, std::int64_t iteration) {
  if (!x.allFinite()) throw NumericError(std::string(what) + ": non-finite iterate", iteration);
}

}  // namespace hgame
