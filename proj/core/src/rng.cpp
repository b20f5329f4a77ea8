#include "hgame/rng.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "hgame/errors.hpp"

namespace hgame {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

std::array<std::uint64_t, 4> seed_state(std::uint64_t key) noexcept {
  std::array<std::uint64_t, 4> s{};
  std::uint64_t z = key;
  for (auto& word : s) {
    z += kGolden;
    word = mix64(z);
  }
  // xoshiro must not start from the all-zero state.
  if ((s[0] | s[1] | s[2] | s[3]) == 0) s[0] = kGolden;
  return s;
}

std::uint64_t child_key(std::uint64_t parent, std::uint64_t label) noexcept {
  // Two rounds so that (k, a, b) and (k, b, a) land far apart.
  const std::uint64_t h = mix64(parent ^ 0xd1b54a32d192ed03ULL);
  return mix64(h + mix64(label + kGolden) * 0xbf58476d1ce4e5b9ULL);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t root_seed)
    : RandomStream(mix64(root_seed + kGolden), {}) {}

RandomStream::RandomStream(std::uint64_t key, std::vector<std::uint64_t> lineage)
    : key_(key),
      state_(seed_state(key)),
      lineage_(std::make_shared<const std::vector<std::uint64_t>>(std::move(lineage))) {}

RandomStream RandomStream::derive(std::uint64_t label) const {
  auto lineage = *lineage_;
  lineage.push_back(label);
  return RandomStream(child_key(key_, label), std::move(lineage));
}

std::uint64_t RandomStream::next_u64() {
  // xoshiro256**
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw ParameterError("uniform: lo must not exceed hi");
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * uniform01();
  // Rounding can land exactly on hi for tiny intervals.
  return v < hi ? v : std::nextafter(hi, lo);
}

double RandomStream::normal() {
  double u1 = uniform01();
  while (u1 == 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int RandomStream::categorical(std::span<const double> weights) {
  if (weights.empty()) throw ParameterError("categorical: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("categorical: weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ParameterError("categorical: weights sum to zero");
  const double target = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return static_cast<int>(i);
  }
  // Floating-point slack: last index with positive weight.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return static_cast<int>(i);
  return 0;
}

Eigen::VectorXd RandomStream::unit_sphere(int dim) {
  if (dim < 1) throw ParameterError("unit_sphere: dimension must be >= 1");
  Eigen::VectorXd v(dim);
  unit_sphere(v);
  return v;
}

void RandomStream::unit_sphere(Eigen::Ref<Eigen::VectorXd> out) {
  if (out.size() < 1) throw ParameterError("unit_sphere: dimension must be >= 1");
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal();
    norm = out.norm();
  } while (norm == 0.0);
  out /= norm;
}

Eigen::VectorXd RandomStream::unit_ball(int dim) {
  Eigen::VectorXd v = unit_sphere(dim);
  return v * std::pow(uniform01(), 1.0 / dim);
}

}  // namespace hgame
