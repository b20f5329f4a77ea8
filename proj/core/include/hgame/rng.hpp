#pragma once

// Deterministic, splittable random streams.
//
// Every stream is identified by a 64-bit key obtained by hashing the root seed
// together with the path of derivation labels. The generator itself is
// xoshiro256** seeded from that key through splitmix64, so output depends only
// on (root seed, label path, number of draws taken) and never on the platform's
// standard-library distributions.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hgame {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t root_seed);

  // Child stream keyed by (this stream's key, label). Independent of how many
  // values this stream has already produced.
  RandomStream derive(std::uint64_t label) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();
  // Uniform on [lo, hi); returns lo when lo == hi. Throws ParameterError if lo > hi.
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller (one value per call, no caching).
  double normal();
  // Index drawn with the given (nonnegative, not necessarily normalized) weights.
  int categorical(std::span<const double> weights);

  // Uniform on the unit sphere in R^dim, via a normalized Gaussian vector.
  Eigen::VectorXd unit_sphere(int dim);
  // Same draw written into `out` (out.size() is the dimension).
  void unit_sphere(Eigen::Ref<Eigen::VectorXd> out);
  // Uniform in the closed unit ball in R^dim.
  Eigen::VectorXd unit_ball(int dim);

  std::uint64_t key() const noexcept { return key_; }
  const std::vector<std::uint64_t>& lineage() const noexcept { return *lineage_; }

 private:
  RandomStream(std::uint64_t key, std::vector<std::uint64_t> lineage);

  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_;
  // Shared and immutable so copying a stream stays cheap.
  std::shared_ptr<const std::vector<std::uint64_t>> lineage_;
};

// splitmix64 finalizer; exposed for the stream derivation tests.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace hgame
