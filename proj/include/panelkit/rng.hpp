#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace panelkit {

// Deterministic random stream. The engine output is fixed by the standard;
// all transforms are implemented here so draws agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform();
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  double normal();
  // Student-t with integer degrees of freedom.
  double student_t(int df);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Independent sub-stream seed for (seed, stream); used for per-replicate and per-split streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<std::ptrdiff_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace panelkit
