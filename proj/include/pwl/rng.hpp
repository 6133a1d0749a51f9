#pragma once

#include <cstdint>
#include <random>

#include "pwl/network.hpp"

namespace pwl {

/// Seeded generator with cheap derivation of independent child streams, so
/// every randomized step can be reproduced from one 64-bit seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix(seed)) {}

  /// Child stream keyed by `tag`; does not advance this generator.
  Rng split(std::uint64_t tag) const { return Rng(mix(seed_ ^ mix(tag + 0x9e3779b97f4a7c15ULL))); }

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  Vector uniform_vector(int n, double lo, double hi) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Vector normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Matrix normal_matrix(int r, int c) {
    Matrix m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Random network with i.i.d. standard normal weights and biases.
Network random_network(int n0, const std::vector<int>& widths, Rng& rng, int maxout_rank = 1);

/// Copy of `net` with every weight and bias shifted by i.i.d. uniform noise
/// in [-magnitude, magnitude].
Network perturb(const Network& net, double magnitude, Rng& rng);

}  // namespace pwl
