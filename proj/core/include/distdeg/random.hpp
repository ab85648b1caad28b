#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace distdeg {

/// splitmix64 finalizer; mixes a master seed with a stream tag so that every
/// consumer of randomness gets an independent, reproducible sub-stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }
  /// Point on the unit circle.
  std::complex<double> unit_complex() {
    return std::polar(1.0, uniform(0.0, 6.283185307179586));
  }

  std::vector<double> normal_vector(std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * normal();
    return v;
  }
  std::vector<std::complex<double>> complex_normal_vector(std::size_t n, double scale = 1.0) {
    std::vector<std::complex<double>> v(n);
    for (auto& x : v) x = scale * complex_normal();
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace distdeg
