// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "simg/types.hpp"

namespace simg {

// splitmix64; used to derive independent stage seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stage seeds are master + (index+1) golden-ratio steps through splitmix64,
// so adding a stage never perturbs the streams of earlier stages.
inline std::uint64_t stage_seed(std::uint64_t master, std::uint32_t stage_index) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(stage_index) + 1));
}

// Pipeline stage indices for seed derivation (documented scheme).
enum class SeedStage : std::uint32_t {
  noise = 0,
  collector = 1,
  gamma = 2,
  greedy_frame = 3,
};

inline std::uint64_t stage_seed(std::uint64_t master, SeedStage s) {
  return stage_seed(master, static_cast<std::uint32_t>(s));
}

// Gaussian stream on top of mt19937_64 with an explicit Box-Muller transform.
// mt19937_64 output is pinned by the standard and Box-Muller only uses
// elementary functions, so streams are reproducible across platforms.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  // N(0, 1)
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Circular complex normal CN(0, 1): real and imaginary parts N(0, 1/2).
  Complex cnormal() {
    const double s = 0.70710678118654752440;  // 1/sqrt(2)
    double re = normal();
    double im = normal();
    return Complex(re * s, im * s);
  }

  CVector cnormal_vector(Index n) {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

  RVector normal_vector(Index n) {
    RVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  // U[0, 1)
  double uniform() {
    return std::ldexp(static_cast<double>(eng_() >> 11), -53);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace simg
