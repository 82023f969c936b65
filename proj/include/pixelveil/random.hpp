// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIXELVEIL_RANDOM_HPP
#define PIXELVEIL_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace pixelveil {

/// Disjoint stream families used to derive independent RNG streams from
/// one user seed. Keeping the families explicit makes every draw in an
/// obfuscation addressable by (seed, kind, index), which is what allows
/// window-level parallelism without changing results.
enum class StreamKind : std::uint64_t {
  kExponentialWindow = 1,
  kRemainderValue = 2,
  kLaplaceBlock = 3,
  kVectorElement = 4,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic per-task RNG stream derived from (seed, kind, index).
inline std::mt19937_64 make_stream(std::uint64_t seed, StreamKind kind, std::uint64_t index) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(kind));
  h = detail::splitmix64(h ^ index);
  return std::mt19937_64(h);
}

/// Uniform draw in the open interval (0, 1) with 52-bit resolution.
/// Hand-rolled so that results do not depend on the standard library's
/// distribution implementation.
inline double uniform_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

/// Zero-mean Laplace draw with the given scale, via inverse CDF.
inline double sample_laplace(std::mt19937_64& rng, double scale) {
  const double u = uniform_unit(rng);
  return (u < 0.5) ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

}  // namespace pixelveil

#endif  // PIXELVEIL_RANDOM_HPP
