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

#ifndef PIXELVEIL_SWEEP_HPP
#define PIXELVEIL_SWEEP_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "pixelveil/image.hpp"
#include "pixelveil/image_io.hpp"
#include "pixelveil/metrics.hpp"
#include "pixelveil/pixel_mechanism.hpp"

namespace pixelveil {

enum class Mechanism { kExponential = 0, kLaplace = 1 };

inline const char* to_string(Mechanism m) {
  return m == Mechanism::kExponential ? "exponential" : "laplace";
}

inline Mechanism mechanism_from_string(const std::string& name) {
  if (name == "exponential" || name == "exp") return Mechanism::kExponential;
  if (name == "laplace") return Mechanism::kLaplace;
  throw std::invalid_argument("unknown mechanism: " + name);
}

/// Grid of experiment cells: every combination of image, mechanism,
/// epsilon, pixelization and blur flag, repeated R times.
struct SweepSpec {
  std::vector<std::string> images;
  std::vector<Mechanism> mechanisms{Mechanism::kExponential, Mechanism::kLaplace};
  std::vector<double> epsilons;
  std::vector<int> pixelizations{1};
  std::vector<bool> blur_flags{false};
  int repetitions = 1;
  std::uint64_t seed = 0;
  int p = 3;
  int k_prime = 4;
  int threads = 0;

  void validate() const {
    if (images.empty()) throw std::invalid_argument("sweep needs at least one image");
    if (mechanisms.empty()) throw std::invalid_argument("sweep needs at least one mechanism");
    if (epsilons.empty()) throw std::invalid_argument("sweep needs at least one epsilon");
    for (double e : epsilons)
      if (!std::isfinite(e) || !(e > 0.0))
        throw std::invalid_argument("epsilon values must be finite and > 0");
    if (pixelizations.empty()) throw std::invalid_argument("sweep needs at least one pixelization");
    for (int b : pixelizations)
      if (b < 1) throw std::invalid_argument("pixelization block sides must be >= 1");
    if (blur_flags.empty()) throw std::invalid_argument("sweep needs at least one blur flag");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  }
};

/// One measured experiment cell. Failed cells keep their coordinates but
/// carry no metric values.
struct SweepRecord {
  std::string image;
  Mechanism mechanism = Mechanism::kExponential;
  double epsilon = 0.0;
  int b = 1;
  bool blur = false;
  int rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double ssim = std::numeric_limits<double>::quiet_NaN();
  double mse = std::numeric_limits<double>::quiet_NaN();
  double ms = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace detail

/// Runs every cell of the sweep. Rows come back sorted by (image,
/// mechanism, epsilon, b, blur, rep); the per-cell seed is the sweep seed
/// XOR the cell's position in that order, so any execution schedule
/// produces identical results. Failed cells are marked and do not abort
/// the remaining work.
///
/// Exponential cells are evaluated in a batched pass per (image, b): the
/// candidate-quality table of a window depends only on the window contents
/// and k', so it is enumerated once and reused across every epsilon, blur
/// flag and repetition.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<std::string> images = detail::sorted_unique(spec.images);
  std::vector<Mechanism> mechanisms = spec.mechanisms;
  std::sort(mechanisms.begin(), mechanisms.end());
  mechanisms.erase(std::unique(mechanisms.begin(), mechanisms.end()), mechanisms.end());
  const std::vector<double> epsilons = detail::sorted_unique(spec.epsilons);
  const std::vector<int> pixelizations = detail::sorted_unique(spec.pixelizations);
  std::vector<bool> blurs = spec.blur_flags;
  std::sort(blurs.begin(), blurs.end());
  blurs.erase(std::unique(blurs.begin(), blurs.end()), blurs.end());

  std::vector<SweepRecord> records;
  for (const std::string& image : images)
    for (Mechanism mechanism : mechanisms)
      for (double epsilon : epsilons)
        for (int b : pixelizations)
          for (bool blur : blurs)
            for (int rep = 0; rep < spec.repetitions; ++rep) {
              SweepRecord r;
              r.image = image;
              r.mechanism = mechanism;
              r.epsilon = epsilon;
              r.b = b;
              r.blur = blur;
              r.rep = rep;
              r.seed = spec.seed ^ static_cast<std::uint64_t>(records.size());
              records.push_back(std::move(r));
            }

  for (const std::string& path : images) {
    std::vector<std::size_t> cell_indices;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i].image == path) cell_indices.push_back(i);

    Image original;
    try {
      original = load_image(path);
    } catch (const std::exception&) {
      continue;  // all cells of this image stay failed
    }

    // Laplace cells are cheap; run them directly.
    detail::parallel_for(cell_indices.size(), spec.threads, [&](std::size_t begin,
                                                                std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        SweepRecord& cell = records[cell_indices[i]];
        if (cell.mechanism != Mechanism::kLaplace) continue;
        const auto start = std::chrono::steady_clock::now();
        try {
          PixelMechanismConfig cfg;
          cfg.epsilon = cell.epsilon;
          cfg.b = cell.b;
          cfg.p = spec.p;
          cfg.k_prime = spec.k_prime;
          cfg.blur = cell.blur;
          cfg.seed = cell.seed;
          const Image obfuscated = laplace_pixel_obfuscate(original, cfg);
          cell.ssim = ssim_full(original, obfuscated);
          cell.mse = mse(original, obfuscated);
          cell.ms = detail::elapsed_ms(start);
          cell.ok = true;
        } catch (const std::exception&) {
          cell.ok = false;
        }
      }
    });

    for (int b : pixelizations) {
      std::vector<std::size_t> exp_cells;
      for (std::size_t i : cell_indices)
        if (records[i].mechanism == Mechanism::kExponential && records[i].b == b)
          exp_cells.push_back(i);
      if (exp_cells.empty()) continue;

      try {
        const auto shared_start = std::chrono::steady_clock::now();
        PixelMechanismConfig base;
        base.epsilon = epsilons.front();
        base.b = b;
        base.p = spec.p;
        base.k_prime = spec.k_prime;
        base.validate();

        const BlockGrid grid = block_means(original, b);
        const std::vector<double> levels = intensity_levels(spec.k_prime);
        const SsimParams params{};

        const int pb = spec.p * b;
        const int covered_cx = ((original.width / pb) * pb) / b;
        const int covered_cy = ((original.height / pb) * pb) / b;
        const int windows_x = covered_cx / spec.p;
        const int windows_y = covered_cy / spec.p;
        const std::size_t windows_per_channel = static_cast<std::size_t>(windows_x) * windows_y;
        const std::size_t window_count = windows_per_channel * original.channels;

        std::vector<double> eps_primes(epsilons.size());
        for (std::size_t e = 0; e < epsilons.size(); ++e) {
          PixelMechanismConfig cfg = base;
          cfg.epsilon = epsilons[e];
          eps_primes[e] = allocate_budget(original.width, original.height, original.channels, cfg)
                              .eps_prime;
        }

        // states[cell][window]
        std::vector<std::vector<std::uint32_t>> states(
            exp_cells.size(), std::vector<std::uint32_t>(window_count, 0));

        detail::parallel_for(window_count, spec.threads, [&](std::size_t begin, std::size_t end) {
          detail::WindowScratch scratch;
          std::vector<double> orig(static_cast<std::size_t>(spec.p) * spec.p);
          for (std::size_t wi = begin; wi < end; ++wi) {
            const int c = static_cast<int>(wi / windows_per_channel);
            const std::size_t rest = wi % windows_per_channel;
            const int wy = static_cast<int>(rest) / windows_x;
            const int wx = static_cast<int>(rest) % windows_x;
            for (int dy = 0; dy < spec.p; ++dy)
              for (int dx = 0; dx < spec.p; ++dx)
                orig[static_cast<std::size_t>(dy) * spec.p + dx] =
                    grid.mean_at(c, wy * spec.p + dy, wx * spec.p + dx);
            detail::window_qualities(orig, spec.k_prime, levels, params, scratch.qualities);
            for (std::size_t e = 0; e < epsilons.size(); ++e) {
              const double total =
                  detail::exp_weight_prefix(scratch.qualities, eps_primes[e], scratch.prefix);
              for (std::size_t ci = 0; ci < exp_cells.size(); ++ci) {
                const SweepRecord& cell = records[exp_cells[ci]];
                if (cell.epsilon != epsilons[e]) continue;
                std::mt19937_64 rng =
                    make_stream(cell.seed, StreamKind::kExponentialWindow, wi);
                states[ci][wi] = static_cast<std::uint32_t>(
                    detail::pick_from_prefix(scratch.prefix, uniform_unit(rng) * total));
              }
            }
          }
        });
        const double shared_ms =
            detail::elapsed_ms(shared_start) / static_cast<double>(exp_cells.size());

        detail::parallel_for(exp_cells.size(), spec.threads, [&](std::size_t begin,
                                                                 std::size_t end) {
          for (std::size_t ci = begin; ci < end; ++ci) {
            SweepRecord& cell = records[exp_cells[ci]];
            const auto start = std::chrono::steady_clock::now();
            try {
              PixelMechanismConfig cfg = base;
              cfg.epsilon = cell.epsilon;
              cfg.blur = cell.blur;
              cfg.seed = cell.seed;
              const BudgetLedger ledger =
                  allocate_budget(original.width, original.height, original.channels, cfg);

              BlockGrid noisy = grid;
              for (std::size_t wi = 0; wi < window_count; ++wi) {
                const int c = static_cast<int>(wi / windows_per_channel);
                const std::size_t rest = wi % windows_per_channel;
                const int wy = static_cast<int>(rest) / windows_x;
                const int wx = static_cast<int>(rest) % windows_x;
                std::size_t state = states[ci][wi];
                for (int dy = 0; dy < spec.p; ++dy)
                  for (int dx = 0; dx < spec.p; ++dx) {
                    noisy.mean_at(c, wy * spec.p + dy, wx * spec.p + dx) =
                        levels[state % spec.k_prime];
                    state /= spec.k_prime;
                  }
              }
              if (ledger.remainder_values > 0) {
                const double scale = kMaxIntensity / ledger.eps_per_remainder_value;
                std::uint64_t value_index = 0;
                for (int c = 0; c < noisy.channels; ++c)
                  for (int cy = 0; cy < noisy.cells_y; ++cy)
                    for (int cx = 0; cx < noisy.cells_x; ++cx) {
                      if (cy < covered_cy && cx < covered_cx) continue;
                      std::mt19937_64 rng =
                          make_stream(cell.seed, StreamKind::kRemainderValue, value_index++);
                      noisy.mean_at(c, cy, cx) += sample_laplace(rng, scale);
                    }
              }
              Image obfuscated = expand_blocks(noisy);
              for (double& v : obfuscated.data) v = clamp_intensity(v);
              if (cell.blur) obfuscated = gaussian_blur(obfuscated, kPostBlurSigma);
              cell.ssim = ssim_full(original, obfuscated);
              cell.mse = mse(original, obfuscated);
              cell.ms = detail::elapsed_ms(start) + shared_ms;
              cell.ok = true;
            } catch (const std::exception&) {
              cell.ok = false;
            }
          }
        });
      } catch (const std::exception&) {
        // cells of this (image, b) group stay failed
      }
    }
  }
  return records;
}

/// Fixed-order CSV: image,mechanism,epsilon,b,blur,rep,seed,ssim,mse,ms.
/// Failed cells leave the metric fields empty.
inline void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "image,mechanism,epsilon,b,blur,rep,seed,ssim,mse,ms\n";
  char buffer[64];
  for (const SweepRecord& r : records) {
    std::snprintf(buffer, sizeof(buffer), "%.10g", r.epsilon);
    out << r.image << ',' << to_string(r.mechanism) << ',' << buffer << ',' << r.b << ','
        << (r.blur ? 1 : 0) << ',' << r.rep << ',' << r.seed << ',';
    if (r.ok) {
      std::snprintf(buffer, sizeof(buffer), "%.12g", r.ssim);
      out << buffer << ',';
      std::snprintf(buffer, sizeof(buffer), "%.12g", r.mse);
      out << buffer << ',';
      std::snprintf(buffer, sizeof(buffer), "%.3f", r.ms);
      out << buffer << '\n';
    } else {
      out << ",,\n";
    }
  }
}

}  // namespace pixelveil

#endif  // PIXELVEIL_SWEEP_HPP
