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

#ifndef PIXELVEIL_PIXEL_MECHANISM_HPP
#define PIXELVEIL_PIXEL_MECHANISM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pixelveil/image.hpp"
#include "pixelveil/metrics.hpp"
#include "pixelveil/random.hpp"

namespace pixelveil {

/// Standard deviation of the optional Gaussian-blur post-processing step.
inline constexpr double kPostBlurSigma = 1.0;

/// Hard cap on the candidate-state count of one exponential-mechanism
/// application; k'^(p^2) beyond this is not tractable to enumerate.
inline constexpr std::uint64_t kMaxWindowStates = std::uint64_t{1} << 24;

/// Configuration shared by the pixel-space mechanisms.
struct PixelMechanismConfig {
  double epsilon = 0.0;            // total privacy budget
  int b = 1;                       // pixelization block side
  int p = 3;                       // exponential window side, in cells
  int k_prime = 4;                 // candidate intensity levels
  std::int64_t sensitive_window = 0;  // Laplace adjacency pixel count; 0 = all pixels per channel
  bool blur = false;               // Gaussian blur post-processing
  std::uint64_t seed = 0;

  void validate() const {
    if (!std::isfinite(epsilon) || !(epsilon > 0.0))
      throw std::invalid_argument("epsilon must be finite and > 0");
    if (b < 1) throw std::invalid_argument("pixelization block side must be >= 1");
    if (p < 1) throw std::invalid_argument("window side must be >= 1");
    if (k_prime < 2 || k_prime > kIntensityLevels)
      throw std::invalid_argument("level count must be in [2, 256]");
    if (sensitive_window < 0) throw std::invalid_argument("sensitive pixel count must be >= 0");
    if (static_cast<double>(p) * p * std::log2(static_cast<double>(k_prime)) > 24.0)
      throw std::invalid_argument("window state count k'^(p^2) exceeds the 2^24 tractability cap");
  }
};

/// Exact budget accounting for one obfuscation run: the exponential region
/// consumes 2 * eps_prime per application, every remainder cell consumes
/// its per-value share, and the two sides sum back to the total budget.
struct BudgetLedger {
  std::int64_t applications = 0;        // exponential-mechanism applications, all channels
  double eps_prime = 0.0;               // privacy parameter per application
  std::int64_t remainder_values = 0;    // Laplace-noised cells outside the covered region
  double eps_per_remainder_value = 0.0;
  double eps_exponential = 0.0;         // budget share of the covered region
  double eps_remainder = 0.0;           // budget share of the remainder

  double total() const {
    return 2.0 * static_cast<double>(applications) * eps_prime +
           static_cast<double>(remainder_values) * eps_per_remainder_value;
  }
};

/// Laplace scale for the pixel mechanism: (k-1) * n * c / (epsilon * b^2),
/// with n the sensitive-window pixel count (defaulting to all pixels in
/// one channel).
inline double laplace_scale(const PixelMechanismConfig& cfg, int channels,
                            std::size_t pixels_per_channel) {
  cfg.validate();
  const double n = cfg.sensitive_window > 0 ? static_cast<double>(cfg.sensitive_window)
                                            : static_cast<double>(pixels_per_channel);
  return kMaxIntensity * n * channels / (cfg.epsilon * cfg.b * cfg.b);
}

/// Splits the total budget between the exponential-covered region (the
/// largest p*b multiples fitting the image) and the Laplace remainder,
/// proportionally to their pixel counts.
inline BudgetLedger allocate_budget(int width, int height, int channels,
                                    const PixelMechanismConfig& cfg) {
  cfg.validate();
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
  const int pb = cfg.p * cfg.b;
  const int covered_w = (width / pb) * pb;
  const int covered_h = (height / pb) * pb;

  BudgetLedger ledger;
  const double pixel_count = static_cast<double>(width) * height;
  const double covered_pixels = static_cast<double>(covered_w) * covered_h;
  ledger.eps_exponential = cfg.epsilon * (covered_pixels / pixel_count);
  ledger.eps_remainder = cfg.epsilon - ledger.eps_exponential;

  ledger.applications =
      static_cast<std::int64_t>(covered_w / pb) * (covered_h / pb) * channels;
  ledger.eps_prime = ledger.applications > 0
                         ? ledger.eps_exponential / (2.0 * static_cast<double>(ledger.applications))
                         : 0.0;

  const std::int64_t cells_x = (width + cfg.b - 1) / cfg.b;
  const std::int64_t cells_y = (height + cfg.b - 1) / cfg.b;
  const std::int64_t covered_cells =
      static_cast<std::int64_t>(covered_w / cfg.b) * (covered_h / cfg.b);
  ledger.remainder_values = (cells_x * cells_y - covered_cells) * channels;
  ledger.eps_per_remainder_value =
      ledger.remainder_values > 0
          ? ledger.eps_remainder / static_cast<double>(ledger.remainder_values)
          : 0.0;
  return ledger;
}

/// Pixelize, add an independent Laplace draw to every block value in every
/// channel, expand back to pixels and clamp. Deterministic under the seed.
inline Image laplace_pixel_obfuscate(const Image& img, const PixelMechanismConfig& cfg) {
  cfg.validate();
  BlockGrid grid = block_means(img, cfg.b);
  const double scale = laplace_scale(cfg, img.channels, img.pixels_per_channel());
  std::mt19937_64 rng = make_stream(cfg.seed, StreamKind::kLaplaceBlock, 0);
  for (double& m : grid.means) m += sample_laplace(rng, scale);
  Image out = expand_blocks(grid);
  for (double& v : out.data) v = clamp_intensity(v);
  if (cfg.blur) out = gaussian_blur(out, kPostBlurSigma);
  return out;
}

namespace detail {

inline std::uint64_t window_state_count(int cells, int k_prime) {
  std::uint64_t total = 1;
  for (int i = 0; i < cells; ++i) {
    if (total > kMaxWindowStates / static_cast<std::uint64_t>(k_prime))
      throw std::invalid_argument("window state count k'^(p^2) exceeds the 2^24 tractability cap");
    total *= static_cast<std::uint64_t>(k_prime);
  }
  return total;
}

// Clamped single-window SSIM for every candidate state, enumerated with
// cell 0 as the least-significant digit. Candidate sums are maintained
// incrementally across the mixed-radix counter so that one state costs a
// handful of flops instead of a fresh p^2 pass.
inline void window_qualities(std::span<const double> orig, int k_prime,
                             std::span<const double> levels, const SsimParams& params,
                             std::vector<double>& out) {
  const int cells = static_cast<int>(orig.size());
  const std::uint64_t total = window_state_count(cells, k_prime);
  out.resize(total);

  const double inv_n = 1.0 / cells;
  double mu_x = 0.0;
  for (double v : orig) mu_x += v;
  mu_x *= inv_n;
  double var_x = 0.0;
  for (double v : orig) var_x += (v - mu_x) * (v - mu_x);
  var_x *= inv_n;

  std::vector<int> digits(cells, 0);
  double s1 = 0.0, s2 = 0.0, sxy = 0.0;  // candidate sum, sum of squares, cross sum
  for (int i = 0; i < cells; ++i) {
    s1 += levels[0];
    s2 += levels[0] * levels[0];
    sxy += orig[i] * levels[0];
  }

  for (std::uint64_t s = 0;; ++s) {
    const double mu_y = s1 * inv_n;
    const double var_y = s2 * inv_n - mu_y * mu_y;
    const double cov = sxy * inv_n - mu_x * mu_y;
    out[s] = std::clamp(ssim_from_stats(mu_x, mu_y, var_x, var_y, cov, params), 0.0, 1.0);
    if (s + 1 == total) break;
    for (int i = 0;; ++i) {
      const double old_level = levels[digits[i]];
      const bool carry = ++digits[i] == k_prime;
      if (carry) digits[i] = 0;
      const double new_level = levels[digits[i]];
      s1 += new_level - old_level;
      s2 += new_level * new_level - old_level * old_level;
      sxy += orig[i] * (new_level - old_level);
      if (!carry) break;
    }
  }
}

// Cumulative unnormalized exponential-mechanism weights; returns the total
// mass. Log weights are shifted by their maximum before exponentiation so
// that large eps_prime cannot overflow.
inline double exp_weight_prefix(std::span<const double> qualities, double eps_prime,
                                std::vector<double>& prefix) {
  prefix.resize(qualities.size());
  double q_max = qualities[0];
  for (double q : qualities) q_max = std::max(q_max, q);
  double acc = 0.0;
  for (std::size_t i = 0; i < qualities.size(); ++i) {
    acc += std::exp(eps_prime * (qualities[i] - q_max));
    prefix[i] = acc;
  }
  return acc;
}

inline std::size_t pick_from_prefix(std::span<const double> prefix, double target) {
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
  return it == prefix.end() ? prefix.size() - 1 : static_cast<std::size_t>(it - prefix.begin());
}

// Per-thread scratch; reused across windows to avoid re-allocating the
// k'^(p^2)-sized buffers.
struct WindowScratch {
  std::vector<double> qualities;
  std::vector<double> prefix;
};

inline std::size_t sample_window_state(std::span<const double> orig, double eps_prime,
                                       int k_prime, std::span<const double> levels,
                                       const SsimParams& params, double u,
                                       WindowScratch& scratch) {
  window_qualities(orig, k_prime, levels, params, scratch.qualities);
  const double total = exp_weight_prefix(scratch.qualities, eps_prime, scratch.prefix);
  return pick_from_prefix(scratch.prefix, u * total);
}

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static partition of [0, count) across worker threads. Work items must be
// independent; each worker owns a contiguous index range.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  const int t = std::min<std::size_t>(resolve_threads(threads), count);
  if (t <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(t);
  const std::size_t chunk = (count + t - 1) / t;
  for (int i = 0; i < t; ++i) {
    const std::size_t begin = i * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(body, begin, end);
  }
  for (auto& w : workers) w.join();
}

}  // namespace detail

/// Explicit probability table of one exponential-mechanism application:
/// all k'^(p^2) candidate windows, their clamped SSIM qualities and the
/// normalized weights exp(eps_prime * quality).
struct WindowDistribution {
  int p = 0;
  int k_prime = 0;
  double eps_prime = 0.0;
  std::vector<double> levels;
  std::vector<double> qualities;
  std::vector<double> probabilities;

  std::size_t state_count() const { return qualities.size(); }

  /// Decodes state index s into its candidate cell values; cell 0 is the
  /// least-significant digit of the mixed-radix index.
  std::vector<double> state_values(std::size_t s) const {
    std::vector<double> values(static_cast<std::size_t>(p) * p);
    for (double& v : values) {
      v = levels[s % k_prime];
      s /= k_prime;
    }
    return values;
  }
};

/// Builds the full candidate distribution for one window of original cell
/// values (length p^2).
inline WindowDistribution exponential_window_distribution(std::span<const double> orig_window,
                                                          double eps_prime, int k_prime,
                                                          const SsimParams& params = {}) {
  if (!(eps_prime >= 0.0)) throw std::invalid_argument("eps_prime must be >= 0");
  if (k_prime < 2 || k_prime > kIntensityLevels)
    throw std::invalid_argument("level count must be in [2, 256]");
  const int p = static_cast<int>(std::lround(std::sqrt(static_cast<double>(orig_window.size()))));
  if (orig_window.empty() || static_cast<std::size_t>(p) * p != orig_window.size())
    throw std::invalid_argument("window value count must be a perfect square p^2");

  WindowDistribution dist;
  dist.p = p;
  dist.k_prime = k_prime;
  dist.eps_prime = eps_prime;
  dist.levels = intensity_levels(k_prime);
  detail::window_qualities(orig_window, k_prime, dist.levels, params, dist.qualities);

  std::vector<double> prefix;
  const double total = detail::exp_weight_prefix(dist.qualities, eps_prime, prefix);
  dist.probabilities.resize(prefix.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    dist.probabilities[i] = (prefix[i] - previous) / total;
    previous = prefix[i];
  }
  return dist;
}

/// Samples one state index given a uniform draw in (0, 1).
inline std::size_t sample_state(const WindowDistribution& dist, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    acc += dist.probabilities[i];
    if (u < acc) return i;
  }
  return dist.probabilities.size() - 1;
}

struct ObfuscationResult {
  Image image;
  BudgetLedger ledger;
};

/// SSIM-guided exponential mechanism over non-overlapping p-by-p cell
/// windows, with Laplace noise on the remainder cells the window grid
/// cannot cover. Each window owns an RNG stream derived from
/// (seed, window index), so any thread count produces identical output.
inline ObfuscationResult exponential_obfuscate(const Image& img, const PixelMechanismConfig& cfg,
                                               int threads = 0) {
  cfg.validate();
  const SsimParams params{};
  BlockGrid grid = block_means(img, cfg.b);
  BudgetLedger ledger = allocate_budget(img.width, img.height, img.channels, cfg);
  const std::vector<double> levels = intensity_levels(cfg.k_prime);

  const int pb = cfg.p * cfg.b;
  const int covered_cx = ((img.width / pb) * pb) / cfg.b;   // covered cells per row
  const int covered_cy = ((img.height / pb) * pb) / cfg.b;  // covered cells per column
  const int windows_x = covered_cx / cfg.p;
  const int windows_y = covered_cy / cfg.p;
  const std::size_t windows_per_channel = static_cast<std::size_t>(windows_x) * windows_y;
  const std::size_t window_count = windows_per_channel * img.channels;

  detail::parallel_for(window_count, threads, [&](std::size_t begin, std::size_t end) {
    detail::WindowScratch scratch;
    std::vector<double> orig(static_cast<std::size_t>(cfg.p) * cfg.p);
    for (std::size_t wi = begin; wi < end; ++wi) {
      const int c = static_cast<int>(wi / windows_per_channel);
      const std::size_t rest = wi % windows_per_channel;
      const int wy = static_cast<int>(rest) / windows_x;
      const int wx = static_cast<int>(rest) % windows_x;
      for (int dy = 0; dy < cfg.p; ++dy)
        for (int dx = 0; dx < cfg.p; ++dx)
          orig[static_cast<std::size_t>(dy) * cfg.p + dx] =
              grid.mean_at(c, wy * cfg.p + dy, wx * cfg.p + dx);

      std::mt19937_64 rng = make_stream(cfg.seed, StreamKind::kExponentialWindow, wi);
      std::size_t state = detail::sample_window_state(orig, ledger.eps_prime, cfg.k_prime,
                                                      levels, params, uniform_unit(rng), scratch);
      for (int dy = 0; dy < cfg.p; ++dy)
        for (int dx = 0; dx < cfg.p; ++dx) {
          grid.mean_at(c, wy * cfg.p + dy, wx * cfg.p + dx) = levels[state % cfg.k_prime];
          state /= cfg.k_prime;
        }
    }
  });

  if (ledger.remainder_values > 0) {
    const double scale = kMaxIntensity / ledger.eps_per_remainder_value;
    std::uint64_t value_index = 0;
    for (int c = 0; c < grid.channels; ++c)
      for (int cy = 0; cy < grid.cells_y; ++cy)
        for (int cx = 0; cx < grid.cells_x; ++cx) {
          if (cy < covered_cy && cx < covered_cx) continue;
          std::mt19937_64 rng = make_stream(cfg.seed, StreamKind::kRemainderValue, value_index++);
          grid.mean_at(c, cy, cx) += sample_laplace(rng, scale);
        }
  }

  ObfuscationResult result{expand_blocks(grid), ledger};
  for (double& v : result.image.data) v = clamp_intensity(v);
  if (cfg.blur) result.image = gaussian_blur(result.image, kPostBlurSigma);
  return result;
}

}  // namespace pixelveil

#endif  // PIXELVEIL_PIXEL_MECHANISM_HPP
