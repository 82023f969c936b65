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

#ifndef PIXELVEIL_METRICS_HPP
#define PIXELVEIL_METRICS_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "pixelveil/image.hpp"

namespace pixelveil {

/// Parameters of the structural similarity index.
///
/// Defaults follow the reference formulation: 11x11 Gaussian-weighted
/// window with sigma 1.5, stabilizers C1 = (0.01 L)^2 and C2 = (0.03 L)^2
/// for dynamic range L = 255.
struct SsimParams {
  int window = 11;
  double gaussian_sigma = 1.5;
  double dynamic_range = kMaxIntensity;
  double c1 = (0.01 * kMaxIntensity) * (0.01 * kMaxIntensity);
  double c2 = (0.03 * kMaxIntensity) * (0.03 * kMaxIntensity);

  void validate() const {
    if (window < 3 || window % 2 == 0) throw std::invalid_argument("SSIM window must be odd and >= 3");
    if (!(gaussian_sigma > 0.0)) throw std::invalid_argument("SSIM window sigma must be > 0");
  }
};

namespace detail {

inline std::vector<double> ssim_window_weights(const SsimParams& params) {
  const int n = params.window;
  const int r = n / 2;
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  double sum = 0.0;
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      const double g = std::exp(-0.5 * (x * x + y * y) / (params.gaussian_sigma * params.gaussian_sigma));
      w[(y + r) * n + (x + r)] = g;
      sum += g;
    }
  }
  for (double& v : w) v /= sum;
  return w;
}

inline double ssim_from_stats(double mu_x, double mu_y, double var_x, double var_y, double cov,
                              const SsimParams& params) {
  const double num = (2.0 * mu_x * mu_y + params.c1) * (2.0 * cov + params.c2);
  const double den = (mu_x * mu_x + mu_y * mu_y + params.c1) * (var_x + var_y + params.c2);
  return num / den;
}

}  // namespace detail

/// Mean SSIM over all valid positions of a Gaussian-weighted sliding
/// window, averaged across channels. Result lies in [-1, 1].
inline double ssim_full(const Image& a, const Image& b, const SsimParams& params = {}) {
  params.validate();
  if (!a.same_shape(b)) throw std::invalid_argument("ssim_full: image shapes differ");
  const int n = params.window;
  if (a.width < n || a.height < n)
    throw std::invalid_argument("ssim_full: image smaller than SSIM window");

  const std::vector<double> w = detail::ssim_window_weights(params);
  double total = 0.0;
  std::size_t count = 0;
  for (int c = 0; c < a.channels; ++c) {
    for (int y0 = 0; y0 + n <= a.height; ++y0) {
      for (int x0 = 0; x0 + n <= a.width; ++x0) {
        double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int dy = 0; dy < n; ++dy) {
          for (int dx = 0; dx < n; ++dx) {
            const double wi = w[dy * n + dx];
            const double xv = a.at(c, y0 + dy, x0 + dx);
            const double yv = b.at(c, y0 + dy, x0 + dx);
            mx += wi * xv;
            my += wi * yv;
            sxx += wi * xv * xv;
            syy += wi * yv * yv;
            sxy += wi * xv * yv;
          }
        }
        const double var_x = sxx - mx * mx;
        const double var_y = syy - my * my;
        const double cov = sxy - mx * my;
        total += detail::ssim_from_stats(mx, my, var_x, var_y, cov, params);
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

/// Single-window SSIM with uniform weights and population variance over
/// the given cell values, clamped to [0, 1]. This is the quality function
/// driving the exponential mechanism, where the clamp pins the quality
/// sensitivity to exactly 1.
inline double ssim_window(std::span<const double> orig, std::span<const double> cand,
                          const SsimParams& params = {}) {
  if (orig.size() != cand.size() || orig.empty())
    throw std::invalid_argument("ssim_window: value lists must be non-empty and equal length");
  const double n = static_cast<double>(orig.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < orig.size(); ++i) {
    mx += orig[i];
    my += cand[i];
  }
  mx /= n;
  my /= n;
  double var_x = 0.0, var_y = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < orig.size(); ++i) {
    const double dx = orig[i] - mx;
    const double dy = cand[i] - my;
    var_x += dx * dx;
    var_y += dy * dy;
    cov += dx * dy;
  }
  var_x /= n;
  var_y /= n;
  cov /= n;
  return std::clamp(detail::ssim_from_stats(mx, my, var_x, var_y, cov, params), 0.0, 1.0);
}

/// Mean squared error over all pixel-channel values.
inline double mse(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mse: image shapes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.data.size());
}

}  // namespace pixelveil

#endif  // PIXELVEIL_METRICS_HPP
