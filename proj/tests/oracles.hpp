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
//
// Independent reference implementations used as test oracles. These are
// deliberately naive (direct double loops over the definitions) and must
// stay decoupled from the library code paths they check.

#ifndef PIXELVEIL_TESTS_ORACLES_HPP
#define PIXELVEIL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pixelveil/image.hpp"
#include "pixelveil/metrics.hpp"

namespace oracles {

// Full 2-D Gaussian convolution, no separability, reflect padding with the
// edge sample included (-1 -> 0, n -> n-1).
inline pixelveil::Image naive_gaussian_blur(const pixelveil::Image& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int size = 2 * radius + 1;
  std::vector<double> kernel(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      kernel[(dy + radius) * size + (dx + radius)] = g;
      sum += g;
    }
  for (double& w : kernel) w /= sum;

  const auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) {
      if (i < 0) i = -i - 1;
      if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
  };

  pixelveil::Image out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        double acc = 0.0;
        for (int dy = -radius; dy <= radius; ++dy)
          for (int dx = -radius; dx <= radius; ++dx)
            acc += kernel[(dy + radius) * size + (dx + radius)] *
                   img.at(c, reflect(y + dy, img.height), reflect(x + dx, img.width));
        out.at(c, y, x) = std::clamp(acc, 0.0, 255.0);
      }
  return out;
}

// Sliding-window SSIM straight from the definition: Gaussian weights,
// weighted first and second moments per window, mean over windows and
// channels.
inline double naive_ssim_full(const pixelveil::Image& a, const pixelveil::Image& b,
                              int window = 11, double sigma = 1.5) {
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  const int r = window / 2;
  std::vector<double> w(static_cast<std::size_t>(window) * window);
  double wsum = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      w[(dy + r) * window + (dx + r)] = g;
      wsum += g;
    }
  for (double& v : w) v /= wsum;

  double total = 0.0;
  long count = 0;
  for (int c = 0; c < a.channels; ++c)
    for (int y0 = 0; y0 + window <= a.height; ++y0)
      for (int x0 = 0; x0 + window <= a.width; ++x0) {
        double mx = 0.0, my = 0.0;
        for (int dy = 0; dy < window; ++dy)
          for (int dx = 0; dx < window; ++dx) {
            mx += w[dy * window + dx] * a.at(c, y0 + dy, x0 + dx);
            my += w[dy * window + dx] * b.at(c, y0 + dy, x0 + dx);
          }
        double vx = 0.0, vy = 0.0, cov = 0.0;
        for (int dy = 0; dy < window; ++dy)
          for (int dx = 0; dx < window; ++dx) {
            const double wx = w[dy * window + dx];
            const double da = a.at(c, y0 + dy, x0 + dx) - mx;
            const double db = b.at(c, y0 + dy, x0 + dx) - my;
            vx += wx * da * da;
            vy += wx * db * db;
            cov += wx * da * db;
          }
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++count;
      }
  return total / static_cast<double>(count);
}

inline double naive_mse(const pixelveil::Image& a, const pixelveil::Image& b) {
  double sum = 0.0;
  for (int c = 0; c < a.channels; ++c)
    for (int y = 0; y < a.height; ++y)
      for (int x = 0; x < a.width; ++x) {
        const double d = a.at(c, y, x) - b.at(c, y, x);
        sum += d * d;
      }
  return sum / (static_cast<double>(a.width) * a.height * a.channels);
}

// Uniform single-window SSIM evaluated directly from the formula, clamped.
inline double naive_ssim_window(const std::vector<double>& x, const std::vector<double>& y) {
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
    cov += (x[i] - mx) * (y[i] - my);
  }
  vx /= n;
  vy /= n;
  cov /= n;
  const double raw = ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
  return std::clamp(raw, 0.0, 1.0);
}

inline pixelveil::Image random_image(int w, int h, int c, std::uint32_t seed,
                                     bool integer_valued = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  pixelveil::Image img(w, h, c);
  for (double& v : img.data) v = integer_valued ? std::floor(dist(rng)) : dist(rng);
  return img;
}

// Pearson correlation of the rank sequences, with average ranks for ties.
inline double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> rx = ranks(xs);
  const std::vector<double> ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double l1_objective(const std::vector<std::vector<double>>& gallery,
                           const std::vector<double>& target,
                           const std::vector<double>& weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    double r = -target[i];
    for (std::size_t j = 0; j < gallery.size(); ++j) r += weights[j] * gallery[j][i];
    total += std::abs(r);
  }
  return total;
}

// Cyclic coordinate descent on the weights; each univariate step is the
// exact weighted-median minimizer. Convex but non-smooth, so this can
// stall above the optimum; its value is an upper bound on it.
inline double coordinate_descent_objective(const std::vector<std::vector<double>>& gallery,
                                           const std::vector<double>& target, int passes = 200) {
  std::vector<double> weights(gallery.size(), 0.0);
  const std::size_t n = target.size();
  for (int pass = 0; pass < passes; ++pass) {
    double improved = 0.0;
    for (std::size_t j = 0; j < gallery.size(); ++j) {
      std::vector<std::pair<double, double>> ratios;  // (candidate w_j, |slope|)
      for (std::size_t i = 0; i < n; ++i) {
        double a = -target[i];
        for (std::size_t l = 0; l < gallery.size(); ++l)
          if (l != j) a += weights[l] * gallery[l][i];
        const double b = gallery[j][i];
        if (b != 0.0) ratios.emplace_back(-a / b, std::abs(b));
      }
      if (ratios.empty()) continue;
      std::sort(ratios.begin(), ratios.end());
      double half = 0.0;
      for (const auto& [t, w] : ratios) half += w;
      half *= 0.5;
      double acc = 0.0;
      double best = ratios.back().first;
      for (const auto& [t, w] : ratios) {
        acc += w;
        if (acc >= half) {
          best = t;
          break;
        }
      }
      const double before = l1_objective(gallery, target, weights);
      const double saved = weights[j];
      weights[j] = best;
      const double after = l1_objective(gallery, target, weights);
      if (after > before) {
        weights[j] = saved;
      } else {
        improved += before - after;
      }
    }
    if (improved < 1e-12) break;
  }
  return l1_objective(gallery, target, weights);
}

// Pearson chi-square statistic of observed counts against expected
// probabilities.
inline double chi_square(const std::vector<std::int64_t>& counts,
                         const std::vector<double>& probabilities) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    const double d = static_cast<double>(counts[i]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Upper 0.001 quantile of the chi-square distribution with 15 degrees of
// freedom (16 outcome states).
inline constexpr double kChiSquare15Df999 = 37.6973;

}  // namespace oracles

#endif  // PIXELVEIL_TESTS_ORACLES_HPP
