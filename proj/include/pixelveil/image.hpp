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

#ifndef PIXELVEIL_IMAGE_HPP
#define PIXELVEIL_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pixelveil {

/// Number of representable intensity levels per channel (8-bit images).
inline constexpr int kIntensityLevels = 256;
/// Largest representable intensity, i.e. the dynamic range of a channel.
inline constexpr double kMaxIntensity = 255.0;

/// Raster image with real-valued working intensities.
///
/// Pixel data is stored planar: one contiguous row-major plane per channel.
/// Intensities are kept as reals in [0, 255] so that block averaging and
/// noise addition do not accumulate quantization error; rounding to bytes
/// happens only at file output.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;

  Image(int w, int h, int c, double fill = 0.0) : width(w), height(h), channels(c) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (c != 1 && c != 3) throw std::invalid_argument("image must have 1 or 3 channels");
    if (fill < 0.0 || fill > kMaxIntensity) throw std::invalid_argument("fill intensity out of range");
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
  }

  std::size_t pixels_per_channel() const { return static_cast<std::size_t>(width) * height; }
  std::size_t size() const { return data.size(); }

  double& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  double at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }

  std::span<double> plane(int c) { return {data.data() + static_cast<std::size_t>(c) * pixels_per_channel(), pixels_per_channel()}; }
  std::span<const double> plane(int c) const { return {data.data() + static_cast<std::size_t>(c) * pixels_per_channel(), pixels_per_channel()}; }

  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height && channels == other.channels;
  }
};

inline double clamp_intensity(double v) { return std::clamp(v, 0.0, kMaxIntensity); }

/// Per-channel block means of an image on a grid of b-by-b blocks.
/// Blocks in the last column/row may be cropped by the image border and
/// average over only their in-image pixels.
struct BlockGrid {
  int block = 1;
  int width = 0;
  int height = 0;
  int channels = 0;
  int cells_x = 0;
  int cells_y = 0;
  std::vector<double> means;  // planar, (channel, cell row, cell col)

  std::size_t cells_per_channel() const { return static_cast<std::size_t>(cells_x) * cells_y; }

  double& mean_at(int c, int cy, int cx) { return means[(static_cast<std::size_t>(c) * cells_y + cy) * cells_x + cx]; }
  double mean_at(int c, int cy, int cx) const { return means[(static_cast<std::size_t>(c) * cells_y + cy) * cells_x + cx]; }

  int cell_width(int cx) const { return std::min(block, width - cx * block); }
  int cell_height(int cy) const { return std::min(block, height - cy * block); }
};

inline BlockGrid block_means(const Image& img, int b) {
  if (b < 1) throw std::invalid_argument("pixelization block side must be >= 1");
  BlockGrid grid;
  grid.block = b;
  grid.width = img.width;
  grid.height = img.height;
  grid.channels = img.channels;
  grid.cells_x = (img.width + b - 1) / b;
  grid.cells_y = (img.height + b - 1) / b;
  grid.means.assign(grid.cells_per_channel() * img.channels, 0.0);
  for (int c = 0; c < img.channels; ++c) {
    for (int cy = 0; cy < grid.cells_y; ++cy) {
      const int y0 = cy * b;
      const int hh = grid.cell_height(cy);
      for (int cx = 0; cx < grid.cells_x; ++cx) {
        const int x0 = cx * b;
        const int ww = grid.cell_width(cx);
        const double first = img.at(c, y0, x0);
        bool constant = true;
        double sum = 0.0;
        for (int y = y0; y < y0 + hh; ++y)
          for (int x = x0; x < x0 + ww; ++x) {
            sum += img.at(c, y, x);
            constant = constant && img.at(c, y, x) == first;
          }
        // Constant blocks keep their value bit-exactly, which makes
        // pixelization idempotent.
        grid.mean_at(c, cy, cx) = constant ? first : sum / (static_cast<double>(hh) * ww);
      }
    }
  }
  return grid;
}

inline Image expand_blocks(const BlockGrid& grid) {
  Image out(grid.width, grid.height, grid.channels);
  for (int c = 0; c < grid.channels; ++c) {
    for (int y = 0; y < grid.height; ++y) {
      const int cy = y / grid.block;
      for (int x = 0; x < grid.width; ++x) {
        out.at(c, y, x) = grid.mean_at(c, cy, x / grid.block);
      }
    }
  }
  return out;
}

/// Replaces every b-by-b block by its arithmetic mean.
inline Image pixelize(const Image& img, int b) { return expand_blocks(block_means(img, b)); }

/// The coarsened intensity levels: k_prime values spread evenly over
/// [0, 255], each rounded to the nearest integer intensity.
inline std::vector<double> intensity_levels(int k_prime) {
  if (k_prime < 2 || k_prime > kIntensityLevels)
    throw std::invalid_argument("level count must be in [2, 256]");
  std::vector<double> levels(k_prime);
  for (int j = 0; j < k_prime; ++j)
    levels[j] = std::round(static_cast<double>(j) * kMaxIntensity / (k_prime - 1));
  return levels;
}

/// Nearest member of a sorted level set; exact midpoints resolve upward.
inline double nearest_level(double v, std::span<const double> levels) {
  auto it = std::lower_bound(levels.begin(), levels.end(), v);
  if (it == levels.begin()) return *it;
  if (it == levels.end()) return levels.back();
  const double hi = *it;
  const double lo = *(it - 1);
  return (v - lo < hi - v) ? lo : hi;
}

/// Maps every intensity to the nearest member of the k_prime-level set.
inline Image coarsen(const Image& img, int k_prime) {
  const std::vector<double> levels = intensity_levels(k_prime);
  Image out = img;
  for (double& v : out.data) v = nearest_level(v, levels);
  return out;
}

namespace detail {

// Folds an out-of-range index back into [0, n) by mirroring at the borders
// (edge sample included), e.g. -1 -> 0 and n -> n - 1.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return (i < n) ? i : period - 1 - i;
}

inline std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    sum += kernel[i + radius];
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

}  // namespace detail

/// Separable Gaussian convolution with kernel radius ceil(3*sigma),
/// reflect padding, output clamped to the valid intensity range.
inline Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("blur sigma must be > 0");
  const std::vector<double> kernel = detail::gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);

  Image tmp(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t)
          acc += kernel[t + radius] * img.at(c, y, detail::reflect_index(x + t, img.width));
        tmp.at(c, y, x) = acc;
      }
    }
  }
  Image out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t)
          acc += kernel[t + radius] * tmp.at(c, detail::reflect_index(y + t, img.height), x);
        out.at(c, y, x) = clamp_intensity(acc);
      }
    }
  }
  return out;
}

}  // namespace pixelveil

#endif  // PIXELVEIL_IMAGE_HPP
