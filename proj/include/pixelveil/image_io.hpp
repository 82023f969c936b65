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

#ifndef PIXELVEIL_IMAGE_IO_HPP
#define PIXELVEIL_IMAGE_IO_HPP

#include <png.h>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pixelveil/image.hpp"

namespace pixelveil {

/// Raised for unreadable, unwritable or unsupported image files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline uint8_t to_byte(double v) {
  const long r = std::lround(v);
  return static_cast<uint8_t>(std::clamp(r, 0L, 255L));
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// --- PNG ---------------------------------------------------------------

inline Image load_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialization failed: " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialization failed: " + path);
  }
  std::vector<uint8_t> bytes;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG file: " + path);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  const int interlace = png_get_interlace_type(png, info);

  if (depth != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported bit depth " + std::to_string(depth) + " (only 8-bit supported): " + path);
  }
  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported PNG color type (only 8-bit gray/RGB supported): " + path);
  }
  if (interlace != PNG_INTERLACE_NONE) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported interlaced PNG: " + path);
  }

  const int channels = (color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
  bytes.resize(static_cast<std::size_t>(w) * h * channels);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = bytes.data() + static_cast<std::size_t>(y) * w * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(static_cast<int>(w), static_cast<int>(h), channels);
  for (int c = 0; c < channels; ++c)
    for (png_uint_32 y = 0; y < h; ++y)
      for (png_uint_32 x = 0; x < w; ++x)
        img.at(c, static_cast<int>(y), static_cast<int>(x)) =
            bytes[(static_cast<std::size_t>(y) * w + x) * channels + c];
  return img;
}

inline void save_png(const Image& img, const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write PNG file: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialization failed: " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialization failed: " + path);
  }
  std::vector<uint8_t> bytes;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode PNG file: " + path);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  bytes.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        bytes[(static_cast<std::size_t>(y) * img.width + x) * img.channels + c] = to_byte(img.at(c, y, x));
  rows.resize(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = bytes.data() + static_cast<std::size_t>(y) * img.width * img.channels;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// --- PNM (binary PGM/PPM) ------------------------------------------------

inline int pnm_next_int(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments between header tokens.
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (ch == EOF || !std::isdigit(ch)) throw IoError("malformed PNM header: " + path);
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1 << 30) throw IoError("malformed PNM header: " + path);
    ch = in.get();
  }
  if (ch != EOF) in.unget();
  return static_cast<int>(value);
}

inline Image load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw IoError("unsupported PNM magic (only binary P5/P6): " + path);
  const int channels = magic[1] == '5' ? 1 : 3;
  const int w = pnm_next_int(in, path);
  const int h = pnm_next_int(in, path);
  const int maxval = pnm_next_int(in, path);
  if (w <= 0 || h <= 0) throw IoError("malformed PNM header: " + path);
  if (maxval > 255)
    throw IoError("unsupported bit depth (maxval " + std::to_string(maxval) + " > 255): " + path);
  if (maxval <= 0) throw IoError("malformed PNM header: " + path);
  in.get();  // single whitespace byte after maxval

  std::vector<uint8_t> bytes(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw IoError("truncated PNM pixel data: " + path);

  Image img(w, h, channels);
  for (int c = 0; c < channels; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        img.at(c, y, x) = bytes[(static_cast<std::size_t>(y) * w + x) * channels + c];
  return img;
}

inline void save_pnm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image file: " + path);
  out << (img.channels == 1 ? "P5" : "P6") << "\n" << img.width << " " << img.height << "\n255\n";
  std::vector<uint8_t> bytes(static_cast<std::size_t>(img.width) * img.height * img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        bytes[(static_cast<std::size_t>(y) * img.width + x) * img.channels + c] = to_byte(img.at(c, y, x));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed to write image file: " + path);
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// Loads an 8-bit PNG, PGM (P5) or PPM (P6) image; the format is detected
/// from the file contents.
inline Image load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open image file: " + path);
  unsigned char magic[8] = {};
  probe.read(reinterpret_cast<char*>(magic), 8);
  probe.close();
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (std::memcmp(magic, png_sig, 8) == 0) return detail::load_png(path);
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) return detail::load_pnm(path);
  throw IoError("unsupported image format (PNG/PGM/PPM only): " + path);
}

/// Saves to PNG, PGM or PPM depending on the file extension. Working
/// intensities are rounded to the nearest integer and clamped to [0, 255].
inline void save_image(const Image& img, const std::string& path) {
  if (detail::has_suffix(path, ".png")) {
    detail::save_png(img, path);
  } else if (detail::has_suffix(path, ".pgm")) {
    if (img.channels != 1) throw IoError("PGM output requires a single-channel image: " + path);
    detail::save_pnm(img, path);
  } else if (detail::has_suffix(path, ".ppm")) {
    if (img.channels != 3) throw IoError("PPM output requires a 3-channel image: " + path);
    detail::save_pnm(img, path);
  } else {
    throw IoError("unsupported output extension (use .png/.pgm/.ppm): " + path);
  }
}

}  // namespace pixelveil

#endif  // PIXELVEIL_IMAGE_IO_HPP
