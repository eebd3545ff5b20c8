#pragma once

// 8-bit grayscale PNG reading and writing through libpng's simplified API.
// Colour or alpha inputs are converted to gray by libpng.

#include <png.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mangavec/image.hpp"

namespace mangavec {

class png_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Gray8 = Image<std::uint8_t>;

inline Gray8 read_png_gray8(const std::string& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str()))
    throw png_error("cannot read PNG '" + path + "': " + img.message);
  img.format = PNG_FORMAT_GRAY;
  Gray8 out(static_cast<int>(img.width), static_cast<int>(img.height));
  const png_color white{255, 255, 255};
  if (!png_image_finish_read(&img, &white, out.pixels().data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw png_error("cannot decode PNG '" + path + "': " + msg);
  }
  return out;
}

inline void write_png_gray8(const std::string& path, const Gray8& image) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.pixels().data(), 0, nullptr))
    throw png_error("cannot write PNG '" + path + "': " + img.message);
}

inline Canvas to_canvas(const Gray8& g) {
  Canvas c(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i) c[i] = g[i] / 255.0;
  return c;
}

inline Gray8 to_gray8(const Canvas& c) {
  Gray8 g(c.width(), c.height());
  for (std::size_t i = 0; i < c.size(); ++i)
    g[i] = static_cast<std::uint8_t>(std::lround(std::clamp(c[i], 0.0, 1.0) * 255.0));
  return g;
}

inline Canvas load_target(const std::string& path) { return to_canvas(read_png_gray8(path)); }

}  // namespace mangavec
