#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mangavec {

class shape_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Row-major single-channel raster.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill) {
    if (width < 0 || height < 0) throw shape_error("negative image dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }
  std::span<T> row(int y) { return std::span<T>(data_).subspan(index(0, y), width_); }
  std::span<const T> row(int y) const {
    return std::span<const T>(data_).subspan(index(0, y), width_);
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const auto& o) const { return width_ == o.width() && height_ == o.height(); }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Grayscale canvas with values in [0,1]; 1 is white.
using Canvas = Image<double>;
// Binary coverage; entries are 0 or 1.
using Mask = Image<std::uint8_t>;

inline constexpr double kWhite = 1.0;

inline Canvas blank_canvas(int width, int height) { return Canvas(width, height, kWhite); }

inline void require_same_shape(const auto& a, const auto& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw shape_error(std::string(what) + ": shape mismatch (" + std::to_string(a.width()) +
                      "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                      "x" + std::to_string(b.height()) + ")");
  }
}

// Axis-aligned pixel rectangle, half-open.
struct PixelBox {
  int x = 0, y = 0, width = 0, height = 0;

  int x1() const { return x + width; }
  int y1() const { return y + height; }
  bool empty() const { return width <= 0 || height <= 0; }
  bool operator==(const PixelBox&) const = default;
};

template <typename T>
Image<T> crop(const Image<T>& img, const PixelBox& box) {
  Image<T> out(box.width, box.height);
  for (int y = 0; y < box.height; ++y)
    for (int x = 0; x < box.width; ++x) out(x, y) = img(box.x + x, box.y + y);
  return out;
}

template <typename T>
void paste(Image<T>& dst, const Image<T>& src, int ox, int oy) {
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) dst(ox + x, oy + y) = src(x, y);
}

inline std::size_t count_set(const Mask& m) {
  std::size_t n = 0;
  for (auto v : m.pixels()) n += v != 0;
  return n;
}

// Squared L2 distance between two canvases.
inline double squared_error(const Canvas& a, const Canvas& b) {
  require_same_shape(a, b, "squared_error");
  double s = 0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return s;
}

}  // namespace mangavec
