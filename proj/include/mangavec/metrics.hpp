#pragma once

// Image similarity metrics on 8-bit-range images (values in [0,255]).

#include <algorithm>
#include <cmath>
#include <vector>

#include "mangavec/image.hpp"

namespace mangavec {

// Intensity image with values in [0,255].
using Gray255 = Image<double>;

inline Gray255 to_255(const Canvas& c) {
  Gray255 out(c.width(), c.height());
  auto src = c.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * 255.0;
  return out;
}

// ||a - b||^2 / (C*H*W*255^2), in [0,1].
inline double mse(const Gray255& a, const Gray255& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) return 0.0;
  return squared_error(a, b) / (static_cast<double>(a.size()) * 255.0 * 255.0);
}

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

namespace detail {

inline std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(size);
  const double c = (size - 1) / 2.0;
  double sum = 0;
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    k[i] = std::exp(-d * d / (2 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable weighted window sums over every position where the window fits.
inline Gray255 filter_valid(const Gray255& img, const std::vector<double>& kx,
                            const std::vector<double>& ky) {
  const int wx = static_cast<int>(kx.size());
  const int wy = static_cast<int>(ky.size());
  const int ow = img.width() - wx + 1;
  const int oh = img.height() - wy + 1;
  Gray255 tmp(ow, img.height());
  for (int y = 0; y < img.height(); ++y) {
    const auto row = img.row(y);
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int i = 0; i < wx; ++i) s += kx[i] * row[x + i];
      tmp(x, y) = s;
    }
  }
  Gray255 out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int j = 0; j < wy; ++j) s += ky[j] * tmp(x, y + j);
      out(x, y) = s;
    }
  return out;
}

inline Gray255 product(const Gray255& a, const Gray255& b) {
  Gray255 out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace detail

// Mean SSIM over all window positions lying fully inside the image.  When
// the image is smaller than the window along an axis, the window shrinks to
// the largest odd size that fits.
inline double ssim(const Gray255& a, const Gray255& b, const SsimParams& p = {}) {
  require_same_shape(a, b, "ssim");
  if (a.empty()) return 1.0;
  auto fit = [&](int dim) {
    int w = std::min(p.window, dim);
    if (w % 2 == 0) --w;
    return std::max(w, 1);
  };
  const auto kx = detail::gaussian_kernel(fit(a.width()), p.sigma);
  const auto ky = detail::gaussian_kernel(fit(a.height()), p.sigma);

  const Gray255 mu_a = detail::filter_valid(a, kx, ky);
  const Gray255 mu_b = detail::filter_valid(b, kx, ky);
  const Gray255 aa = detail::filter_valid(detail::product(a, a), kx, ky);
  const Gray255 bb = detail::filter_valid(detail::product(b, b), kx, ky);
  const Gray255 ab = detail::filter_valid(detail::product(a, b), kx, ky);

  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  double total = 0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = aa[i] - ma * ma;
    const double vb = bb[i] - mb * mb;
    const double cov = ab[i] - ma * mb;
    total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

// Nearest-neighbour resampling.
template <typename T>
Image<T> resize_nearest(const Image<T>& src, int width, int height) {
  Image<T> out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(src.height() - 1, static_cast<int>((y + 0.5) * src.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(src.width() - 1, static_cast<int>((x + 0.5) * src.width() / width));
      out(x, y) = src(sx, sy);
    }
  }
  return out;
}

}  // namespace mangavec
