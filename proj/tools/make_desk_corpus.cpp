// Generates the synthetic line-art test corpus (128x128 grayscale PNGs).
//
//   make_desk_corpus <out_dir> [count] [size]
//
// Images are drawn with 4x4 supersampling from panel borders, ink curves,
// toned ellipses, hatching and filled blobs.  Output is deterministic.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "mangavec/png_io.hpp"
#include "mangavec/search.hpp"

namespace {

using mangavec::Rng;
using mangavec::Vec2;

struct Shape {
  enum class Kind { polyline, ellipse, polygon } kind;
  std::vector<Vec2> pts;  // polyline / polygon
  double width = 1;       // line width; ellipse outline width (0 = none)
  Vec2 center{};
  double ra = 0, rb = 0, angle = 0;
  double fill = -1;       // ellipse/polygon fill gray, <0 = none
  double ink = 0;         // line gray
};

double seg_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

bool inside_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

// Returns the gray this shape paints at p, or <0 if it does not cover p.
double paint(const Shape& s, Vec2 p) {
  switch (s.kind) {
    case Shape::Kind::polyline:
      for (std::size_t i = 0; i + 1 < s.pts.size(); ++i)
        if (seg_dist(p, s.pts[i], s.pts[i + 1]) <= s.width / 2) return s.ink;
      return -1;
    case Shape::Kind::ellipse: {
      const Vec2 d = p - s.center;
      const double c = std::cos(s.angle), sn = std::sin(s.angle);
      const double x = (d.x * c + d.y * sn) / s.ra;
      const double y = (-d.x * sn + d.y * c) / s.rb;
      const double rho = std::sqrt(x * x + y * y);
      if (s.width > 0 && std::abs(rho - 1) * std::min(s.ra, s.rb) <= s.width / 2) return s.ink;
      if (rho <= 1 && s.fill >= 0) return s.fill;
      return -1;
    }
    case Shape::Kind::polygon:
      return inside_polygon(p, s.pts) ? s.fill : -1;
  }
  return -1;
}

std::vector<Vec2> cubic(Vec2 a, Vec2 b, Vec2 c, Vec2 d, int n = 32) {
  std::vector<Vec2> out;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n, u = 1 - t;
    out.push_back(a * (u * u * u) + b * (3 * u * u * t) + c * (3 * u * t * t) + d * (t * t * t));
  }
  return out;
}

std::vector<Shape> make_scene(Rng& rng, double size) {
  std::vector<Shape> shapes;
  auto rp = [&](double margin = 0) {
    return Vec2{rng.uniform(margin, size - margin), rng.uniform(margin, size - margin)};
  };

  // Toned ellipses (faces, bubbles) first so ink lands on top.
  const int ellipses = 1 + static_cast<int>(rng.uniform() * 3);
  for (int i = 0; i < ellipses; ++i) {
    Shape e{Shape::Kind::ellipse};
    e.center = rp(size * 0.2);
    e.ra = rng.uniform(size * 0.08, size * 0.25);
    e.rb = rng.uniform(size * 0.08, size * 0.2);
    e.angle = rng.uniform(0, std::numbers::pi);
    const double tones[] = {1.0, 1.0, 0.8, 0.6, 0.4};
    e.fill = tones[static_cast<int>(rng.uniform() * 5)];
    e.width = rng.uniform(1.0, 3.0);
    e.ink = 0.0;
    shapes.push_back(e);
  }

  // Hatching inside a random box.
  if (rng.uniform() < 0.6) {
    const Vec2 o = rp(size * 0.15);
    const double w = rng.uniform(size * 0.15, size * 0.35);
    const double h = rng.uniform(size * 0.1, size * 0.3);
    const double gap = rng.uniform(3.0, 6.0);
    for (double x = 0; x < w; x += gap) {
      Shape l{Shape::Kind::polyline};
      l.pts = {o + Vec2{x, 0}, o + Vec2{x + h * 0.5, h}};
      l.width = 1.0;
      l.ink = 0.1;
      shapes.push_back(l);
    }
  }

  // Ink curves of varying weight.
  const int curves = 4 + static_cast<int>(rng.uniform() * 6);
  for (int i = 0; i < curves; ++i) {
    Shape c{Shape::Kind::polyline};
    c.pts = cubic(rp(), rp(), rp(), rp());
    const double weights[] = {1.0, 1.5, 2.0, 3.0, 4.0};
    c.width = weights[static_cast<int>(rng.uniform() * 5)];
    c.ink = rng.uniform() < 0.8 ? 0.0 : 0.3;
    shapes.push_back(c);
  }

  // Solid blob (hair, shadow).
  if (rng.uniform() < 0.7) {
    Shape b{Shape::Kind::polygon};
    const Vec2 c = rp(size * 0.2);
    const double r = rng.uniform(size * 0.06, size * 0.15);
    const int n = 7 + static_cast<int>(rng.uniform() * 5);
    for (int k = 0; k < n; ++k) {
      const double a = 2 * std::numbers::pi * k / n;
      const double rr = r * rng.uniform(0.5, 1.3);
      b.pts.push_back(c + Vec2{std::cos(a), std::sin(a)} * rr);
    }
    b.fill = rng.uniform() < 0.7 ? 0.0 : 0.2;
    shapes.push_back(b);
  }

  // Panel border.
  if (rng.uniform() < 0.5) {
    Shape p{Shape::Kind::polyline};
    const double m = rng.uniform(3.0, 10.0);
    p.pts = {{m, m}, {size - m, m}, {size - m, size - m}, {m, size - m}, {m, m}};
    p.width = rng.uniform(2.0, 3.5);
    p.ink = 0.0;
    shapes.push_back(p);
  }
  return shapes;
}

mangavec::Gray8 render(const std::vector<Shape>& shapes, int size) {
  constexpr int ss = 4;
  mangavec::Gray8 img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double acc = 0;
      for (int sy = 0; sy < ss; ++sy)
        for (int sx = 0; sx < ss; ++sx) {
          const Vec2 p{x + (sx + 0.5) / ss, y + (sy + 0.5) / ss};
          double g = 1.0;
          for (const Shape& s : shapes)
            if (const double v = paint(s, p); v >= 0) g = v;
          acc += g;
        }
      img(x, y) = static_cast<std::uint8_t>(std::lround(acc / (ss * ss) * 255.0));
    }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_desk_corpus <out_dir> [count] [size]\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  const int count = argc > 2 ? std::stoi(argv[2]) : 20;
  const int size = argc > 3 ? std::stoi(argv[3]) : 128;
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    Rng rng(1000 + static_cast<std::uint64_t>(i));
    const auto shapes = make_scene(rng, size);
    char name[32];
    std::snprintf(name, sizeof name, "desk_%02d.png", i);
    mangavec::write_png_gray8((dir / name).string(), render(shapes, size));
  }
  return 0;
}
