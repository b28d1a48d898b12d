#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinrc/rng.hpp"
#include "spinrc/tasks.hpp"

namespace spinrc {

namespace {

struct Pt {
  double x, y;
};

using Stroke = std::vector<Pt>;

Stroke arc(double cx, double cy, double rx, double ry, double a0, double a1, int segments = 10) {
  Stroke s;
  for (int i = 0; i <= segments; ++i) {
    double a = a0 + (a1 - a0) * i / segments;
    s.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
  }
  return s;
}

// Stroke templates in a unit box, x to the right, y downward.
std::vector<Stroke> digit_strokes(int digit) {
  constexpr double pi = std::numbers::pi;
  switch (digit) {
    case 0:
      return {arc(0.5, 0.5, 0.32, 0.42, 0.0, 2.0 * pi, 20)};
    case 1:
      return {{{0.32, 0.25}, {0.52, 0.08}, {0.52, 0.92}}, {{0.32, 0.92}, {0.72, 0.92}}};
    case 2:
      return {arc(0.5, 0.3, 0.3, 0.22, -pi, 0.15 * pi, 12),
              {{0.76, 0.42}, {0.24, 0.92}},
              {{0.24, 0.92}, {0.8, 0.92}}};
    case 3:
      return {arc(0.48, 0.28, 0.26, 0.2, -0.85 * pi, 0.5 * pi, 12),
              arc(0.48, 0.7, 0.3, 0.23, -0.5 * pi, 0.85 * pi, 12)};
    case 4:
      return {{{0.62, 0.08}, {0.2, 0.62}, {0.84, 0.62}}, {{0.62, 0.08}, {0.62, 0.92}}};
    case 5:
      return {{{0.74, 0.1}, {0.28, 0.1}, {0.26, 0.48}},
              arc(0.5, 0.68, 0.28, 0.24, -0.6 * pi, 0.8 * pi, 14)};
    case 6:
      return {{{0.66, 0.08}, {0.32, 0.52}},
              arc(0.5, 0.68, 0.26, 0.24, 0.0, 2.0 * pi, 16)};
    case 7:
      return {{{0.2, 0.1}, {0.8, 0.1}, {0.42, 0.92}}};
    case 8:
      return {arc(0.5, 0.29, 0.24, 0.2, 0.0, 2.0 * pi, 16),
              arc(0.5, 0.71, 0.29, 0.22, 0.0, 2.0 * pi, 16)};
    case 9:
      return {arc(0.5, 0.32, 0.26, 0.24, 0.0, 2.0 * pi, 16),
              {{0.74, 0.34}, {0.62, 0.92}}};
    default:
      return {};
  }
}

double segment_distance(double px, double py, const Pt& a, const Pt& b) {
  double vx = b.x - a.x;
  double vy = b.y - a.y;
  double wx = px - a.x;
  double wy = py - a.y;
  double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
  double dx = px - (a.x + t * vx);
  double dy = py - (a.y + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

ImageDataset synth_digits(std::size_t n, std::uint64_t seed) {
  ImageDataset d;
  d.count = n;
  d.pixels.assign(n * 784, 0);
  d.labels.resize(n);

  Pcg32 label_rng(combine_seed(seed, 0xD16175ULL));
  for (std::size_t i = 0; i < n; ++i) {
    d.labels[i] = static_cast<int>(label_rng.next_below(10));
    int digit = d.labels[i];

    Pcg32 rng(combine_seed(combine_seed(seed, i), static_cast<std::uint64_t>(digit)));
    double scale = 19.0 * (0.85 + 0.3 * rng.next_double());
    double rot = (rng.next_double() - 0.5) * 0.3;   // rad
    double shear = (rng.next_double() - 0.5) * 0.35;
    double tx = 13.5 + (rng.next_double() - 0.5) * 5.0;
    double ty = 13.5 + (rng.next_double() - 0.5) * 4.0;
    double thickness = 0.9 + 0.8 * rng.next_double();  // px
    double cr = std::cos(rot), sr = std::sin(rot);

    std::vector<Stroke> strokes = digit_strokes(digit);
    for (Stroke& s : strokes) {
      for (Pt& p : s) {
        double x = (p.x - 0.5) * scale;
        double y = (p.y - 0.5) * scale;
        x += shear * y;
        double xr = cr * x - sr * y;
        double yr = sr * x + cr * y;
        p = {xr + tx, yr + ty};
      }
    }

    std::uint8_t* img = d.pixels.data() + i * 784;
    for (int py = 0; py < 28; ++py) {
      for (int px = 0; px < 28; ++px) {
        double dist = 1e9;
        for (const Stroke& s : strokes)
          for (std::size_t k = 0; k + 1 < s.size(); ++k)
            dist = std::min(dist, segment_distance(px, py, s[k], s[k + 1]));
        double v = 0.0;
        if (dist <= thickness)
          v = 255.0;
        else if (dist < thickness + 1.2)
          v = 255.0 * (1.0 - (dist - thickness) / 1.2);
        img[py * 28 + px] = static_cast<std::uint8_t>(v + 0.5);
      }
    }

    // pepper a little sensor noise into the grayscale
    int speckles = static_cast<int>(rng.next_below(8));
    for (int s = 0; s < speckles; ++s) {
      std::uint32_t at = rng.next_below(784);
      img[at] = static_cast<std::uint8_t>(std::min(255u, img[at] + 60u + rng.next_below(120)));
    }
  }
  return d;
}

}  // namespace spinrc
