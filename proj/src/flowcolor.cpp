#include "tvdd/flowcolor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tvdd/errors.hpp"

namespace tvdd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void hsv_to_rgb(double hue, double sat, double val, double rgb[3]) {
  const double hh = (hue - std::floor(hue)) * 6.0;
  const int sector = std::min(5, static_cast<int>(hh));
  const double f = hh - sector;
  const double p = val * (1.0 - sat);
  const double q = val * (1.0 - sat * f);
  const double t = val * (1.0 - sat * (1.0 - f));
  switch (sector) {
    case 0: rgb[0] = val; rgb[1] = t; rgb[2] = p; break;
    case 1: rgb[0] = q; rgb[1] = val; rgb[2] = p; break;
    case 2: rgb[0] = p; rgb[1] = val; rgb[2] = t; break;
    case 3: rgb[0] = p; rgb[1] = q; rgb[2] = val; break;
    case 4: rgb[0] = t; rgb[1] = p; rgb[2] = val; break;
    default: rgb[0] = val; rgb[1] = p; rgb[2] = q; break;
  }
}

}  // namespace

GridFunction flow_to_color(const GridFunction& flow) {
  if (flow.domain().dim() != 2 || flow.channels() != 2)
    throw ShapeMismatch("flow_to_color expects a 2-D two-channel field");
  const std::size_t n = flow.domain().num_points();

  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::hypot(flow.at(i, 0), flow.at(i, 1));
  std::vector<double> sorted(mag);
  std::sort(sorted.begin(), sorted.end());
  const double q99 = n > 0 ? sorted[static_cast<std::size_t>(std::floor(0.99 * static_cast<double>(n - 1)))] : 0.0;
  const double scale = q99 > 0.0 ? q99 : 1.0;

  GridFunction rgb(flow.domain(), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double hue = std::atan2(flow.at(i, 1), flow.at(i, 0)) / kTwoPi + 0.5;
    const double sat = std::min(1.0, mag[i] / scale);
    double c[3];
    hsv_to_rgb(hue, sat, 1.0, c);
    rgb.at(i, 0) = c[0];
    rgb.at(i, 1) = c[1];
    rgb.at(i, 2) = c[2];
  }
  return rgb;
}

}  // namespace tvdd
