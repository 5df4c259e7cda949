#pragma once

#include <algorithm>
#include <cmath>

namespace shapebias::kernels::detail {

struct ShiftedSums {
  double x = 0.0, y = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;

  void add(double dx, double dy) noexcept {
    x += dx;
    y += dy;
    xx += dx * dx;
    yy += dy * dy;
    xy += dx * dy;
  }
};

inline void finish(const ShiftedSums& s, double n, double& r, unsigned char& valid) noexcept {
  const double sxx = s.xx - s.x * s.x / n;
  const double syy = s.yy - s.y * s.y / n;
  const double sxy = s.xy - s.x * s.y / n;
  if (!(sxx > 0.0 && syy > 0.0)) {
    r = 0.0;
    valid = 0;
    return;
  }
  r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  valid = 1;
}

}  // namespace shapebias::kernels::detail
