// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/grid.hpp"

#include <cmath>

namespace fgmots {

double sample_bilinear(const FeatureGrid& grid, int channel, double x,
                       double y) {
  const int h = grid.height();
  const int w = grid.width();
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;

  auto read = [&](int yy, int xx) -> double {
    if (yy < 0 || yy >= h || xx < 0 || xx >= w) return 0.0;
    return grid.at(channel, yy, xx);
  };

  const double v00 = read(y0, x0);
  const double v01 = read(y0, x0 + 1);
  const double v10 = read(y0 + 1, x0);
  const double v11 = read(y0 + 1, x0 + 1);
  const double top = v00 * (1.0 - ax) + v01 * ax;
  const double bot = v10 * (1.0 - ax) + v11 * ax;
  return top * (1.0 - ay) + bot * ay;
}

}  // namespace fgmots
