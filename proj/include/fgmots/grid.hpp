// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "fgmots/errors.hpp"

namespace fgmots {

/// Dense C x H x W tensor, row-major within each channel.
class FeatureGrid {
public:
  FeatureGrid() = default;
  FeatureGrid(int channels, int height, int width, double fill = 0.0)
      : channels_(channels), height_(height), width_(width),
        data_(static_cast<std::size_t>(channels) * height * width, fill) {
    if (channels < 1 || height < 1 || width < 1) {
      throw ShapeError("FeatureGrid dimensions must be >= 1");
    }
  }

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }

  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const FeatureGrid& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Per-pixel displacement field (dx, dy) in feature-grid units.
class FlowField {
public:
  FlowField() = default;
  FlowField(int height, int width, double dx = 0.0, double dy = 0.0)
      : height_(height), width_(width),
        dx_(static_cast<std::size_t>(height) * width, dx),
        dy_(static_cast<std::size_t>(height) * width, dy) {
    if (height < 1 || width < 1) {
      throw ShapeError("FlowField dimensions must be >= 1");
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }

  double& dx(int y, int x) { return dx_[index(y, x)]; }
  double dx(int y, int x) const { return dx_[index(y, x)]; }
  double& dy(int y, int x) { return dy_[index(y, x)]; }
  double dy(int y, int x) const { return dy_[index(y, x)]; }

private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> dx_;
  std::vector<double> dy_;
};

/// Bilinear sample of one channel at continuous (x, y). Pixel (r, c) sits at
/// continuous coordinate (y = r, x = c); anything sampled outside the grid
/// contributes zero.
double sample_bilinear(const FeatureGrid& grid, int channel, double x,
                       double y);

}  // namespace fgmots
