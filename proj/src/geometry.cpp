// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fgmots {

namespace {

std::uint64_t run_sum(const std::vector<std::uint32_t>& runs) {
  std::uint64_t s = 0;
  for (const auto r : runs) s += r;
  return s;
}

// Drops internal zero counts and merges the neighbours they separate. The
// leading count stays, possibly zero.
std::vector<std::uint32_t> canonicalize(std::vector<std::uint32_t> runs) {
  std::vector<std::uint32_t> out;
  out.reserve(runs.size());
  bool current = false;       // polarity of the run being read
  bool last_emitted = false;  // polarity of out.back(); leading run is zeros
  for (const auto count : runs) {
    if (out.empty()) {
      out.push_back(count);  // leading zero count, possibly 0
      last_emitted = false;
      current = true;
      continue;
    }
    if (count == 0) {
      current = !current;
      continue;
    }
    if (current == last_emitted) {
      // a zero run was skipped in between; same polarity, so merge
      out.back() += count;
    } else {
      out.push_back(count);
      last_emitted = current;
    }
    current = !current;
  }
  if (out.empty()) out.push_back(0);
  return out;
}

}  // namespace

double bbox_iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint32_t> runs)
    : height_(height), width_(width), runs_(canonicalize(std::move(runs))) {
  if (height < 1 || width < 1) {
    throw ShapeError("BinaryMask dimensions must be >= 1");
  }
  const std::uint64_t expected =
      static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width);
  if (run_sum(runs_) != expected) {
    throw ShapeError("BinaryMask run counts do not sum to height*width");
  }
}

BinaryMask BinaryMask::from_raster(int height, int width,
                                   const std::vector<std::uint8_t>& raster) {
  if (height < 1 || width < 1) {
    throw ShapeError("BinaryMask dimensions must be >= 1");
  }
  if (raster.size() != static_cast<std::size_t>(height) * width) {
    throw ShapeError("raster size does not match dimensions");
  }
  std::vector<std::uint32_t> runs;
  bool value = false;
  std::uint32_t count = 0;
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      const bool v = raster[static_cast<std::size_t>(y) * width + x] != 0;
      if (v == value) {
        ++count;
      } else {
        runs.push_back(count);
        value = v;
        count = 1;
      }
    }
  }
  runs.push_back(count);
  return BinaryMask(height, width, std::move(runs));
}

BinaryMask BinaryMask::empty_mask(int height, int width) {
  return BinaryMask(
      height, width,
      {static_cast<std::uint32_t>(static_cast<std::uint64_t>(height) * width)});
}

std::uint64_t BinaryMask::area() const {
  std::uint64_t a = 0;
  for (std::size_t i = 1; i < runs_.size(); i += 2) a += runs_[i];
  return a;
}

std::vector<std::uint8_t> BinaryMask::to_raster() const {
  std::vector<std::uint8_t> raster(
      static_cast<std::size_t>(height_) * width_, 0);
  std::uint64_t pos = 0;
  bool value = false;
  for (const auto count : runs_) {
    if (value) {
      for (std::uint64_t k = pos; k < pos + count; ++k) {
        const int y = static_cast<int>(k % height_);
        const int x = static_cast<int>(k / height_);
        raster[static_cast<std::size_t>(y) * width_ + x] = 1;
      }
    }
    pos += count;
    value = !value;
  }
  return raster;
}

MaskOverlap mask_overlap(const BinaryMask& a, const BinaryMask& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("mask dimensions differ");
  }
  const auto& ra = a.runs();
  const auto& rb = b.runs();
  MaskOverlap out;
  std::size_t ia = 1, ib = 1;
  std::uint64_t ca = ra[0], cb = rb[0];
  bool va = false, vb = false;
  std::uint64_t remaining =
      static_cast<std::uint64_t>(a.height()) * a.width();
  // Leading counts consumed first; step through both run lists in lockstep.
  while (remaining > 0) {
    while (ca == 0 && ia < ra.size()) {
      ca = ra[ia++];
      va = !va;
    }
    while (cb == 0 && ib < rb.size()) {
      cb = rb[ib++];
      vb = !vb;
    }
    const std::uint64_t step = std::min(ca, cb);
    if (va && vb) out.intersection += step;
    if (va || vb) out.union_ += step;
    ca -= step;
    cb -= step;
    remaining -= step;
  }
  return out;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  const MaskOverlap o = mask_overlap(a, b);
  if (o.union_ == 0) return 0.0;
  return static_cast<double>(o.intersection) / static_cast<double>(o.union_);
}

BBox mask_to_bbox(const BinaryMask& mask) {
  if (mask.empty()) {
    throw EmptyMaskError("mask_to_bbox on a mask with no foreground");
  }
  const int h = mask.height();
  int min_x = std::numeric_limits<int>::max();
  int max_x = std::numeric_limits<int>::min();
  int min_y = std::numeric_limits<int>::max();
  int max_y = std::numeric_limits<int>::min();
  std::uint64_t pos = 0;
  bool value = false;
  for (const auto count : mask.runs()) {
    if (value && count > 0) {
      // runs are column-major, so a run spans consecutive rows of one or
      // more columns
      const std::uint64_t first = pos;
      const std::uint64_t last = pos + count - 1;
      const int x_first = static_cast<int>(first / h);
      const int x_last = static_cast<int>(last / h);
      min_x = std::min(min_x, x_first);
      max_x = std::max(max_x, x_last);
      if (x_first == x_last) {
        min_y = std::min(min_y, static_cast<int>(first % h));
        max_y = std::max(max_y, static_cast<int>(last % h));
      } else {
        // the run wraps at least one full column boundary
        min_y = 0;
        max_y = h - 1;
      }
    }
    pos += count;
    value = !value;
  }
  return BBox{static_cast<double>(min_x), static_cast<double>(min_y),
              static_cast<double>(max_x + 1), static_cast<double>(max_y + 1)};
}

namespace {

// Separable L-inf min/max filter over the raster.
std::vector<std::uint8_t> morph(const std::vector<std::uint8_t>& in, int h,
                                int w, int radius, bool take_min) {
  auto pass = [&](const std::vector<std::uint8_t>& src, bool rows) {
    std::vector<std::uint8_t> dst(src.size());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::uint8_t acc = take_min ? 1 : 0;
        for (int d = -radius; d <= radius; ++d) {
          const int yy = rows ? y : y + d;
          const int xx = rows ? x + d : x;
          std::uint8_t v;
          if (yy < 0 || yy >= h || xx < 0 || xx >= w) {
            v = 0;  // outside the canvas counts as background
          } else {
            v = src[static_cast<std::size_t>(yy) * w + xx];
          }
          if (take_min) {
            acc = std::min(acc, v);
          } else {
            acc = std::max(acc, v);
          }
        }
        dst[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
    return dst;
  };
  return pass(pass(in, true), false);
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto raster =
      morph(mask.to_raster(), mask.height(), mask.width(), radius, true);
  return BinaryMask::from_raster(mask.height(), mask.width(), raster);
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto raster =
      morph(mask.to_raster(), mask.height(), mask.width(), radius, false);
  return BinaryMask::from_raster(mask.height(), mask.width(), raster);
}

BBox fuse_boxes(const BBox& b, const BBox& b_mk, const FusionParams& params) {
  if (params.reference_area <= 0.0) {
    throw Error("fuse_boxes reference_area must be positive");
  }
  const double a1 = params.reference_area / (params.reference_area + b.area());
  const double a2 = 1.0 - a1;
  return BBox{a1 * b.x1 + a2 * b_mk.x1, a1 * b.y1 + a2 * b_mk.y1,
              a1 * b.x2 + a2 * b_mk.x2, a1 * b.y2 + a2 * b_mk.y2};
}

FeatureGrid roi_extract(const FeatureGrid& grid, const BBox& box,
                        int out_size) {
  if (out_size < 1) throw Error("roi_extract output size must be >= 1");
  if (box.area() <= 0.0) {
    throw DegenerateBoxError("roi_extract on a zero-area box");
  }
  if (box.x2 <= 0.0 || box.x1 >= grid.width() || box.y2 <= 0.0 ||
      box.y1 >= grid.height()) {
    throw ShapeError("roi_extract box does not intersect the grid");
  }
  const double bin_w = box.width() / out_size;
  const double bin_h = box.height() / out_size;
  FeatureGrid out(grid.channels(), out_size, out_size);
  for (int c = 0; c < grid.channels(); ++c) {
    for (int i = 0; i < out_size; ++i) {
      const double sy = box.y1 + (i + 0.5) * bin_h;
      for (int j = 0; j < out_size; ++j) {
        const double sx = box.x1 + (j + 0.5) * bin_w;
        out.at(c, i, j) = sample_bilinear(grid, c, sx, sy);
      }
    }
  }
  return out;
}

}  // namespace fgmots
