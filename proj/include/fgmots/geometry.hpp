// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "fgmots/errors.hpp"
#include "fgmots/grid.hpp"

namespace fgmots {

/// Axis-aligned box in continuous pixel coordinates, half-open
/// [x1, x2) x [y1, y2). x runs along columns, y along rows.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  bool valid() const { return x2 >= x1 && y2 >= y1; }
};

/// Intersection area over union area. 0 for disjoint or degenerate pairs.
double bbox_iou(const BBox& a, const BBox& b);

/// Run-length encoded binary raster on an H x W pixel grid.
///
/// Runs are column-major (pixel k maps to row k % h, column k / h) and start
/// with the count of leading zeros, alternating zero/one from there. The
/// canonical form has no internal zero counts; only the leading count may be
/// zero. sum(runs) == h * w always holds.
class BinaryMask {
public:
  /// All-background 1x1 mask, so containing structs stay default-usable.
  BinaryMask() : height_(1), width_(1), runs_{1} {}

  BinaryMask(int height, int width, std::vector<std::uint32_t> runs);

  /// Builds from a row-major raster (nonzero bytes are foreground).
  static BinaryMask from_raster(int height, int width,
                                const std::vector<std::uint8_t>& raster);

  /// All-background mask.
  static BinaryMask empty_mask(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  const std::vector<std::uint32_t>& runs() const { return runs_; }

  std::uint64_t area() const;
  bool empty() const { return area() == 0; }

  /// Row-major raster, one byte per pixel (0 or 1).
  std::vector<std::uint8_t> to_raster() const;

  bool operator==(const BinaryMask& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           runs_ == other.runs_;
  }

private:
  int height_;
  int width_;
  std::vector<std::uint32_t> runs_;
};

/// Foreground-pixel counts of a AND b and a OR b in one sweep.
struct MaskOverlap {
  std::uint64_t intersection = 0;
  std::uint64_t union_ = 0;
};
MaskOverlap mask_overlap(const BinaryMask& a, const BinaryMask& b);

/// |a AND b| / |a OR b|; 0 when both masks are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

/// Tightest box containing all foreground pixels, half-open convention
/// (x2 = max foreground column + 1, y2 = max foreground row + 1).
BBox mask_to_bbox(const BinaryMask& mask);

/// Morphological erosion / dilation with a square structuring element of
/// L-inf radius r.
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Controls the adaptive weight of the detection box in fuse_boxes.
struct FusionParams {
  double reference_area = 1024.0;
};

/// Adaptive weighted combination of a detection box and a mask-derived box:
/// alpha1 = A_ref / (A_ref + area(b)), output = alpha1 * b + (1 - alpha1) *
/// b_mk componentwise. Large objects therefore lean on the mask box, small
/// ones on the detection box.
BBox fuse_boxes(const BBox& b, const BBox& b_mk, const FusionParams& params);

/// Bilinear crop-and-resize of the box region to out_size x out_size per
/// channel, sampling each output cell at its center; samples outside the
/// grid read as zero.
FeatureGrid roi_extract(const FeatureGrid& grid, const BBox& box,
                        int out_size);

}  // namespace fgmots
