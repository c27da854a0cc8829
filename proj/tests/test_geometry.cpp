// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fgmots/geometry.hpp"
#include "fgmots/rng.hpp"

using namespace fgmots;

namespace {

BinaryMask random_mask(Rng& rng, int h, int w, double density = 0.4) {
  std::vector<std::uint8_t> raster(static_cast<std::size_t>(h) * w, 0);
  for (auto& px : raster) px = rng.bernoulli(density) ? 1 : 0;
  return BinaryMask::from_raster(h, w, raster);
}

// Count-based IoU straight off the rasters.
double pixel_count_iou(const BinaryMask& a, const BinaryMask& b) {
  const auto ra = a.to_raster();
  const auto rb = b.to_raster();
  long inter = 0, uni = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i] && rb[i]) ++inter;
    if (ra[i] || rb[i]) ++uni;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

}  // namespace

TEST_CASE("bbox_iou identity, disjoint, and partial overlap") {
  const BBox a{0, 0, 10, 10};
  CHECK(bbox_iou(a, a) == 1.0);
  CHECK(bbox_iou(a, BBox{20, 20, 30, 30}) == 0.0);
  // inter = 50, union = 150
  CHECK(bbox_iou(a, BBox{5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // degenerate boxes have zero area and never overlap
  CHECK(bbox_iou(BBox{1, 1, 1, 5}, BBox{1, 1, 1, 5}) == 0.0);
}

TEST_CASE("BinaryMask run canonicalization and raster round-trip") {
  // internal zero runs fold into their neighbours
  const BinaryMask folded(2, 2, {1, 2, 0, 1});
  CHECK(folded.runs() == std::vector<std::uint32_t>{1, 3});
  const BinaryMask ones(2, 2, {0, 4});
  CHECK(ones.area() == 4);
  CHECK(ones == BinaryMask::from_raster(2, 2, {1, 1, 1, 1}));
  CHECK(BinaryMask::empty_mask(3, 5).empty());
  CHECK_THROWS_AS(BinaryMask(2, 2, {1, 2}), ShapeError);
  CHECK_THROWS_AS(BinaryMask(0, 2, {0}), ShapeError);

  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const int h = 1 + static_cast<int>(rng.uniform_int(0, 15));
    const int w = 1 + static_cast<int>(rng.uniform_int(0, 15));
    const BinaryMask m = random_mask(rng, h, w);
    CHECK(BinaryMask::from_raster(h, w, m.to_raster()) == m);
  }
}

TEST_CASE("mask ordering is column-major") {
  // pixel (row 1, col 0) set in a 2x2 grid: column-major index 1
  const BinaryMask m = BinaryMask::from_raster(2, 2, {0, 0, 1, 0});
  CHECK(m.runs() == std::vector<std::uint32_t>{1, 1, 2});
}

TEST_CASE("mask_to_bbox tightest box and errors") {
  std::vector<std::uint8_t> raster(100, 0);
  raster[2 * 10 + 3] = 1;  // row 2, col 3
  raster[5 * 10 + 7] = 1;  // row 5, col 7
  const BinaryMask m = BinaryMask::from_raster(10, 10, raster);
  const BBox b = mask_to_bbox(m);
  CHECK(b.x1 == 3.0);
  CHECK(b.y1 == 2.0);
  CHECK(b.x2 == 8.0);
  CHECK(b.y2 == 6.0);

  const BBox full = mask_to_bbox(BinaryMask(4, 6, {0, 24}));
  CHECK(full.x1 == 0.0);
  CHECK(full.y1 == 0.0);
  CHECK(full.x2 == 6.0);
  CHECK(full.y2 == 4.0);

  CHECK_THROWS_AS(mask_to_bbox(BinaryMask::empty_mask(4, 4)), EmptyMaskError);
}

TEST_CASE("mask_to_bbox contains every foreground pixel and is tight") {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    const int h = 2 + static_cast<int>(rng.uniform_int(0, 12));
    const int w = 2 + static_cast<int>(rng.uniform_int(0, 12));
    const BinaryMask m = random_mask(rng, h, w, 0.2);
    if (m.empty()) continue;
    const BBox b = mask_to_bbox(m);
    const auto raster = m.to_raster();
    bool touch_left = false, touch_right = false, touch_top = false,
         touch_bottom = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!raster[static_cast<std::size_t>(y) * w + x]) continue;
        CHECK(x >= b.x1);
        CHECK(x < b.x2);
        CHECK(y >= b.y1);
        CHECK(y < b.y2);
        touch_left |= x == static_cast<int>(b.x1);
        touch_right |= x == static_cast<int>(b.x2) - 1;
        touch_top |= y == static_cast<int>(b.y1);
        touch_bottom |= y == static_cast<int>(b.y2) - 1;
      }
    }
    CHECK(touch_left);
    CHECK(touch_right);
    CHECK(touch_top);
    CHECK(touch_bottom);
  }
}

TEST_CASE("mask_iou examples and oracle equivalence") {
  const BinaryMask left = BinaryMask::from_raster(
      4, 4, {1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0});
  const BinaryMask top = BinaryMask::from_raster(
      4, 4, {1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(mask_iou(left, left) == 1.0);
  CHECK(mask_iou(left, top) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  std::vector<std::uint8_t> comp(16, 1);
  for (std::size_t i = 0; i < 16; ++i) comp[i] = left.to_raster()[i] ? 0 : 1;
  CHECK(mask_iou(left, BinaryMask::from_raster(4, 4, comp)) == 0.0);

  CHECK(mask_iou(BinaryMask::empty_mask(4, 4), BinaryMask::empty_mask(4, 4)) ==
        0.0);
  CHECK_THROWS_AS(mask_iou(left, BinaryMask::empty_mask(4, 5)), ShapeError);

  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    const int h = 1 + static_cast<int>(rng.uniform_int(0, 20));
    const int w = 1 + static_cast<int>(rng.uniform_int(0, 20));
    const BinaryMask a = random_mask(rng, h, w);
    const BinaryMask b = random_mask(rng, h, w);
    CHECK(mask_iou(a, b) == doctest::Approx(pixel_count_iou(a, b)).epsilon(1e-12));
    const auto ov = mask_overlap(a, b);
    CHECK(ov.intersection <= ov.union_);
  }
}

TEST_CASE("erode and dilate shrink and grow by the square element") {
  // 10x10 all-ones: erosion by 1 leaves the 8x8 interior
  const BinaryMask square(10, 10, {0, 100});
  const BinaryMask eroded = erode(square, 1);
  CHECK(eroded.area() == 64);
  CHECK(mask_iou(eroded, square) == doctest::Approx(64.0 / 100.0).epsilon(1e-12));
  // dilation is clipped at the canvas, so the full mask stays full
  CHECK(dilate(square, 1) == square);

  // a centred 4x4 block in 10x10 dilates to 6x6
  std::vector<std::uint8_t> raster(100, 0);
  for (int y = 3; y < 7; ++y) {
    for (int x = 3; x < 7; ++x) raster[static_cast<std::size_t>(y) * 10 + x] = 1;
  }
  const BinaryMask block = BinaryMask::from_raster(10, 10, raster);
  CHECK(dilate(block, 1).area() == 36);
  CHECK(erode(block, 1).area() == 4);
  CHECK(erode(block, 2).area() == 0);
  CHECK(erode(block, 0) == block);
}

TEST_CASE("fuse_boxes weighting rule") {
  const FusionParams params;  // reference_area 1024
  const BBox b{0, 0, 100, 100};
  const BBox b_mk{10, 10, 90, 90};

  SUBCASE("equal boxes are a fixed point") {
    const BBox out = fuse_boxes(b, b, params);
    CHECK(out.x1 == b.x1);
    CHECK(out.y1 == b.y1);
    CHECK(out.x2 == b.x2);
    CHECK(out.y2 == b.y2);
  }

  SUBCASE("area equal to reference gives the midpoint") {
    const BBox sq{0, 0, 32, 32};  // area 1024
    const BBox other{10, 10, 20, 20};
    const BBox out = fuse_boxes(sq, other, params);
    CHECK(out.x1 == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(out.x2 == doctest::Approx(26.0).epsilon(1e-12));
  }

  SUBCASE("hand-evaluated combination") {
    const double a1 = 1024.0 / (1024.0 + 10000.0);
    const BBox out = fuse_boxes(b, b_mk, params);
    CHECK(a1 == doctest::Approx(0.0929).epsilon(1e-3));
    CHECK(out.x1 == doctest::Approx(10.0 * (1.0 - a1)).epsilon(1e-12));
    CHECK(out.x1 == doctest::Approx(9.071).epsilon(1e-4));
    CHECK(out.x2 == doctest::Approx(90.929).epsilon(1e-4));
    CHECK(out.y1 == doctest::Approx(9.071).epsilon(1e-4));
    CHECK(out.y2 == doctest::Approx(90.929).epsilon(1e-4));
  }

  SUBCASE("output stays in the componentwise envelope") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      const BBox p{rng.uniform(0, 50), rng.uniform(0, 50),
                   rng.uniform(50, 100), rng.uniform(50, 100)};
      const BBox q{rng.uniform(0, 50), rng.uniform(0, 50),
                   rng.uniform(50, 100), rng.uniform(50, 100)};
      FusionParams fp;
      fp.reference_area = rng.uniform(1.0, 4096.0);
      const BBox out = fuse_boxes(p, q, fp);
      CHECK(out.x1 >= std::min(p.x1, q.x1));
      CHECK(out.x1 <= std::max(p.x1, q.x1));
      CHECK(out.x2 >= std::min(p.x2, q.x2));
      CHECK(out.x2 <= std::max(p.x2, q.x2));
    }
  }

  SUBCASE("detection weight strictly decreases with detection area") {
    double prev = 2.0;
    for (double side = 4.0; side <= 128.0; side *= 2.0) {
      const double a1 = 1024.0 / (1024.0 + side * side);
      CHECK(a1 < prev);
      prev = a1;
    }
    // growing the reference area shifts the output towards the detection box
    const BBox det{0, 0, 10, 10};
    const BBox mk{2, 2, 8, 8};
    double prev_gap = 100.0;
    for (double ref = 16.0; ref <= 4096.0; ref *= 4.0) {
      FusionParams fp;
      fp.reference_area = ref;
      const BBox out = fuse_boxes(det, mk, fp);
      const double gap = std::abs(out.x1 - det.x1) + std::abs(out.x2 - det.x2);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
  }

  SUBCASE("invalid reference area") {
    FusionParams bad;
    bad.reference_area = 0.0;
    CHECK_THROWS_AS(fuse_boxes(b, b_mk, bad), Error);
  }
}

TEST_CASE("roi_extract sampling") {
  SUBCASE("constant grid gives constant output") {
    FeatureGrid grid(2, 5, 6, 3.25);
    const FeatureGrid out = roi_extract(grid, BBox{0.7, 1.1, 4.9, 3.8}, 3);
    for (const double v : out.data()) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
  }

  SUBCASE("box spanning all pixel centers reproduces the grid") {
    FeatureGrid grid(1, 4, 4);
    Rng rng(3);
    for (auto& v : grid.data()) v = rng.uniform(-1, 1);
    // pixels sit at integer coordinates, so the pixel-center lattice spans
    // [-0.5, W-0.5) x [-0.5, H-0.5)
    const FeatureGrid out =
        roi_extract(grid, BBox{-0.5, -0.5, 3.5, 3.5}, 4);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 4; ++x) {
        CHECK(out.at(0, y, x) == doctest::Approx(grid.at(0, y, x)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("ramp box center value") {
    FeatureGrid grid(1, 4, 4);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 4; ++x) grid.at(0, y, x) = x;
    }
    const FeatureGrid out = roi_extract(grid, BBox{1, 1, 3, 3}, 1);
    CHECK(out.at(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("oracle agreement on random grids and boxes") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      FeatureGrid grid(1, 8, 8);
      for (auto& v : grid.data()) v = rng.uniform(-2, 2);
      const double x1 = rng.uniform(-1, 5);
      const double y1 = rng.uniform(-1, 5);
      const BBox box{x1, y1, x1 + rng.uniform(0.5, 4), y1 + rng.uniform(0.5, 4)};
      const int p = 1 + static_cast<int>(rng.uniform_int(0, 4));
      const FeatureGrid out = roi_extract(grid, box, p);
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          const double sx = box.x1 + (j + 0.5) * box.width() / p;
          const double sy = box.y1 + (i + 0.5) * box.height() / p;
          // four-tap bilinear recomputed from first principles
          const int fx = static_cast<int>(std::floor(sx));
          const int fy = static_cast<int>(std::floor(sy));
          auto read = [&](int yy, int xx) {
            if (yy < 0 || yy >= 8 || xx < 0 || xx >= 8) return 0.0;
            return grid.at(0, yy, xx);
          };
          const double ax = sx - fx, ay = sy - fy;
          const double expected =
              (1 - ay) * ((1 - ax) * read(fy, fx) + ax * read(fy, fx + 1)) +
              ay * ((1 - ax) * read(fy + 1, fx) + ax * read(fy + 1, fx + 1));
          CHECK(out.at(0, i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("degenerate and off-grid boxes") {
    FeatureGrid grid(1, 4, 4, 1.0);
    CHECK_THROWS_AS(roi_extract(grid, BBox{1, 1, 1, 3}, 2),
                    DegenerateBoxError);
    CHECK_THROWS_AS(roi_extract(grid, BBox{10, 10, 12, 12}, 2), ShapeError);
    CHECK_THROWS_AS(roi_extract(grid, BBox{0, 0, 2, 2}, 0), Error);
  }
}
