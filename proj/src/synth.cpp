// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/synth.hpp"

#include <algorithm>
#include <cmath>

#include "fgmots/errors.hpp"
#include "fgmots/rng.hpp"

namespace fgmots {

namespace {

// Pixel-center-in-shape rasterization of one object at frame t. Returns a
// row-major raster of the full canvas (clipped at the edges).
std::vector<std::uint8_t> rasterize(const SceneObject& obj, int t, int height,
                                    int width) {
  std::vector<std::uint8_t> raster(
      static_cast<std::size_t>(height) * width, 0);
  const double left = obj.x0 + t * obj.vx;
  const double top = obj.y0 + t * obj.vy;
  const double cx = left + obj.size_x / 2.0;
  const double cy = top + obj.size_y / 2.0;
  const double rx = obj.size_x / 2.0;
  const double ry = obj.size_y / 2.0;
  const int x_lo = std::max(0, static_cast<int>(std::floor(left)));
  const int x_hi = std::min(width, static_cast<int>(std::ceil(left + obj.size_x)));
  const int y_lo = std::max(0, static_cast<int>(std::floor(top)));
  const int y_hi = std::min(height, static_cast<int>(std::ceil(top + obj.size_y)));
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      const double px = x + 0.5;
      const double py = y + 0.5;
      bool inside;
      if (obj.shape == ObjectShape::rectangle) {
        inside = px >= left && px < left + obj.size_x && py >= top &&
                 py < top + obj.size_y;
      } else {
        const double nx = (px - cx) / rx;
        const double ny = (py - cy) / ry;
        inside = nx * nx + ny * ny <= 1.0;
      }
      if (inside) raster[static_cast<std::size_t>(y) * width + x] = 1;
    }
  }
  return raster;
}

double texture_value(const SceneObject& obj, double lx, double ly) {
  if (obj.texture_amp == 0.0) return 1.0;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return 1.0 + obj.texture_amp *
                   std::sin(two_pi * lx / obj.texture_wave_x +
                            obj.texture_phase_x) *
                   std::cos(two_pi * ly / obj.texture_wave_y +
                            obj.texture_phase_y);
}

void validate(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1 || spec.frames < 1) {
    throw SceneSpecError("canvas and frame count must be positive");
  }
  if (spec.objects.empty()) {
    throw SceneSpecError("scene needs at least one object");
  }
  for (const auto& obj : spec.objects) {
    if (obj.size_x <= 0.0 || obj.size_y <= 0.0) {
      throw SceneSpecError("object sizes must be positive");
    }
    if (obj.size_x > spec.width || obj.size_y > spec.height) {
      throw SceneSpecError("object larger than the canvas");
    }
    if (!std::isfinite(obj.vx) || !std::isfinite(obj.vy)) {
      throw SceneSpecError("object velocity must be finite");
    }
    if (obj.x0 < 0.0 || obj.y0 < 0.0 || obj.x0 + obj.size_x > spec.width ||
        obj.y0 + obj.size_y > spec.height) {
      throw SceneSpecError("object does not fit the canvas at frame 0");
    }
  }
}

}  // namespace

std::vector<GeneratedFrame> generate_sequence(const SceneSpec& spec,
                                              int flow_history) {
  validate(spec);
  if (flow_history < 0) {
    throw SceneSpecError("flow history must be >= 0");
  }
  const int k_objects = static_cast<int>(spec.objects.size());
  const int h = spec.height;
  const int w = spec.width;

  // Per-frame per-object rasters with conflicts resolved to the lower id.
  std::vector<std::vector<std::vector<std::uint8_t>>> owned(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    owned[t].resize(static_cast<std::size_t>(k_objects));
    std::vector<std::uint8_t> taken(static_cast<std::size_t>(h) * w, 0);
    for (int k = 0; k < k_objects; ++k) {
      auto raster = rasterize(spec.objects[static_cast<std::size_t>(k)], t,
                              h, w);
      for (std::size_t i = 0; i < raster.size(); ++i) {
        if (raster[i] && taken[i]) raster[i] = 0;
        if (raster[i]) taken[i] = 1;
      }
      owned[t][static_cast<std::size_t>(k)] = std::move(raster);
    }
  }

  std::vector<GeneratedFrame> out(static_cast<std::size_t>(spec.frames));
  for (int t = 0; t < spec.frames; ++t) {
    auto& frame = out[static_cast<std::size_t>(t)];
    frame.gt.frame = t;
    frame.features = FeatureGrid(k_objects, h, w);
    for (int k = 0; k < k_objects; ++k) {
      const auto& raster = owned[t][static_cast<std::size_t>(k)];
      const auto& obj = spec.objects[static_cast<std::size_t>(k)];
      const double left = obj.x0 + t * obj.vx;
      const double top = obj.y0 + t * obj.vy;
      bool any = false;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (raster[static_cast<std::size_t>(y) * w + x]) {
            // object-local pixel-center coordinates keep the texture glued
            // to the object across frames
            frame.features.at(k, y, x) =
                texture_value(obj, (x + 0.5) - left, (y + 0.5) - top);
            any = true;
          }
        }
      }
      if (any) {
        frame.gt.objects.push_back(
            {k + 1, spec.objects[static_cast<std::size_t>(k)].class_id,
             BinaryMask::from_raster(h, w, raster)});
      }
    }
    const int back = std::min(t, flow_history);
    for (int i = 1; i <= back; ++i) {
      // Warping frame t-i onto t: the source point for p is p - i*v, so
      // the displacement stored at p is -i*v inside each object's mask.
      FlowField flow(h, w);
      for (int k = 0; k < k_objects; ++k) {
        const auto& raster = owned[t][static_cast<std::size_t>(k)];
        const auto& obj = spec.objects[static_cast<std::size_t>(k)];
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            if (!raster[static_cast<std::size_t>(y) * w + x]) continue;
            flow.dx(y, x) = -static_cast<double>(i) * obj.vx;
            flow.dy(y, x) = -static_cast<double>(i) * obj.vy;
          }
        }
      }
      frame.flows_to_previous.push_back(std::move(flow));
    }
  }
  return out;
}

FrameAnnotations perturb(const FrameAnnotations& gt,
                         const PerturbationModel& model, std::uint64_t seed) {
  if (model.miss_probability < 0.0 || model.miss_probability > 1.0 ||
      model.false_positive_rate < 0.0 || model.boundary_radius < 0) {
    throw Error("perturbation model out of range");
  }
  FrameAnnotations out;
  out.frame = gt.frame;
  if (gt.objects.empty() && model.false_positive_rate == 0.0) return out;

  int height = 0, width = 0;
  if (!gt.objects.empty()) {
    height = gt.objects.front().mask.height();
    width = gt.objects.front().mask.width();
  } else {
    height = 64;
    width = 96;
  }

  // One substream per object id keeps the outcome independent of which
  // other objects exist in the frame.
  std::vector<std::uint8_t> taken(
      static_cast<std::size_t>(height) * width, 0);
  auto place = [&](int id, int class_id, const BinaryMask& mask) {
    auto raster = mask.to_raster();
    bool any = false;
    for (std::size_t i = 0; i < raster.size(); ++i) {
      if (raster[i] && taken[i]) raster[i] = 0;
      if (raster[i]) {
        taken[i] = 1;
        any = true;
      }
    }
    if (!any) return;
    out.objects.push_back(
        {id, class_id, BinaryMask::from_raster(height, width, raster)});
  };

  for (const auto& obj : gt.objects) {
    Rng rng(derive_seed(seed, (static_cast<std::uint64_t>(gt.frame) << 20) +
                                  static_cast<std::uint64_t>(obj.id)));
    if (rng.bernoulli(model.miss_probability)) continue;
    BinaryMask mask = obj.mask;
    if (model.boundary_radius > 0) {
      const bool shrink = rng.bernoulli(0.5);
      mask = shrink ? erode(mask, model.boundary_radius)
                    : dilate(mask, model.boundary_radius);
      if (mask.empty()) continue;  // eroded away counts as a miss
    }
    place(obj.id, obj.class_id, mask);
  }

  Rng fp_rng(derive_seed(seed, (static_cast<std::uint64_t>(gt.frame) << 20) +
                                   0xfffffULL));
  const int spurious = fp_rng.poisson(model.false_positive_rate);
  for (int k = 0; k < spurious; ++k) {
    const int sx = static_cast<int>(fp_rng.uniform_int(4, 10));
    const int sy = static_cast<int>(fp_rng.uniform_int(4, 10));
    const int x0 =
        static_cast<int>(fp_rng.uniform_int(0, std::max(0, width - sx - 1)));
    const int y0 =
        static_cast<int>(fp_rng.uniform_int(0, std::max(0, height - sy - 1)));
    const int cls = fp_rng.bernoulli(0.5) ? 1 : 2;
    std::vector<std::uint8_t> raster(
        static_cast<std::size_t>(height) * width, 0);
    for (int y = y0; y < std::min(height, y0 + sy); ++y) {
      for (int x = x0; x < std::min(width, x0 + sx); ++x) {
        raster[static_cast<std::size_t>(y) * width + x] = 1;
      }
    }
    place(1000000 + k, cls, BinaryMask::from_raster(height, width, raster));
  }
  return out;
}

std::vector<Detection> build_detections(const FrameAnnotations& annotations,
                                        double box_jitter_sigma,
                                        std::uint64_t seed) {
  std::vector<Detection> out;
  out.reserve(annotations.objects.size());
  for (const auto& obj : annotations.objects) {
    if (obj.mask.empty()) continue;
    BBox box = mask_to_bbox(obj.mask);
    if (box_jitter_sigma > 0.0) {
      Rng rng(derive_seed(seed,
                          (static_cast<std::uint64_t>(annotations.frame)
                           << 20) +
                              static_cast<std::uint64_t>(obj.id)));
      box.x1 += rng.normal(0.0, box_jitter_sigma);
      box.y1 += rng.normal(0.0, box_jitter_sigma);
      box.x2 += rng.normal(0.0, box_jitter_sigma);
      box.y2 += rng.normal(0.0, box_jitter_sigma);
      if (box.x2 < box.x1 + 1.0) box.x2 = box.x1 + 1.0;
      if (box.y2 < box.y1 + 1.0) box.y2 = box.y1 + 1.0;
    }
    out.push_back({obj.class_id, box, obj.mask});
  }
  return out;
}

FeatureGrid add_feature_noise(const FeatureGrid& grid, double sigma,
                              std::uint64_t seed) {
  if (sigma <= 0.0) return grid;
  FeatureGrid out = grid;
  Rng rng(seed);
  for (auto& v : out.data()) v += rng.normal(0.0, sigma);
  return out;
}

FlowField add_flow_noise(const FlowField& flow, double sigma,
                         std::uint64_t seed) {
  if (sigma <= 0.0) return flow;
  FlowField out = flow;
  Rng rng(seed);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.dx(y, x) += rng.normal(0.0, sigma);
      out.dy(y, x) += rng.normal(0.0, sigma);
    }
  }
  return out;
}

}  // namespace fgmots
