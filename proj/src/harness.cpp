// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/harness.hpp"

#include <algorithm>

#include "fgmots/errors.hpp"
#include "fgmots/rng.hpp"

namespace fgmots {

SceneSpec lane_scene(int objects, int frames, std::uint64_t seed,
                     int object_size, int canvas_width) {
  if (objects < 1) throw SceneSpecError("lane_scene needs >= 1 object");
  if (object_size < 2) throw SceneSpecError("object_size must be >= 2");
  const int lane_height = object_size + 6;
  SceneSpec spec;
  spec.width = canvas_width;
  spec.height = objects * lane_height + 4;
  spec.frames = frames;
  spec.seed = seed;
  for (int k = 0; k < objects; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    SceneObject obj;
    obj.shape = ObjectShape::rectangle;
    obj.size_x = object_size;
    obj.size_y = object_size;
    obj.y0 = 2 + k * lane_height + 3;
    obj.vy = 0.0;
    // integer horizontal velocity, nonzero, chosen so the object stays on
    // canvas through the final frame
    const int speed = static_cast<int>(rng.uniform_int(1, 2));
    const bool rightward = rng.bernoulli(0.5);
    obj.vx = rightward ? speed : -speed;
    const int travel = speed * (frames - 1);
    const int margin = 2;
    int lo = margin, hi = canvas_width - object_size - margin;
    if (rightward) {
      hi -= travel;
    } else {
      lo += travel;
    }
    if (lo > hi) {
      throw SceneSpecError("canvas too narrow for the requested travel");
    }
    obj.x0 = static_cast<double>(rng.uniform_int(lo, hi));
    obj.class_id = (k % 2 == 0) ? 1 : 2;
    obj.texture_amp = 0.7;
    obj.texture_wave_x = 3.0 + rng.next_double() * 3.0;
    obj.texture_wave_y = 3.0 + rng.next_double() * 3.0;
    obj.texture_phase_x = rng.uniform(0.0, 6.283185307179586);
    obj.texture_phase_y = rng.uniform(0.0, 6.283185307179586);
    spec.objects.push_back(obj);
  }
  return spec;
}

SyntheticSource::SyntheticSource(const SceneSpec& spec,
                                 const PerturbationModel& model,
                                 const FeedNoise& noise, int flow_history,
                                 std::uint64_t seed)
    : generated_(generate_sequence(spec, flow_history)),
      model_(model),
      noise_(noise),
      seed_(seed) {}

std::optional<SequenceFrame> SyntheticSource::next() {
  if (cursor_ >= generated_.size()) return std::nullopt;
  const auto& gen = generated_[cursor_];
  const auto t = static_cast<std::uint64_t>(cursor_);
  ++cursor_;

  SequenceFrame frame;
  frame.frame = gen.gt.frame;
  frame.features = add_feature_noise(gen.features, noise_.feature_sigma,
                                     derive_seed(seed_, 0xA0000 + t));
  frame.flows_to_previous.reserve(gen.flows_to_previous.size());
  for (std::size_t i = 0; i < gen.flows_to_previous.size(); ++i) {
    // distance i+1 frames back; unreliability grows with distance
    frame.flows_to_previous.push_back(add_flow_noise(
        gen.flows_to_previous[i],
        noise_.flow_sigma_growth * static_cast<double>(i + 1),
        derive_seed(seed_, 0xB0000 + (t << 6) + i)));
  }
  const FrameAnnotations perturbed =
      perturb(gen.gt, model_, derive_seed(seed_, 0xC0000));
  frame.detections = build_detections(perturbed, model_.box_jitter_sigma,
                                      derive_seed(seed_, 0xD0000));
  frame.gt = gen.gt;
  return frame;
}

FileSource::FileSource(std::vector<FrameAnnotations> detections,
                       std::optional<std::vector<FrameAnnotations>> gt)
    : detections_(std::move(detections)), gt_(std::move(gt)) {
  if (gt_) {
    // Evaluation needs a gt record for every detection frame; pad missing
    // frames with empty annotations and index the rest by frame number.
    std::vector<FrameAnnotations> aligned;
    aligned.reserve(detections_.size());
    for (const auto& det : detections_) {
      FrameAnnotations found;
      found.frame = det.frame;
      for (const auto& fa : *gt_) {
        if (fa.frame == det.frame) {
          found = fa;
          break;
        }
      }
      aligned.push_back(std::move(found));
    }
    gt_ = std::move(aligned);
  }
}

std::optional<SequenceFrame> FileSource::next() {
  if (cursor_ >= detections_.size()) return std::nullopt;
  const auto& det_frame = detections_[cursor_];

  int height = 0, width = 0;
  for (const auto& obj : det_frame.objects) {
    height = obj.mask.height();
    width = obj.mask.width();
    break;
  }
  if (height == 0) {
    height = 64;
    width = 96;
  }

  SequenceFrame frame;
  frame.frame = det_frame.frame;
  frame.features = FeatureGrid(3, height, width);
  for (const auto& obj : det_frame.objects) {
    const auto raster = obj.mask.to_raster();
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (!raster[static_cast<std::size_t>(y) * width + x]) continue;
        frame.features.at(0, y, x) = 1.0;
        frame.features.at(1, y, x) = static_cast<double>(x) / width;
        frame.features.at(2, y, x) = static_cast<double>(y) / height;
      }
    }
  }
  frame.detections = build_detections(det_frame, 0.0, 0);
  if (gt_) frame.gt = (*gt_)[cursor_];
  ++cursor_;
  return frame;
}

}  // namespace fgmots
