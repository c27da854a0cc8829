// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic synthetic video generator: ground-truth masks, ids, flow
// fields, and feature grids constructed so that flow and features are exact
// by construction. Serves as the oracle for end-to-end verification.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fgmots/geometry.hpp"
#include "fgmots/grid.hpp"
#include "fgmots/metrics.hpp"

namespace fgmots {

enum class ObjectShape { rectangle, ellipse };

struct SceneObject {
  ObjectShape shape = ObjectShape::rectangle;
  double x0 = 0.0;  // top-left corner of the bounding extent at frame 0
  double y0 = 0.0;
  double size_x = 8.0;  // extent in pixels
  double size_y = 8.0;
  double vx = 0.0;  // constant velocity, px per frame
  double vy = 0.0;
  int class_id = 1;
  // Appearance texture in object-local coordinates, so it travels with the
  // object: value = 1 + amp * sin(2*pi*lx/wave_x + phase_x)
  //                         * cos(2*pi*ly/wave_y + phase_y).
  // amp 0 gives a flat signature of 1.
  double texture_amp = 0.0;
  double texture_wave_x = 4.0;
  double texture_wave_y = 4.0;
  double texture_phase_x = 0.0;
  double texture_phase_y = 0.0;
};

struct SceneSpec {
  int width = 96;
  int height = 64;
  int frames = 10;
  std::vector<SceneObject> objects;
  std::uint64_t seed = 1;
};

/// One generated frame. flows_to_previous[i] is the displacement field that
/// warps the feature grid of frame t-1-i onto frame t (backward-warp
/// convention: sampling frame t-1-i at p + flow(p) reconstructs frame t at
/// p). The list covers the most recent min(t, flow_history) frames.
struct GeneratedFrame {
  FrameAnnotations gt;
  FeatureGrid features;
  std::vector<FlowField> flows_to_previous;
};

/// Renders the scene. Each object owns one feature channel (value 1 inside
/// its mask), so appearance signatures are orthogonal across objects and an
/// un-noised run is perfectly discriminative. Objects are clipped at canvas
/// edges; pixel conflicts go to the lower object id. Ground-truth object id
/// for object k is k+1; flow equals the per-pixel object displacement
/// inside each mask and zero on background. Fully deterministic in spec.
std::vector<GeneratedFrame> generate_sequence(const SceneSpec& spec,
                                              int flow_history);

struct PerturbationModel {
  double box_jitter_sigma = 0.0;   // detection-box coordinate noise, px
  int boundary_radius = 0;         // erode-or-dilate radius per object
  double miss_probability = 0.0;   // per object per frame
  double false_positive_rate = 0.0;  // expected spurious masks per frame
  double embedding_noise_sigma = 0.0;  // consumed by the pipeline
};

/// Degrades one frame of ground truth into detection annotations:
/// per-object misses, boundary erosion or dilation (coin-flipped per
/// object), and spurious masks (count Poisson in the rate). Non-overlap is
/// preserved by clipping each perturbed mask against the already-placed
/// ones in id order; masks emptied by the perturbation are dropped. Box
/// jitter and embedding noise act on channels FrameAnnotations does not
/// carry, so they are applied by build_detections and the pipeline instead.
/// Deterministic in (gt, model, seed).
FrameAnnotations perturb(const FrameAnnotations& gt,
                         const PerturbationModel& model, std::uint64_t seed);

struct Detection {
  int class_id = 0;
  BBox box;
  BinaryMask mask;
};

/// Completes perturbed annotations into pipeline detections: each box is
/// the mask's tight bounding box with N(0, sigma) noise added per
/// coordinate (clamped to keep the box valid and at least 1 px wide).
std::vector<Detection> build_detections(const FrameAnnotations& annotations,
                                        double box_jitter_sigma,
                                        std::uint64_t seed);

/// Observation noise for the feature/flow feed, modeling an imperfect
/// backbone: feature values get iid N(0, feature_sigma) per frame, and the
/// flow to a frame i steps back gets iid N(0, i * flow_sigma_growth) per
/// component, so older flow is less reliable.
struct FeedNoise {
  double feature_sigma = 0.0;
  double flow_sigma_growth = 0.0;
};

FeatureGrid add_feature_noise(const FeatureGrid& grid, double sigma,
                              std::uint64_t seed);
FlowField add_flow_noise(const FlowField& flow, double sigma,
                         std::uint64_t seed);

}  // namespace fgmots
