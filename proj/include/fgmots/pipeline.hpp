// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Per-frame orchestration: feature fusion, mask-derived box fusion, ROI
// identity embedding, and tracker stepping, plus the runtime cost model.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgmots/association.hpp"
#include "fgmots/fusion.hpp"
#include "fgmots/geometry.hpp"
#include "fgmots/metrics.hpp"
#include "fgmots/synth.hpp"

namespace fgmots {

/// How the ROI box for identity embedding is derived from the detection box
/// b and the mask's tight box b_mk.
enum class BoxFusionMode {
  adaptive,        // area-weighted combination (reference_area rule)
  fixed_mean,      // plain midpoint, both weights 0.5
  detection_only,  // b as delivered
};

struct PipelineParams {
  int temporal_range = 8;  // previous frames fused per frame (n)
  FusionParams fusion;     // reference_area for the adaptive box weight
  BoxFusionMode box_mode = BoxFusionMode::adaptive;
  int roi_size = 7;
  int fusion_embed_dim = 8;
  bool include_current_in_normalization = false;
  TrackerParams tracker;
  std::uint64_t embed_seed = 1;
  double embedding_noise_sigma = 0.0;  // applied to identity vectors
  std::uint64_t noise_seed = 99;
};

/// Final per-frame recognition: parallel lists over the surviving
/// detections. Boxes are the detection boxes as delivered, not the fused
/// ROI boxes.
struct FrameResult {
  long frame = 0;
  std::vector<int> classes;
  std::vector<BBox> boxes;
  std::vector<BinaryMask> masks;
  std::vector<int> track_ids;
  std::vector<std::string> diagnostics;  // one entry per dropped object
};

/// Everything the pipeline consumes for one frame. flows_to_previous[i]
/// warps the feature grid of frame t-1-i onto this frame.
struct SequenceFrame {
  long frame = 0;
  FeatureGrid features;
  std::vector<FlowField> flows_to_previous;
  std::vector<Detection> detections;
  std::optional<FrameAnnotations> gt;
};

/// Pull interface for run_sequence; returns frames in ascending order and
/// an empty optional at the end.
class SequenceSource {
public:
  virtual ~SequenceSource() = default;
  virtual std::optional<SequenceFrame> next() = 0;
};

/// Runs one frame: fuses the feature window, derives each object's ROI box
/// per box_mode, embeds, and steps the tracker. A detection that fails
/// geometry (empty mask, degenerate or off-grid box) is dropped with a
/// diagnostic instead of aborting the frame.
FrameResult process_frame(const std::vector<FeatureGrid>& previous,
                          const std::vector<FlowField>& flows,
                          const FeatureGrid& current,
                          const std::vector<Detection>& detections,
                          TrackerState& tracker, const PipelineParams& params,
                          const EmbeddingProjector& proj, long frame);

struct RunOutput {
  std::vector<FrameResult> results;
  std::optional<MotsScores> scores;  // present when the source carried gt
};

/// Online single pass over the source, keeping a rolling window of at most
/// temporal_range previous feature grids. Evaluates against ground truth
/// when every frame provides it. Throws FrameOrderError on non-ascending
/// frame indices.
RunOutput run_sequence(SequenceSource& source, const PipelineParams& params);

/// Per-module runtime cost scalars and the temporal lengths of the two
/// pipelines being compared.
struct CostModel {
  double o_fm = 1.0;  // shared feature backbone
  double o_fl = 1.0;  // flow computation, per previous frame
  double o_cl = 1.0;  // classification head
  double o_bb = 1.0;  // box head
  double o_mk = 1.0;  // mask head
  double o_tr = 1.0;  // tracking head
  double o_3d = 1.0;  // 3D convolution alternative, per previous frame
  int n = 1;          // temporal range of the flow-based pipeline
  int m = 1;          // temporal range of the 3D-convolution pipeline
};

/// Leading-order runtime ratio between the flow-based pipeline and the
/// 3D-convolution alternative: (o_fm + n*o_fl) / (o_fm + m*o_3d). The
/// lightweight per-object heads are dominated and drop out.
double cost_ratio(const CostModel& model);

}  // namespace fgmots
