// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/pipeline.hpp"

#include <algorithm>
#include <deque>

#include "fgmots/errors.hpp"
#include "fgmots/rng.hpp"

namespace fgmots {

namespace {

BBox roi_box(const Detection& det, const BBox& b_mk,
             const PipelineParams& params) {
  switch (params.box_mode) {
    case BoxFusionMode::adaptive:
      return fuse_boxes(det.box, b_mk, params.fusion);
    case BoxFusionMode::fixed_mean:
      return BBox{0.5 * (det.box.x1 + b_mk.x1), 0.5 * (det.box.y1 + b_mk.y1),
                  0.5 * (det.box.x2 + b_mk.x2), 0.5 * (det.box.y2 + b_mk.y2)};
    case BoxFusionMode::detection_only:
      return det.box;
  }
  return det.box;
}

}  // namespace

FrameResult process_frame(const std::vector<FeatureGrid>& previous,
                          const std::vector<FlowField>& flows,
                          const FeatureGrid& current,
                          const std::vector<Detection>& detections,
                          TrackerState& tracker, const PipelineParams& params,
                          const EmbeddingProjector& proj, long frame) {
  const std::size_t history = std::min(previous.size(), flows.size());
  const std::vector<FeatureGrid> window(previous.begin(),
                                        previous.begin() + history);
  const std::vector<FlowField> window_flows(flows.begin(),
                                            flows.begin() + history);
  const FeatureGrid fused =
      fuse_features(window, window_flows, current, proj,
                    params.include_current_in_normalization);

  FrameResult result;
  result.frame = frame;
  std::vector<std::pair<IdentityVector, int>> embedded;
  std::vector<std::size_t> survivors;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    const auto& det = detections[d];
    try {
      const BBox b_mk = mask_to_bbox(det.mask);
      const FeatureGrid roi =
          roi_extract(fused, roi_box(det, b_mk, params), params.roi_size);
      IdentityVector vec = embed_roi(roi, params.embed_seed);
      if (params.embedding_noise_sigma > 0.0) {
        Rng rng(derive_seed(params.noise_seed,
                            (static_cast<std::uint64_t>(frame) << 20) + d));
        for (auto& v : vec) {
          v += rng.normal(0.0, params.embedding_noise_sigma);
        }
      }
      embedded.emplace_back(vec, det.class_id);
      survivors.push_back(d);
    } catch (const Error& e) {
      result.diagnostics.push_back("frame " + std::to_string(frame) +
                                   " detection " + std::to_string(d) +
                                   " dropped: " + e.what());
    }
  }

  const std::vector<int> ids = tracker.step(embedded, frame);
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    const auto& det = detections[survivors[k]];
    result.classes.push_back(det.class_id);
    result.boxes.push_back(det.box);
    result.masks.push_back(det.mask);
    result.track_ids.push_back(ids[k]);
  }
  return result;
}

RunOutput run_sequence(SequenceSource& source, const PipelineParams& params) {
  if (params.temporal_range < 0) {
    throw Error("temporal_range must be >= 0");
  }
  RunOutput out;
  TrackerState tracker(params.tracker);
  std::optional<EmbeddingProjector> proj;
  std::deque<FeatureGrid> window;  // most recent first
  std::vector<FrameAnnotations> gt_frames;
  std::vector<FrameAnnotations> pred_frames;
  bool gt_complete = true;
  long last_frame = -1;
  bool first = true;

  while (auto frame = source.next()) {
    if (!first && frame->frame <= last_frame) {
      throw FrameOrderError("sequence frames must be strictly ascending");
    }
    first = false;
    last_frame = frame->frame;
    if (!proj ||
        proj->channels() != frame->features.channels()) {
      proj.emplace(params.fusion_embed_dim, frame->features.channels(),
                   derive_seed(params.embed_seed, 0x77));
    }

    std::vector<FeatureGrid> previous(window.begin(), window.end());
    FrameResult result =
        process_frame(previous, frame->flows_to_previous, frame->features,
                      frame->detections, tracker, params, *proj,
                      frame->frame);

    if (frame->gt) {
      gt_frames.push_back(*frame->gt);
      FrameAnnotations pred;
      pred.frame = frame->frame;
      for (std::size_t i = 0; i < result.track_ids.size(); ++i) {
        pred.objects.push_back({result.track_ids[i], result.classes[i],
                                result.masks[i]});
      }
      pred_frames.push_back(std::move(pred));
    } else {
      gt_complete = false;
    }

    window.push_front(frame->features);
    while (static_cast<int>(window.size()) > params.temporal_range) {
      window.pop_back();
    }
    out.results.push_back(std::move(result));
  }

  if (gt_complete && !gt_frames.empty()) {
    std::vector<FrameMatches> matches;
    matches.reserve(gt_frames.size());
    for (std::size_t i = 0; i < gt_frames.size(); ++i) {
      matches.push_back(match_frame(gt_frames[i], pred_frames[i]));
    }
    out.scores = accumulate(matches);
  }
  return out;
}

double cost_ratio(const CostModel& model) {
  if (model.o_fm <= 0.0 || model.o_fl <= 0.0 || model.o_cl <= 0.0 ||
      model.o_bb <= 0.0 || model.o_mk <= 0.0 || model.o_tr <= 0.0 ||
      model.o_3d <= 0.0) {
    throw Error("cost model scalars must be positive");
  }
  if (model.n < 1 || model.m < 1) {
    throw Error("temporal lengths must be >= 1");
  }
  return (model.o_fm + model.n * model.o_fl) /
         (model.o_fm + model.m * model.o_3d);
}

}  // namespace fgmots
