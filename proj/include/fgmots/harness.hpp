// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Sequence sources feeding the pipeline: the synthetic oracle (with
// perturbation and observation noise) and annotation files.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgmots/pipeline.hpp"
#include "fgmots/synth.hpp"

namespace fgmots {

/// Standard test scene: objects in separate horizontal lanes, moving
/// horizontally at seeded integer velocities, with seeded appearance
/// textures, alternating classes 1 and 2. Objects stay on canvas for all
/// frames. Canvas height grows with the object count.
SceneSpec lane_scene(int objects, int frames, std::uint64_t seed,
                     int object_size = 8, int canvas_width = 96);

/// Feeds generated frames through the perturbation and noise models:
/// detections come from perturb + build_detections, feature grids carry iid
/// per-frame noise, and each flow field carries noise growing with its
/// temporal distance. Deterministic in (spec, model, noise, seed).
class SyntheticSource : public SequenceSource {
public:
  SyntheticSource(const SceneSpec& spec, const PerturbationModel& model,
                  const FeedNoise& noise, int flow_history,
                  std::uint64_t seed);

  std::optional<SequenceFrame> next() override;

private:
  std::vector<GeneratedFrame> generated_;
  PerturbationModel model_;
  FeedNoise noise_;
  std::uint64_t seed_;
  std::size_t cursor_ = 0;
};

/// Replays detection annotations (and optional ground truth) from parsed
/// files. Features are synthesized from the detection masks: channel 0 is
/// mask occupancy and channels 1 and 2 carry x and y position ramps, so
/// identity embeddings separate objects by position. No flow history is
/// available, so fusion degenerates to the current frame.
class FileSource : public SequenceSource {
public:
  FileSource(std::vector<FrameAnnotations> detections,
             std::optional<std::vector<FrameAnnotations>> gt);

  std::optional<SequenceFrame> next() override;

private:
  std::vector<FrameAnnotations> detections_;
  std::optional<std::vector<FrameAnnotations>> gt_;
  std::size_t cursor_ = 0;
};

}  // namespace fgmots
