// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Run configuration parsed from a key=value text file. '#' starts a
// comment; blank lines are ignored; unknown keys are errors.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fgmots/pipeline.hpp"
#include "fgmots/synth.hpp"

namespace fgmots {

struct RunConfig {
  // pipeline
  int temporal_range = 8;
  double reference_area = 1024.0;
  std::string box_mode = "adaptive";  // adaptive | fixed_mean | detection_only
  int roi_size = 7;
  int fusion_embed_dim = 8;
  bool include_current_in_normalization = false;
  double beta = 0.5;
  long max_age = 2;
  std::uint64_t embed_seed = 1;

  // losses
  double margin = 0.2;

  // perturbation (synthetic detections)
  double box_jitter_sigma = 0.0;
  int boundary_radius = 0;
  double miss_probability = 0.0;
  double false_positive_rate = 0.0;
  double embedding_noise_sigma = 0.0;

  // feature/flow observation noise
  double feature_noise_sigma = 0.0;
  double flow_noise_growth = 0.0;

  // cost model
  double cost_o_fm = 1.0;
  double cost_o_fl = 1.0;
  double cost_o_cl = 1.0;
  double cost_o_bb = 1.0;
  double cost_o_mk = 1.0;
  double cost_o_tr = 1.0;
  double cost_o_3d = 1.0;
  int cost_n = 1;
  int cost_m = 1;

  // rng
  std::uint64_t seed = 1;

  PipelineParams pipeline_params() const;
  PerturbationModel perturbation_model() const;
  FeedNoise feed_noise() const;
  CostModel cost_model() const;
};

/// Parses key=value configuration text; unknown keys, malformed values, and
/// out-of-range values raise ParseError with the 1-based line number.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

}  // namespace fgmots
