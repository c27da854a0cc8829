// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Value-level training objectives: detection classification and box
// regression, per-pixel mask BCE, and the batch-hard triplet tracking loss.
// No gradients; these exist for verification and future training use.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fgmots/grid.hpp"
#include "fgmots/identity.hpp"

namespace fgmots {

struct DetectionSample {
  std::vector<double> class_probs;  // simplex over K classes
  int true_class = 0;
  std::array<double, 4> pred_offsets{};
  std::array<double, 4> true_offsets{};
};

struct MaskSample {
  FeatureGrid probs;  // per-class per-pixel probabilities, c x m x m
  std::vector<std::uint8_t> gt;  // binary ground truth, row-major m*m
  int true_class = 0;  // only this probability channel contributes
};

struct TripletBatch {
  std::vector<std::pair<IdentityVector, int>> items;  // (vector, gt id)
  double margin = 0.2;
  std::function<double(const IdentityVector&, const IdentityVector&)>
      similarity = cosine_similarity;
};

/// Mean over samples of -log p[true_class]; probabilities clamped at 1e-12.
double classification_loss(const std::vector<DetectionSample>& samples);

/// Mean over samples of the summed smooth-L1 of the four offset residuals:
/// smoothL1(d) = 0.5 d^2 for |d| < 1, |d| - 0.5 otherwise.
double box_regression_loss(const std::vector<DetectionSample>& samples);

/// Mean binary cross-entropy between the true-class probability channel and
/// the binary ground truth, averaged over samples and pixels. Other class
/// channels never contribute. Probabilities clamped to [1e-12, 1 - 1e-12].
double mask_loss(const std::vector<MaskSample>& samples);

/// Batch-hard triplet ranking loss: for each anchor with at least one
/// positive (same id, self excluded) and one negative, the term is
/// max(margin + max_neg S - min_pos S, 0); the loss is the mean over such
/// anchors only. Throws UndefinedLossError when no anchor qualifies.
double triplet_track_loss(const TripletBatch& batch);

/// Unweighted sum of the four components.
double total_loss(double cls, double box, double mask, double track);

}  // namespace fgmots
