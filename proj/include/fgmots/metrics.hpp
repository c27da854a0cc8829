// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Mask-based tracking evaluation: per-frame matching at IoU > 0.5, id-switch
// accounting across gaps, and the derived accuracy/precision scores.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fgmots/geometry.hpp"

namespace fgmots {

struct MaskInstance {
  int id = 0;
  int class_id = 0;
  BinaryMask mask;
};

/// One frame's annotations from one source (ground truth or prediction).
/// Masks within a frame must be pairwise non-overlapping and ids unique.
struct FrameAnnotations {
  long frame = 0;
  std::vector<MaskInstance> objects;
};

/// Outcome of matching one frame's predictions against ground truth.
struct FrameMatches {
  struct Match {
    int gt_id = 0;
    int pred_id = 0;
    int class_id = 0;
    double iou = 0.0;
  };
  struct Miss {
    int id = 0;
    int class_id = 0;
  };
  long frame = 0;
  std::vector<Match> matches;
  std::vector<Miss> false_positives;  // unmatched predictions
  std::vector<Miss> false_negatives;  // unmatched ground truths
};

/// Matches predictions to ground-truth masks of the same class at strict
/// mask IoU > 0.5. Non-overlap within each source makes the matching
/// one-to-one without an assignment step. Throws InvalidAnnotationsError on
/// overlapping masks or duplicate ids within a source, ShapeError on mixed
/// mask dimensions.
FrameMatches match_frame(const FrameAnnotations& gt,
                         const FrameAnnotations& pred);

/// Per-class accumulated counts and derived scores.
struct ClassScores {
  long gt_total = 0;  // ground-truth mask count |M|
  long tp = 0;
  double soft_tp = 0.0;  // sum of matched IoU values
  long fp = 0;
  long fn = 0;
  long ids = 0;

  double smotsa() const;  // (soft_tp - fp - ids) / gt_total
  double motsa() const;   // (tp - fp - ids) / gt_total
  /// soft_tp / tp; reported as 1.0 with the flag below when tp == 0.
  double motsp() const;
  bool motsp_defined() const { return tp > 0; }
};

/// Scores keyed by class id. Requesting a derived score for a class with no
/// ground-truth masks throws UndefinedScoresError.
struct MotsScores {
  std::map<int, ClassScores> per_class;

  const ClassScores& for_class(int class_id) const;
  /// Counts summed over every class.
  ClassScores combined() const;
};

/// Folds per-frame matches (ascending frame order required) into scores.
/// An id switch is counted when a ground-truth track is matched to a
/// predicted id different from the one of its most recent previous match;
/// unmatched frames in between do not reset that memory.
MotsScores accumulate(const std::vector<FrameMatches>& frames);

/// Human-readable table, one row per class (1 = car, 2 = pedestrian).
std::string report_text(const MotsScores& scores);

/// CSV with header class,smotsa,motsa,motsp,ids,tp,fp,fn,gt_total.
std::string report_csv(const MotsScores& scores);

}  // namespace fgmots
