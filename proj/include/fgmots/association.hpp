// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Identity-vector computation and cross-frame data association with a
// minimal track lifecycle.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fgmots/grid.hpp"
#include "fgmots/identity.hpp"

namespace fgmots {

/// Deterministic seeded linear map from the flattened ROI grid to a
/// 128-dim L2-normalized identity vector. The projection matrix is a pure
/// function of (seed, flattened input size); an all-zero ROI yields the
/// all-zero sentinel vector.
IdentityVector embed_roi(const FeatureGrid& roi_features, std::uint64_t seed);

struct Track {
  int track_id = 0;
  int class_id = 0;
  IdentityVector last_vector{};
  long last_seen = -1;  // frame index of the last match
  long hits = 0;        // frames this track was matched, birth included
};

/// Cosine similarity of every (track, detection) pair; tracks index rows.
std::vector<std::vector<double>> similarity_matrix(
    const std::vector<Track>& tracks,
    const std::vector<IdentityVector>& detections);

/// Maximum-total-similarity one-to-one assignment over complete matchings of
/// the smaller side (Hungarian on negated similarity), with pairs of
/// similarity <= beta removed afterward. Ties in the total are broken
/// lexicographically: the lowest row index takes the lowest column index
/// that still permits an optimal completion. Returned pairs are
/// (row, column), sorted by row.
std::vector<std::pair<int, int>> assign(
    const std::vector<std::vector<double>>& sim, double beta);

struct TrackerParams {
  double beta = 0.5;  // similarity acceptance threshold, in (-1, 1]
  long max_age = 2;   // frames a track may stay unmatched before retirement
};

/// Online track store. Mutated only through step; matching is per class.
class TrackerState {
public:
  explicit TrackerState(TrackerParams params = {});

  const TrackerParams& params() const { return params_; }
  const std::vector<Track>& tracks() const { return tracks_; }
  long last_frame() const { return last_frame_; }
  int next_id() const { return next_id_; }

  /// Processes one frame: matches detections to live tracks of the same
  /// class, opens new tracks for unmatched detections (ids issued in
  /// detection input order), then retires tracks unseen for more than
  /// max_age frames. Returns one track id per detection, in input order.
  /// The frame index must exceed the last processed one.
  std::vector<int> step(
      const std::vector<std::pair<IdentityVector, int>>& detections,
      long frame);

private:
  TrackerParams params_;
  std::vector<Track> tracks_;
  int next_id_ = 1;
  long last_frame_ = -1;
};

}  // namespace fgmots
