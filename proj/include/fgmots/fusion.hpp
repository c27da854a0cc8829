// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Flow-guided feature fusion: previous-frame feature grids are warped to the
// current frame along per-pixel displacement fields, weighted per pixel by
// embedding similarity to the current frame, and summed with the current
// features.

#pragma once

#include <cstdint>
#include <vector>

#include "fgmots/grid.hpp"

namespace fgmots {

/// Fixed linear map from C-dim per-pixel feature vectors to E-dim embedding
/// vectors used for similarity weighting. The matrix is generated
/// deterministically from the seed (entries uniform in [-1, 1]) and never
/// changes after construction.
class EmbeddingProjector {
public:
  EmbeddingProjector(int embed_dim, int channels, std::uint64_t seed);

  int embed_dim() const { return embed_dim_; }
  int channels() const { return channels_; }

  /// Embedding of the feature vector at pixel (y, x).
  std::vector<double> project(const FeatureGrid& grid, int y, int x) const;

  /// Allocation-free variant: writes embed_dim values into out.
  void project_into(const FeatureGrid& grid, int y, int x, double* out) const;

private:
  int embed_dim_;
  int channels_;
  std::vector<double> matrix_;  // row-major embed_dim x channels
};

/// Backward warp: output(c, p) = bilinear sample of feat channel c at
/// p + flow(p). Samples landing outside the grid contribute zero, so zero
/// flow reproduces the input exactly.
FeatureGrid warp(const FeatureGrid& feat, const FlowField& flow);

/// Bilinear downsample of both flow components by an integer factor, then
/// displacement magnitudes scaled by 1/factor so they stay in units of the
/// coarser grid. Output cell (y, x) samples the source at
/// ((x + 0.5) * factor - 0.5, (y + 0.5) * factor - 0.5); factor 1 is the
/// identity. Dimensions must be divisible by the factor.
FlowField downsample_flow(const FlowField& flow, int factor);

/// Per-pixel adaptive weights: for warped frame k and pixel p,
/// w_k(p) = exp(cos(e_k(p), e_t(p))) with e the projected embeddings,
/// normalized so the weights sum to 1 at every pixel. Cosine against a
/// zero-norm embedding is defined as 0. Each weight map is returned as a
/// 1-channel grid.
std::vector<FeatureGrid> fusion_weights(const std::vector<FeatureGrid>& warped,
                                        const FeatureGrid& current,
                                        const EmbeddingProjector& proj);

/// Weighted sum of the warped grids plus the current grid:
/// out(c, p) = sum_k w_k(p) * warped_k(c, p) + current(c, p).
/// The current frame is added outside the weight normalization, so with a
/// nonempty warped list the output magnitude is roughly twice the input's.
/// An empty warped list returns the current grid unchanged.
FeatureGrid fuse(const std::vector<FeatureGrid>& warped,
                 const std::vector<FeatureGrid>& weights,
                 const FeatureGrid& current);

/// Warp + weight + fuse in one step. When include_current_in_normalization
/// is set, the current frame joins the weight normalization as an extra
/// member (with similarity weight exp(1)) instead of being added on top,
/// which keeps the fused magnitude comparable to a single frame's.
FeatureGrid fuse_features(const std::vector<FeatureGrid>& previous,
                          const std::vector<FlowField>& flows,
                          const FeatureGrid& current,
                          const EmbeddingProjector& proj,
                          bool include_current_in_normalization = false);

}  // namespace fgmots
