// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

namespace fgmots {

inline constexpr int kIdentityDim = 128;

/// 128-dim object identity embedding. The all-zero vector is the sentinel
/// produced from an all-zero ROI; cosine similarity treats it as similarity
/// 0 to everything.
using IdentityVector = std::array<double, kIdentityDim>;

inline double cosine_similarity(const IdentityVector& a,
                                const IdentityVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < kIdentityDim; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace fgmots
