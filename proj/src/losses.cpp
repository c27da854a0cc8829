// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgmots/errors.hpp"

namespace fgmots {

namespace {

constexpr double kEps = 1e-12;

double clamp_prob(double p) { return std::clamp(p, kEps, 1.0 - kEps); }

}  // namespace

double classification_loss(const std::vector<DetectionSample>& samples) {
  if (samples.empty()) {
    throw UndefinedLossError("classification_loss on an empty sample list");
  }
  double total = 0.0;
  for (const auto& s : samples) {
    if (s.true_class < 0 ||
        s.true_class >= static_cast<int>(s.class_probs.size())) {
      throw Error("true_class outside the probability vector");
    }
    total += -std::log(std::max(s.class_probs[s.true_class], kEps));
  }
  return total / static_cast<double>(samples.size());
}

double box_regression_loss(const std::vector<DetectionSample>& samples) {
  if (samples.empty()) {
    throw UndefinedLossError("box_regression_loss on an empty sample list");
  }
  auto smooth_l1 = [](double d) {
    const double a = std::abs(d);
    return a < 1.0 ? 0.5 * d * d : a - 0.5;
  };
  double total = 0.0;
  for (const auto& s : samples) {
    for (int k = 0; k < 4; ++k) {
      total += smooth_l1(s.pred_offsets[k] - s.true_offsets[k]);
    }
  }
  return total / static_cast<double>(samples.size());
}

double mask_loss(const std::vector<MaskSample>& samples) {
  if (samples.empty()) {
    throw UndefinedLossError("mask_loss on an empty sample list");
  }
  double total = 0.0;
  for (const auto& s : samples) {
    if (s.true_class < 0 || s.true_class >= s.probs.channels()) {
      throw Error("true_class outside the probability channels");
    }
    const int m_h = s.probs.height();
    const int m_w = s.probs.width();
    if (s.gt.size() != static_cast<std::size_t>(m_h) * m_w) {
      throw ShapeError("ground-truth raster size does not match probs");
    }
    double sample_total = 0.0;
    for (int y = 0; y < m_h; ++y) {
      for (int x = 0; x < m_w; ++x) {
        const double p = clamp_prob(s.probs.at(s.true_class, y, x));
        const bool t = s.gt[static_cast<std::size_t>(y) * m_w + x] != 0;
        sample_total += t ? -std::log(p) : -std::log(1.0 - p);
      }
    }
    total += sample_total / static_cast<double>(m_h * m_w);
  }
  return total / static_cast<double>(samples.size());
}

double triplet_track_loss(const TripletBatch& batch) {
  if (batch.items.empty()) {
    throw UndefinedLossError("triplet_track_loss on an empty batch");
  }
  if (batch.margin < 0.0) {
    throw Error("triplet margin must be >= 0");
  }
  const auto& items = batch.items;
  double total = 0.0;
  int valid = 0;
  for (std::size_t a = 0; a < items.size(); ++a) {
    double min_pos = std::numeric_limits<double>::infinity();
    double max_neg = -std::numeric_limits<double>::infinity();
    bool has_pos = false, has_neg = false;
    for (std::size_t b = 0; b < items.size(); ++b) {
      if (b == a) continue;
      const double s = batch.similarity(items[a].first, items[b].first);
      if (items[b].second == items[a].second) {
        has_pos = true;
        min_pos = std::min(min_pos, s);
      } else {
        has_neg = true;
        max_neg = std::max(max_neg, s);
      }
    }
    if (!has_pos || !has_neg) continue;  // term undefined for this anchor
    // grouping the gap keeps the identical-vector case exactly at the margin
    total += std::max(batch.margin + (max_neg - min_pos), 0.0);
    ++valid;
  }
  if (valid == 0) {
    throw UndefinedLossError("no anchor has both a positive and a negative");
  }
  return total / static_cast<double>(valid);
}

double total_loss(double cls, double box, double mask, double track) {
  return cls + box + mask + track;
}

}  // namespace fgmots
