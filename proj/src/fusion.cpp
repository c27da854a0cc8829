// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/fusion.hpp"

#include <cmath>

#include "fgmots/rng.hpp"

namespace fgmots {

EmbeddingProjector::EmbeddingProjector(int embed_dim, int channels,
                                       std::uint64_t seed)
    : embed_dim_(embed_dim), channels_(channels) {
  if (embed_dim < 1 || channels < 1) {
    throw ShapeError("EmbeddingProjector dimensions must be >= 1");
  }
  matrix_.resize(static_cast<std::size_t>(embed_dim) * channels);
  Rng rng(seed);
  for (auto& entry : matrix_) entry = rng.uniform(-1.0, 1.0);
  for (int r = 0; r < embed_dim; ++r) {
    bool nonzero = false;
    for (int c = 0; c < channels; ++c) {
      if (matrix_[static_cast<std::size_t>(r) * channels + c] != 0.0) {
        nonzero = true;
        break;
      }
    }
    // zero rows cannot occur for practical seeds, but the contract requires
    // a usable projection for every seed
    if (!nonzero) matrix_[static_cast<std::size_t>(r) * channels] = 1.0;
  }
}

std::vector<double> EmbeddingProjector::project(const FeatureGrid& grid,
                                                int y, int x) const {
  std::vector<double> out(static_cast<std::size_t>(embed_dim_), 0.0);
  project_into(grid, y, x, out.data());
  return out;
}

void EmbeddingProjector::project_into(const FeatureGrid& grid, int y, int x,
                                      double* out) const {
  if (grid.channels() != channels_) {
    throw ShapeError("grid channel count does not match the projector");
  }
  for (int r = 0; r < embed_dim_; ++r) {
    double acc = 0.0;
    const double* row = &matrix_[static_cast<std::size_t>(r) * channels_];
    for (int c = 0; c < channels_; ++c) acc += row[c] * grid.at(c, y, x);
    out[r] = acc;
  }
}

FeatureGrid warp(const FeatureGrid& feat, const FlowField& flow) {
  if (feat.height() != flow.height() || feat.width() != flow.width()) {
    throw ShapeError("flow dimensions do not match the feature grid");
  }
  FeatureGrid out(feat.channels(), feat.height(), feat.width());
  for (int y = 0; y < feat.height(); ++y) {
    for (int x = 0; x < feat.width(); ++x) {
      const double sx = x + flow.dx(y, x);
      const double sy = y + flow.dy(y, x);
      for (int c = 0; c < feat.channels(); ++c) {
        out.at(c, y, x) = sample_bilinear(feat, c, sx, sy);
      }
    }
  }
  return out;
}

FlowField downsample_flow(const FlowField& flow, int factor) {
  if (factor < 1) throw ShapeError("downsample factor must be >= 1");
  if (flow.height() % factor != 0 || flow.width() % factor != 0) {
    throw ShapeError("flow dimensions are not divisible by the factor");
  }
  const int oh = flow.height() / factor;
  const int ow = flow.width() / factor;
  FlowField out(oh, ow);
  const double inv = 1.0 / factor;
  // Source coordinates stay strictly inside the fine grid for factor >= 1,
  // so no padding rule is needed here.
  auto sample = [&](bool horizontal, double sx, double sy) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    auto read = [&](int yy, int xx) {
      if (yy < 0 || yy >= flow.height() || xx < 0 || xx >= flow.width()) {
        return 0.0;
      }
      return horizontal ? flow.dx(yy, xx) : flow.dy(yy, xx);
    };
    return (1 - fy) * ((1 - fx) * read(y0, x0) + fx * read(y0, x0 + 1)) +
           fy * ((1 - fx) * read(y0 + 1, x0) + fx * read(y0 + 1, x0 + 1));
  };
  for (int y = 0; y < oh; ++y) {
    const double sy = (y + 0.5) * factor - 0.5;
    for (int x = 0; x < ow; ++x) {
      const double sx = (x + 0.5) * factor - 0.5;
      out.dx(y, x) = sample(true, sx, sy) * inv;
      out.dy(y, x) = sample(false, sx, sy) * inv;
    }
  }
  return out;
}

namespace {

double cosine(const double* a, const double* b, int n) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void check_same_shape(const std::vector<FeatureGrid>& warped,
                      const FeatureGrid& current) {
  for (const auto& g : warped) {
    if (!g.same_shape(current)) {
      throw ShapeError("warped grid shape differs from the current grid");
    }
  }
}

}  // namespace

std::vector<FeatureGrid> fusion_weights(const std::vector<FeatureGrid>& warped,
                                        const FeatureGrid& current,
                                        const EmbeddingProjector& proj) {
  if (warped.empty()) {
    throw ShapeError("fusion_weights needs at least one warped grid");
  }
  check_same_shape(warped, current);
  const int n = static_cast<int>(warped.size());
  std::vector<FeatureGrid> maps(
      n, FeatureGrid(1, current.height(), current.width()));
  std::vector<double> raw(static_cast<std::size_t>(n));
  std::vector<double> e_t(static_cast<std::size_t>(proj.embed_dim()));
  std::vector<double> e_k(static_cast<std::size_t>(proj.embed_dim()));
  for (int y = 0; y < current.height(); ++y) {
    for (int x = 0; x < current.width(); ++x) {
      proj.project_into(current, y, x, e_t.data());
      double total = 0.0;
      for (int k = 0; k < n; ++k) {
        proj.project_into(warped[static_cast<std::size_t>(k)], y, x,
                          e_k.data());
        raw[static_cast<std::size_t>(k)] =
            std::exp(cosine(e_k.data(), e_t.data(), proj.embed_dim()));
        total += raw[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < n; ++k) {
        maps[static_cast<std::size_t>(k)].at(0, y, x) =
            raw[static_cast<std::size_t>(k)] / total;
      }
    }
  }
  return maps;
}

FeatureGrid fuse(const std::vector<FeatureGrid>& warped,
                 const std::vector<FeatureGrid>& weights,
                 const FeatureGrid& current) {
  if (warped.size() != weights.size()) {
    throw ShapeError("warped grid count differs from weight map count");
  }
  check_same_shape(warped, current);
  for (const auto& w : weights) {
    if (w.channels() != 1 || w.height() != current.height() ||
        w.width() != current.width()) {
      throw ShapeError("weight map shape differs from the current grid");
    }
  }
  FeatureGrid out = current;
  for (std::size_t k = 0; k < warped.size(); ++k) {
    for (int c = 0; c < current.channels(); ++c) {
      for (int y = 0; y < current.height(); ++y) {
        for (int x = 0; x < current.width(); ++x) {
          out.at(c, y, x) += weights[k].at(0, y, x) * warped[k].at(c, y, x);
        }
      }
    }
  }
  return out;
}

FeatureGrid fuse_features(const std::vector<FeatureGrid>& previous,
                          const std::vector<FlowField>& flows,
                          const FeatureGrid& current,
                          const EmbeddingProjector& proj,
                          bool include_current_in_normalization) {
  if (previous.size() != flows.size()) {
    throw ShapeError("previous grid count differs from flow count");
  }
  if (previous.empty()) return current;
  std::vector<FeatureGrid> warped;
  warped.reserve(previous.size() + 1);
  for (std::size_t i = 0; i < previous.size(); ++i) {
    warped.push_back(warp(previous[i], flows[i]));
  }
  if (!include_current_in_normalization) {
    return fuse(warped, fusion_weights(warped, current, proj), current);
  }
  // The current frame joins the normalization as one more member; its
  // similarity to itself is 1, handled by the generic weight computation.
  warped.push_back(current);
  const auto weights = fusion_weights(warped, current, proj);
  FeatureGrid out(current.channels(), current.height(), current.width());
  for (std::size_t k = 0; k < warped.size(); ++k) {
    for (int c = 0; c < current.channels(); ++c) {
      for (int y = 0; y < current.height(); ++y) {
        for (int x = 0; x < current.width(); ++x) {
          out.at(c, y, x) += weights[k].at(0, y, x) * warped[k].at(c, y, x);
        }
      }
    }
  }
  return out;
}

}  // namespace fgmots
