// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgmots/errors.hpp"
#include "fgmots/rng.hpp"

namespace fgmots {

IdentityVector embed_roi(const FeatureGrid& roi_features,
                         std::uint64_t seed) {
  const auto& in = roi_features.data();
  IdentityVector out{};
  bool all_zero = true;
  for (const double v : in) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return out;  // zero-vector sentinel
  // Matrix rows are drawn in row-major order, so the map is a pure function
  // of the seed and the flattened input size.
  Rng rng(seed);
  double norm_sq = 0.0;
  for (int r = 0; r < kIdentityDim; ++r) {
    double acc = 0.0;
    for (const double v : in) acc += rng.uniform(-1.0, 1.0) * v;
    out[r] = acc;
    norm_sq += acc * acc;
  }
  if (norm_sq == 0.0) return out;
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& v : out) v *= inv;
  return out;
}

std::vector<std::vector<double>> similarity_matrix(
    const std::vector<Track>& tracks,
    const std::vector<IdentityVector>& detections) {
  std::vector<std::vector<double>> sim(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    sim[i].resize(detections.size());
    for (std::size_t j = 0; j < detections.size(); ++j) {
      sim[i][j] = cosine_similarity(tracks[i].last_vector, detections[j]);
    }
  }
  return sim;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum-cost perfect matching on an n x n matrix (potentials method).
// Returns the column assigned to each row.
std::vector<int> hungarian_square(const std::vector<std::vector<double>>& a,
                                  int n) {
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] >= 1) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Maximum achievable similarity total over complete matchings of the
// smaller side, restricted to the given rows and columns. The total is
// recomputed as a direct sum of the chosen entries so tie comparisons are
// not polluted by dual-variable rounding.
double best_total(const std::vector<std::vector<double>>& sim,
                  const std::vector<int>& rows,
                  const std::vector<int>& cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  const int n = static_cast<int>(std::max(rows.size(), cols.size()));
  std::vector<std::vector<double>> cost(
      n, std::vector<double>(n, 0.0));  // phantom cells cost 0
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost[i][j] = -sim[rows[i]][cols[j]];
    }
  }
  const auto row_to_col = hungarian_square(cost, n);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int j = row_to_col[static_cast<int>(i)];
    if (j >= 0 && j < static_cast<int>(cols.size())) {
      total += sim[rows[i]][cols[j]];
    }
  }
  return total;
}

// Two totals of the same optimum may differ in the last bits because they
// sum different entry multisets; random inputs never land this close.
constexpr double kTieTolerance = 1e-9;

}  // namespace

std::vector<std::pair<int, int>> assign(
    const std::vector<std::vector<double>>& sim, double beta) {
  const int rows = static_cast<int>(sim.size());
  const int cols = rows > 0 ? static_cast<int>(sim[0].size()) : 0;
  std::vector<std::pair<int, int>> out;
  if (rows == 0 || cols == 0) return out;
  for (const auto& row : sim) {
    if (static_cast<int>(row.size()) != cols) {
      throw ShapeError("similarity matrix rows have unequal lengths");
    }
  }

  // Fix rows in ascending order to the lowest column that still permits an
  // optimal completion; a row may stay unmatched only when more rows than
  // columns remain, and only as the last resort.
  std::vector<int> remaining_rows(rows);
  for (int i = 0; i < rows; ++i) remaining_rows[i] = i;
  std::vector<int> remaining_cols(cols);
  for (int j = 0; j < cols; ++j) remaining_cols[j] = j;

  while (!remaining_rows.empty() && !remaining_cols.empty()) {
    const int i = remaining_rows.front();
    remaining_rows.erase(remaining_rows.begin());
    const double target = [&] {
      std::vector<int> with_row = remaining_rows;
      with_row.insert(with_row.begin(), i);
      return best_total(sim, with_row, remaining_cols);
    }();
    const bool may_skip =
        static_cast<int>(remaining_rows.size()) >=
        static_cast<int>(remaining_cols.size());
    int chosen = -1;
    for (std::size_t jj = 0; jj < remaining_cols.size(); ++jj) {
      const int j = remaining_cols[jj];
      std::vector<int> rest_cols = remaining_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<long>(jj));
      const double candidate =
          sim[i][j] + best_total(sim, remaining_rows, rest_cols);
      if (candidate >= target - kTieTolerance) {
        chosen = j;
        break;
      }
    }
    if (chosen < 0) {
      if (!may_skip) {
        // cannot happen: some column always achieves the optimum when the
        // row must be matched
        chosen = remaining_cols.front();
      } else {
        continue;  // row left unmatched
      }
    }
    out.emplace_back(i, chosen);
    remaining_cols.erase(
        std::find(remaining_cols.begin(), remaining_cols.end(), chosen));
  }

  std::vector<std::pair<int, int>> kept;
  kept.reserve(out.size());
  for (const auto& pr : out) {
    if (sim[pr.first][pr.second] > beta) kept.push_back(pr);
  }
  return kept;
}

TrackerState::TrackerState(TrackerParams params) : params_(params) {
  if (params_.beta <= -1.0 || params_.beta > 1.0) {
    throw Error("tracker beta must lie in (-1, 1]");
  }
  if (params_.max_age < 0) {
    throw Error("tracker max_age must be >= 0");
  }
}

std::vector<int> TrackerState::step(
    const std::vector<std::pair<IdentityVector, int>>& detections,
    long frame) {
  if (frame <= last_frame_) {
    throw FrameOrderError("frame index must exceed the last processed frame");
  }
  last_frame_ = frame;

  std::vector<int> result(detections.size(), 0);
  std::vector<char> det_matched(detections.size(), 0);

  // Collect the class ids present in either tracks or detections, in first
  // appearance order, and match within each class independently.
  std::vector<int> classes;
  auto note_class = [&](int c) {
    if (std::find(classes.begin(), classes.end(), c) == classes.end()) {
      classes.push_back(c);
    }
  };
  for (const auto& t : tracks_) note_class(t.class_id);
  for (const auto& d : detections) note_class(d.second);

  for (const int cls : classes) {
    std::vector<std::size_t> track_idx;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      if (tracks_[i].class_id == cls) track_idx.push_back(i);
    }
    std::vector<std::size_t> det_idx;
    for (std::size_t j = 0; j < detections.size(); ++j) {
      if (detections[j].second == cls) det_idx.push_back(j);
    }
    if (track_idx.empty() || det_idx.empty()) continue;

    std::vector<std::vector<double>> sim(track_idx.size());
    for (std::size_t a = 0; a < track_idx.size(); ++a) {
      sim[a].resize(det_idx.size());
      for (std::size_t b = 0; b < det_idx.size(); ++b) {
        sim[a][b] = cosine_similarity(tracks_[track_idx[a]].last_vector,
                                      detections[det_idx[b]].first);
      }
    }
    for (const auto& [a, b] : assign(sim, params_.beta)) {
      Track& trk = tracks_[track_idx[static_cast<std::size_t>(a)]];
      const std::size_t j = det_idx[static_cast<std::size_t>(b)];
      trk.last_vector = detections[j].first;
      trk.last_seen = frame;
      ++trk.hits;
      result[j] = trk.track_id;
      det_matched[j] = 1;
    }
  }

  // New ids follow detection input order across all classes.
  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (det_matched[j]) continue;
    Track trk;
    trk.track_id = next_id_++;
    trk.class_id = detections[j].second;
    trk.last_vector = detections[j].first;
    trk.last_seen = frame;
    trk.hits = 1;
    tracks_.push_back(trk);
    result[j] = trk.track_id;
  }

  // Retirement happens after matching, so a track may still claim a
  // detection on the last frame of its allowance.
  std::erase_if(tracks_, [&](const Track& t) {
    return frame - t.last_seen > params_.max_age;
  });

  return result;
}

}  // namespace fgmots
