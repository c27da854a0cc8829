// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "fgmots/errors.hpp"

namespace fgmots {

namespace {

void validate_source(const FrameAnnotations& fa, const char* label) {
  std::set<int> seen;
  for (const auto& obj : fa.objects) {
    if (!seen.insert(obj.id).second) {
      throw InvalidAnnotationsError(std::string(label) +
                                    " frame has a duplicate object id");
    }
  }
  for (std::size_t i = 0; i < fa.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < fa.objects.size(); ++j) {
      if (mask_overlap(fa.objects[i].mask, fa.objects[j].mask).intersection >
          0) {
        throw InvalidAnnotationsError(std::string(label) +
                                      " frame has overlapping masks");
      }
    }
  }
}

}  // namespace

FrameMatches match_frame(const FrameAnnotations& gt,
                         const FrameAnnotations& pred) {
  validate_source(gt, "ground-truth");
  validate_source(pred, "prediction");

  FrameMatches out;
  out.frame = gt.frame;
  std::vector<char> pred_used(pred.objects.size(), 0);
  for (const auto& g : gt.objects) {
    int hit = -1;
    double hit_iou = 0.0;
    for (std::size_t j = 0; j < pred.objects.size(); ++j) {
      const auto& p = pred.objects[j];
      if (p.class_id != g.class_id || pred_used[j]) continue;
      const double iou = mask_iou(g.mask, p.mask);
      // IoU > 0.5 needs a majority of both masks, so non-overlap within each
      // source leaves at most one candidate
      if (iou > 0.5) {
        hit = static_cast<int>(j);
        hit_iou = iou;
        break;
      }
    }
    if (hit >= 0) {
      pred_used[static_cast<std::size_t>(hit)] = 1;
      out.matches.push_back(
          {g.id, pred.objects[static_cast<std::size_t>(hit)].id, g.class_id,
           hit_iou});
    } else {
      out.false_negatives.push_back({g.id, g.class_id});
    }
  }
  for (std::size_t j = 0; j < pred.objects.size(); ++j) {
    if (!pred_used[j]) {
      out.false_positives.push_back(
          {pred.objects[j].id, pred.objects[j].class_id});
    }
  }
  return out;
}

double ClassScores::smotsa() const {
  if (gt_total == 0) {
    throw UndefinedScoresError("no ground-truth masks for this class");
  }
  return (soft_tp - static_cast<double>(fp) - static_cast<double>(ids)) /
         static_cast<double>(gt_total);
}

double ClassScores::motsa() const {
  if (gt_total == 0) {
    throw UndefinedScoresError("no ground-truth masks for this class");
  }
  return static_cast<double>(tp - fp - ids) / static_cast<double>(gt_total);
}

double ClassScores::motsp() const {
  if (gt_total == 0) {
    throw UndefinedScoresError("no ground-truth masks for this class");
  }
  if (tp == 0) return 1.0;
  return soft_tp / static_cast<double>(tp);
}

const ClassScores& MotsScores::for_class(int class_id) const {
  const auto it = per_class.find(class_id);
  if (it == per_class.end()) {
    throw UndefinedScoresError("class never appeared in the evaluation");
  }
  return it->second;
}

ClassScores MotsScores::combined() const {
  ClassScores total;
  for (const auto& [cls, s] : per_class) {
    total.gt_total += s.gt_total;
    total.tp += s.tp;
    total.soft_tp += s.soft_tp;
    total.fp += s.fp;
    total.fn += s.fn;
    total.ids += s.ids;
  }
  return total;
}

MotsScores accumulate(const std::vector<FrameMatches>& frames) {
  long prev_frame = 0;
  bool first = true;
  MotsScores scores;
  // most recent predicted id matched to each ground-truth track, per class
  std::map<std::pair<int, int>, int> last_pred_id;  // (class, gt id) -> pred
  for (const auto& fm : frames) {
    if (!first && fm.frame <= prev_frame) {
      throw FrameOrderError("frame matches must be in ascending frame order");
    }
    first = false;
    prev_frame = fm.frame;
    for (const auto& m : fm.matches) {
      auto& s = scores.per_class[m.class_id];
      s.gt_total += 1;
      s.tp += 1;
      s.soft_tp += m.iou;
      const auto key = std::make_pair(m.class_id, m.gt_id);
      const auto it = last_pred_id.find(key);
      if (it != last_pred_id.end() && it->second != m.pred_id) {
        s.ids += 1;
      }
      last_pred_id[key] = m.pred_id;
    }
    for (const auto& miss : fm.false_negatives) {
      auto& s = scores.per_class[miss.class_id];
      s.gt_total += 1;
      s.fn += 1;
    }
    for (const auto& miss : fm.false_positives) {
      scores.per_class[miss.class_id].fp += 1;
    }
  }
  return scores;
}

namespace {

std::string class_label(int class_id) {
  switch (class_id) {
    case 1:
      return "car";
    case 2:
      return "pedestrian";
    default:
      return "class_" + std::to_string(class_id);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string report_text(const MotsScores& scores) {
  std::ostringstream os;
  os << "class        sMOTSA    MOTSA     MOTSP     IDS   TP    FP    FN\n";
  for (const auto& [cls, s] : scores.per_class) {
    os << class_label(cls);
    for (std::size_t pad = class_label(cls).size(); pad < 13; ++pad) {
      os << ' ';
    }
    if (s.gt_total == 0) {
      os << "n/a       n/a       n/a       ";
    } else {
      os << fmt(s.smotsa()) << "    " << fmt(s.motsa()) << "    "
         << fmt(s.motsp()) << (s.motsp_defined() ? "    " : "*   ");
    }
    os << s.ids << "     " << s.tp << "     " << s.fp << "     " << s.fn
       << "\n";
  }
  return os.str();
}

std::string report_csv(const MotsScores& scores) {
  std::ostringstream os;
  os << "class,smotsa,motsa,motsp,ids,tp,fp,fn,gt_total\n";
  for (const auto& [cls, s] : scores.per_class) {
    os << class_label(cls) << ',';
    if (s.gt_total == 0) {
      os << ",,";
    } else {
      os << fmt(s.smotsa()) << ',' << fmt(s.motsa()) << ',' << fmt(s.motsp());
    }
    os << ',' << s.ids << ',' << s.tp << ',' << s.fp << ',' << s.fn << ','
       << s.gt_total << "\n";
  }
  return os.str();
}

}  // namespace fgmots
