// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <type_traits>

#include "fgmots/errors.hpp"
#include "fgmots/rng.hpp"

namespace fgmots {

PipelineParams RunConfig::pipeline_params() const {
  PipelineParams p;
  p.temporal_range = temporal_range;
  p.fusion.reference_area = reference_area;
  if (box_mode == "adaptive") {
    p.box_mode = BoxFusionMode::adaptive;
  } else if (box_mode == "fixed_mean") {
    p.box_mode = BoxFusionMode::fixed_mean;
  } else if (box_mode == "detection_only") {
    p.box_mode = BoxFusionMode::detection_only;
  } else {
    throw Error("unknown box_mode: " + box_mode);
  }
  p.roi_size = roi_size;
  p.fusion_embed_dim = fusion_embed_dim;
  p.include_current_in_normalization = include_current_in_normalization;
  p.tracker.beta = beta;
  p.tracker.max_age = max_age;
  p.embed_seed = embed_seed;
  p.embedding_noise_sigma = embedding_noise_sigma;
  p.noise_seed = derive_seed(seed, 0x5eed);
  return p;
}

PerturbationModel RunConfig::perturbation_model() const {
  PerturbationModel m;
  m.box_jitter_sigma = box_jitter_sigma;
  m.boundary_radius = boundary_radius;
  m.miss_probability = miss_probability;
  m.false_positive_rate = false_positive_rate;
  m.embedding_noise_sigma = embedding_noise_sigma;
  return m;
}

FeedNoise RunConfig::feed_noise() const {
  return {feature_noise_sigma, flow_noise_growth};
}

CostModel RunConfig::cost_model() const {
  CostModel c;
  c.o_fm = cost_o_fm;
  c.o_fl = cost_o_fl;
  c.o_cl = cost_o_cl;
  c.o_bb = cost_o_bb;
  c.o_mk = cost_o_mk;
  c.o_tr = cost_o_tr;
  c.o_3d = cost_o_3d;
  c.n = cost_n;
  c.m = cost_m;
  return c;
}

namespace {

template <typename T>
T parse_number(const std::string& text, long line_no) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  std::from_chars_result res{};
  if constexpr (std::is_floating_point_v<T>) {
    res = std::from_chars(begin, end, value);
  } else {
    res = std::from_chars(begin, end, value, 10);
  }
  if (res.ec != std::errc() || res.ptr != end || text.empty()) {
    throw ParseError("malformed value: '" + text + "'", line_no);
  }
  return value;
}

bool parse_bool(const std::string& text, long line_no) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("malformed boolean: '" + text + "'", line_no);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  using Setter = std::function<void(const std::string&, long)>;
  const std::map<std::string, Setter> setters = {
      {"temporal_range",
       [&](const std::string& v, long n) {
         cfg.temporal_range = parse_number<int>(v, n);
       }},
      {"reference_area",
       [&](const std::string& v, long n) {
         cfg.reference_area = parse_number<double>(v, n);
       }},
      {"box_mode", [&](const std::string& v, long n) {
         if (v != "adaptive" && v != "fixed_mean" && v != "detection_only") {
           throw ParseError("unknown box_mode: '" + v + "'", n);
         }
         cfg.box_mode = v;
       }},
      {"roi_size",
       [&](const std::string& v, long n) {
         cfg.roi_size = parse_number<int>(v, n);
       }},
      {"fusion_embed_dim",
       [&](const std::string& v, long n) {
         cfg.fusion_embed_dim = parse_number<int>(v, n);
       }},
      {"include_current_in_normalization",
       [&](const std::string& v, long n) {
         cfg.include_current_in_normalization = parse_bool(v, n);
       }},
      {"beta",
       [&](const std::string& v, long n) {
         cfg.beta = parse_number<double>(v, n);
       }},
      {"max_age",
       [&](const std::string& v, long n) {
         cfg.max_age = parse_number<long>(v, n);
       }},
      {"embed_seed",
       [&](const std::string& v, long n) {
         cfg.embed_seed = parse_number<std::uint64_t>(v, n);
       }},
      {"margin",
       [&](const std::string& v, long n) {
         cfg.margin = parse_number<double>(v, n);
       }},
      {"box_jitter_sigma",
       [&](const std::string& v, long n) {
         cfg.box_jitter_sigma = parse_number<double>(v, n);
       }},
      {"boundary_radius",
       [&](const std::string& v, long n) {
         cfg.boundary_radius = parse_number<int>(v, n);
       }},
      {"miss_probability",
       [&](const std::string& v, long n) {
         cfg.miss_probability = parse_number<double>(v, n);
       }},
      {"false_positive_rate",
       [&](const std::string& v, long n) {
         cfg.false_positive_rate = parse_number<double>(v, n);
       }},
      {"embedding_noise_sigma",
       [&](const std::string& v, long n) {
         cfg.embedding_noise_sigma = parse_number<double>(v, n);
       }},
      {"feature_noise_sigma",
       [&](const std::string& v, long n) {
         cfg.feature_noise_sigma = parse_number<double>(v, n);
       }},
      {"flow_noise_growth",
       [&](const std::string& v, long n) {
         cfg.flow_noise_growth = parse_number<double>(v, n);
       }},
      {"cost_o_fm",
       [&](const std::string& v, long n) {
         cfg.cost_o_fm = parse_number<double>(v, n);
       }},
      {"cost_o_fl",
       [&](const std::string& v, long n) {
         cfg.cost_o_fl = parse_number<double>(v, n);
       }},
      {"cost_o_cl",
       [&](const std::string& v, long n) {
         cfg.cost_o_cl = parse_number<double>(v, n);
       }},
      {"cost_o_bb",
       [&](const std::string& v, long n) {
         cfg.cost_o_bb = parse_number<double>(v, n);
       }},
      {"cost_o_mk",
       [&](const std::string& v, long n) {
         cfg.cost_o_mk = parse_number<double>(v, n);
       }},
      {"cost_o_tr",
       [&](const std::string& v, long n) {
         cfg.cost_o_tr = parse_number<double>(v, n);
       }},
      {"cost_o_3d",
       [&](const std::string& v, long n) {
         cfg.cost_o_3d = parse_number<double>(v, n);
       }},
      {"cost_n",
       [&](const std::string& v, long n) {
         cfg.cost_n = parse_number<int>(v, n);
       }},
      {"cost_m",
       [&](const std::string& v, long n) {
         cfg.cost_m = parse_number<int>(v, n);
       }},
      {"seed",
       [&](const std::string& v, long n) {
         cfg.seed = parse_number<std::uint64_t>(v, n);
       }},
  };

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value", line_no);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ParseError("unknown configuration key: '" + key + "'", line_no);
    }
    it->second(value, line_no);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace fgmots
