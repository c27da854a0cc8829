// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fgmots/config.hpp"
#include "fgmots/io.hpp"

using namespace fgmots;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const char* cli = std::getenv("FGMOTS_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = std::string(cli) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
    result.output.append(buf, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fgmots_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("parse_config defaults") {
  const RunConfig cfg = parse_text("");
  CHECK(cfg.temporal_range == 8);
  CHECK(cfg.reference_area == 1024.0);
  CHECK(cfg.box_mode == "adaptive");
  CHECK(cfg.roi_size == 7);
  CHECK(cfg.beta == 0.5);
  CHECK(cfg.max_age == 2);
  CHECK(cfg.margin == 0.2);
  CHECK(cfg.seed == 1);
  CHECK(!cfg.include_current_in_normalization);

  const PipelineParams p = cfg.pipeline_params();
  CHECK(p.temporal_range == 8);
  CHECK(p.box_mode == BoxFusionMode::adaptive);
  CHECK(p.fusion.reference_area == 1024.0);
  CHECK(p.tracker.beta == 0.5);
  CHECK(p.tracker.max_age == 2);

  const CostModel cm = cfg.cost_model();
  CHECK(cm.o_fm == 1.0);
  CHECK(cm.n == 1);
}

TEST_CASE("parse_config accepts every key") {
  const RunConfig cfg = parse_text(
      "# pipeline settings\n"
      "temporal_range = 4\n"
      "reference_area = 64\n"
      "box_mode = fixed_mean\n"
      "roi_size = 5\n"
      "fusion_embed_dim = 16\n"
      "include_current_in_normalization = true\n"
      "beta = 0.65\n"
      "max_age = 3\n"
      "embed_seed = 42\n"
      "\n"
      "margin = 0.3\n"
      "box_jitter_sigma = 1.5\n"
      "boundary_radius = 1\n"
      "miss_probability = 0.05\n"
      "false_positive_rate = 0.25\n"
      "embedding_noise_sigma = 0.1\n"
      "feature_noise_sigma = 2.0\n"
      "flow_noise_growth = 0.75\n"
      "cost_o_fm = 100\n"
      "cost_o_fl = 5\n"
      "cost_o_cl = 8\n"
      "cost_o_bb = 8\n"
      "cost_o_mk = 8\n"
      "cost_o_tr = 8\n"
      "cost_o_3d = 20\n"
      "cost_n = 8\n"
      "cost_m = 8\n"
      "seed = 7   # trailing comment\n");
  CHECK(cfg.temporal_range == 4);
  CHECK(cfg.reference_area == 64.0);
  CHECK(cfg.box_mode == "fixed_mean");
  CHECK(cfg.roi_size == 5);
  CHECK(cfg.fusion_embed_dim == 16);
  CHECK(cfg.include_current_in_normalization);
  CHECK(cfg.beta == 0.65);
  CHECK(cfg.max_age == 3);
  CHECK(cfg.embed_seed == 42);
  CHECK(cfg.margin == 0.3);
  CHECK(cfg.box_jitter_sigma == 1.5);
  CHECK(cfg.boundary_radius == 1);
  CHECK(cfg.miss_probability == 0.05);
  CHECK(cfg.false_positive_rate == 0.25);
  CHECK(cfg.embedding_noise_sigma == 0.1);
  CHECK(cfg.feature_noise_sigma == 2.0);
  CHECK(cfg.flow_noise_growth == 0.75);
  CHECK(cfg.cost_o_fm == 100.0);
  CHECK(cfg.cost_o_3d == 20.0);
  CHECK(cfg.cost_n == 8);
  CHECK(cfg.seed == 7);

  const PipelineParams p = cfg.pipeline_params();
  CHECK(p.box_mode == BoxFusionMode::fixed_mean);
  CHECK(p.include_current_in_normalization);
  const PerturbationModel pm = cfg.perturbation_model();
  CHECK(pm.miss_probability == 0.05);
  const FeedNoise fn = cfg.feed_noise();
  CHECK(fn.feature_sigma == 2.0);
  CHECK(fn.flow_sigma_growth == 0.75);
  const CostModel cm = cfg.cost_model();
  CHECK(cm.o_fl == 5.0);
  CHECK(cm.m == 8);
}

TEST_CASE("parse_config error reporting") {
  auto expect_line = [](const std::string& text, std::size_t line) {
    try {
      parse_text(text);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("bogus_key = 1\n", 1);
  expect_line("beta = 0.5\nroi_size = seven\n", 2);
  expect_line("beta = maybe\n", 1);
  expect_line("include_current_in_normalization = yes\n", 1);
  expect_line("box_mode = diagonal\n", 1);
  expect_line("temporal_range 8\n", 1);  // missing '='
  expect_line("beta = 0.5\n\n# fine\nmax_age = two\n", 4);
}

TEST_CASE("box_mode strings map to the enum") {
  CHECK(parse_text("box_mode = adaptive\n").pipeline_params().box_mode ==
        BoxFusionMode::adaptive);
  CHECK(parse_text("box_mode = fixed_mean\n").pipeline_params().box_mode ==
        BoxFusionMode::fixed_mean);
  CHECK(parse_text("box_mode = detection_only\n").pipeline_params().box_mode ==
        BoxFusionMode::detection_only);
  RunConfig manual;
  manual.box_mode = "nonsense";
  CHECK_THROWS_AS(manual.pipeline_params(), Error);
}

TEST_CASE("cli synth is deterministic and self-consistent") {
  const fs::path dir_a = fresh_dir("synth_a");
  const fs::path dir_b = fresh_dir("synth_b");
  const std::string common = "synth --seed 5 --frames 6 --objects 3 --out-dir ";
  const CliResult a = run_cli(common + dir_a.string());
  const CliResult b = run_cli(common + dir_b.string());
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp(dir_a / "gt.txt") == slurp(dir_b / "gt.txt"));
  CHECK(slurp(dir_a / "detections.txt") == slurp(dir_b / "detections.txt"));
  CHECK(!slurp(dir_a / "gt.txt").empty());

  // different seed, different bytes
  const fs::path dir_c = fresh_dir("synth_c");
  run_cli("synth --seed 6 --frames 6 --objects 3 --out-dir " + dir_c.string());
  CHECK(slurp(dir_a / "gt.txt") != slurp(dir_c / "gt.txt"));

  // the exported files parse and re-serialize byte-identically
  const auto frames = parse_annotation_file((dir_a / "gt.txt").string());
  const fs::path rewritten = dir_a / "rewritten.txt";
  write_annotation_file(rewritten.string(), frames);
  CHECK(slurp(rewritten) == slurp(dir_a / "gt.txt"));
}

TEST_CASE("cli eval scores ground truth against itself perfectly") {
  const fs::path dir = fresh_dir("eval");
  REQUIRE(run_cli("synth --seed 9 --frames 5 --objects 4 --out-dir " +
                  dir.string())
              .exit_code == 0);
  const std::string gt = (dir / "gt.txt").string();
  const CliResult r = run_cli("eval --gt " + gt + " --pred " + gt);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("1.0000") != std::string::npos);
  CHECK(r.output.find("car") != std::string::npos);

  // CSV export
  const fs::path csv = dir / "scores.csv";
  REQUIRE(run_cli("eval --gt " + gt + " --pred " + gt + " --csv " +
                  csv.string())
              .exit_code == 0);
  const std::string csv_text = slurp(csv);
  CHECK(csv_text.find("class,smotsa,motsa,motsp,ids,tp,fp,fn,gt_total") == 0);
  CHECK(csv_text.find("1.0000") != std::string::npos);
}

TEST_CASE("cli track produces a perfect summary on clean input") {
  const fs::path dir = fresh_dir("track");
  REQUIRE(run_cli("synth --seed 3 --frames 6 --objects 3 --out-dir " +
                  dir.string())
              .exit_code == 0);
  const fs::path results = dir / "results.txt";
  const CliResult r = run_cli("track --detections " +
                              (dir / "detections.txt").string() + " --gt " +
                              (dir / "gt.txt").string() + " --out " +
                              results.string());
  REQUIRE(r.exit_code == 0);

  const nlohmann::json summary = nlohmann::json::parse(r.output);
  CHECK(summary.at("frames").get<int>() == 6);
  CHECK(summary.at("dropped_detections").get<int>() == 0);
  for (const auto& [cls, metrics] : summary.at("metrics").items()) {
    CHECK(metrics.at("smotsa").get<double>() == 1.0);
    CHECK(metrics.at("motsa").get<double>() == 1.0);
    CHECK(metrics.at("motsp").get<double>() == 1.0);
    CHECK(metrics.at("ids").get<long>() == 0);
  }

  // the results file scores perfectly against gt via eval as well
  const CliResult ev = run_cli("eval --gt " + (dir / "gt.txt").string() +
                               " --pred " + results.string());
  CHECK(ev.exit_code == 0);
  CHECK(ev.output.find("1.0000") != std::string::npos);

  // summary file matches stdout when requested
  const fs::path summary_path = dir / "summary.json";
  const CliResult r2 = run_cli("track --detections " +
                               (dir / "detections.txt").string() + " --gt " +
                               (dir / "gt.txt").string() + " --summary " +
                               summary_path.string());
  REQUIRE(r2.exit_code == 0);
  const nlohmann::json from_file =
      nlohmann::json::parse(slurp(summary_path));
  CHECK(from_file.at("metrics") == summary.at("metrics"));
}

TEST_CASE("cli track honors config overrides") {
  const fs::path dir = fresh_dir("track_cfg");
  REQUIRE(run_cli("synth --seed 4 --frames 5 --objects 2 --out-dir " +
                  dir.string())
              .exit_code == 0);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "temporal_range = 2\nbox_mode = detection_only\n"
                        "beta = 0.3\n";
  const CliResult r = run_cli("track --detections " +
                              (dir / "detections.txt").string() + " --config " +
                              cfg.string());
  REQUIRE(r.exit_code == 0);
  const nlohmann::json summary = nlohmann::json::parse(r.output);
  CHECK(summary.at("params").at("temporal_range").get<int>() == 2);
  CHECK(summary.at("params").at("box_mode").get<std::string>() ==
        "detection_only");
  CHECK(summary.at("params").at("beta").get<double>() == 0.3);
  CHECK(!summary.contains("metrics"));  // no gt supplied
}

TEST_CASE("cli cost prints the runtime ratio") {
  const fs::path dir = fresh_dir("cost");
  const fs::path cfg = dir / "cost.cfg";
  std::ofstream(cfg) << "cost_o_fm = 100\ncost_o_fl = 5\ncost_o_3d = 20\n"
                        "cost_n = 8\ncost_m = 8\n";
  const CliResult r = run_cli("cost --config " + cfg.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.538461538462") != std::string::npos);
}

TEST_CASE("cli exit codes distinguish usage and data errors") {
  CHECK(run_cli("no_such_command").exit_code == 1);
  CHECK(run_cli("synth").exit_code == 1);  // missing required --out-dir
  CHECK(run_cli("eval --gt /nonexistent.txt --pred /nonexistent.txt")
            .exit_code == 2);
  const fs::path dir = fresh_dir("badfile");
  std::ofstream(dir / "broken.txt") << "0 1001 1 2 2\n";  // five fields
  const CliResult r = run_cli("eval --gt " + (dir / "broken.txt").string() +
                              " --pred " + (dir / "broken.txt").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line 1") != std::string::npos);
}
