// tsmot: command-line front end.
//
//   tsmot track --input dets.jsonl [--input more.jsonl] --output tracks.jsonl
//               [--config cfg.json] [--solver greedy|hungarian] [--ablation name]
//   tsmot eval  --gt gt.jsonl --input tracks.jsonl --output report.json [--config cfg.json]
//   tsmot sim   --input suite.json --output out_dir
//
// Exit status: 0 success, 1 validation error, 2 internal error.
// TSMOT_LOG=quiet|info|debug controls stderr verbosity (default info).

#include "tsmot/io.hpp"
#include "tsmot/metrics.hpp"
#include "tsmot/sim.hpp"
#include "tsmot/tracker.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace tsmot;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* env = std::getenv("TSMOT_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string v = env;
  if (v == "quiet") return LogLevel::kQuiet;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

void log(LogLevel level, const std::string& msg) {
  if (level <= log_level()) std::cerr << msg << '\n';
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  return out;
}

TrackerConfig make_config(const std::string& config_path, const std::string& solver,
                          const std::string& ablation) {
  TrackerConfig config = config_path.empty() ? TrackerConfig{} : io::load_config(config_path);
  if (!ablation.empty()) config.apply_ablation(ablation);
  if (!solver.empty()) config.solver = parse_solver(solver);
  config.validate();
  return config;
}

struct SceneResult {
  std::string scene_id;
  std::vector<FrameOutput> frames;
  TrackerStats stats;
};

SceneResult track_scene(const io::SceneLog<DetectionFrame>& scene, const TrackerConfig& config) {
  TrackerEngine engine(config);
  SceneResult r{scene.scene_id, {}, {}};
  for (const DetectionFrame& f : scene.frames) {
    r.frames.push_back(engine.step(f.frame_index, f.timestamp, f.detections));
  }
  r.stats = engine.stats();
  return r;
}

int run_track(const std::vector<std::string>& inputs, const std::string& output,
              const TrackerConfig& config) {
  io::DetectionLog scenes;
  for (const auto& in : inputs) {
    io::DetectionLog part = io::read_detection_log(fs::path(in), config.class_map);
    for (auto& s : part) {
      for (const auto& existing : scenes) {
        if (existing.scene_id == s.scene_id) {
          throw ValidationError("scene '" + s.scene_id + "' appears in more than one input");
        }
      }
      scenes.push_back(std::move(s));
    }
  }

  // Scenes are independent; results are written in input order.
  std::vector<std::future<SceneResult>> jobs;
  for (const auto& s : scenes) {
    jobs.push_back(std::async(std::launch::async, track_scene, std::cref(s), std::cref(config)));
  }
  auto out = open_out(output);
  TrackerStats total;
  for (auto& job : jobs) {
    const SceneResult r = job.get();
    for (const FrameOutput& f : r.frames) io::write_track_frame(out, r.scene_id, f);
    total.created += r.stats.created;
    total.linked += r.stats.linked;
    total.terminated += r.stats.terminated;
    total.deleted += r.stats.deleted;
    log(LogLevel::kDebug, "scene " + r.scene_id + ": " + std::to_string(r.frames.size()) +
                              " frames, " + std::to_string(r.stats.created) + " tracklets");
  }
  std::cout << "scenes " << scenes.size() << "  created " << total.created << "  linked "
            << total.linked << "  terminated " << total.terminated << "  deleted "
            << total.deleted << '\n';
  return 0;
}

int run_eval(const std::vector<std::string>& gt_paths, const std::vector<std::string>& track_paths,
             const std::string& output, const TrackerConfig& config) {
  io::GroundTruthLog gt;
  for (const auto& p : gt_paths) {
    auto part = io::read_ground_truth_log(fs::path(p));
    gt.insert(gt.end(), part.begin(), part.end());
  }
  io::TrackLog tracks;
  for (const auto& p : track_paths) {
    auto part = io::read_track_log(fs::path(p));
    tracks.insert(tracks.end(), part.begin(), part.end());
  }
  const auto scenes = io::align_scenes(gt, tracks);
  const metrics::MotReport report =
      metrics::evaluate(scenes, config.match_distance, config.amota_recall_steps);
  const std::string table = metrics::format_table({{"tsmot", report}});

  {
    auto out = open_out(output);
    out << io::report_to_json(report).dump(2) << '\n';
  }
  fs::path text_path = output;
  text_path.replace_extension(".txt");
  {
    auto out = open_out(text_path);
    out << table;
  }
  std::cout << table;
  return 0;
}

int run_sim(const std::string& input, const std::string& output_dir, const ClassMap& class_map) {
  const auto specs = io::load_scenarios(input);
  const fs::path dir(output_dir);
  fs::create_directories(dir);
  for (const auto& spec : specs) {
    const sim::Scenario s = sim::generate(spec, class_map);
    auto det_out = open_out(dir / (s.scene_id + ".detections.jsonl"));
    for (const auto& f : s.frames) io::write_detection_frame(det_out, s.scene_id, f);
    auto gt_out = open_out(dir / (s.scene_id + ".gt.jsonl"));
    for (const auto& f : s.gt) io::write_ground_truth_frame(gt_out, s.scene_id, f);
    log(LogLevel::kDebug, "wrote scene " + s.scene_id);
  }
  std::cout << "wrote " << specs.size() << " scenario(s) to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsmot: online 3D multi-object tracking with two-stage association"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::vector<std::string> gts;
  std::string output;
  std::string config_path;
  std::string solver;
  std::string ablation;

  auto* track = app.add_subcommand("track", "track a detection log");
  track->add_option("--input", inputs, "detection log(s), JSON Lines")->required();
  track->add_option("--output", output, "track log to write")->required();
  track->add_option("--config", config_path, "tracker config (JSON)");
  track->add_option("--solver", solver, "greedy or hungarian");
  track->add_option("--ablation", ablation,
                    "default, hungarian, no_reid, global_only, cv_only, no_size");

  auto* eval = app.add_subcommand("eval", "evaluate a track log against ground truth");
  eval->add_option("--gt", gts, "ground-truth log(s)")->required();
  eval->add_option("--input", inputs, "track log(s)")->required();
  eval->add_option("--output", output, "report JSON; a .txt table is written alongside")
      ->required();
  eval->add_option("--config", config_path, "config (match_distance, amota_recall_steps)");

  auto* simulate = app.add_subcommand("sim", "generate synthetic scenes");
  simulate->add_option("--input", inputs, "scenario spec (JSON)")->required()->expected(1);
  simulate->add_option("--output", output, "output directory")->required();
  simulate->add_option("--config", config_path, "config (class_map)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const TrackerConfig config = make_config(config_path, solver, ablation);
    if (*track) return run_track(inputs, output, config);
    if (*eval) return run_eval(gts, inputs, output, config);
    if (*simulate) return run_sim(inputs.front(), output, config.class_map);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
