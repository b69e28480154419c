#pragma once

#include "tsmot/config.hpp"
#include "tsmot/metrics.hpp"
#include "tsmot/sim.hpp"
#include "tsmot/tracker.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsmot::io {

using Json = nlohmann::json;

/// All frames of one scene, in input order.
template <typename Frame>
struct SceneLog {
  std::string scene_id;
  std::vector<Frame> frames;
};

using DetectionLog = std::vector<SceneLog<DetectionFrame>>;
using TrackLog = std::vector<SceneLog<FrameOutput>>;
using GroundTruthLog = std::vector<SceneLog<metrics::FrameGroundTruth>>;

// Detection log, one JSON object per line:
//   {"scene_id", "frame_index", "timestamp",
//    "detections": [{"center", "size", "heading", "score", "class"}]}
// Scenes are returned in order of first appearance. Malformed lines raise
// ValidationError naming the line number.
DetectionLog read_detection_log(std::istream& in, const ClassMap& class_map);
DetectionLog read_detection_log(const std::filesystem::path& path, const ClassMap& class_map);
void write_detection_frame(std::ostream& out, const std::string& scene_id,
                           const DetectionFrame& frame);

// Track log: {"scene_id", "frame_index", "tracks": [{"id", "center", "size",
// "heading", "score", "class"}]}
TrackLog read_track_log(std::istream& in);
TrackLog read_track_log(const std::filesystem::path& path);
void write_track_frame(std::ostream& out, const std::string& scene_id, const FrameOutput& frame);

// Ground-truth log: {"scene_id", "frame_index", "timestamp",
//    "boxes": [{"gt_track_id", "center", "size", "heading", "class"}]}
GroundTruthLog read_ground_truth_log(std::istream& in);
GroundTruthLog read_ground_truth_log(const std::filesystem::path& path);
void write_ground_truth_frame(std::ostream& out, const std::string& scene_id,
                              const metrics::FrameGroundTruth& frame);

/// Defaults overridden by whatever keys `j` carries. Unknown keys are
/// rejected. The result is validated.
TrackerConfig config_from_json(const Json& j);
Json config_to_json(const TrackerConfig& config);
TrackerConfig load_config(const std::filesystem::path& path);

sim::ScenarioSpec scenario_from_json(const Json& j);
Json scenario_to_json(const sim::ScenarioSpec& spec);
/// A single scenario object or {"scenarios": [...]}.
std::vector<sim::ScenarioSpec> load_scenarios(const std::filesystem::path& path);

Json report_to_json(const metrics::MotReport& report);

/// Pairs ground truth with tracks by scene id. Throws ValidationError listing
/// every ground-truth scene missing from the tracks.
std::vector<metrics::SceneData> align_scenes(const GroundTruthLog& gt, const TrackLog& tracks);

}  // namespace tsmot::io
