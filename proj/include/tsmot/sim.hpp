#pragma once

#include "tsmot/metrics.hpp"
#include "tsmot/tracker.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsmot::sim {

/// From `frame` on, the object moves with this speed / turn rate. An
/// optional heading is applied instantly at that frame.
struct Segment {
  FrameIndex frame = 0;
  double speed = 0.0;
  double turn_rate = 0.0;
  std::optional<double> heading;
};

/// One ground-truth object. Car-like objects follow CTRV, pedestrians CV
/// along their heading (turn rate ignored).
struct ObjectSpec {
  std::string category = "car";
  FrameIndex start_frame = 0;
  FrameIndex end_frame = -1;  // inclusive; -1 means until the end
  Vec3 center = Vec3::Zero();
  Vec3 size{1.9, 4.5, 1.6};
  double heading = 0.0;
  double speed = 0.0;
  double turn_rate = 0.0;
  double vertical_speed = 0.0;
  std::vector<Segment> segments;
  std::vector<std::pair<FrameIndex, FrameIndex>> dropouts;  // inclusive, no detection
};

struct ScenarioSpec {
  std::string scene_id = "scene";
  std::uint64_t seed = 0;
  int duration = 50;         // frames
  double frame_rate = 10.0;  // Hz
  double position_std = 0.3;
  double heading_std = 0.1;
  double clutter_rate = 0.0;  // expected false detections per frame
  std::array<double, 4> clutter_region{-50.0, 50.0, -50.0, 50.0};  // xmin xmax ymin ymax
  double matched_score_mean = 0.8;
  double matched_score_std = 0.1;
  double clutter_score_mean = 0.3;
  double clutter_score_std = 0.1;
  std::vector<ObjectSpec> objects;

  /// Throws ValidationError (bad rates, dropout outside the duration, ...).
  void validate(const ClassMap& class_map) const;
};

struct Scenario {
  std::string scene_id;
  std::vector<metrics::FrameGroundTruth> gt;
  std::vector<DetectionFrame> frames;
  std::int64_t clutter_count = 0;
};

/// Deterministic for a fixed spec (std::mt19937_64 seeded with spec.seed).
Scenario generate(const ScenarioSpec& spec, const ClassMap& class_map = default_class_map());

/// Same scenario with zero noise, no dropouts and no clutter.
ScenarioSpec noise_free(ScenarioSpec spec);

}  // namespace tsmot::sim
