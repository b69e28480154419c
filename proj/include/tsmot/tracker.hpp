#pragma once

#include "tsmot/association.hpp"
#include "tsmot/config.hpp"
#include "tsmot/tracklet.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tsmot {

/// Detections of one frame, as read from a log or produced by the simulator.
struct DetectionFrame {
  FrameIndex frame_index = 0;
  double timestamp = 0.0;
  std::vector<Detection> detections;
};

/// One reported box of one frame.
struct TrackOutput {
  TrackId id = 0;
  Vec3 center = Vec3::Zero();
  Vec3 size = Vec3::Ones();
  double heading = 0.0;
  double score = 0.0;
  std::string category;
  bool coasting = false;
};

struct FrameOutput {
  FrameIndex frame_index = 0;
  double timestamp = 0.0;
  std::vector<TrackOutput> tracks;
};

struct TrackerStats {
  std::int64_t created = 0;
  std::int64_t linked = 0;
  std::int64_t terminated = 0;
  std::int64_t deleted = 0;
};

/// Online tracker for a single scene. Frames must arrive in strictly
/// increasing order of both index and timestamp.
class TrackerEngine {
 public:
  explicit TrackerEngine(TrackerConfig config);

  /// Processes one frame and reports the tracks visible in it. Detection
  /// frame index and timestamp are overwritten with the frame's values.
  FrameOutput step(FrameIndex frame, double timestamp, std::vector<Detection> detections);

  const std::map<TrackId, Tracklet>& tracklets() const { return tracklets_; }
  const TrackerStats& stats() const { return stats_; }
  const TrackerConfig& config() const { return config_; }

  /// Association decisions of the most recent frame, detection indices refer
  /// to that frame's detection list.
  const association::AssociationOutcome& last_outcome() const { return last_outcome_; }

 private:
  TrackerConfig config_;
  std::map<TrackId, Tracklet> tracklets_;
  TrackId next_id_ = 1;
  std::optional<FrameIndex> frame_;
  double timestamp_ = 0.0;
  TrackerStats stats_;
  association::AssociationOutcome last_outcome_;
};

}  // namespace tsmot
