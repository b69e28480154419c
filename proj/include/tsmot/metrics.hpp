#pragma once

#include "tsmot/tracker.hpp"
#include "tsmot/types.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace tsmot::metrics {

struct GtBox {
  std::int64_t gt_track_id = 0;
  Vec3 center = Vec3::Zero();
  Vec3 size = Vec3::Ones();
  double heading = 0.0;
  std::string category = "car";
};

struct FrameGroundTruth {
  FrameIndex frame_index = 0;
  double timestamp = 0.0;
  std::vector<GtBox> boxes;
};

/// Ground truth and hypotheses of one scene, frame-aligned.
struct SceneData {
  std::string scene_id;
  std::vector<FrameGroundTruth> gt;
  std::vector<FrameOutput> hyp;
};

/// Raw CLEAR-MOT counts at a single score threshold.
struct MotCounts {
  std::int64_t num_gt = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t ids = 0;
  std::int64_t frag = 0;
  std::int64_t mt = 0;
  std::int64_t ml = 0;
  std::int64_t num_trajectories = 0;
  double distance_sum = 0.0;
  std::vector<double> tp_scores;  // scores of matched hypotheses

  double mota() const;
  /// Mean matched distance; `fallback` when nothing matched.
  double motp(double fallback) const;
  double recall() const;
  /// max(0, 1 - (IDS + FP + FN - (1 - recall) P) / (recall P)).
  double motar() const;

  /// Adds another scene's counts (associative).
  void merge(const MotCounts& other);
};

struct RecallPoint {
  double target_recall = 0.0;
  bool achieved = false;
  double threshold = 0.0;
  double recall = 0.0;
  double mota = 0.0;
  double motar = 0.0;
  double motp = 0.0;
};

struct MotReport {
  MotCounts counts;   // all hypotheses, no score threshold
  double mota = 0.0;
  double motp = 0.0;
  double amota = 0.0;
  double amotp = 0.0;
  std::vector<RecallPoint> curve;
};

/// Frame-by-frame CLEAR-MOT matching on ground-plane center distance:
/// correspondences of the previous frame are kept while still within
/// `match_distance`, the rest are assigned by the Hungarian solver. Only
/// hypotheses with score >= min_score take part. Boxes of different
/// categories never match. Throws ValidationError on misaligned frames.
MotCounts clear_mot(std::span<const SceneData> scenes, double match_distance,
                    double min_score = -std::numeric_limits<double>::infinity());

/// Average MOTAR / MOTP over recall targets k / steps, k = 1..steps. For each
/// target the threshold is the score of the ceil(r P)-th best matched
/// hypothesis of the unthresholded run; unreachable targets score MOTAR 0
/// and MOTP `match_distance`.
MotReport evaluate(std::span<const SceneData> scenes, double match_distance, int recall_steps);

/// Fixed-width table with the columns AMOTA AMOTP MT ML FP FN IDS FRAG.
std::string format_table(const std::vector<std::pair<std::string, MotReport>>& rows);

}  // namespace tsmot::metrics
