#pragma once

#include "tsmot/kalman.hpp"
#include "tsmot/types.hpp"

#include <string>

namespace tsmot {

enum class Solver { kHungarian, kGreedy };

Solver parse_solver(const std::string& name);
const char* to_string(Solver solver);

/// Every tunable of the tracker and the evaluator.
struct TrackerConfig {
  double beta = 1.0;              // miss-decay rate of the tracklet confidence
  double tau_c = 0.5;             // high/low confidence split
  double gate_position = 9.488;   // squared Mahalanobis, chi-square 95% at 4 dof
  int max_miss_frames = 5;
  int max_link_gap = 10;
  int size_window = 3;
  Solver solver = Solver::kGreedy;
  kalman::NoiseConfig noise = kalman::NoiseConfig::defaults();
  ClassMap class_map = default_class_map();

  // Ablation switches.
  bool enable_linking = true;        // tracklet-to-tracklet block of the global stage
  bool global_only = false;          // skip the local stage; every tracklet is "low"
  bool cv_only = false;              // constant velocity for car-like objects too
  bool use_size_affinity = true;

  // Output policy.
  int coast_frames = 1;
  double coast_score_factor = 0.5;

  // Evaluation.
  int amota_recall_steps = 40;
  double match_distance = 2.0;       // [m], ground plane

  /// Cost threshold of the greedy solver: pairs costlier than the position
  /// gate are never selected.
  double greedy_threshold() const { return gate_position; }

  StateKind state_kind(ClassLabel label) const {
    return (label == ClassLabel::kCarLike && !cv_only) ? StateKind::kCtrv : StateKind::kCv;
  }

  /// Throws ValidationError naming the offending field.
  void validate() const;

  /// Applies a named ablation: "default", "hungarian", "no_reid",
  /// "global_only", "cv_only", "no_size". Throws ValidationError otherwise.
  void apply_ablation(const std::string& name);
};

}  // namespace tsmot
