#pragma once

#include "tsmot/types.hpp"

#include <deque>
#include <string>
#include <vector>

namespace tsmot {

/// One hypothesized object: posterior states at every associated frame plus
/// the bookkeeping the confidence score needs.
struct Tracklet {
  TrackId id = 0;
  ClassLabel label = ClassLabel::kCarLike;
  std::string category;

  std::vector<TrackState> states;     // posterior at each matched frame, time-ordered
  std::vector<FrameIndex> state_frames;

  std::deque<Vec3> sizes;             // last `size_window` associated box sizes
  Vec3 first_size = Vec3::Ones();

  FrameIndex start_frame = 0;         // t_s
  FrameIndex end_frame = 0;           // t_e, last association
  FrameIndex last_frame = 0;          // last processed frame
  std::vector<bool> match_history;    // one flag per frame in [t_s, last_frame]
  std::vector<double> match_similarities;  // in (0, 1], one per matched frame

  double confidence = 1.0;
  double last_score = 0.0;

  const TrackState& first_state() const { return states.front(); }
  const TrackState& last_state() const { return states.back(); }

  /// Processed frames since the last association.
  FrameIndex misses() const { return last_frame - end_frame; }

  /// Number of matched frames (L).
  int match_count() const { return static_cast<int>(match_similarities.size()); }

  /// Starts a tracklet from its first associated detection.
  static Tracklet born(TrackId id, const Detection& det, TrackState state, int size_window);

  /// Records an association at `frame`.
  void add_match(FrameIndex frame, TrackState posterior, const Detection& det, double similarity,
                 int size_window);

  /// Records a processed frame without association.
  void add_miss(FrameIndex frame);

  /// Absorbs `other` (disjoint in time) into this tracklet: histories,
  /// states and sizes are merged chronologically; id is kept.
  void merge(const Tracklet& other, int size_window);
};

/// Component-wise mean of the size window. Throws ValidationError if empty.
Vec3 average_size(const Tracklet& t);

}  // namespace tsmot
