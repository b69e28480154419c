#include "tsmot/tracker.hpp"

#include "tsmot/motion.hpp"

#include <unordered_map>

namespace tsmot {

TrackerEngine::TrackerEngine(TrackerConfig config) : config_(std::move(config)) {
  config_.validate();
}

FrameOutput TrackerEngine::step(FrameIndex frame, double timestamp,
                                std::vector<Detection> detections) {
  if (frame_ && (frame <= *frame_ || !(timestamp > timestamp_))) {
    throw ValidationError("tracker: frame index and timestamp must increase (got frame " +
                          std::to_string(frame) + " after " + std::to_string(*frame_) + ")");
  }
  for (Detection& d : detections) {
    d.frame_index = frame;
    d.timestamp = timestamp;
    d.validate_and_normalize();
  }

  // Split on the confidence reached at the end of the previous frame.
  std::vector<const Tracklet*> high_tracks;
  std::vector<const Tracklet*> low_tracks;
  for (const auto& [id, t] : tracklets_) {
    const bool high = !config_.global_only && t.confidence > config_.tau_c;
    (high ? high_tracks : low_tracks).push_back(&t);
  }
  const auto high = association::make_candidates(high_tracks, timestamp, config_.noise);
  const auto low = association::make_candidates(low_tracks, timestamp, config_.noise);
  std::unordered_map<TrackId, const TrackState*> predicted;
  for (const auto* group : {&high, &low}) {
    for (const auto& c : *group) predicted.emplace(c.tracklet->id, &c.predicted);
  }

  last_outcome_ = association::associate(high, low, detections, config_);
  const auto& outcome = last_outcome_;

  // State and size updates.
  std::unordered_map<TrackId, bool> matched;
  auto apply = [&](const association::Match& m) {
    Tracklet& t = tracklets_.at(m.track);
    const Detection& det = detections[m.detection];
    TrackState posterior =
        kalman::ekf_update(*predicted.at(m.track), kalman::to_measurement(det), config_.noise);
    const double sim = affinity::similarity_for_confidence(m.position_affinity, config_.gate_position);
    t.add_match(frame, std::move(posterior), det, sim, config_.size_window);
    matched[m.track] = true;
  };
  for (const auto& m : outcome.local_matches) apply(m);
  for (const auto& m : outcome.global_matches) apply(m);
  for (auto& [id, t] : tracklets_) {
    if (!matched.contains(id)) t.add_miss(frame);
  }

  for (const auto& link : outcome.links) {
    // Extended by a detection this frame: the histories would overlap.
    if (matched.contains(link.low)) continue;
    Tracklet& keep = tracklets_.at(link.high);
    keep.merge(tracklets_.at(link.low), config_.size_window);
    tracklets_.erase(link.low);
    ++stats_.linked;
  }
  for (TrackId id : outcome.terminations) {
    tracklets_.erase(id);
    ++stats_.terminated;
  }

  for (std::size_t j : outcome.unmatched_detections) {
    const Detection& det = detections[j];
    const StateKind kind = config_.state_kind(det.label);
    const TrackId id = next_id_++;
    tracklets_.emplace(id, Tracklet::born(id, det, kalman::initial_state(det, kind, config_.noise),
                                          config_.size_window));
    ++stats_.created;
  }

  for (auto it = tracklets_.begin(); it != tracklets_.end();) {
    if (it->second.misses() > config_.max_miss_frames) {
      it = tracklets_.erase(it);
      ++stats_.deleted;
    } else {
      ++it;
    }
  }

  FrameOutput out;
  out.frame_index = frame;
  out.timestamp = timestamp;
  for (auto& [id, t] : tracklets_) {
    t.confidence = affinity::tracklet_confidence(t, frame, config_.beta);
    const FrameIndex misses = t.misses();
    if (misses > config_.coast_frames) continue;

    TrackOutput o;
    o.id = id;
    o.size = average_size(t);
    o.category = t.category;
    o.score = t.last_score * t.confidence;
    if (misses == 0) {
      o.center = t.last_state().position();
      o.heading = t.last_state().heading();
    } else {
      const TrackState& last = t.last_state();
      const TrackState coast = motion::propagate(last, timestamp - last.timestamp);
      o.center = coast.position();
      o.heading = coast.heading();
      o.score *= config_.coast_score_factor;
      o.coasting = true;
    }
    out.tracks.push_back(std::move(o));
  }

  frame_ = frame;
  timestamp_ = timestamp;
  return out;
}

}  // namespace tsmot
