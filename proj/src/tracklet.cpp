#include "tsmot/tracklet.hpp"

#include <algorithm>

namespace tsmot {
namespace {

void push_size(std::deque<Vec3>& window, const Vec3& size, int size_window) {
  window.push_back(size);
  while (static_cast<int>(window.size()) > size_window) window.pop_front();
}

void extend_history(Tracklet& t, FrameIndex frame) {
  if (frame <= t.last_frame && !t.match_history.empty()) {
    throw ValidationError("tracklet: frames must be strictly increasing");
  }
  const auto span = static_cast<std::size_t>(frame - t.start_frame + 1);
  t.match_history.resize(span, false);
  t.last_frame = frame;
}

}  // namespace

Tracklet Tracklet::born(TrackId id, const Detection& det, TrackState state, int size_window) {
  Tracklet t;
  t.id = id;
  t.label = det.label;
  t.category = det.category;
  t.start_frame = det.frame_index;
  t.end_frame = det.frame_index;
  t.last_frame = det.frame_index;
  t.match_history = {true};
  t.match_similarities = {1.0};
  t.states.push_back(std::move(state));
  t.state_frames.push_back(det.frame_index);
  t.first_size = det.size;
  push_size(t.sizes, det.size, size_window);
  t.confidence = 1.0;
  t.last_score = det.score;
  return t;
}

void Tracklet::add_match(FrameIndex frame, TrackState posterior, const Detection& det,
                         double similarity, int size_window) {
  extend_history(*this, frame);
  match_history.back() = true;
  match_similarities.push_back(similarity);
  states.push_back(std::move(posterior));
  state_frames.push_back(frame);
  end_frame = frame;
  category = det.category;
  last_score = det.score;
  push_size(sizes, det.size, size_window);
}

void Tracklet::add_miss(FrameIndex frame) { extend_history(*this, frame); }

void Tracklet::merge(const Tracklet& other, int size_window) {
  const bool other_earlier = other.start_frame < start_frame;
  const Tracklet& early = other_earlier ? other : *this;
  const Tracklet& late = other_earlier ? *this : other;

  const FrameIndex lo = std::min(start_frame, other.start_frame);
  const FrameIndex hi = std::max(last_frame, other.last_frame);
  std::vector<bool> history(static_cast<std::size_t>(hi - lo + 1), false);
  for (const Tracklet* t : {static_cast<const Tracklet*>(this), &other}) {
    for (std::size_t i = 0; i < t->match_history.size(); ++i) {
      if (t->match_history[i]) history[static_cast<std::size_t>(t->start_frame - lo) + i] = true;
    }
  }

  std::vector<std::pair<FrameIndex, TrackState>> all;
  for (const Tracklet* t : {&early, &late}) {
    for (std::size_t i = 0; i < t->states.size(); ++i) all.emplace_back(t->state_frames[i], t->states[i]);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::deque<Vec3> window = early.sizes;
  for (const Vec3& s : late.sizes) push_size(window, s, size_window);

  std::vector<double> sims = early.match_similarities;
  sims.insert(sims.end(), late.match_similarities.begin(), late.match_similarities.end());

  const bool other_ends_later = other.end_frame > end_frame;
  if (other_ends_later) {
    category = other.category;
    last_score = other.last_score;
    label = other.label;
  }
  first_size = early.first_size;
  end_frame = std::max(end_frame, other.end_frame);
  start_frame = lo;
  last_frame = hi;
  match_history = std::move(history);
  match_similarities = std::move(sims);
  sizes = std::move(window);
  states.clear();
  state_frames.clear();
  for (auto& [f, s] : all) {
    state_frames.push_back(f);
    states.push_back(std::move(s));
  }
}

Vec3 average_size(const Tracklet& t) {
  if (t.sizes.empty()) throw ValidationError("average_size: empty size window");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& s : t.sizes) sum += s;
  return sum / static_cast<double>(t.sizes.size());
}

}  // namespace tsmot
