#include "tsmot/affinity.hpp"

#include <cmath>
#include <numeric>

namespace tsmot::affinity {

double mahalanobis_sq(const kalman::Measurement& nu, const Eigen::Matrix4d& s) {
  return nu.dot(s.ldlt().solve(nu));
}

double position_affinity(const TrackState& predicted, const kalman::Measurement& z,
                         const kalman::NoiseConfig& noise) {
  const Eigen::Matrix4d s = kalman::innovation_covariance(predicted, noise);
  const kalman::Measurement nu = kalman::innovation(z, kalman::measurement_model(predicted));
  return -mahalanobis_sq(nu, s);
}

double position_affinity_td(const Tracklet& t, const Detection& det,
                            const kalman::NoiseConfig& noise) {
  if (t.states.empty()) throw ValidationError("position_affinity_td: tracklet has no state");
  if (det.frame_index < t.end_frame) {
    throw ValidationError("position_affinity_td: detection precedes the tracklet end");
  }
  const TrackState& last = t.last_state();
  const TrackState predicted = kalman::ekf_predict(last, det.timestamp - last.timestamp, noise);
  return position_affinity(predicted, kalman::to_measurement(det), noise);
}

double position_affinity_tt(const Tracklet& earlier, const Tracklet& later,
                            const kalman::NoiseConfig& noise, int max_link_gap) {
  if (earlier.states.empty() || later.states.empty()) {
    throw ValidationError("position_affinity_tt: tracklet has no state");
  }
  const FrameIndex gap = later.start_frame - earlier.end_frame;
  if (gap < 1 || gap > max_link_gap) {
    throw ValidationError("position_affinity_tt: later tracklet must start 1.." +
                          std::to_string(max_link_gap) + " frames after the earlier one ends");
  }
  const TrackState& end = earlier.last_state();
  const TrackState& start = later.first_state();
  const double dt = start.timestamp - end.timestamp;

  const TrackState forward = kalman::ekf_predict(end, dt, noise);
  const TrackState backward = kalman::ekf_predict(start, -dt, noise);
  return position_affinity(forward, kalman::measurement_model(start), noise) +
         position_affinity(backward, kalman::measurement_model(end), noise);
}

double size_affinity(const Vec3& a, const Vec3& b) {
  if ((a.array() <= 0.0).any() || (b.array() <= 0.0).any()) {
    throw ValidationError("size_affinity: sizes must be > 0");
  }
  double prod = 1.0;
  for (int k = 0; k < 3; ++k) prod *= std::abs(a(k) - b(k)) / (a(k) + b(k));
  return -prod;
}

AffinityScore affinity_td(const Tracklet& t, const TrackState& predicted, const Detection& det,
                          const kalman::NoiseConfig& noise, bool use_size) {
  const double pos = position_affinity(predicted, kalman::to_measurement(det), noise);
  const double size = use_size ? size_affinity(average_size(t), det.size) : 0.0;
  return AffinityScore::of(pos, size);
}

AffinityScore affinity_tt(const Tracklet& earlier, const Tracklet& later,
                          const kalman::NoiseConfig& noise, int max_link_gap, bool use_size) {
  const double pos = position_affinity_tt(earlier, later, noise, max_link_gap);
  const double size = use_size ? size_affinity(average_size(earlier), later.first_size) : 0.0;
  return AffinityScore::of(pos, size);
}

double similarity_for_confidence(double position_affinity, double gate_position) {
  return std::exp(position_affinity / gate_position);
}

double tracklet_confidence(const Tracklet& t, FrameIndex now, double beta) {
  const int matched = t.match_count();
  if (matched < 1) throw ValidationError("tracklet_confidence: tracklet was never matched");
  if (now < t.end_frame) throw ValidationError("tracklet_confidence: now precedes the last match");
  const double mean = std::accumulate(t.match_similarities.begin(), t.match_similarities.end(), 0.0) /
                      matched;
  const double undetected = static_cast<double>(now - t.start_frame - matched + 1);
  return mean * std::exp(-beta * undetected / matched);
}

}  // namespace tsmot::affinity
