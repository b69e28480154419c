#pragma once

#include "tsmot/kalman.hpp"
#include "tsmot/tracklet.hpp"

namespace tsmot::affinity {

/// Larger is more similar. position <= 0 is a negated squared Mahalanobis
/// distance, size lies in (-1, 0].
struct AffinityScore {
  double position = 0.0;
  double size = 0.0;
  double total = 0.0;

  static AffinityScore of(double position, double size) { return {position, size, position + size}; }
};

/// nu^T S^-1 nu.
double mahalanobis_sq(const kalman::Measurement& nu, const Eigen::Matrix4d& s);

/// -(h(x) - z)^T S^-1 (h(x) - z) for an already propagated state.
double position_affinity(const TrackState& predicted, const kalman::Measurement& z,
                         const kalman::NoiseConfig& noise);

/// Last state of `t` propagated to the detection time, compared with the
/// detection pose. Requires det.frame_index >= t.end_frame.
double position_affinity_td(const Tracklet& t, const Detection& det,
                            const kalman::NoiseConfig& noise);

/// Forward term (end of `earlier` propagated to the start of `later`) plus
/// backward term (start of `later` propagated back to the end of `earlier`).
/// Requires 1 <= later.start_frame - earlier.end_frame <= max_link_gap;
/// throws ValidationError otherwise.
double position_affinity_tt(const Tracklet& earlier, const Tracklet& later,
                            const kalman::NoiseConfig& noise, int max_link_gap);

/// -prod_k |a_k - b_k| / (a_k + b_k) over w, l, h. Throws ValidationError for
/// non-positive sizes.
double size_affinity(const Vec3& a, const Vec3& b);

/// Tracklet-to-detection affinity; size uses the tracklet's averaged size.
AffinityScore affinity_td(const Tracklet& t, const TrackState& predicted, const Detection& det,
                          const kalman::NoiseConfig& noise, bool use_size);

/// Tracklet-to-tracklet affinity; size compares the end of `earlier` with the
/// first box of `later`.
AffinityScore affinity_tt(const Tracklet& earlier, const Tracklet& later,
                          const kalman::NoiseConfig& noise, int max_link_gap, bool use_size);

/// exp(position_affinity / gate_position), in (0, 1].
double similarity_for_confidence(double position_affinity, double gate_position);

/// mean(match similarities) * exp(-beta * W / L), W = now - t_s - L + 1.
double tracklet_confidence(const Tracklet& t, FrameIndex now, double beta);

}  // namespace tsmot::affinity
