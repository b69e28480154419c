#pragma once

#include "tsmot/types.hpp"

namespace tsmot::motion {

/// Below this |theta_dot| [rad/s] CTRV falls back to straight-line motion.
inline constexpr double kTurningRateEpsilon = 1e-4;

/// Longest single step [s]; longer propagations are chained.
inline constexpr double kMaxStep = 1.0;

/// Constant turn rate and velocity prediction of a kCtrv state. Only the mean
/// moves; the covariance is returned untouched.
TrackState predict_ctrv(const TrackState& state, double dt);

/// Constant velocity prediction of a kCv state. Covariance untouched.
TrackState predict_cv(const TrackState& state, double dt);

/// d f / d x of the single-step model at `state`. Exact transition matrix for
/// kCv; for kCtrv below kTurningRateEpsilon this is the theta_dot -> 0 limit
/// of the turning Jacobian.
Eigen::MatrixXd jacobian(const TrackState& state, double dt);

/// Signed-time propagation of the mean, in sub-steps of at most kMaxStep.
/// Negative dt runs the model backwards.
TrackState propagate(const TrackState& state, double dt);

}  // namespace tsmot::motion
