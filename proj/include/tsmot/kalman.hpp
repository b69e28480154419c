#pragma once

#include "tsmot/types.hpp"

namespace tsmot::kalman {

/// [x, y, z, theta]; theta wrapped to (-pi, pi].
using Measurement = Eigen::Vector4d;

/// Diagonal noise models. Process noise is a variance rate: it is scaled by
/// |dt| during prediction.
struct NoiseConfig {
  Eigen::VectorXd q_ctrv;   // 7
  Eigen::VectorXd q_cv;     // 8
  Eigen::Vector4d r;        // x, y, z, theta
  Eigen::VectorXd p0_ctrv;  // 7
  Eigen::VectorXd p0_cv;    // 8

  static NoiseConfig defaults();

  const Eigen::VectorXd& q(StateKind kind) const {
    return kind == StateKind::kCtrv ? q_ctrv : q_cv;
  }
  const Eigen::VectorXd& p0(StateKind kind) const {
    return kind == StateKind::kCtrv ? p0_ctrv : p0_cv;
  }

  /// Sizes match the layouts and every entry is > 0. Throws ValidationError.
  void validate() const;
};

/// The 4 x n projection onto [x, y, z, theta].
Eigen::MatrixXd measurement_jacobian(StateKind kind);

Measurement measurement_model(const TrackState& state);

Measurement to_measurement(const Detection& det);

/// z - h with the heading component wrapped. When the wrapped heading
/// difference exceeds pi/2 the measured heading is treated as flipped by pi.
Measurement innovation(const Measurement& z, const Measurement& predicted);

/// S = H P H^T + R. Throws NumericalError when S is not safely invertible
/// (condition number above 1e12).
Eigen::Matrix4d innovation_covariance(const TrackState& state, const NoiseConfig& noise);

/// Mean via motion::propagate, covariance P <- F P F^T + Q |h| per sub-step.
TrackState ekf_predict(const TrackState& state, double dt, const NoiseConfig& noise);

/// Joseph-form EKF correction with a [x, y, z, theta] measurement.
TrackState ekf_update(const TrackState& state, const Measurement& z, const NoiseConfig& noise);

/// Birth state from a detection: pose from the box, all rates zero, P = P0.
TrackState initial_state(const Detection& det, StateKind kind, const NoiseConfig& noise);

}  // namespace tsmot::kalman
