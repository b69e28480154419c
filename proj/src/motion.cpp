#include "tsmot/motion.hpp"

#include <cmath>

namespace tsmot::motion {
namespace {

void require_finite(double dt) {
  if (!std::isfinite(dt)) throw ValidationError("motion: non-finite dt");
}

void require_kind(const TrackState& s, StateKind kind, const char* what) {
  if (s.kind != kind || s.mean.size() != state_dim(kind)) {
    throw ValidationError(std::string(what) + ": wrong state layout");
  }
}

}  // namespace

TrackState predict_ctrv(const TrackState& state, double dt) {
  require_kind(state, StateKind::kCtrv, "predict_ctrv");
  require_finite(dt);

  TrackState out = state;
  Eigen::VectorXd& x = out.mean;
  const double theta = state.mean(idx::kHeading);
  const double v = state.mean(ctrv::kSpeed);
  const double w = state.mean(ctrv::kTurnRate);
  const double vz = state.mean(ctrv::kVz);

  if (std::abs(w) > kTurningRateEpsilon) {
    const double theta_next = theta + w * dt;
    x(idx::kX) += v / w * (std::sin(theta_next) - std::sin(theta));
    x(idx::kY) += v / w * (-std::cos(theta_next) + std::cos(theta));
  } else {
    x(idx::kX) += v * std::cos(theta) * dt;
    x(idx::kY) += v * std::sin(theta) * dt;
  }
  x(idx::kZ) += vz * dt;
  x(idx::kHeading) = wrap_angle(theta + w * dt);
  out.timestamp = state.timestamp + dt;
  return out;
}

TrackState predict_cv(const TrackState& state, double dt) {
  require_kind(state, StateKind::kCv, "predict_cv");
  require_finite(dt);

  TrackState out = state;
  Eigen::VectorXd& x = out.mean;
  x(idx::kX) += state.mean(cv::kVx) * dt;
  x(idx::kY) += state.mean(cv::kVy) * dt;
  x(idx::kZ) += state.mean(cv::kVz) * dt;
  x(idx::kHeading) = wrap_angle(state.mean(idx::kHeading) + state.mean(cv::kTurnRate) * dt);
  out.timestamp = state.timestamp + dt;
  return out;
}

Eigen::MatrixXd jacobian(const TrackState& state, double dt) {
  require_finite(dt);
  const int n = state.dim();
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(n, n);

  if (state.kind == StateKind::kCv) {
    f(idx::kX, cv::kVx) = dt;
    f(idx::kY, cv::kVy) = dt;
    f(idx::kZ, cv::kVz) = dt;
    f(idx::kHeading, cv::kTurnRate) = dt;
    return f;
  }

  const double theta = state.mean(idx::kHeading);
  const double v = state.mean(ctrv::kSpeed);
  const double w = state.mean(ctrv::kTurnRate);
  const double s0 = std::sin(theta);
  const double c0 = std::cos(theta);

  if (std::abs(w) > kTurningRateEpsilon) {
    const double s1 = std::sin(theta + w * dt);
    const double c1 = std::cos(theta + w * dt);
    f(idx::kX, idx::kHeading) = v / w * (c1 - c0);
    f(idx::kX, ctrv::kSpeed) = (s1 - s0) / w;
    f(idx::kX, ctrv::kTurnRate) = v * dt * c1 / w - v * (s1 - s0) / (w * w);
    f(idx::kY, idx::kHeading) = v / w * (s1 - s0);
    f(idx::kY, ctrv::kSpeed) = (c0 - c1) / w;
    f(idx::kY, ctrv::kTurnRate) = v * dt * s1 / w - v * (c0 - c1) / (w * w);
  } else {
    f(idx::kX, idx::kHeading) = -v * dt * s0;
    f(idx::kX, ctrv::kSpeed) = dt * c0;
    f(idx::kX, ctrv::kTurnRate) = -0.5 * v * dt * dt * s0;
    f(idx::kY, idx::kHeading) = v * dt * c0;
    f(idx::kY, ctrv::kSpeed) = dt * s0;
    f(idx::kY, ctrv::kTurnRate) = 0.5 * v * dt * dt * c0;
  }
  f(idx::kZ, ctrv::kVz) = dt;
  f(idx::kHeading, ctrv::kTurnRate) = dt;
  return f;
}

TrackState propagate(const TrackState& state, double dt) {
  require_finite(dt);
  TrackState out = state;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(dt) / kMaxStep)));
  const double h = dt / steps;
  for (int i = 0; i < steps; ++i) {
    out = out.kind == StateKind::kCtrv ? predict_ctrv(out, h) : predict_cv(out, h);
  }
  out.timestamp = state.timestamp + dt;
  return out;
}

}  // namespace tsmot::motion
