#include "tsmot/kalman.hpp"

#include "tsmot/motion.hpp"

#include <cmath>
#include <numbers>

namespace tsmot::kalman {
namespace {

constexpr double kMaxCondition = 1e12;

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& p) { return 0.5 * (p + p.transpose()); }

void check_condition(const Eigen::Matrix4d& s) {
  if (!s.allFinite()) throw NumericalError("innovation covariance is not finite");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(s, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > kMaxCondition) {
    throw NumericalError("innovation covariance is singular or ill-conditioned");
  }
}

}  // namespace

NoiseConfig NoiseConfig::defaults() {
  NoiseConfig n;
  // CTRV: x y z theta v theta_dot z_dot
  n.q_ctrv.resize(7);
  n.q_ctrv << 0.01, 0.01, 0.01, 0.01, 0.1, 0.1, 0.1;
  n.p0_ctrv.resize(7);
  n.p0_ctrv << 1.0, 1.0, 1.0, 0.25, 10.0, 10.0, 10.0;
  // CV: x y z theta x_dot y_dot z_dot theta_dot
  n.q_cv.resize(8);
  n.q_cv << 0.01, 0.01, 0.01, 0.01, 0.1, 0.1, 0.1, 0.1;
  n.p0_cv.resize(8);
  n.p0_cv << 1.0, 1.0, 1.0, 0.25, 10.0, 10.0, 10.0, 10.0;
  n.r << 0.25, 0.25, 0.25, 0.04;
  return n;
}

void NoiseConfig::validate() const {
  auto check = [](const Eigen::VectorXd& v, int n, const char* name) {
    if (v.size() != n) {
      throw ValidationError(std::string("noise: ") + name + " must have " + std::to_string(n) +
                            " entries");
    }
    if (!v.allFinite() || (v.array() <= 0.0).any()) {
      throw ValidationError(std::string("noise: ") + name + " entries must be > 0");
    }
  };
  check(q_ctrv, 7, "q_ctrv");
  check(q_cv, 8, "q_cv");
  check(r, 4, "r");
  check(p0_ctrv, 7, "p0_ctrv");
  check(p0_cv, 8, "p0_cv");
}

Eigen::MatrixXd measurement_jacobian(StateKind kind) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, state_dim(kind));
  h.leftCols<4>().setIdentity();
  return h;
}

Measurement measurement_model(const TrackState& state) {
  Measurement z = state.mean.head<4>();
  z(3) = wrap_angle(z(3));
  return z;
}

Measurement to_measurement(const Detection& det) {
  Measurement z;
  z << det.center, wrap_angle(det.heading);
  return z;
}

Measurement innovation(const Measurement& z, const Measurement& predicted) {
  Measurement nu = z - predicted;
  double dtheta = wrap_angle(z(3) - predicted(3));
  if (std::abs(dtheta) > 0.5 * std::numbers::pi) {
    dtheta = wrap_angle(z(3) + std::numbers::pi - predicted(3));
  }
  nu(3) = dtheta;
  return nu;
}

Eigen::Matrix4d innovation_covariance(const TrackState& state, const NoiseConfig& noise) {
  // H only selects the leading 4x4 block.
  Eigen::Matrix4d s = state.covariance.topLeftCorner<4, 4>();
  s = 0.5 * (s + s.transpose());
  s.diagonal() += noise.r;
  check_condition(s);
  return s;
}

TrackState ekf_predict(const TrackState& state, double dt, const NoiseConfig& noise) {
  if (!std::isfinite(dt)) throw ValidationError("ekf_predict: non-finite dt");
  const int steps =
      std::max(1, static_cast<int>(std::ceil(std::abs(dt) / motion::kMaxStep)));
  const double h = dt / steps;
  const Eigen::VectorXd q = noise.q(state.kind);

  TrackState out = state;
  for (int i = 0; i < steps; ++i) {
    const Eigen::MatrixXd f = motion::jacobian(out, h);
    TrackState next = motion::propagate(out, h);
    Eigen::MatrixXd p = f * out.covariance * f.transpose();
    p.diagonal() += q * std::abs(h);
    next.covariance = symmetrize(p);
    out = std::move(next);
  }
  out.timestamp = state.timestamp + dt;
  return out;
}

TrackState ekf_update(const TrackState& state, const Measurement& z, const NoiseConfig& noise) {
  const int n = state.dim();
  const Eigen::MatrixXd h = measurement_jacobian(state.kind);
  const Eigen::Matrix4d s = innovation_covariance(state, noise);
  const Measurement nu = innovation(z, measurement_model(state));

  // K = P H^T S^-1, solved rather than inverted.
  const Eigen::MatrixXd pht = state.covariance * h.transpose();
  const Eigen::MatrixXd k = s.ldlt().solve(pht.transpose()).transpose();

  TrackState out = state;
  out.mean += k * nu;
  out.mean(idx::kHeading) = wrap_angle(out.mean(idx::kHeading));

  const Eigen::MatrixXd ikh = Eigen::MatrixXd::Identity(n, n) - k * h;
  Eigen::Matrix4d r = noise.r.asDiagonal();
  out.covariance =
      symmetrize(ikh * state.covariance * ikh.transpose() + k * r * k.transpose());
  return out;
}

TrackState initial_state(const Detection& det, StateKind kind, const NoiseConfig& noise) {
  const int n = state_dim(kind);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x.head<3>() = det.center;
  x(idx::kHeading) = det.heading;
  Eigen::MatrixXd p = noise.p0(kind).asDiagonal();
  return TrackState(kind, std::move(x), std::move(p), det.timestamp);
}

}  // namespace tsmot::kalman
