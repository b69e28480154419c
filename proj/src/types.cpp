#include "tsmot/types.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tsmot {

double wrap_angle(double a) {
  if (!std::isfinite(a)) {
    throw ValidationError("wrap_angle: non-finite angle");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, kTwoPi);  // (-2pi, 2pi)
  if (r <= -std::numbers::pi) {
    r += kTwoPi;
  } else if (r > std::numbers::pi) {
    r -= kTwoPi;
  }
  return r;
}

const char* to_string(ClassLabel label) {
  return label == ClassLabel::kCarLike ? "car-like" : "pedestrian";
}

ClassMap default_class_map() {
  return {
      {"bicycle", ClassLabel::kCarLike},    {"bus", ClassLabel::kCarLike},
      {"car", ClassLabel::kCarLike},        {"truck", ClassLabel::kCarLike},
      {"trailer", ClassLabel::kCarLike},    {"motorcycle", ClassLabel::kCarLike},
      {"pedestrian", ClassLabel::kPedestrian},
  };
}

ClassLabel classify(const ClassMap& map, const std::string& category) {
  auto it = map.find(category);
  if (it != map.end()) return it->second;
  std::ostringstream os;
  os << "unknown class '" << category << "'; known classes:";
  for (const auto& [name, label] : map) os << ' ' << name << "->" << to_string(label);
  throw ValidationError(os.str());
}

void Detection::validate_and_normalize() {
  if (!center.allFinite() || !size.allFinite() || !std::isfinite(score) ||
      !std::isfinite(timestamp)) {
    throw ValidationError("detection has non-finite fields");
  }
  if ((size.array() <= 0.0).any()) {
    throw ValidationError("detection size must be strictly positive");
  }
  if (score < 0.0 || score > 1.0) {
    throw ValidationError("detection score must lie in [0, 1]");
  }
  if (frame_index < 0) {
    throw ValidationError("detection frame index must be non-negative");
  }
  heading = wrap_angle(heading);
}

TrackState::TrackState(StateKind k, Eigen::VectorXd m, Eigen::MatrixXd p, double t)
    : kind(k), mean(std::move(m)), covariance(std::move(p)), timestamp(t) {
  const int n = state_dim(kind);
  if (mean.size() != n || covariance.rows() != n || covariance.cols() != n) {
    throw ValidationError("TrackState: vector/covariance size does not match the state layout");
  }
  if (!mean.allFinite()) throw ValidationError("TrackState: non-finite mean");
  if (!is_valid_covariance(covariance)) {
    throw ValidationError("TrackState: covariance is not symmetric positive semidefinite");
  }
  mean(idx::kHeading) = wrap_angle(mean(idx::kHeading));
}

TrackState TrackState::point(StateKind k, Eigen::VectorXd m, double t) {
  const int n = state_dim(k);
  return TrackState(k, std::move(m), Eigen::MatrixXd::Zero(n, n), t);
}

bool is_valid_covariance(const Eigen::MatrixXd& p, double tol) {
  if (p.rows() != p.cols() || !p.allFinite()) return false;
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (p + p.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace tsmot
