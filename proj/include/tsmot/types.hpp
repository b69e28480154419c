#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace tsmot {

/// Input that violates a documented precondition or a config invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerically degenerate input (singular innovation covariance, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was broken. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Vec3 = Eigen::Vector3d;
using TrackId = std::int64_t;
using FrameIndex = std::int64_t;

/// Wraps an angle into (-pi, pi]. Throws ValidationError on non-finite input.
double wrap_angle(double a);

/// Motion-model granularity: everything is either car-like or a pedestrian.
enum class ClassLabel { kCarLike, kPedestrian };

const char* to_string(ClassLabel label);

/// Maps dataset category names ("car", "truck", ...) onto a ClassLabel.
using ClassMap = std::map<std::string, ClassLabel>;

/// bicycle/bus/car/truck/trailer/motorcycle -> car-like, pedestrian -> pedestrian.
ClassMap default_class_map();

/// Looks up `category`; throws ValidationError listing the known names.
ClassLabel classify(const ClassMap& map, const std::string& category);

/// One upright 3D box observation.
struct Detection {
  Vec3 center = Vec3::Zero();   // x, y, z [m], world frame
  Vec3 size = Vec3::Ones();     // w, l, h [m]
  double heading = 0.0;         // (-pi, pi]
  double score = 1.0;
  ClassLabel label = ClassLabel::kCarLike;
  std::string category = "car";
  FrameIndex frame_index = 0;
  double timestamp = 0.0;

  /// Normalizes the heading and checks sizes/score. Throws ValidationError.
  void validate_and_normalize();
};

/// State layout. kCtrv = [x, y, z, theta, v, theta_dot, z_dot],
/// kCv = [x, y, z, theta, x_dot, y_dot, z_dot, theta_dot].
enum class StateKind { kCtrv, kCv };

inline constexpr int state_dim(StateKind kind) { return kind == StateKind::kCtrv ? 7 : 8; }

/// Indices shared by both layouts.
namespace idx {
inline constexpr int kX = 0;
inline constexpr int kY = 1;
inline constexpr int kZ = 2;
inline constexpr int kHeading = 3;
}  // namespace idx

/// Indices of the CTRV layout.
namespace ctrv {
inline constexpr int kSpeed = 4;
inline constexpr int kTurnRate = 5;
inline constexpr int kVz = 6;
}  // namespace ctrv

/// Indices of the CV layout.
namespace cv {
inline constexpr int kVx = 4;
inline constexpr int kVy = 5;
inline constexpr int kVz = 6;
inline constexpr int kTurnRate = 7;
}  // namespace cv

struct TrackState {
  StateKind kind = StateKind::kCtrv;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double timestamp = 0.0;

  TrackState() = default;
  TrackState(StateKind k, Eigen::VectorXd m, Eigen::MatrixXd p, double t);

  /// Zero-covariance state, convenient for pure motion computations.
  static TrackState point(StateKind k, Eigen::VectorXd m, double t = 0.0);

  int dim() const { return state_dim(kind); }
  Vec3 position() const { return mean.head<3>(); }
  double heading() const { return mean(idx::kHeading); }
};

/// Dimension, symmetry (1e-9) and PSD (min eigenvalue >= -1e-9) checks.
bool is_valid_covariance(const Eigen::MatrixXd& p, double tol = 1e-9);

}  // namespace tsmot
