#include "oracles.hpp"
#include "tsmot/kalman.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>

using namespace tsmot;
using kalman::NoiseConfig;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}
}  // namespace

TEST_CASE("measurement_model projects and keeps pi") {
  auto a = TrackState::point(StateKind::kCtrv, vec({1, 2, 3, 0.5, 9, 9, 9}));
  CHECK(kalman::measurement_model(a) == Eigen::Vector4d(1, 2, 3, 0.5));
  auto b = TrackState::point(StateKind::kCv, vec({1, 2, 3, 0.5, 7, 7, 7, 7}));
  CHECK(kalman::measurement_model(b) == Eigen::Vector4d(1, 2, 3, 0.5));
  auto c = TrackState::point(StateKind::kCtrv, vec({0, 0, 0, kPi, 0, 0, 0}));
  CHECK(kalman::measurement_model(c)(3) == doctest::Approx(kPi));
}

TEST_CASE("innovation_covariance") {
  NoiseConfig n = NoiseConfig::defaults();
  n.r = Eigen::Vector4d::Ones();
  auto zero = TrackState::point(StateKind::kCtrv, Eigen::VectorXd::Zero(7));
  CHECK((kalman::innovation_covariance(zero, n) - Eigen::Matrix4d::Identity()).norm() == 0.0);

  TrackState unit(StateKind::kCtrv, Eigen::VectorXd::Zero(7), Eigen::MatrixXd::Identity(7, 7), 0);
  CHECK((kalman::innovation_covariance(unit, n) - 2 * Eigen::Matrix4d::Identity()).norm() == 0.0);

  NoiseConfig d = NoiseConfig::defaults();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(7, 7) * 0.3;
  TrackState s(StateKind::kCtrv, Eigen::VectorXd::Zero(7), p, 0);
  CHECK(kalman::innovation_covariance(s, d)(3, 3) == doctest::Approx(0.04 + 0.3));

  NoiseConfig bad = NoiseConfig::defaults();
  bad.r << 1e-14, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(kalman::innovation_covariance(zero, bad), NumericalError);
}

TEST_CASE("ekf_predict") {
  NoiseConfig n = NoiseConfig::defaults();
  TrackState s(StateKind::kCv, vec({1, 2, 3, 0.1, 1, 2, 0, 0.5}), Eigen::MatrixXd::Identity(8, 8),
               4.0);
  const TrackState same = kalman::ekf_predict(s, 0.0, n);
  CHECK((same.mean - s.mean).norm() == 0.0);
  CHECK((same.covariance - s.covariance).norm() == 0.0);

  const TrackState one = kalman::ekf_predict(s, 1.0, n);
  const Eigen::MatrixXd f = oracle::cv_transition(1.0);
  Eigen::MatrixXd expect = f * f.transpose();
  expect.diagonal() += n.q_cv;
  CHECK((one.covariance - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(one.timestamp == doctest::Approx(5.0));

  TrackState t(StateKind::kCtrv, vec({0, 0, 0, 0.2, 3, 0.3, 0}),
               Eigen::MatrixXd::Identity(7, 7) * 0.1, 0.0);
  double trace = t.covariance.trace();
  for (int i = 0; i < 20; ++i) {
    t = kalman::ekf_predict(t, 0.1, n);
    CHECK(t.covariance.trace() > trace);
    trace = t.covariance.trace();
    CHECK(is_valid_covariance(t.covariance));
  }
}

TEST_CASE("ekf_update") {
  NoiseConfig n = NoiseConfig::defaults();
  TrackState s(StateKind::kCtrv, vec({1, 2, 3, 0.4, 5, 0.1, 0}), Eigen::MatrixXd::Identity(7, 7),
               0.0);

  const TrackState exact = kalman::ekf_update(s, kalman::measurement_model(s), n);
  CHECK((exact.mean - s.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(exact.covariance.trace() < s.covariance.trace());

  NoiseConfig unit = n;
  unit.r = Eigen::Vector4d::Ones();
  const Eigen::Vector4d z(3, 2, 3, 0.4);
  const TrackState half = kalman::ekf_update(s, z, unit);
  CHECK(half.mean(0) == doctest::Approx(2.0));
  CHECK(half.covariance(0, 0) == doctest::Approx(0.5));

  const Eigen::Vector4d flipped(1, 2, 3, wrap_angle(0.4 + kPi + 0.1));
  CHECK(kalman::innovation(flipped, kalman::measurement_model(s))(3) ==
        doctest::Approx(0.1).epsilon(1e-12));

  NoiseConfig blind = n;
  blind.r *= 1e12;
  const TrackState ignored = kalman::ekf_update(s, Eigen::Vector4d(50, -50, 10, 2.0), blind);
  CHECK((ignored.mean - s.mean).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("initial_state uses the box pose and P0") {
  Detection d;
  d.center = Vec3(4, 5, 6);
  d.heading = 1.0;
  d.timestamp = 2.5;
  const NoiseConfig n = NoiseConfig::defaults();
  const TrackState s = kalman::initial_state(d, StateKind::kCv, n);
  CHECK(s.mean.head<4>() == Eigen::Vector4d(4, 5, 6, 1.0));
  CHECK(s.mean.tail<4>().norm() == 0.0);
  CHECK(s.covariance.diagonal() == n.p0_cv);
  CHECK(s.timestamp == 2.5);
}

TEST_CASE("noise config validation") {
  NoiseConfig n = NoiseConfig::defaults();
  CHECK_NOTHROW(n.validate());
  n.q_cv(2) = 0.0;
  CHECK_THROWS_AS(n.validate(), ValidationError);
}

TEST_CASE("filter is consistent on a matched linear model") {
  const int runs = 200;
  const auto c = oracle::cv_monte_carlo(runs, 20, 0.1, 2024);
  boost::math::chi_squared nees(8.0 * runs), nis(4.0 * runs);
  CHECK(c.all_psd);
  CHECK(c.mean_nees > boost::math::quantile(nees, 0.025) / runs);
  CHECK(c.mean_nees < boost::math::quantile(nees, 0.975) / runs);
  CHECK(c.mean_nis > boost::math::quantile(nis, 0.025) / runs);
  CHECK(c.mean_nis < boost::math::quantile(nis, 0.975) / runs);
}
