#include "tsmot/types.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace tsmot;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("wrap_angle examples") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), ValidationError);
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("wrap_angle lands in (-pi, pi] and differs by a multiple of 2pi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    const double turns = (a - w) / (2 * kPi);
    CHECK(std::abs(turns - std::round(turns)) < 1e-9);
    CHECK(wrap_angle(w) == doctest::Approx(w).epsilon(1e-15));
  }
}

TEST_CASE("classify uses the map and names known classes on failure") {
  const ClassMap m = default_class_map();
  CHECK(classify(m, "truck") == ClassLabel::kCarLike);
  CHECK(classify(m, "pedestrian") == ClassLabel::kPedestrian);
  try {
    classify(m, "zeppelin");
    FAIL("expected a throw");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("zeppelin") != std::string::npos);
    CHECK(msg.find("car") != std::string::npos);
  }
}

TEST_CASE("Detection normalizes heading and rejects bad boxes") {
  Detection d;
  d.heading = 3 * kPi;
  d.validate_and_normalize();
  CHECK(d.heading == doctest::Approx(kPi));

  Detection bad;
  bad.size = Vec3(1.0, 0.0, 1.0);
  CHECK_THROWS_AS(bad.validate_and_normalize(), ValidationError);

  Detection bad_score;
  bad_score.score = 1.5;
  CHECK_THROWS_AS(bad_score.validate_and_normalize(), ValidationError);
}

TEST_CASE("TrackState rejects mismatched or invalid covariance") {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(7);
  CHECK_NOTHROW(TrackState(StateKind::kCtrv, m, Eigen::MatrixXd::Identity(7, 7), 0.0));
  CHECK_THROWS_AS(TrackState(StateKind::kCv, m, Eigen::MatrixXd::Identity(7, 7), 0.0),
                  ValidationError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(7, 7);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(TrackState(StateKind::kCtrv, m, asym, 0.0), ValidationError);
  Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(7, 7);
  neg(2, 2) = -1.0;
  CHECK_FALSE(is_valid_covariance(neg));
}
