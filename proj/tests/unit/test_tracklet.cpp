#include "tsmot/tracklet.hpp"

#include <doctest.h>

using namespace tsmot;

namespace {

Detection box(FrameIndex f, const Vec3& size) {
  Detection d;
  d.frame_index = f;
  d.timestamp = 0.1 * static_cast<double>(f);
  d.size = size;
  return d;
}

TrackState state_at(double t) {
  return TrackState::point(StateKind::kCtrv, Eigen::VectorXd::Zero(7), t);
}

}  // namespace

TEST_CASE("average_size over the window") {
  Tracklet t = Tracklet::born(1, box(0, Vec3(2, 4, 1)), state_at(0.0), 3);
  CHECK(average_size(t) == Vec3(2, 4, 1));
  t.add_match(1, state_at(0.1), box(1, Vec3(4, 6, 3)), 1.0, 3);
  CHECK(average_size(t) == Vec3(3, 5, 2));
  t.add_match(2, state_at(0.2), box(2, Vec3(1, 1, 1)), 1.0, 3);
  t.add_match(3, state_at(0.3), box(3, Vec3(7, 7, 7)), 1.0, 3);
  CHECK(average_size(t).isApprox(Vec3(12.0 / 3, 14.0 / 3, 11.0 / 3)));

  Tracklet empty;
  CHECK_THROWS_AS(average_size(empty), ValidationError);
}

TEST_CASE("match bookkeeping") {
  Tracklet t = Tracklet::born(4, box(10, Vec3::Ones()), state_at(1.0), 3);
  CHECK(t.match_count() == 1);
  CHECK(t.misses() == 0);
  t.add_miss(11);
  t.add_miss(12);
  CHECK(t.misses() == 2);
  CHECK(t.match_history == std::vector<bool>{true, false, false});
  t.add_match(13, state_at(1.3), box(13, Vec3::Ones()), 0.5, 3);
  CHECK(t.misses() == 0);
  CHECK(t.end_frame == 13);
  CHECK(t.match_count() == 2);
  CHECK_THROWS_AS(t.add_miss(13), ValidationError);
}

TEST_CASE("merge is chronological and keeps the id") {
  Tracklet early = Tracklet::born(2, box(0, Vec3(1, 1, 1)), state_at(0.0), 3);
  early.add_match(1, state_at(0.1), box(1, Vec3(1, 1, 1)), 0.9, 3);
  early.add_miss(2);
  Tracklet late = Tracklet::born(7, box(4, Vec3(3, 3, 3)), state_at(0.4), 3);
  late.add_match(5, state_at(0.5), box(5, Vec3(3, 3, 3)), 0.7, 3);

  late.merge(early, 3);
  CHECK(late.id == 7);
  CHECK(late.start_frame == 0);
  CHECK(late.end_frame == 5);
  CHECK(late.match_count() == 4);
  CHECK(late.match_history == std::vector<bool>{true, true, false, false, true, true});
  CHECK(late.state_frames == std::vector<FrameIndex>{0, 1, 4, 5});
  CHECK(late.match_similarities == std::vector<double>{1.0, 0.9, 1.0, 0.7});
  CHECK(late.first_size == Vec3(1, 1, 1));
  CHECK(average_size(late).isApprox(Vec3(7.0 / 3, 7.0 / 3, 7.0 / 3)));
}
