#include "tsmot/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace tsmot;
using metrics::SceneData;

namespace {

// Objects moving along parallel lines, 10 m apart.
SceneData parallel_scene(int objects, int frames) {
  SceneData s;
  s.scene_id = "s";
  for (int f = 0; f < frames; ++f) {
    metrics::FrameGroundTruth gt;
    gt.frame_index = f;
    FrameOutput hyp;
    hyp.frame_index = f;
    for (int k = 0; k < objects; ++k) {
      metrics::GtBox b;
      b.gt_track_id = 100 + k;
      b.center = Vec3(0.5 * f, 10.0 * k, 0.0);
      gt.boxes.push_back(b);
      TrackOutput o;
      o.id = k + 1;
      o.center = b.center;
      o.score = 0.9 - 0.1 * k;
      o.category = b.category;
      hyp.tracks.push_back(o);
    }
    s.gt.push_back(gt);
    s.hyp.push_back(hyp);
  }
  return s;
}

}  // namespace

TEST_CASE("perfect tracking") {
  const SceneData s = parallel_scene(3, 12);
  const auto c = metrics::clear_mot({&s, 1}, 2.0);
  CHECK(c.mota() == 1.0);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  CHECK(c.ids == 0);
  CHECK(c.frag == 0);
  CHECK(c.mt == 3);
  CHECK(c.ml == 0);
  CHECK(c.motp(2.0) == 0.0);
  const auto r = metrics::evaluate({&s, 1}, 2.0, 40);
  CHECK(r.amota == 1.0);
  CHECK(r.amotp == 0.0);
}

TEST_CASE("one id switch over ten frames") {
  SceneData s = parallel_scene(1, 10);
  for (int f = 5; f < 10; ++f) s.hyp[f].tracks[0].id = 2;
  const auto c = metrics::clear_mot({&s, 1}, 2.0);
  CHECK(c.num_gt == 10);
  CHECK(c.ids == 1);
  CHECK(c.frag == 0);
  CHECK(c.mota() == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("gap counts a fragmentation") {
  SceneData s = parallel_scene(1, 10);
  s.hyp[4].tracks.clear();
  s.hyp[5].tracks.clear();
  const auto c = metrics::clear_mot({&s, 1}, 2.0);
  CHECK(c.fn == 2);
  CHECK(c.frag == 1);
  CHECK(c.ids == 0);
}

TEST_CASE("empty hypotheses") {
  SceneData s = parallel_scene(1, 10);
  for (auto& f : s.hyp) f.tracks.clear();
  const auto c = metrics::clear_mot({&s, 1}, 2.0);
  CHECK(c.mota() == 0.0);
  CHECK(c.mt == 0);
  CHECK(c.ml == 1);
  CHECK(metrics::evaluate({&s, 1}, 2.0, 40).amota == 0.0);
}

TEST_CASE("distance and category gates") {
  SceneData s = parallel_scene(1, 4);
  s.hyp[0].tracks[0].center.x() += 2.5;
  s.hyp[1].tracks[0].category = "pedestrian";
  s.hyp[2].tracks[0].center.z() += 5.0;
  const auto c = metrics::clear_mot({&s, 1}, 2.0);
  CHECK(c.tp == 2);
  CHECK(c.fp == 2);
  CHECK(c.fn == 2);
}

TEST_CASE("recall plateau at one half") {
  SceneData s = parallel_scene(2, 10);
  for (auto& f : s.hyp) f.tracks.pop_back();
  const auto r = metrics::evaluate({&s, 1}, 2.0, 40);
  CHECK(r.amota == doctest::Approx(0.5).epsilon(1e-12));
  for (const auto& p : r.curve) CHECK(p.achieved == (p.target_recall <= 0.5 + 1e-12));

  const auto single = metrics::evaluate({&s, 1}, 2.0, 1);
  CHECK(single.amota == 0.0);
  CHECK(single.curve.size() == 1);
}

TEST_CASE("order independence") {
  SceneData s = parallel_scene(4, 15);
  for (int f = 6; f < 15; ++f) s.hyp[f].tracks[1].center.y() = 10.0 * 2 - 0.5;
  const auto base = metrics::clear_mot({&s, 1}, 2.0);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    SceneData p = s;
    for (auto& f : p.hyp) std::shuffle(f.tracks.begin(), f.tracks.end(), rng);
    for (auto& f : p.gt) std::shuffle(f.boxes.begin(), f.boxes.end(), rng);
    const auto c = metrics::clear_mot({&p, 1}, 2.0);
    CHECK(c.tp == base.tp);
    CHECK(c.fp == base.fp);
    CHECK(c.fn == base.fn);
    CHECK(c.ids == base.ids);
    CHECK(c.frag == base.frag);
  }
}

TEST_CASE("scene counts merge") {
  SceneData a = parallel_scene(2, 8), b = parallel_scene(3, 5);
  b.scene_id = "b";
  for (int f = 2; f < 5; ++f) b.hyp[f].tracks[0].id = 9;
  const std::vector<SceneData> both{a, b};
  const auto joint = metrics::clear_mot(both, 2.0);
  auto merged = metrics::clear_mot({&a, 1}, 2.0);
  merged.merge(metrics::clear_mot({&b, 1}, 2.0));
  CHECK(joint.tp == merged.tp);
  CHECK(joint.ids == merged.ids);
  CHECK(joint.num_gt == merged.num_gt);
  CHECK(joint.mt == merged.mt);
}

TEST_CASE("misaligned frames are rejected") {
  SceneData s = parallel_scene(1, 4);
  s.hyp[2].frame_index = 7;
  CHECK_THROWS_AS(metrics::clear_mot({&s, 1}, 2.0), ValidationError);
}

TEST_CASE("table has the expected columns") {
  const SceneData s = parallel_scene(1, 4);
  const std::string t = metrics::format_table({{"x", metrics::evaluate({&s, 1}, 2.0, 40)}});
  for (const char* col : {"AMOTA", "AMOTP", "MT", "ML", "FP", "FN", "IDS", "FRAG"}) {
    CHECK(t.find(col) != std::string::npos);
  }
}
