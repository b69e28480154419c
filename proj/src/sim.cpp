#include "tsmot/sim.hpp"

#include "tsmot/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace tsmot::sim {
namespace {

FrameIndex last_frame_of(const ObjectSpec& o, int duration) {
  return o.end_frame < 0 ? duration - 1 : std::min<FrameIndex>(o.end_frame, duration - 1);
}

bool in_dropout(const ObjectSpec& o, FrameIndex f) {
  return std::any_of(o.dropouts.begin(), o.dropouts.end(),
                     [f](const auto& w) { return f >= w.first && f <= w.second; });
}

Vec3 typical_size(ClassLabel label) {
  return label == ClassLabel::kPedestrian ? Vec3(0.7, 0.7, 1.8) : Vec3(1.9, 4.5, 1.6);
}

// Ground-truth kinematic state of one object.
TrackState truth_state(const ObjectSpec& o, StateKind kind, double heading, double speed,
                       double turn_rate, const Vec3& center, double t) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(state_dim(kind));
  x.head<3>() = center;
  x(idx::kHeading) = heading;
  if (kind == StateKind::kCtrv) {
    x(ctrv::kSpeed) = speed;
    x(ctrv::kTurnRate) = turn_rate;
    x(ctrv::kVz) = o.vertical_speed;
  } else {
    x(cv::kVx) = speed * std::cos(heading);
    x(cv::kVy) = speed * std::sin(heading);
    x(cv::kVz) = o.vertical_speed;
  }
  return TrackState::point(kind, std::move(x), t);
}

double clipped_normal(std::mt19937_64& rng, double mean, double std) {
  std::normal_distribution<double> n(0.0, 1.0);
  return std::clamp(mean + std * n(rng), 0.01, 1.0);
}

}  // namespace

void ScenarioSpec::validate(const ClassMap& class_map) const {
  if (duration <= 0) throw ValidationError("scenario '" + scene_id + "': duration must be > 0");
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
    throw ValidationError("scenario '" + scene_id + "': frame_rate must be > 0");
  }
  if (position_std < 0.0 || heading_std < 0.0 || matched_score_std < 0.0 ||
      clutter_score_std < 0.0) {
    throw ValidationError("scenario '" + scene_id + "': standard deviations must be >= 0");
  }
  if (clutter_rate < 0.0) throw ValidationError("scenario '" + scene_id + "': clutter_rate < 0");
  if (clutter_region[0] > clutter_region[1] || clutter_region[2] > clutter_region[3]) {
    throw ValidationError("scenario '" + scene_id + "': empty clutter region");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const ObjectSpec& o = objects[i];
    const std::string who = "scenario '" + scene_id + "' object " + std::to_string(i);
    classify(class_map, o.category);
    if ((o.size.array() <= 0.0).any()) throw ValidationError(who + ": size must be > 0");
    if (o.start_frame < 0 || o.start_frame >= duration) {
      throw ValidationError(who + ": start_frame outside the duration");
    }
    if (o.end_frame >= 0 && o.end_frame < o.start_frame) {
      throw ValidationError(who + ": end_frame before start_frame");
    }
    for (const auto& [a, b] : o.dropouts) {
      if (a < 0 || b < a || b >= duration) {
        throw ValidationError(who + ": dropout window [" + std::to_string(a) + ", " +
                              std::to_string(b) + "] outside [0, " + std::to_string(duration - 1) +
                              "]");
      }
    }
    FrameIndex prev = o.start_frame;
    for (const Segment& s : o.segments) {
      if (s.frame < prev) throw ValidationError(who + ": segments must be ordered after start");
      prev = s.frame;
    }
  }
}

Scenario generate(const ScenarioSpec& spec, const ClassMap& class_map) {
  spec.validate(class_map);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  Scenario out;
  out.scene_id = spec.scene_id;
  const double dt = 1.0 / spec.frame_rate;

  struct Live {
    const ObjectSpec* spec;
    ClassLabel label;
    TrackState state;
    std::size_t next_segment = 0;
  };
  std::vector<Live> live;
  for (const ObjectSpec& o : spec.objects) {
    const ClassLabel label = classify(class_map, o.category);
    const StateKind kind = label == ClassLabel::kCarLike ? StateKind::kCtrv : StateKind::kCv;
    live.push_back({&o, label,
                    truth_state(o, kind, o.heading, o.speed, o.turn_rate, o.center,
                                static_cast<double>(o.start_frame) * dt)});
  }

  std::vector<std::string> categories;
  for (const ObjectSpec& o : spec.objects) {
    if (std::find(categories.begin(), categories.end(), o.category) == categories.end()) {
      categories.push_back(o.category);
    }
  }
  if (categories.empty()) categories.push_back("car");

  for (FrameIndex f = 0; f < spec.duration; ++f) {
    const double t = static_cast<double>(f) * dt;
    metrics::FrameGroundTruth gt{f, t, {}};
    DetectionFrame frame{f, t, {}};

    for (std::size_t i = 0; i < live.size(); ++i) {
      Live& obj = live[i];
      const ObjectSpec& o = *obj.spec;
      if (f < o.start_frame || f > last_frame_of(o, spec.duration)) continue;

      if (f > o.start_frame) obj.state = motion::propagate(obj.state, dt);
      while (obj.next_segment < o.segments.size() && o.segments[obj.next_segment].frame <= f) {
        const Segment& s = o.segments[obj.next_segment++];
        const double heading = s.heading ? *s.heading : obj.state.heading();
        obj.state = truth_state(o, obj.state.kind, heading, s.speed, s.turn_rate,
                                obj.state.position(), obj.state.timestamp);
      }

      const Vec3 center = obj.state.position();
      const double heading = obj.state.heading();
      gt.boxes.push_back({static_cast<std::int64_t>(i + 1), center, o.size, heading, o.category});

      // Draw every noise term even when it is unused so that a dropout does
      // not shift the random stream of later objects.
      const Vec3 noise(unit(rng), unit(rng), unit(rng));
      const double heading_noise = unit(rng);
      const double score = clipped_normal(rng, spec.matched_score_mean, spec.matched_score_std);
      if (in_dropout(o, f)) continue;

      Detection d;
      d.center = center + spec.position_std * noise;
      d.size = o.size;
      d.heading = wrap_angle(heading + spec.heading_std * heading_noise);
      d.score = score;
      d.label = obj.label;
      d.category = o.category;
      d.frame_index = f;
      d.timestamp = t;
      frame.detections.push_back(std::move(d));
    }

    if (spec.clutter_rate > 0.0) {
      std::poisson_distribution<int> count(spec.clutter_rate);
      std::uniform_real_distribution<double> ux(spec.clutter_region[0], spec.clutter_region[1]);
      std::uniform_real_distribution<double> uy(spec.clutter_region[2], spec.clutter_region[3]);
      std::uniform_real_distribution<double> uh(-std::numbers::pi, std::numbers::pi);
      std::uniform_int_distribution<std::size_t> uc(0, categories.size() - 1);
      const int n = count(rng);
      for (int k = 0; k < n; ++k) {
        Detection d;
        d.category = categories[uc(rng)];
        d.label = classify(class_map, d.category);
        d.center = Vec3(ux(rng), uy(rng), 0.0);
        d.size = typical_size(d.label);
        d.heading = wrap_angle(uh(rng));
        d.score = clipped_normal(rng, spec.clutter_score_mean, spec.clutter_score_std);
        d.frame_index = f;
        d.timestamp = t;
        frame.detections.push_back(std::move(d));
        ++out.clutter_count;
      }
    }
    std::shuffle(frame.detections.begin(), frame.detections.end(), rng);

    out.gt.push_back(std::move(gt));
    out.frames.push_back(std::move(frame));
  }
  return out;
}

ScenarioSpec noise_free(ScenarioSpec spec) {
  spec.position_std = 0.0;
  spec.heading_std = 0.0;
  spec.clutter_rate = 0.0;
  for (ObjectSpec& o : spec.objects) o.dropouts.clear();
  return spec;
}

}  // namespace tsmot::sim
