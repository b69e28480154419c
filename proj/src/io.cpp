#include "tsmot/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tsmot::io {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "' for reading");
  return in;
}

double finite(const Json& j, const char* key) {
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ValidationError(std::string("field '") + key + "' is not finite");
  return v;
}

Vec3 vec3(const Json& j, const char* key) {
  const Json& a = j.at(key);
  if (!a.is_array() || a.size() != 3) {
    throw ValidationError(std::string("field '") + key + "' must be an array of 3 numbers");
  }
  Vec3 v(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  if (!v.allFinite()) throw ValidationError(std::string("field '") + key + "' is not finite");
  return v;
}

Json to_json(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_of(const Json& a) {
  if (!a.is_array()) throw ValidationError("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

// Reads a JSON Lines stream, grouping records by scene in order of first
// appearance. `parse` turns one line into a frame.
template <typename Frame, typename Parse>
std::vector<SceneLog<Frame>> read_lines(std::istream& in, Parse parse) {
  std::vector<SceneLog<Frame>> scenes;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      const std::string scene = j.at("scene_id").get<std::string>();
      Frame frame = parse(j);
      auto [it, inserted] = index.emplace(scene, scenes.size());
      if (inserted) scenes.push_back({scene, {}});
      auto& frames = scenes[it->second].frames;
      if (!frames.empty() && frame.frame_index <= frames.back().frame_index) {
        throw ValidationError("frame_index must be strictly increasing within scene '" + scene +
                              "'");
      }
      frames.push_back(std::move(frame));
    } catch (const Json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed record: " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return scenes;
}

void write_line(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

template <typename T>
void maybe(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

DetectionLog read_detection_log(std::istream& in, const ClassMap& class_map) {
  return read_lines<DetectionFrame>(in, [&](const Json& j) {
    DetectionFrame f;
    f.frame_index = j.at("frame_index").get<FrameIndex>();
    f.timestamp = finite(j, "timestamp");
    for (const Json& d : j.at("detections")) {
      Detection det;
      det.center = vec3(d, "center");
      det.size = vec3(d, "size");
      det.heading = finite(d, "heading");
      det.score = finite(d, "score");
      det.category = d.at("class").get<std::string>();
      det.label = classify(class_map, det.category);
      det.frame_index = f.frame_index;
      det.timestamp = f.timestamp;
      det.validate_and_normalize();
      f.detections.push_back(std::move(det));
    }
    return f;
  });
}

DetectionLog read_detection_log(const std::filesystem::path& path, const ClassMap& class_map) {
  auto in = open_in(path);
  return read_detection_log(in, class_map);
}

void write_detection_frame(std::ostream& out, const std::string& scene_id,
                           const DetectionFrame& frame) {
  Json dets = Json::array();
  for (const Detection& d : frame.detections) {
    dets.push_back({{"center", to_json(d.center)},
                    {"size", to_json(d.size)},
                    {"heading", d.heading},
                    {"score", d.score},
                    {"class", d.category}});
  }
  write_line(out, {{"scene_id", scene_id},
                   {"frame_index", frame.frame_index},
                   {"timestamp", frame.timestamp},
                   {"detections", std::move(dets)}});
}

TrackLog read_track_log(std::istream& in) {
  return read_lines<FrameOutput>(in, [](const Json& j) {
    FrameOutput f;
    f.frame_index = j.at("frame_index").get<FrameIndex>();
    if (j.contains("timestamp")) f.timestamp = finite(j, "timestamp");
    for (const Json& t : j.at("tracks")) {
      TrackOutput o;
      o.id = t.at("id").get<TrackId>();
      if (o.id <= 0) throw ValidationError("track ids must be positive");
      o.center = vec3(t, "center");
      o.size = vec3(t, "size");
      o.heading = finite(t, "heading");
      o.score = finite(t, "score");
      o.category = t.at("class").get<std::string>();
      f.tracks.push_back(std::move(o));
    }
    return f;
  });
}

TrackLog read_track_log(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_track_log(in);
}

void write_track_frame(std::ostream& out, const std::string& scene_id, const FrameOutput& frame) {
  Json tracks = Json::array();
  for (const TrackOutput& t : frame.tracks) {
    tracks.push_back({{"id", t.id},
                      {"center", to_json(t.center)},
                      {"size", to_json(t.size)},
                      {"heading", t.heading},
                      {"score", t.score},
                      {"class", t.category}});
  }
  write_line(out, {{"scene_id", scene_id},
                   {"frame_index", frame.frame_index},
                   {"timestamp", frame.timestamp},
                   {"tracks", std::move(tracks)}});
}

GroundTruthLog read_ground_truth_log(std::istream& in) {
  return read_lines<metrics::FrameGroundTruth>(in, [](const Json& j) {
    metrics::FrameGroundTruth f;
    f.frame_index = j.at("frame_index").get<FrameIndex>();
    if (j.contains("timestamp")) f.timestamp = finite(j, "timestamp");
    std::set<std::int64_t> ids;
    for (const Json& b : j.at("boxes")) {
      metrics::GtBox box;
      box.gt_track_id = b.at("gt_track_id").get<std::int64_t>();
      if (!ids.insert(box.gt_track_id).second) {
        throw ValidationError("duplicate gt_track_id " + std::to_string(box.gt_track_id));
      }
      box.center = vec3(b, "center");
      box.size = vec3(b, "size");
      box.heading = finite(b, "heading");
      box.category = b.at("class").get<std::string>();
      f.boxes.push_back(std::move(box));
    }
    return f;
  });
}

GroundTruthLog read_ground_truth_log(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ground_truth_log(in);
}

void write_ground_truth_frame(std::ostream& out, const std::string& scene_id,
                              const metrics::FrameGroundTruth& frame) {
  Json boxes = Json::array();
  for (const metrics::GtBox& b : frame.boxes) {
    boxes.push_back({{"gt_track_id", b.gt_track_id},
                     {"center", to_json(b.center)},
                     {"size", to_json(b.size)},
                     {"heading", b.heading},
                     {"class", b.category}});
  }
  write_line(out, {{"scene_id", scene_id},
                   {"frame_index", frame.frame_index},
                   {"timestamp", frame.timestamp},
                   {"boxes", std::move(boxes)}});
}

TrackerConfig config_from_json(const Json& j) {
  static const std::set<std::string> kKeys = {
      "beta",          "tau_c",           "gate_position",      "max_miss_frames",
      "max_link_gap",  "size_window",     "solver",             "noise",
      "class_map",     "enable_linking",  "global_only",        "cv_only",
      "use_size_affinity", "coast_frames", "coast_score_factor", "amota_recall_steps",
      "match_distance", "ablation"};
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ValidationError("config: unknown key '" + key + "'");
  }

  TrackerConfig c;
  try {
    maybe(j, "beta", c.beta);
    maybe(j, "tau_c", c.tau_c);
    maybe(j, "gate_position", c.gate_position);
    maybe(j, "max_miss_frames", c.max_miss_frames);
    maybe(j, "max_link_gap", c.max_link_gap);
    maybe(j, "size_window", c.size_window);
    if (j.contains("solver")) c.solver = parse_solver(j.at("solver").get<std::string>());
    maybe(j, "enable_linking", c.enable_linking);
    maybe(j, "global_only", c.global_only);
    maybe(j, "cv_only", c.cv_only);
    maybe(j, "use_size_affinity", c.use_size_affinity);
    maybe(j, "coast_frames", c.coast_frames);
    maybe(j, "coast_score_factor", c.coast_score_factor);
    maybe(j, "amota_recall_steps", c.amota_recall_steps);
    maybe(j, "match_distance", c.match_distance);
    if (j.contains("noise")) {
      const Json& n = j.at("noise");
      if (n.contains("q_ctrv")) c.noise.q_ctrv = vector_of(n.at("q_ctrv"));
      if (n.contains("q_cv")) c.noise.q_cv = vector_of(n.at("q_cv"));
      if (n.contains("p0_ctrv")) c.noise.p0_ctrv = vector_of(n.at("p0_ctrv"));
      if (n.contains("p0_cv")) c.noise.p0_cv = vector_of(n.at("p0_cv"));
      if (n.contains("r")) {
        const Eigen::VectorXd r = vector_of(n.at("r"));
        if (r.size() != 4) throw ValidationError("config: noise.r must have 4 entries");
        c.noise.r = r;
      }
    }
    if (j.contains("class_map")) {
      c.class_map.clear();
      for (const auto& [name, label] : j.at("class_map").items()) {
        const std::string l = label.get<std::string>();
        if (l == "car-like") {
          c.class_map[name] = ClassLabel::kCarLike;
        } else if (l == "pedestrian") {
          c.class_map[name] = ClassLabel::kPedestrian;
        } else {
          throw ValidationError("config: class_map values must be car-like or pedestrian");
        }
      }
    }
    if (j.contains("ablation")) c.apply_ablation(j.at("ablation").get<std::string>());
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

Json config_to_json(const TrackerConfig& c) {
  Json classes = Json::object();
  for (const auto& [name, label] : c.class_map) classes[name] = to_string(label);
  return {{"beta", c.beta},
          {"tau_c", c.tau_c},
          {"gate_position", c.gate_position},
          {"max_miss_frames", c.max_miss_frames},
          {"max_link_gap", c.max_link_gap},
          {"size_window", c.size_window},
          {"solver", to_string(c.solver)},
          {"noise",
           {{"q_ctrv", to_json(c.noise.q_ctrv)},
            {"q_cv", to_json(c.noise.q_cv)},
            {"r", to_json(Eigen::VectorXd(c.noise.r))},
            {"p0_ctrv", to_json(c.noise.p0_ctrv)},
            {"p0_cv", to_json(c.noise.p0_cv)}}},
          {"class_map", classes},
          {"enable_linking", c.enable_linking},
          {"global_only", c.global_only},
          {"cv_only", c.cv_only},
          {"use_size_affinity", c.use_size_affinity},
          {"coast_frames", c.coast_frames},
          {"coast_score_factor", c.coast_score_factor},
          {"amota_recall_steps", c.amota_recall_steps},
          {"match_distance", c.match_distance}};
}

TrackerConfig load_config(const std::filesystem::path& path) {
  auto in = open_in(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("config '" + path.string() + "': " + e.what());
  }
  return config_from_json(j);
}

sim::ScenarioSpec scenario_from_json(const Json& j) {
  sim::ScenarioSpec s;
  try {
    maybe(j, "scene_id", s.scene_id);
    maybe(j, "seed", s.seed);
    maybe(j, "duration", s.duration);
    maybe(j, "frame_rate", s.frame_rate);
    maybe(j, "position_std", s.position_std);
    maybe(j, "heading_std", s.heading_std);
    maybe(j, "clutter_rate", s.clutter_rate);
    if (j.contains("clutter_region")) {
      s.clutter_region = j.at("clutter_region").get<std::array<double, 4>>();
    }
    maybe(j, "matched_score_mean", s.matched_score_mean);
    maybe(j, "matched_score_std", s.matched_score_std);
    maybe(j, "clutter_score_mean", s.clutter_score_mean);
    maybe(j, "clutter_score_std", s.clutter_score_std);
    for (const Json& oj : j.value("objects", Json::array())) {
      sim::ObjectSpec o;
      maybe(oj, "class", o.category);
      maybe(oj, "start_frame", o.start_frame);
      maybe(oj, "end_frame", o.end_frame);
      if (oj.contains("center")) o.center = vec3(oj, "center");
      if (oj.contains("size")) o.size = vec3(oj, "size");
      maybe(oj, "heading", o.heading);
      maybe(oj, "speed", o.speed);
      maybe(oj, "turn_rate", o.turn_rate);
      maybe(oj, "vertical_speed", o.vertical_speed);
      for (const Json& sj : oj.value("segments", Json::array())) {
        sim::Segment seg;
        seg.frame = sj.at("frame").get<FrameIndex>();
        maybe(sj, "speed", seg.speed);
        maybe(sj, "turn_rate", seg.turn_rate);
        if (sj.contains("heading")) seg.heading = sj.at("heading").get<double>();
        o.segments.push_back(seg);
      }
      for (const Json& w : oj.value("dropouts", Json::array())) {
        if (!w.is_array() || w.size() != 2) {
          throw ValidationError("dropout windows must be [first, last] frame pairs");
        }
        o.dropouts.emplace_back(w[0].get<FrameIndex>(), w[1].get<FrameIndex>());
      }
      s.objects.push_back(std::move(o));
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  return s;
}

Json scenario_to_json(const sim::ScenarioSpec& s) {
  Json objects = Json::array();
  for (const sim::ObjectSpec& o : s.objects) {
    Json segs = Json::array();
    for (const sim::Segment& seg : o.segments) {
      Json sj = {{"frame", seg.frame}, {"speed", seg.speed}, {"turn_rate", seg.turn_rate}};
      if (seg.heading) sj["heading"] = *seg.heading;
      segs.push_back(std::move(sj));
    }
    Json drops = Json::array();
    for (const auto& [a, b] : o.dropouts) drops.push_back({a, b});
    objects.push_back({{"class", o.category},
                       {"start_frame", o.start_frame},
                       {"end_frame", o.end_frame},
                       {"center", to_json(o.center)},
                       {"size", to_json(o.size)},
                       {"heading", o.heading},
                       {"speed", o.speed},
                       {"turn_rate", o.turn_rate},
                       {"vertical_speed", o.vertical_speed},
                       {"segments", std::move(segs)},
                       {"dropouts", std::move(drops)}});
  }
  return {{"scene_id", s.scene_id},
          {"seed", s.seed},
          {"duration", s.duration},
          {"frame_rate", s.frame_rate},
          {"position_std", s.position_std},
          {"heading_std", s.heading_std},
          {"clutter_rate", s.clutter_rate},
          {"clutter_region", s.clutter_region},
          {"matched_score_mean", s.matched_score_mean},
          {"matched_score_std", s.matched_score_std},
          {"clutter_score_mean", s.clutter_score_mean},
          {"clutter_score_std", s.clutter_score_std},
          {"objects", std::move(objects)}};
}

std::vector<sim::ScenarioSpec> load_scenarios(const std::filesystem::path& path) {
  auto in = open_in(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("scenario file '" + path.string() + "': " + e.what());
  }
  std::vector<sim::ScenarioSpec> out;
  if (j.contains("scenarios")) {
    for (const Json& s : j.at("scenarios")) out.push_back(scenario_from_json(s));
  } else {
    out.push_back(scenario_from_json(j));
  }
  return out;
}

Json report_to_json(const metrics::MotReport& r) {
  Json curve = Json::array();
  for (const auto& p : r.curve) {
    curve.push_back({{"target_recall", p.target_recall},
                     {"achieved", p.achieved},
                     {"threshold", p.threshold},
                     {"recall", p.recall},
                     {"mota", p.mota},
                     {"motar", p.motar},
                     {"motp", p.motp}});
  }
  const auto& c = r.counts;
  return {{"AMOTA", r.amota},       {"AMOTP", r.amotp},         {"MOTA", r.mota},
          {"MOTP", r.motp},         {"MT", c.mt},               {"ML", c.ml},
          {"FP", c.fp},             {"FN", c.fn},               {"IDS", c.ids},
          {"FRAG", c.frag},         {"num_gt", c.num_gt},       {"TP", c.tp},
          {"num_trajectories", c.num_trajectories},             {"recall_curve", curve}};
}

std::vector<metrics::SceneData> align_scenes(const GroundTruthLog& gt, const TrackLog& tracks) {
  std::map<std::string, const SceneLog<FrameOutput>*> by_id;
  for (const auto& s : tracks) by_id[s.scene_id] = &s;
  std::vector<std::string> missing;
  std::vector<metrics::SceneData> out;
  for (const auto& g : gt) {
    auto it = by_id.find(g.scene_id);
    if (it == by_id.end()) {
      missing.push_back(g.scene_id);
      continue;
    }
    out.push_back({g.scene_id, g.frames, it->second->frames});
  }
  if (!missing.empty()) {
    std::string msg = "scenes missing from tracks:";
    for (const auto& m : missing) msg += " " + m;
    throw ValidationError(msg);
  }
  return out;
}

}  // namespace tsmot::io
