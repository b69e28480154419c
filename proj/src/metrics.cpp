#include "tsmot/metrics.hpp"

#include "tsmot/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <unordered_map>

namespace tsmot::metrics {
namespace {

double ground_distance(const Vec3& a, const Vec3& b) { return (a - b).head<2>().norm(); }

struct GtTrajectory {
  std::int64_t present = 0;
  std::int64_t tracked = 0;
  std::vector<bool> status;  // tracked flag per frame the object is present
};

void accumulate_scene(const SceneData& scene, double match_distance, double min_score,
                      MotCounts& counts) {
  if (scene.gt.size() != scene.hyp.size()) {
    throw ValidationError("scene '" + scene.scene_id + "': " + std::to_string(scene.gt.size()) +
                          " ground-truth frames vs " + std::to_string(scene.hyp.size()) +
                          " track frames");
  }

  std::unordered_map<std::int64_t, TrackId> active;    // previous-frame correspondences
  std::unordered_map<std::int64_t, TrackId> last_hyp;  // most recent correspondence ever
  std::map<std::int64_t, GtTrajectory> trajectories;

  for (std::size_t f = 0; f < scene.gt.size(); ++f) {
    const FrameGroundTruth& gt = scene.gt[f];
    const FrameOutput& hyp_frame = scene.hyp[f];
    if (gt.frame_index != hyp_frame.frame_index) {
      throw ValidationError("scene '" + scene.scene_id + "': frame " +
                            std::to_string(gt.frame_index) + " not aligned with track frame " +
                            std::to_string(hyp_frame.frame_index));
    }
    std::vector<const TrackOutput*> hyps;
    for (const auto& h : hyp_frame.tracks) {
      if (h.score >= min_score) hyps.push_back(&h);
    }

    const std::size_t ng = gt.boxes.size();
    const std::size_t nh = hyps.size();
    std::vector<long> gt_to_hyp(ng, -1);
    std::vector<bool> hyp_used(nh, false);

    auto compatible = [&](std::size_t g, std::size_t h) {
      return gt.boxes[g].category == hyps[h]->category &&
             ground_distance(gt.boxes[g].center, hyps[h]->center) <= match_distance;
    };

    // Keep last frame's correspondences that are still valid.
    for (std::size_t g = 0; g < ng; ++g) {
      auto it = active.find(gt.boxes[g].gt_track_id);
      if (it == active.end()) continue;
      for (std::size_t h = 0; h < nh; ++h) {
        if (!hyp_used[h] && hyps[h]->id == it->second && compatible(g, h)) {
          gt_to_hyp[g] = static_cast<long>(h);
          hyp_used[h] = true;
          break;
        }
      }
    }

    std::vector<std::size_t> free_gt, free_hyp;
    for (std::size_t g = 0; g < ng; ++g) {
      if (gt_to_hyp[g] < 0) free_gt.push_back(g);
    }
    for (std::size_t h = 0; h < nh; ++h) {
      if (!hyp_used[h]) free_hyp.push_back(h);
    }
    assignment::CostMatrix cost(free_gt.size(), free_hyp.size());
    for (std::size_t a = 0; a < free_gt.size(); ++a) {
      for (std::size_t b = 0; b < free_hyp.size(); ++b) {
        if (compatible(free_gt[a], free_hyp[b])) {
          cost.set(a, b, ground_distance(gt.boxes[free_gt[a]].center, hyps[free_hyp[b]]->center));
        }
      }
    }
    for (const auto& [a, b] : assignment::solve_hungarian(cost).pairs) {
      gt_to_hyp[free_gt[a]] = static_cast<long>(free_hyp[b]);
      hyp_used[free_hyp[b]] = true;
    }

    active.clear();
    for (std::size_t g = 0; g < ng; ++g) {
      const std::int64_t gid = gt.boxes[g].gt_track_id;
      GtTrajectory& traj = trajectories[gid];
      ++traj.present;
      ++counts.num_gt;
      if (gt_to_hyp[g] < 0) {
        ++counts.fn;
        traj.status.push_back(false);
        continue;
      }
      const TrackOutput& h = *hyps[static_cast<std::size_t>(gt_to_hyp[g])];
      ++counts.tp;
      ++traj.tracked;
      traj.status.push_back(true);
      counts.distance_sum += ground_distance(gt.boxes[g].center, h.center);
      counts.tp_scores.push_back(h.score);
      auto prev = last_hyp.find(gid);
      if (prev != last_hyp.end() && prev->second != h.id) ++counts.ids;
      last_hyp[gid] = h.id;
      active[gid] = h.id;
    }
    for (std::size_t h = 0; h < nh; ++h) {
      if (!hyp_used[h]) ++counts.fp;
    }
  }

  for (const auto& [gid, traj] : trajectories) {
    ++counts.num_trajectories;
    const double ratio = static_cast<double>(traj.tracked) / static_cast<double>(traj.present);
    if (ratio >= 0.8) ++counts.mt;
    if (ratio < 0.2) ++counts.ml;
    // Interruptions between the first and last tracked frame.
    const auto first = std::find(traj.status.begin(), traj.status.end(), true);
    if (first == traj.status.end()) continue;
    const auto last = std::find(traj.status.rbegin(), traj.status.rend(), true).base();
    for (auto it = first; it + 1 < last; ++it) {
      if (*it && !*(it + 1)) ++counts.frag;
    }
  }
}

}  // namespace

double MotCounts::mota() const {
  if (num_gt == 0) return 1.0;
  return 1.0 - static_cast<double>(fn + fp + ids) / static_cast<double>(num_gt);
}

double MotCounts::motp(double fallback) const {
  return tp == 0 ? fallback : distance_sum / static_cast<double>(tp);
}

double MotCounts::recall() const {
  return num_gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(num_gt);
}

double MotCounts::motar() const {
  const double r = recall();
  if (r <= 0.0) return 0.0;
  const double p = static_cast<double>(num_gt);
  const double err = static_cast<double>(ids + fp + fn) - (1.0 - r) * p;
  return std::max(0.0, 1.0 - err / (r * p));
}

void MotCounts::merge(const MotCounts& o) {
  num_gt += o.num_gt;
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  ids += o.ids;
  frag += o.frag;
  mt += o.mt;
  ml += o.ml;
  num_trajectories += o.num_trajectories;
  distance_sum += o.distance_sum;
  tp_scores.insert(tp_scores.end(), o.tp_scores.begin(), o.tp_scores.end());
}

MotCounts clear_mot(std::span<const SceneData> scenes, double match_distance, double min_score) {
  MotCounts total;
  for (const SceneData& s : scenes) {
    MotCounts c;
    accumulate_scene(s, match_distance, min_score, c);
    total.merge(c);
  }
  return total;
}

MotReport evaluate(std::span<const SceneData> scenes, double match_distance, int recall_steps) {
  if (recall_steps < 1) throw ValidationError("evaluate: recall_steps must be >= 1");
  MotReport report;
  report.counts = clear_mot(scenes, match_distance);
  report.mota = report.counts.mota();
  report.motp = report.counts.motp(match_distance);

  std::vector<double> scores = report.counts.tp_scores;
  std::sort(scores.begin(), scores.end(), std::greater<>());
  const double p = static_cast<double>(report.counts.num_gt);

  std::map<double, MotCounts> cache;
  double motar_sum = 0.0;
  double motp_sum = 0.0;
  for (int k = 1; k <= recall_steps; ++k) {
    RecallPoint pt;
    pt.target_recall = static_cast<double>(k) / recall_steps;
    const auto needed = static_cast<std::size_t>(std::ceil(pt.target_recall * p - 1e-9));
    if (p > 0 && needed >= 1 && needed <= scores.size()) {
      pt.achieved = true;
      pt.threshold = scores[needed - 1];
      auto it = cache.find(pt.threshold);
      if (it == cache.end()) {
        it = cache.emplace(pt.threshold, clear_mot(scenes, match_distance, pt.threshold)).first;
      }
      const MotCounts& c = it->second;
      pt.recall = c.recall();
      pt.mota = c.mota();
      pt.motar = c.motar();
      pt.motp = c.motp(match_distance);
    } else {
      pt.motp = match_distance;
    }
    motar_sum += pt.motar;
    motp_sum += pt.motp;
    report.curve.push_back(pt);
  }
  report.amota = motar_sum / recall_steps;
  report.amotp = motp_sum / recall_steps;
  return report;
}

std::string format_table(const std::vector<std::pair<std::string, MotReport>>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %7s %7s %6s %6s %7s %7s %6s %6s\n", "Method", "AMOTA",
                "AMOTP", "MT", "ML", "FP", "FN", "IDS", "FRAG");
  out += line;
  for (const auto& [name, r] : rows) {
    std::snprintf(line, sizeof line, "%-20s %7.3f %7.3f %6lld %6lld %7lld %7lld %6lld %6lld\n",
                  name.c_str(), r.amota, r.amotp, static_cast<long long>(r.counts.mt),
                  static_cast<long long>(r.counts.ml), static_cast<long long>(r.counts.fp),
                  static_cast<long long>(r.counts.fn), static_cast<long long>(r.counts.ids),
                  static_cast<long long>(r.counts.frag));
    out += line;
  }
  return out;
}

}  // namespace tsmot::metrics
