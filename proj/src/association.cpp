#include "tsmot/association.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace tsmot::association {
namespace {

using assignment::CostMatrix;

// Both terms of a tracklet-to-tracklet affinity share the gate.
constexpr double kLinkGateTerms = 2.0;

}  // namespace

std::vector<Candidate> make_candidates(std::span<const Tracklet* const> tracklets,
                                       double timestamp, const kalman::NoiseConfig& noise) {
  std::vector<Candidate> out;
  out.reserve(tracklets.size());
  for (const Tracklet* t : tracklets) {
    const TrackState& last = t->last_state();
    out.push_back({t, kalman::ekf_predict(last, timestamp - last.timestamp, noise)});
  }
  return out;
}

LocalResult local_associate(std::span<const Candidate> high, std::span<const Detection> dets,
                            const TrackerConfig& config) {
  CostMatrix cost(high.size(), dets.size());
  std::vector<double> position(high.size() * dets.size(), 0.0);
  for (std::size_t i = 0; i < high.size(); ++i) {
    const Candidate& c = high[i];
    for (std::size_t j = 0; j < dets.size(); ++j) {
      if (dets[j].label != c.tracklet->label) continue;
      const auto a = affinity::affinity_td(*c.tracklet, c.predicted, dets[j], config.noise,
                                           config.use_size_affinity);
      if (-a.position > config.gate_position) continue;
      cost.set(i, j, -a.total);
      position[i * dets.size() + j] = a.position;
    }
  }

  const auto solution = assignment::solve(cost, config.solver, config.greedy_threshold());
  LocalResult out;
  for (const auto& [i, j] : solution.pairs) {
    out.matches.push_back({high[i].tracklet->id, j, position[i * dets.size() + j]});
  }
  out.leftover = solution.unmatched_cols;
  return out;
}

double termination_cost(double confidence) {
  if (confidence >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-confidence);
}

GlobalProblem build_global_cost(std::span<const Candidate> low, std::span<const Candidate> high,
                                std::span<const Detection> dets,
                                std::span<const std::size_t> leftover, const TrackerConfig& config) {
  GlobalProblem p;
  p.num_low = low.size();
  p.num_high = high.size();
  p.num_leftover = leftover.size();
  const std::size_t l = p.num_low;
  const std::size_t h = p.num_high;
  p.cost = CostMatrix(l + p.num_leftover, h + l);
  p.detection_position_affinity.assign(p.num_leftover * l, 0.0);

  // Low vs high: link. The chronologically earlier tracklet goes first.
  if (config.enable_linking) {
    for (std::size_t i = 0; i < l; ++i) {
      const Tracklet& lo = *low[i].tracklet;
      for (std::size_t j = 0; j < h; ++j) {
        const Tracklet& hi = *high[j].tracklet;
        if (lo.label != hi.label) continue;
        const Tracklet* earlier = nullptr;
        const Tracklet* later = nullptr;
        if (lo.end_frame < hi.start_frame) {
          earlier = &lo;
          later = &hi;
        } else if (hi.end_frame < lo.start_frame) {
          earlier = &hi;
          later = &lo;
        } else {
          continue;
        }
        if (later->start_frame - earlier->end_frame > config.max_link_gap) continue;
        const auto a = affinity::affinity_tt(*earlier, *later, config.noise, config.max_link_gap,
                                             config.use_size_affinity);
        if (-a.position > kLinkGateTerms * config.gate_position) continue;
        p.cost.set(i, j, -a.total);
      }
    }
  }

  // Low diagonal: terminate.
  for (std::size_t i = 0; i < l; ++i) {
    p.cost.set(i, h + i, termination_cost(low[i].tracklet->confidence));
  }

  // Leftover detection vs low: extend.
  for (std::size_t r = 0; r < p.num_leftover; ++r) {
    const Detection& det = dets[leftover[r]];
    for (std::size_t j = 0; j < l; ++j) {
      const Candidate& c = low[j];
      if (det.label != c.tracklet->label) continue;
      const auto a = affinity::affinity_td(*c.tracklet, c.predicted, det, config.noise,
                                           config.use_size_affinity);
      if (-a.position > config.gate_position) continue;
      p.cost.set(l + r, h + j, -a.total);
      p.detection_position_affinity[r * l + j] = a.position;
    }
  }
  return p;
}

GlobalResult decode_global(const GlobalProblem& problem, const assignment::Assignment& solution,
                           std::span<const Candidate> low, std::span<const Candidate> high,
                           std::span<const std::size_t> leftover) {
  const std::size_t l = problem.num_low;
  const std::size_t h = problem.num_high;
  GlobalResult out;
  std::vector<bool> low_row_assigned(l, false);
  std::vector<bool> det_row_assigned(problem.num_leftover, false);
  std::vector<bool> low_extended(l, false);

  for (const auto& [row, col] : solution.pairs) {
    if (row < l) {
      low_row_assigned[row] = true;
      if (col < h) {
        out.links.push_back({low[row].tracklet->id, high[col].tracklet->id});
      } else if (col - h == row) {
        out.terminations.push_back(low[row].tracklet->id);
      } else {
        throw InternalError("global association: low tracklet assigned off the diagonal");
      }
    } else {
      const std::size_t r = row - l;
      if (col < h) {
        throw InternalError("global association: detection assigned to a high tracklet");
      }
      const std::size_t j = col - h;
      det_row_assigned[r] = true;
      low_extended[j] = true;
      out.matches.push_back(
          {low[j].tracklet->id, leftover[r], problem.detection_position_affinity[r * l + j]});
    }
  }
  for (std::size_t i = 0; i < l; ++i) {
    if (!low_row_assigned[i] && !low_extended[i]) out.carried.push_back(low[i].tracklet->id);
  }
  for (std::size_t r = 0; r < problem.num_leftover; ++r) {
    if (!det_row_assigned[r]) out.unmatched_detections.push_back(leftover[r]);
  }
  return out;
}

GlobalResult global_associate(std::span<const Candidate> low, std::span<const Candidate> high,
                              std::span<const Detection> dets,
                              std::span<const std::size_t> leftover, const TrackerConfig& config) {
  const GlobalProblem problem = build_global_cost(low, high, dets, leftover, config);
  const auto solution =
      assignment::solve(problem.cost, config.solver, config.greedy_threshold());
  return decode_global(problem, solution, low, high, leftover);
}

AssociationOutcome associate(std::span<const Candidate> high, std::span<const Candidate> low,
                             std::span<const Detection> dets, const TrackerConfig& config) {
  AssociationOutcome out;
  std::vector<std::size_t> leftover;
  if (config.global_only) {
    leftover.resize(dets.size());
    std::iota(leftover.begin(), leftover.end(), std::size_t{0});
  } else {
    LocalResult local = local_associate(high, dets, config);
    out.local_matches = std::move(local.matches);
    leftover = std::move(local.leftover);
  }

  GlobalResult global = global_associate(low, high, dets, leftover, config);
  out.links = std::move(global.links);
  out.global_matches = std::move(global.matches);
  out.terminations = std::move(global.terminations);
  out.carried = std::move(global.carried);
  out.unmatched_detections = std::move(global.unmatched_detections);
  return out;
}

}  // namespace tsmot::association
