#pragma once

#include "tsmot/affinity.hpp"
#include "tsmot/assignment.hpp"
#include "tsmot/config.hpp"
#include "tsmot/tracklet.hpp"

#include <span>
#include <vector>

namespace tsmot::association {

/// A tracklet together with its last state propagated to the current frame.
struct Candidate {
  const Tracklet* tracklet = nullptr;
  TrackState predicted;
};

/// Predicts every tracklet to `timestamp`.
std::vector<Candidate> make_candidates(std::span<const Tracklet* const> tracklets,
                                       double timestamp, const kalman::NoiseConfig& noise);

struct Match {
  TrackId track = 0;
  std::size_t detection = 0;      // index into the detection span of the call
  double position_affinity = 0.0;
};

struct Link {
  TrackId low = 0;
  TrackId high = 0;
};

struct LocalResult {
  std::vector<Match> matches;
  std::vector<std::size_t> leftover;
};

/// Detections are matched to high confidence tracklets. Cost is the negated
/// total affinity; pairs outside the Mahalanobis gate or of a different class
/// are forbidden.
LocalResult local_associate(std::span<const Candidate> high, std::span<const Detection> dets,
                            const TrackerConfig& config);

/// Cost matrix of the global stage, (l + d') x (h + l):
///   rows [0, l) are low tracklets, rows [l, l + d') leftover detections;
///   cols [0, h) are high tracklets, cols [h, h + l) low tracklets.
/// Low-vs-high entries link tracklets, the low diagonal terminates, and
/// detection-vs-low entries extend a low tracklet. Detections never reach
/// high tracklets here.
struct GlobalProblem {
  assignment::CostMatrix cost;
  std::size_t num_low = 0;
  std::size_t num_high = 0;
  std::size_t num_leftover = 0;
  // Position affinity of each admissible detection-vs-low entry, row-major
  // over (leftover, low).
  std::vector<double> detection_position_affinity;
};

/// -log(1 - conf); +infinity (forbidden) when conf >= 1.
double termination_cost(double confidence);

GlobalProblem build_global_cost(std::span<const Candidate> low, std::span<const Candidate> high,
                                std::span<const Detection> dets,
                                std::span<const std::size_t> leftover, const TrackerConfig& config);

struct GlobalResult {
  std::vector<Link> links;
  std::vector<Match> matches;
  std::vector<TrackId> terminations;
  std::vector<TrackId> carried;                   // low tracklets neither assigned nor extended
  std::vector<std::size_t> unmatched_detections;  // indices into `dets`
};

/// Solves the global problem with the configured solver and decodes it.
/// A low tracklet's row and column are separate LAP resources, so one low
/// tracklet may be both linked and extended by a detection; both are
/// reported and the caller decides.
/// Throws InternalError when the decoded assignment is inconsistent.
GlobalResult global_associate(std::span<const Candidate> low, std::span<const Candidate> high,
                              std::span<const Detection> dets,
                              std::span<const std::size_t> leftover, const TrackerConfig& config);

/// Decodes a solved global problem. Exposed for verification.
GlobalResult decode_global(const GlobalProblem& problem, const assignment::Assignment& solution,
                           std::span<const Candidate> low, std::span<const Candidate> high,
                           std::span<const std::size_t> leftover);

struct AssociationOutcome {
  std::vector<Match> local_matches;
  std::vector<Link> links;
  std::vector<Match> global_matches;
  std::vector<TrackId> terminations;
  std::vector<TrackId> carried;
  std::vector<std::size_t> unmatched_detections;
};

/// Local stage followed by the global stage on its leftovers.
AssociationOutcome associate(std::span<const Candidate> high, std::span<const Candidate> low,
                             std::span<const Detection> dets, const TrackerConfig& config);

}  // namespace tsmot::association
