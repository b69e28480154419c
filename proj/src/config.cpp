#include "tsmot/config.hpp"

#include <cmath>

namespace tsmot {

Solver parse_solver(const std::string& name) {
  if (name == "hungarian") return Solver::kHungarian;
  if (name == "greedy") return Solver::kGreedy;
  throw ValidationError("unknown solver '" + name + "' (expected hungarian or greedy)");
}

const char* to_string(Solver solver) {
  return solver == Solver::kHungarian ? "hungarian" : "greedy";
}

void TrackerConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ValidationError(std::string("config: ") + name + " must be > 0");
    }
  };
  positive(beta, "beta");
  positive(gate_position, "gate_position");
  positive(match_distance, "match_distance");
  positive(max_miss_frames, "max_miss_frames");
  positive(max_link_gap, "max_link_gap");
  positive(size_window, "size_window");
  positive(amota_recall_steps, "amota_recall_steps");
  if (!(tau_c > 0.0 && tau_c < 1.0)) {
    throw ValidationError("config: tau_c must lie in (0, 1)");
  }
  if (coast_frames < 0) throw ValidationError("config: coast_frames must be >= 0");
  if (!(coast_score_factor >= 0.0 && coast_score_factor <= 1.0)) {
    throw ValidationError("config: coast_score_factor must lie in [0, 1]");
  }
  if (class_map.empty()) throw ValidationError("config: class_map is empty");
  noise.validate();
}

void TrackerConfig::apply_ablation(const std::string& name) {
  if (name == "default") return;
  if (name == "hungarian") {
    solver = Solver::kHungarian;
  } else if (name == "no_reid") {
    enable_linking = false;
  } else if (name == "global_only") {
    global_only = true;
  } else if (name == "cv_only") {
    cv_only = true;
  } else if (name == "no_size") {
    use_size_affinity = false;
  } else {
    throw ValidationError("unknown ablation '" + name +
                          "' (expected default, hungarian, no_reid, global_only, cv_only, "
                          "no_size)");
  }
}

}  // namespace tsmot
