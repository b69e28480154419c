#pragma once

#include "tsmot/config.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace tsmot::assignment {

/// Marks a forbidden pair. Entries at or above it are never matched.
inline constexpr double kInfinityCost = 1e18;

/// Dense row-major cost matrix; may be empty or rectangular.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = kInfinityCost);
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// Stores `v`; +inf and anything above the sentinel become the sentinel.
  /// Throws ValidationError for NaN or -inf.
  void set(std::size_t r, std::size_t c, double v);

  bool admissible(std::size_t r, std::size_t c) const { return (*this)(r, c) < kInfinityCost; }

  CostMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A partial matching. Pairs are sorted by row.
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;

  double total_cost(const CostMatrix& m) const;
};

/// Optimal solver. Maximizes the number of admissible pairs and, among those
/// matchings, minimizes the total cost.
Assignment solve_hungarian(const CostMatrix& m);

/// Repeatedly takes the cheapest remaining admissible pair whose cost is
/// below `threshold`; ties go to the lowest row, then the lowest column.
Assignment solve_greedy(const CostMatrix& m, double threshold);

Assignment solve(const CostMatrix& m, Solver solver, double greedy_threshold);

}  // namespace tsmot::assignment
