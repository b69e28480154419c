#include "tsmot/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace tsmot::assignment {
namespace {

Assignment finish(const CostMatrix& m, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  Assignment a;
  std::vector<bool> row_used(m.rows(), false);
  std::vector<bool> col_used(m.cols(), false);
  for (const auto& [r, c] : pairs) {
    if (!m.admissible(r, c)) continue;
    row_used[r] = true;
    col_used[c] = true;
    a.pairs.emplace_back(r, c);
  }
  std::sort(a.pairs.begin(), a.pairs.end());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!row_used[r]) a.unmatched_rows.push_back(r);
  }
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!col_used[c]) a.unmatched_cols.push_back(c);
  }
  return a;
}

// Shortest augmenting path Hungarian (potentials u, v) for n <= m, every row
// assigned. `cost` is finite everywhere. Returns the column of each row.
std::vector<std::size_t> hungarian_rows_le_cols(const std::vector<double>& cost, std::size_t n,
                                                std::size_t m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, std::min(fill, kInfinityCost)) {}

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ValidationError("CostMatrix: ragged initializer");
    for (double v : row) data_.push_back(v);
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) set(r, c, (*this)(r, c));
  }
}

void CostMatrix::set(std::size_t r, std::size_t c, double v) {
  if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
    throw ValidationError("CostMatrix: entries must be finite or +infinity");
  }
  data_[r * cols_ + c] = std::min(v, kInfinityCost);
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = (*this)(r, c);
  }
  return t;
}

double Assignment::total_cost(const CostMatrix& m) const {
  double sum = 0.0;
  for (const auto& [r, c] : pairs) sum += m(r, c);
  return sum;
}

Assignment solve_hungarian(const CostMatrix& m) {
  if (m.empty()) return finish(m, {});

  const bool transpose = m.rows() > m.cols();
  const CostMatrix work = transpose ? m.transposed() : m;
  const std::size_t n = work.rows();
  const std::size_t k = work.cols();

  // Forbidden pairs get a finite penalty large enough that trading one
  // admissible pair for any set of cheaper ones never pays off.
  double max_abs = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      if (work.admissible(r, c)) max_abs = std::max(max_abs, std::abs(work(r, c)));
    }
  }
  const double penalty = 2.0 * static_cast<double>(n) * max_abs + 1.0;
  std::vector<double> cost(n * k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      cost[r * k + c] = work.admissible(r, c) ? work(r, c) : penalty;
    }
  }

  const std::vector<std::size_t> row_to_col = hungarian_rows_le_cols(cost, n, k);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t r = 0; r < n; ++r) {
    if (transpose) {
      pairs.emplace_back(row_to_col[r], r);
    } else {
      pairs.emplace_back(r, row_to_col[r]);
    }
  }
  return finish(m, std::move(pairs));
}

Assignment solve_greedy(const CostMatrix& m, double threshold) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.admissible(r, c) && m(r, c) < threshold) candidates.emplace_back(m(r, c), r, c);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> row_used(m.rows(), false);
  std::vector<bool> col_used(m.cols(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [cost, r, c] : candidates) {
    if (row_used[r] || col_used[c]) continue;
    row_used[r] = true;
    col_used[c] = true;
    pairs.emplace_back(r, c);
  }
  return finish(m, std::move(pairs));
}

Assignment solve(const CostMatrix& m, Solver solver, double greedy_threshold) {
  return solver == Solver::kHungarian ? solve_hungarian(m) : solve_greedy(m, greedy_threshold);
}

}  // namespace tsmot::assignment
