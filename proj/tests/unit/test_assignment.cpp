#include "oracles.hpp"
#include "tsmot/assignment.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace tsmot;
using assignment::CostMatrix;
using assignment::kInfinityCost;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

void check_valid(const CostMatrix& m, const assignment::Assignment& a) {
  std::set<std::size_t> rows, cols;
  for (const auto& [r, c] : a.pairs) {
    CHECK(r < m.rows());
    CHECK(c < m.cols());
    CHECK(m.admissible(r, c));
    CHECK(rows.insert(r).second);
    CHECK(cols.insert(c).second);
  }
  for (std::size_t r : a.unmatched_rows) CHECK(rows.insert(r).second);
  for (std::size_t c : a.unmatched_cols) CHECK(cols.insert(c).second);
  CHECK(rows.size() == m.rows());
  CHECK(cols.size() == m.cols());
}

CostMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double forbid) {
  std::uniform_real_distribution<double> u(-10, 10), p(0, 1);
  CostMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, p(rng) < forbid ? kInfinityCost : u(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("cost matrix clamps and rejects") {
  CostMatrix m(2, 2, 0.0);
  m.set(0, 0, std::numeric_limits<double>::infinity());
  CHECK(m(0, 0) == kInfinityCost);
  CHECK_FALSE(m.admissible(0, 0));
  CHECK_THROWS_AS(m.set(0, 1, std::nan("")), ValidationError);
  CHECK_THROWS_AS(m.set(0, 1, -std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("hungarian examples") {
  const CostMatrix eye{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  const auto a = assignment::solve_hungarian(eye);
  CHECK(a.pairs == Pairs{{0, 0}, {1, 1}, {2, 2}});
  CHECK(a.total_cost(eye) == 0.0);

  const auto none = assignment::solve_hungarian(CostMatrix(3, 4));
  CHECK(none.pairs.empty());
  CHECK(none.unmatched_rows.size() == 3);
  CHECK(none.unmatched_cols.size() == 4);

  CHECK(assignment::solve_hungarian(CostMatrix(0, 5)).unmatched_cols.size() == 5);

  const CostMatrix m{{1, 2}, {2, 100}};
  CHECK(assignment::solve_hungarian(m).total_cost(m) == 4.0);
}

TEST_CASE("hungarian equals brute force") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int i = 0; i < 300; ++i) {
    const CostMatrix m = random_matrix(rng, dim(rng), dim(rng), 0.0);
    const auto a = assignment::solve_hungarian(m);
    check_valid(m, a);
    CHECK(a.pairs.size() == std::min(m.rows(), m.cols()));
    CHECK(std::abs(a.total_cost(m) - oracle::brute_force_full(m)) < 1e-9);
  }
  for (int i = 0; i < 300; ++i) {
    const CostMatrix m = random_matrix(rng, dim(rng), dim(rng), 0.5);
    const auto a = assignment::solve_hungarian(m);
    check_valid(m, a);
    const auto [n, cost] = oracle::brute_force_partial(m);
    CHECK(a.pairs.size() == n);
    CHECK(std::abs(a.total_cost(m) - cost) < 1e-9);
  }
}

TEST_CASE("hungarian commutes with transposition") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int i = 0; i < 100; ++i) {
    const CostMatrix m = random_matrix(rng, dim(rng), dim(rng), 0.0);
    const auto a = assignment::solve_hungarian(m);
    const auto b = assignment::solve_hungarian(m.transposed());
    CHECK(std::abs(a.total_cost(m) - b.total_cost(m.transposed())) < 1e-9);
  }
}

TEST_CASE("greedy examples") {
  const CostMatrix a{{0, 9}, {9, 0}};
  CHECK(assignment::solve_greedy(a, 5).pairs == Pairs{{0, 0}, {1, 1}});

  const CostMatrix b{{1, 2}, {2, 100}};
  const auto gb = assignment::solve_greedy(b, 50);
  CHECK(gb.pairs == Pairs{{0, 0}});
  CHECK(gb.unmatched_rows == std::vector<std::size_t>{1});
  CHECK(gb.total_cost(b) == 1.0);

  const CostMatrix flat(3, 3, 2.0);
  const auto gf = assignment::solve_greedy(flat, 5);
  CHECK(gf.pairs == Pairs{{0, 0}, {1, 1}, {2, 2}});
}

TEST_CASE("greedy follows the reference loop and never beats hungarian") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = dim(rng);
    const CostMatrix m = random_matrix(rng, n, n, 0.2);
    const double thr = 3.0;
    const auto g = assignment::solve_greedy(m, thr);
    check_valid(m, g);

    auto expect = oracle::greedy_trace(m, thr);
    std::sort(expect.begin(), expect.end());
    CHECK(g.pairs == expect);
    for (const auto& [r, c] : g.pairs) CHECK(m(r, c) < thr);

    CostMatrix capped(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) capped.set(r, c, std::min(m(r, c), thr));
    }
    const double padded = g.total_cost(m) + thr * static_cast<double>(g.unmatched_rows.size());
    CHECK(padded >= assignment::solve_hungarian(capped).total_cost(capped) - 1e-9);
  }
}
