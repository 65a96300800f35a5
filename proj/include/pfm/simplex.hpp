#pragma once

// Dense two-phase primal simplex over an exact ordered field.
//
//   minimize c.x  subject to  A x = b,  x >= 0
//
// Bland's rule for both entering and leaving variables, so no cycling and no
// tolerances: every comparison is exact.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pfm::lp {

template <class Field>
struct StandardForm {
  std::vector<std::vector<Field>> a;  // m rows of n coefficients
  std::vector<Field> b;               // m
  std::vector<Field> c;               // n
};

enum class Status { Optimal, Infeasible, Unbounded };

template <class Field>
struct Solution {
  Status status = Status::Infeasible;
  Field objective{};
  std::vector<Field> x;
};

namespace detail {

template <class Field>
class Tableau {
 public:
  // rows[i] holds constraint row i followed by its right-hand side;
  // cost holds reduced costs followed by minus the objective value.
  std::vector<std::vector<Field>> rows;
  std::vector<Field> cost;
  std::vector<std::size_t> basis;
  std::size_t width = 0;  // structural + artificial columns

  const Field& rhs(std::size_t i) const { return rows[i][width]; }

  void pivot(std::size_t r, std::size_t col) {
    const Field p = rows[r][col];
    for (auto& v : rows[r]) v /= p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const Field f = rows[i][col];
      for (std::size_t j = 0; j <= width; ++j) rows[i][j] -= f * rows[r][j];
    }
    if (cost[col] != 0) {
      const Field f = cost[col];
      for (std::size_t j = 0; j <= width; ++j) cost[j] -= f * rows[r][j];
    }
    basis[r] = col;
  }

  /// Runs to optimality over columns [0, allowed). Returns false if unbounded.
  bool optimize(std::size_t allowed) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowed; ++j)
        if (cost[j] < 0) {
          entering = j;
          break;
        }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      Field best{};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Field& coef = rows[i][*entering];
        if (coef <= 0) continue;
        Field ratio = rhs(i) / coef;
        if (!leaving || ratio < best || (ratio == best && basis[i] < basis[*leaving])) {
          leaving = i;
          best = std::move(ratio);
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

  void reprice(const std::vector<Field>& c) {
    cost.assign(width + 1, Field(0));
    for (std::size_t j = 0; j < c.size(); ++j) cost[j] = c[j];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t bj = basis[i];
      const Field cb = bj < c.size() ? c[bj] : Field(0);
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= width; ++j) cost[j] -= cb * rows[i][j];
    }
  }
};

}  // namespace detail

template <class Field>
Solution<Field> solve(const StandardForm<Field>& problem) {
  const std::size_t m = problem.b.size();
  const std::size_t n = problem.c.size();
  if (problem.a.size() != m) throw std::invalid_argument("lp::solve: row count mismatch");
  for (const auto& row : problem.a)
    if (row.size() != n) throw std::invalid_argument("lp::solve: column count mismatch");

  detail::Tableau<Field> t;
  t.width = n + m;
  t.rows.assign(m, std::vector<Field>(t.width + 1, Field(0)));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = problem.b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = flip ? -problem.a[i][j] : problem.a[i][j];
    t.rows[i][n + i] = Field(1);
    t.rows[i][t.width] = flip ? -problem.b[i] : problem.b[i];
    t.basis[i] = n + i;
  }

  // Phase 1: minimize the sum of artificials.
  std::vector<Field> phase1(t.width, Field(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = Field(1);
  t.reprice(phase1);
  t.optimize(t.width);
  if (-t.cost[t.width] != 0) return {Status::Infeasible, Field(0), {}};

  // Drive zero-level artificials out of the basis; rows where that fails are redundant.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j)
      if (t.rows[i][j] != 0) {
        col = j;
        break;
      }
    if (col) {
      t.pivot(i, *col);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  // Phase 2 over structural columns only.
  t.reprice(problem.c);
  if (!t.optimize(n)) return {Status::Unbounded, Field(0), {}};

  Solution<Field> sol;
  sol.status = Status::Optimal;
  sol.x.assign(n, Field(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) sol.x[t.basis[i]] = t.rhs(i);
  sol.objective = Field(0);
  for (std::size_t j = 0; j < n; ++j) sol.objective += problem.c[j] * sol.x[j];
  return sol;
}

}  // namespace pfm::lp
