// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIXELVEIL_SIMPLEX_HPP
#define PIXELVEIL_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pixelveil {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct SimplexResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Dense tableau for min c.x s.t. rows = b with a known basis. Bland's rule
// on both the entering and leaving choice, so cycling cannot occur.
class SimplexTableau {
 public:
  SimplexTableau(std::vector<std::vector<double>> rows, std::vector<int> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  static constexpr double kPivotTol = 1e-9;

  // Builds the reduced-cost row for the given objective coefficients.
  void set_objective(const std::vector<double>& cost) {
    const std::size_t width = rows_.front().size();
    reduced_.assign(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j)
      reduced_[j] = j < cost.size() ? cost[j] : 0.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int var = basis_[i];
      const double c = var < static_cast<int>(cost.size()) ? cost[var] : 0.0;
      if (c != 0.0)
        for (std::size_t j = 0; j < width; ++j) reduced_[j] -= c * rows_[i][j];
    }
  }

  SolveStatus iterate(std::size_t max_iterations) {
    const std::size_t width = rows_.front().size();
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      int entering = -1;
      for (std::size_t j = 0; j + 1 < width; ++j) {
        if (reduced_[j] < -kPivotTol) {
          entering = static_cast<int>(j);
          break;  // Bland: smallest improving index
        }
      }
      if (entering < 0) return SolveStatus::kOptimal;

      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double a = rows_[i][entering];
        if (a > kPivotTol) {
          const double ratio = rows_[i].back() / a;
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && (leaving < 0 || basis_[i] < basis_[leaving]))) {
            best_ratio = ratio;
            leaving = static_cast<int>(i);
          }
        }
      }
      if (leaving < 0) return SolveStatus::kUnbounded;
      pivot(leaving, entering);
    }
    return SolveStatus::kIterationLimit;
  }

  void pivot(int row, int col) {
    const std::size_t width = rows_.front().size();
    const double p = rows_[row][col];
    for (std::size_t j = 0; j < width; ++j) rows_[row][j] /= p;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == row) continue;
      const double f = rows_[i][col];
      if (f != 0.0)
        for (std::size_t j = 0; j < width; ++j) rows_[i][j] -= f * rows_[row][j];
    }
    const double f = reduced_[col];
    if (f != 0.0)
      for (std::size_t j = 0; j < width; ++j) reduced_[j] -= f * rows_[row][j];
    basis_[row] = col;
  }

  double objective_value() const { return -reduced_.back(); }

  std::vector<std::vector<double>>& rows() { return rows_; }
  std::vector<int>& basis() { return basis_; }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<int> basis_;
  std::vector<double> reduced_;
};

}  // namespace detail

/// Two-phase primal simplex for min c.x subject to A x = b, x >= 0.
inline SimplexResult solve_standard_form(const std::vector<double>& cost,
                                         const std::vector<std::vector<double>>& equalities,
                                         const std::vector<double>& rhs,
                                         std::size_t max_iterations = 100000) {
  const std::size_t m = equalities.size();
  const std::size_t n = cost.size();
  if (rhs.size() != m) throw std::invalid_argument("rhs size does not match constraint count");
  for (const auto& row : equalities)
    if (row.size() != n) throw std::invalid_argument("constraint width does not match cost size");

  // Tableau columns: n structural, m artificial, 1 rhs. Artificials give
  // the initial identity basis for phase 1.
  std::vector<std::vector<double>> rows(m, std::vector<double>(n + m + 1, 0.0));
  std::vector<int> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = sign * equalities[i][j];
    rows[i][n + i] = 1.0;
    rows[i].back() = sign * rhs[i];
    basis[i] = static_cast<int>(n + i);
  }

  detail::SimplexTableau tableau(std::move(rows), std::move(basis));

  std::vector<double> phase1_cost(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1_cost[n + i] = 1.0;
  tableau.set_objective(phase1_cost);
  SolveStatus status = tableau.iterate(max_iterations);
  if (status != SolveStatus::kOptimal) return {status, {}, {}};
  if (tableau.objective_value() > 1e-7) return {SolveStatus::kInfeasible, {}, {}};

  // Drive any degenerate artificial out of the basis; a row with no
  // structural pivot candidate is redundant and can stay (its rhs is 0).
  for (std::size_t i = 0; i < m; ++i) {
    if (tableau.basis()[i] < static_cast<int>(n)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tableau.rows()[i][j]) > detail::SimplexTableau::kPivotTol) {
        tableau.pivot(static_cast<int>(i), static_cast<int>(j));
        break;
      }
    }
  }
  // Forbid re-entry of artificial columns in phase 2.
  for (auto& row : tableau.rows())
    for (std::size_t j = n; j + 1 < row.size(); ++j) row[j] = 0.0;

  tableau.set_objective(cost);
  status = tableau.iterate(max_iterations);
  if (status != SolveStatus::kOptimal) return {status, {}, {}};

  SimplexResult result;
  result.status = SolveStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tableau.basis()[i] < static_cast<int>(n))
      result.x[tableau.basis()[i]] = tableau.rows()[i].back();
  result.objective = tableau.objective_value();
  return result;
}

}  // namespace pixelveil

#endif  // PIXELVEIL_SIMPLEX_HPP
