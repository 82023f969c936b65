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

#ifndef PIXELVEIL_LAD_HPP
#define PIXELVEIL_LAD_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pixelveil/simplex.hpp"

namespace pixelveil {

/// Least-absolute-deviations instance: approximate the target as a
/// weighted sum of the gallery vectors, minimizing the L1 residual.
struct LadProblem {
  std::vector<std::vector<double>> gallery;  // m vectors of dimension n
  std::vector<double> target;                // dimension n

  std::size_t gallery_size() const { return gallery.size(); }
  std::size_t dimension() const { return target.size(); }

  void validate() const {
    if (gallery.empty() || target.empty())
      throw std::invalid_argument("gallery and target must be non-empty");
    for (const auto& v : gallery) {
      if (v.size() != target.size())
        throw std::invalid_argument("gallery vector dimension does not match target");
      for (double value : v)
        if (!std::isfinite(value)) throw std::invalid_argument("gallery values must be finite");
    }
    for (double value : target)
      if (!std::isfinite(value)) throw std::invalid_argument("target values must be finite");
  }
};

/// Inequality-form linear program min objective.z s.t. constraints.z >= rhs
/// with variable layout z = (u_1..u_n, W_1..W_m); the W block is free and
/// u >= 0 is implied by the paired constraints.
struct LinearProgram {
  std::size_t num_u = 0;
  std::size_t num_w = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> constraints;
  std::vector<double> rhs;

  std::size_t num_vars() const { return num_u + num_w; }
};

/// LAD rewritten without absolute values: per coordinate i, the auxiliary
/// u_i dominates both the positive and the negated residual,
/// u_i >= +-(sum_j W_j X_ji - Y_i), and the objective is sum u_i.
inline LinearProgram build_lad_program(const LadProblem& problem) {
  problem.validate();
  const std::size_t n = problem.dimension();
  const std::size_t m = problem.gallery_size();

  LinearProgram lp;
  lp.num_u = n;
  lp.num_w = m;
  lp.objective.assign(n + m, 0.0);
  for (std::size_t i = 0; i < n; ++i) lp.objective[i] = 1.0;
  lp.constraints.reserve(2 * n);
  lp.rhs.reserve(2 * n);
  for (int sign : {-1, +1}) {
    // sign -1: u_i - r_i >= -Y_i encodes u_i >= +(residual);
    // sign +1: u_i + r_i >= +Y_i encodes u_i >= -(residual),
    // where r_i = sum_j W_j X_ji - Y_i.
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(n + m, 0.0);
      row[i] = 1.0;
      for (std::size_t j = 0; j < m; ++j) row[n + j] = sign * problem.gallery[j][i];
      lp.constraints.push_back(std::move(row));
      lp.rhs.push_back(sign * problem.target[i]);
    }
  }
  return lp;
}

/// True when every constraint of the program holds at z within tol.
inline bool lp_feasible(const LinearProgram& lp, const std::vector<double>& z, double tol) {
  if (z.size() != lp.num_vars()) throw std::invalid_argument("point size does not match program");
  for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) lhs += lp.constraints[r][j] * z[j];
    if (lhs < lp.rhs[r] - tol) return false;
  }
  return true;
}

struct LadSolution {
  SolveStatus status = SolveStatus::kIterationLimit;
  std::vector<double> weights;    // W, unconstrained in sign
  std::vector<double> u;          // auxiliary variables, one per coordinate
  std::vector<double> residuals;  // signed residuals sum_j W_j X_ji - Y_i
  double objective = 0.0;         // optimal L1 residual
};

/// Solves the LAD program with a two-phase simplex. The free weights are
/// split into positive and negative parts for the standard form.
inline LadSolution solve_lad(const LadProblem& problem) {
  const LinearProgram lp = build_lad_program(problem);
  const std::size_t n = lp.num_u;
  const std::size_t m = lp.num_w;
  const std::size_t rows = lp.constraints.size();

  // Standard-form columns: u (n), w+ (m), w- (m), slack (one per row).
  const std::size_t total = n + 2 * m + rows;
  std::vector<double> cost(total, 0.0);
  for (std::size_t i = 0; i < n; ++i) cost[i] = 1.0;
  std::vector<std::vector<double>> equalities(rows, std::vector<double>(total, 0.0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < n; ++i) equalities[r][i] = lp.constraints[r][i];
    for (std::size_t j = 0; j < m; ++j) {
      equalities[r][n + j] = lp.constraints[r][n + j];
      equalities[r][n + m + j] = -lp.constraints[r][n + j];
    }
    equalities[r][n + 2 * m + r] = -1.0;  // surplus for the >= constraint
  }

  const SimplexResult sr = solve_standard_form(cost, equalities, lp.rhs);
  LadSolution solution;
  solution.status = sr.status;
  if (sr.status != SolveStatus::kOptimal)
    throw std::runtime_error(std::string("LAD solve failed: simplex status ") +
                             to_string(sr.status));

  solution.u.assign(sr.x.begin(), sr.x.begin() + n);
  solution.weights.resize(m);
  for (std::size_t j = 0; j < m; ++j) solution.weights[j] = sr.x[n + j] - sr.x[n + m + j];
  solution.residuals.resize(n);
  solution.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = -problem.target[i];
    for (std::size_t j = 0; j < m; ++j) r += solution.weights[j] * problem.gallery[j][i];
    solution.residuals[i] = r;
    solution.objective += std::abs(r);
  }
  return solution;
}

struct IdentityApproximation {
  std::vector<double> weights;
  std::vector<double> synthesized;  // sum_j W_j X_j
  double objective = 0.0;
  SolveStatus status = SolveStatus::kIterationLimit;
};

/// Solves the LAD problem and materializes the weighted gallery sum.
inline IdentityApproximation approximate_identity(const std::vector<std::vector<double>>& gallery,
                                                  const std::vector<double>& target) {
  LadProblem problem{gallery, target};
  const LadSolution solution = solve_lad(problem);
  IdentityApproximation result;
  result.weights = solution.weights;
  result.objective = solution.objective;
  result.status = solution.status;
  result.synthesized.assign(target.size(), 0.0);
  for (std::size_t j = 0; j < gallery.size(); ++j)
    for (std::size_t i = 0; i < target.size(); ++i)
      result.synthesized[i] += solution.weights[j] * gallery[j][i];
  return result;
}

}  // namespace pixelveil

#endif  // PIXELVEIL_LAD_HPP
