// Copyright 2026 The dprocess Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPROCESS_THEORY_HPP_
#define DPROCESS_THEORY_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace dprocess {

// Deterministic approximating functions of the d-process.
//
// With t the scaled time (i/n), s_j(t) approximates S^(j)/n and y_j(t) the
// fraction of vertices of degree exactly j. They solve
//
//   ds_j/dt = -2 y_j / s_{d-1},   s_j(0) = 1,
//
// whose solution is y_j = y0 u^j / j! with u = -ln(y0), where y0 is fixed by
//
//   f(u) := e^{-u} * sum_{j<d} u^j (d-j) / j!  =  d - 2t.
//
// f is strictly decreasing from f(0) = d to 0, so the root is unique. All
// solving is done in u, because y0 underflows long before d - 2t does.

struct SolverTolerances {
  /// Acceptable |f(u) - (d - 2t)| is this times d.
  double residual_per_degree = 1e-12;
  /// Acceptable |sum_j s_j - (d - 2t)|.
  double sum_residual = 1e-10;
};

struct RootSolution {
  double u = 0.0;       // -ln(y0)
  double log_y0 = 0.0;  // == -u, kept for readability at call sites
  int iterations = 0;
};

struct TheoryEval {
  double t = 0.0;
  double gap = 0.0;  // d - 2t
  double u = 0.0;
  std::vector<double> y;
  std::vector<double> s;
  double residual_implicit = 0.0;  // |sum_j (d-j) y_j - (d - 2t)|
  double residual_sum = 0.0;  // |sum_j s_j - (d - 2t)|

  double y0() const { return y.empty() ? 0.0 : y[0]; }
};

/// Largest admissible t is d/2 - kDomainMargin.
inline constexpr double kDomainMargin = 1e-15;

/// Root of f(u) = gap for gap in (0, d]. Throws DomainError otherwise.
RootSolution solve_u_for_gap(int d, double gap);

/// Root for scaled time t in [0, d/2 - kDomainMargin). Throws DomainError
/// outside that range and ParameterError for d < 1.
RootSolution solve_y0(int d, double t);

/// y, s and residuals at scaled time t.
TheoryEval eval_theory(int d, double t);

/// Same, parametrised directly by gap = d - 2t in (0, d]. Lets callers pass
/// (dn - 2i)/n computed without cancellation.
TheoryEval eval_theory_gap(int d, double gap);

/// Values at step i of an n-vertex process, with n*y and n*s alongside.
struct StepTheory {
  TheoryEval eval;
  std::vector<double> ny;
  std::vector<double> ns;
};

/// Requires 0 <= i < dn/2. Non-integer i is allowed (i(r, l) is real).
StepTheory eval_theory_at_step(std::uint64_t n, int d, double i);

/// First-order approximation of s_j (and y_j) as t -> d/2:
///   (d-1)! gap / (j! (-ln gap)^{d-1-j}).
double asymptotic_s(int d, int j, double gap);

struct OdeCheck {
  double max_abs_error = 0.0;    // vs the implicit solution, step h
  double refinement_gap = 0.0;   // max |s(h) - s(h/2)| over the grid
  bool step_ok = true;           // refinement_gap within tolerance
};

/// Integrates the s-system with classical RK4 at fixed step `h` from t = 0
/// through the (sorted) grid, landing exactly on every grid point, and
/// compares against eval_theory. The integration is repeated at h/2; if the
/// two disagree by more than `refinement_tolerance` the step is flagged.
/// Throws DomainError if the grid is unsorted or leaves [0, d/2).
OdeCheck ode_crosscheck(int d, std::span<const double> t_grid, double h,
                        double refinement_tolerance = 1e-7);

}  // namespace dprocess

#endif  // DPROCESS_THEORY_HPP_
