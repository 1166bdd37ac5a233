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

#include "dprocess/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dprocess/error.hpp"

namespace dprocess {
namespace {

constexpr double kLogDomainThreshold = 30.0;

double log_sum_exp(std::span<const double> terms) {
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double a : terms) acc += std::exp(a - peak);
  return peak + std::log(acc);
}

// ln f(u) and d/du ln f(u).
struct LogF {
  double value;
  double slope;
};

LogF log_f(int d, double u) {
  if (u == 0.0) return {std::log(static_cast<double>(d)), -1.0 / d};
  double weighted[64];
  double plain[64];
  const double log_u = std::log(u);
  for (int j = 0; j < d; ++j) {
    const double base = j * log_u - std::lgamma(j + 1.0);
    weighted[j] = base + std::log(static_cast<double>(d - j));
    plain[j] = base;
  }
  const double lw = log_sum_exp({weighted, static_cast<std::size_t>(d)});
  const double lp = log_sum_exp({plain, static_cast<std::size_t>(d)});
  return {-u + lw, -std::exp(lp - lw)};
}

void check_degree(int d) {
  if (d < 1 || d > 64) {
    throw ParameterError("theory: d must be in [1, 64] (got " +
                         std::to_string(d) + ")");
  }
}

}  // namespace

RootSolution solve_u_for_gap(int d, double gap) {
  check_degree(d);
  if (!(gap > 0.0) || gap > d) {
    throw DomainError("theory: d - 2t must lie in (0, d] (got " +
                      std::to_string(gap) + ")");
  }
  RootSolution sol;
  if (gap == d) return sol;

  const double target = std::log(gap);
  auto h = [&](double u) { return log_f(d, u).value - target; };

  double lo = 0.0;
  double hi = 1.0;
  while (h(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw DomainError("theory: failed to bracket root");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
    ++sol.iterations;
  }

  double u = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter, ++sol.iterations) {
    const LogF lf = log_f(d, u);
    const double hv = lf.value - target;
    if (hv == 0.0) break;
    (hv > 0.0 ? lo : hi) = u;
    double next = u - hv / lf.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double tol = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, u);
    if (std::abs(next - u) <= tol) {
      u = next;
      break;
    }
    u = next;
  }
  sol.u = u;
  sol.log_y0 = -u;
  return sol;
}

namespace {

void check_time(int d, double t) {
  check_degree(d);
  if (!(t >= 0.0) || t >= 0.5 * d - kDomainMargin) {
    throw DomainError("theory: t must lie in [0, d/2) (got t=" +
                      std::to_string(t) + ", d=" + std::to_string(d) + ")");
  }
}

}  // namespace

RootSolution solve_y0(int d, double t) {
  check_time(d, t);
  return solve_u_for_gap(d, d - 2.0 * t);
}

TheoryEval eval_theory_gap(int d, double gap) {
  const RootSolution root = solve_u_for_gap(d, gap);
  TheoryEval ev;
  ev.gap = gap;
  ev.t = 0.5 * (d - gap);
  ev.u = root.u;
  ev.y.resize(d);
  ev.s.resize(d);

  const double u = root.u;
  if (u <= kLogDomainThreshold) {
    ev.y[0] = std::exp(-u);
    for (int j = 1; j < d; ++j) ev.y[j] = ev.y[j - 1] * u / j;
  } else {
    const double log_u = std::log(u);
    for (int j = 0; j < d; ++j) {
      ev.y[j] = std::exp(j * log_u - u - std::lgamma(j + 1.0));
    }
  }
  double prefix = 0.0;
  double weighted = 0.0;
  for (int j = 0; j < d; ++j) {
    prefix += ev.y[j];
    ev.s[j] = prefix;
    weighted += (d - j) * ev.y[j];
  }
  double total = 0.0;
  for (double s : ev.s) total += s;
  ev.residual_implicit = std::abs(weighted - gap);
  ev.residual_sum = std::abs(total - gap);
  return ev;
}

TheoryEval eval_theory(int d, double t) {
  check_time(d, t);
  TheoryEval ev = eval_theory_gap(d, d - 2.0 * t);
  ev.t = t;
  return ev;
}

StepTheory eval_theory_at_step(std::uint64_t n, int d, double i) {
  check_degree(d);
  const double dn = static_cast<double>(d) * static_cast<double>(n);
  if (n == 0 || !(i >= 0.0) || !(2.0 * i < dn)) {
    throw DomainError("theory: step must satisfy 0 <= i < dn/2");
  }
  StepTheory out;
  out.eval = eval_theory_gap(d, (dn - 2.0 * i) / static_cast<double>(n));
  out.eval.t = i / static_cast<double>(n);
  out.ny.resize(d);
  out.ns.resize(d);
  for (int j = 0; j < d; ++j) {
    out.ny[j] = static_cast<double>(n) * out.eval.y[j];
    out.ns[j] = static_cast<double>(n) * out.eval.s[j];
  }
  return out;
}

double asymptotic_s(int d, int j, double gap) {
  check_degree(d);
  if (j < 0 || j >= d) throw ParameterError("asymptotic_s: j out of range");
  if (!(gap > 0.0 && gap < 1.0)) {
    throw DomainError("asymptotic_s: requires 0 < d - 2t < 1");
  }
  const double log_term = -std::log(gap);
  return std::exp(std::lgamma(static_cast<double>(d)) - std::lgamma(j + 1.0) +
                  std::log(gap) - (d - 1 - j) * std::log(log_term));
}

namespace {

void derivative(std::span<const double> s, std::span<double> out) {
  const std::size_t d = s.size();
  const double denom = s[d - 1];
  double previous = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    out[j] = 2.0 * (previous - s[j]) / denom;
    previous = s[j];
  }
}

// s at every grid point, integrated with RK4 at step <= h.
std::vector<std::vector<double>> integrate(int d, std::span<const double> grid,
                                           double h) {
  std::vector<double> s(d, 1.0), k1(d), k2(d), k3(d), k4(d), tmp(d);
  std::vector<std::vector<double>> out;
  out.reserve(grid.size());
  double t = 0.0;
  for (double target : grid) {
    const double span_len = target - t;
    if (span_len > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span_len / h - 1e-9));
      const double dt = span_len / static_cast<double>(steps);
      for (long k = 0; k < steps; ++k) {
        derivative(s, k1);
        for (int j = 0; j < d; ++j) tmp[j] = s[j] + 0.5 * dt * k1[j];
        derivative(tmp, k2);
        for (int j = 0; j < d; ++j) tmp[j] = s[j] + 0.5 * dt * k2[j];
        derivative(tmp, k3);
        for (int j = 0; j < d; ++j) tmp[j] = s[j] + dt * k3[j];
        derivative(tmp, k4);
        for (int j = 0; j < d; ++j) {
          s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
      }
      t = target;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

OdeCheck ode_crosscheck(int d, std::span<const double> t_grid, double h,
                        double refinement_tolerance) {
  check_degree(d);
  if (!(h > 0.0)) throw ParameterError("ode_crosscheck: step must be positive");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw DomainError("ode_crosscheck: grid must be sorted");
  }
  for (double t : t_grid) {
    if (!(t >= 0.0) || t >= 0.5 * d - kDomainMargin) {
      throw DomainError("ode_crosscheck: grid point outside [0, d/2)");
    }
  }
  const auto coarse = integrate(d, t_grid, h);
  const auto fine = integrate(d, t_grid, 0.5 * h);

  OdeCheck check;
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    const TheoryEval ev = eval_theory(d, t_grid[g]);
    for (int j = 0; j < d; ++j) {
      check.max_abs_error =
          std::max(check.max_abs_error, std::abs(coarse[g][j] - ev.s[j]));
      check.refinement_gap =
          std::max(check.refinement_gap, std::abs(coarse[g][j] - fine[g][j]));
    }
  }
  check.step_ok = check.refinement_gap <= refinement_tolerance;
  return check;
}

}  // namespace dprocess
