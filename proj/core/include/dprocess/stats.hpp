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

#ifndef DPROCESS_STATS_HPP_
#define DPROCESS_STATS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dprocess {

/// Outcome of a statistical check. `threshold_or_pvalue` holds the critical
/// value for threshold tests (pass iff statistic <= threshold) and the
/// p-value for permutation tests (pass iff p-value > level).
struct TestReport {
  std::string method;
  double statistic = 0.0;
  double threshold_or_pvalue = 0.0;
  double level = 0.0;
  bool pass = false;
  bool degenerate = false;
  std::size_t n_samples = 0;
  std::optional<std::uint64_t> seed;
};

nlohmann::json to_json(const TestReport& report);

/// CDF of the exponential distribution with mean 1.
double exp_cdf(double x);

/// One-sample Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|, evaluated
/// exactly at the jump points. Throws ParameterError on an empty or
/// non-finite sample.
double ks_statistic(std::span<const double> sample,
                    const std::function<double(double)>& cdf);

/// Upper `level` quantile of the chi-square distribution: P[X > q] = level.
double chi_square_critical(double dof, double level);

/// Chi-square goodness of fit against equal cell probabilities. Throws
/// ParameterError with fewer than 2 categories or a zero total.
TestReport chi_square_uniform(std::span<const std::uint64_t> counts,
                              double level = 1e-3);

/// Chi-square goodness of fit against arbitrary cell probabilities.
/// Cells with probability 0 are dropped if empty and fail the test otherwise.
/// A single cell of positive probability passes iff it holds every count.
TestReport chi_square_gof(std::span<const std::uint64_t> counts,
                          std::span<const double> probabilities,
                          double level = 1e-3);

/// Pearson correlation; nullopt when either sample has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// sup over sample points (x_i, y_i) of |F_xy - F_x F_y|, all empirical.
double joint_ecdf_distance(std::span<const double> x, std::span<const double> y);

struct IndependenceReport {
  TestReport correlation;
  TestReport joint_cdf;
  bool pass = false;
  bool degenerate = false;
};

nlohmann::json to_json(const IndependenceReport& report);

struct IndependenceOptions {
  double level = 0.01;
  int permutations = 999;
  std::uint64_t seed = 0;
};

/// Permutation tests of independence for paired samples: Pearson correlation
/// (two-sided) and the joint-vs-product empirical CDF distance. The report
/// passes when both p-values exceed level/2 (Bonferroni), so the overall
/// false-rejection rate is at most `level`. Throws ParameterError on length
/// mismatch or fewer than 50 pairs. A constant sample gives a degenerate,
/// failing report.
IndependenceReport independence_report(std::span<const double> x,
                                       std::span<const double> y,
                                       const IndependenceOptions& options = {});

double mean(std::span<const double> values);
double median(std::vector<double> values);

}  // namespace dprocess

#endif  // DPROCESS_STATS_HPP_
