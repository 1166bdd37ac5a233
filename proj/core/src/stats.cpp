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

#include "dprocess/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "dprocess/error.hpp"
#include "dprocess/rng.hpp"

namespace dprocess {

nlohmann::json to_json(const TestReport& report) {
  nlohmann::json j = {
      {"method", report.method},
      {"statistic", report.statistic},
      {"threshold_or_pvalue", report.threshold_or_pvalue},
      {"level", report.level},
      {"pass", report.pass},
      {"degenerate", report.degenerate},
      {"n_samples", report.n_samples},
  };
  j["seed"] = report.seed ? nlohmann::json(*report.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const IndependenceReport& report) {
  return {{"pass", report.pass},
          {"degenerate", report.degenerate},
          {"correlation", to_json(report.correlation)},
          {"joint_cdf", to_json(report.joint_cdf)}};
}

double exp_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

double ks_statistic(std::span<const double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ParameterError("ks_statistic: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw ParameterError("ks_statistic: non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    // Just below and at the i-th order statistic.
    sup = std::max({sup, f - static_cast<double>(i) / n,
                    static_cast<double>(i + 1) / n - f});
  }
  return sup;
}

double chi_square_critical(double dof, double level) {
  if (!(dof > 0.0) || !(level > 0.0 && level < 1.0)) {
    throw ParameterError("chi_square_critical: need dof > 0 and level in (0, 1)");
  }
  return boost::math::quantile(
      boost::math::complement(boost::math::chi_squared_distribution<double>(dof), level));
}

TestReport chi_square_uniform(std::span<const std::uint64_t> counts, double level) {
  if (counts.size() < 2) {
    throw ParameterError("chi_square_uniform: need at least 2 categories");
  }
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw ParameterError("chi_square_uniform: all counts are zero");
  std::vector<double> probabilities(counts.size(), 1.0 / counts.size());
  TestReport report = chi_square_gof(counts, probabilities, level);
  report.method = "chi_square_uniform";
  return report;
}

TestReport chi_square_gof(std::span<const std::uint64_t> counts,
                          std::span<const double> probabilities, double level) {
  if (counts.size() != probabilities.size() || counts.empty()) {
    throw ParameterError("chi_square_gof: counts/probabilities size mismatch");
  }
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw ParameterError("chi_square_gof: all counts are zero");

  TestReport report;
  report.method = "chi_square_gof";
  report.level = level;
  report.n_samples = total;

  double statistic = 0.0;
  int cells = 0;
  bool impossible = false;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (probabilities[c] <= 0.0) {
      if (counts[c] > 0) impossible = true;
      continue;
    }
    const double expected = probabilities[c] * static_cast<double>(total);
    const double diff = static_cast<double>(counts[c]) - expected;
    statistic += diff * diff / expected;
    ++cells;
  }
  if (impossible) {
    report.statistic = std::numeric_limits<double>::infinity();
    report.threshold_or_pvalue = 0.0;
    report.pass = false;
    return report;
  }
  report.statistic = statistic;
  if (cells <= 1) {
    report.degenerate = true;
    report.threshold_or_pvalue = 0.0;
    report.pass = true;
    return report;
  }
  report.threshold_or_pvalue = chi_square_critical(cells - 1, level);
  report.pass = statistic <= report.threshold_or_pvalue;
  return report;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ParameterError("mean: empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median: empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  return 0.5 * (upper + *std::max_element(values.begin(), values.begin() + mid));
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw ParameterError("pearson: samples must be non-empty and paired");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Ranks with ties: rank[i] = #{k : v_k <= v_i}, dense[i] in 1..distinct.
struct Ranks {
  std::vector<std::uint32_t> le_count;
  std::vector<std::uint32_t> dense;
  std::uint32_t distinct = 0;
};

Ranks rank(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  Ranks r;
  r.le_count.resize(n);
  r.dense.resize(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end < n && v[order[end]] == v[order[start]]) ++end;
    ++r.distinct;
    for (std::size_t k = start; k < end; ++k) {
      r.le_count[order[k]] = static_cast<std::uint32_t>(end);
      r.dense[order[k]] = r.distinct;
    }
    start = end;
  }
  return r;
}

// Sweep over x in sorted order, with ties inserted as a group, querying a
// Fenwick tree over dense y ranks.
class JointEcdf {
 public:
  explicit JointEcdf(std::span<const double> x) : x_ranks_(rank(x)), n_(x.size()) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(), [&](auto a, auto b) {
      return x_ranks_.le_count[a] < x_ranks_.le_count[b];
    });
  }

  double distance(std::span<const std::uint32_t> y_le,
                  std::span<const std::uint32_t> y_dense, std::uint32_t distinct) {
    tree_.assign(distinct + 1, 0);
    const double n = static_cast<double>(n_);
    double sup = 0.0;
    std::size_t start = 0;
    while (start < n_) {
      std::size_t end = start;
      const auto group = x_ranks_.le_count[order_[start]];
      while (end < n_ && x_ranks_.le_count[order_[end]] == group) {
        for (std::uint32_t p = y_dense[order_[end]]; p <= distinct; p += p & -p) ++tree_[p];
        ++end;
      }
      for (std::size_t k = start; k < end; ++k) {
        const auto i = order_[k];
        std::uint32_t joint = 0;
        for (std::uint32_t p = y_dense[i]; p > 0; p -= p & -p) joint += tree_[p];
        const double product = static_cast<double>(group) / n * y_le[i] / n;
        sup = std::max(sup, std::abs(joint / n - product));
      }
      start = end;
    }
    return sup;
  }

 private:
  Ranks x_ranks_;
  std::size_t n_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> tree_;
};

}  // namespace

double joint_ecdf_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw ParameterError("joint_ecdf_distance: samples must be non-empty and paired");
  }
  JointEcdf joint(x);
  const Ranks yr = rank(y);
  return joint.distance(yr.le_count, yr.dense, yr.distinct);
}

IndependenceReport independence_report(std::span<const double> x,
                                       std::span<const double> y,
                                       const IndependenceOptions& options) {
  if (x.size() != y.size()) {
    throw ParameterError("independence_report: samples have different lengths");
  }
  if (x.size() < 50) {
    throw ParameterError("independence_report: need at least 50 pairs");
  }
  if (options.permutations < 1) {
    throw ParameterError("independence_report: need at least one permutation");
  }
  const std::size_t n = x.size();
  IndependenceReport report;
  for (TestReport* r : {&report.correlation, &report.joint_cdf}) {
    r->level = options.level;
    r->n_samples = n;
    r->seed = options.seed;
  }
  report.correlation.method = "pearson_permutation";
  report.joint_cdf.method = "joint_ecdf_permutation";

  const auto observed_r = pearson(x, y);
  if (!observed_r) {
    report.degenerate = report.correlation.degenerate = report.joint_cdf.degenerate = true;
    report.correlation.statistic = std::numeric_limits<double>::quiet_NaN();
    report.correlation.threshold_or_pvalue = 0.0;
    return report;
  }

  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> xc(n), yc(n);
  for (std::size_t i = 0; i < n; ++i) {
    xc[i] = x[i] - mx;
    yc[i] = y[i] - my;
  }
  const double sxy = std::inner_product(xc.begin(), xc.end(), yc.begin(), 0.0);
  const double tolerance = 1e-12 * (std::abs(sxy) + 1.0);

  JointEcdf joint(x);
  Ranks yr = rank(y);
  const double observed_d = joint.distance(yr.le_count, yr.dense, yr.distinct);

  Rng rng(options.seed);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<double> y_perm(n);
  std::vector<std::uint32_t> le_perm(n), dense_perm(n);
  int extreme_r = 0;
  int extreme_d = 0;
  for (int p = 0; p < options.permutations; ++p) {
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.uniform(i + 1)]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += xc[i] * yc[perm[i]];
      le_perm[i] = yr.le_count[perm[i]];
      dense_perm[i] = yr.dense[perm[i]];
    }
    if (std::abs(s) >= std::abs(sxy) - tolerance) ++extreme_r;
    if (joint.distance(le_perm, dense_perm, yr.distinct) >= observed_d - 1e-12) {
      ++extreme_d;
    }
  }

  const double denom = options.permutations + 1.0;
  const double per_test_level = options.level / 2.0;
  report.correlation.statistic = *observed_r;
  report.correlation.threshold_or_pvalue = (extreme_r + 1.0) / denom;
  report.correlation.pass = report.correlation.threshold_or_pvalue > per_test_level;
  report.joint_cdf.statistic = observed_d;
  report.joint_cdf.threshold_or_pvalue = (extreme_d + 1.0) / denom;
  report.joint_cdf.pass = report.joint_cdf.threshold_or_pvalue > per_test_level;
  report.pass = report.correlation.pass && report.joint_cdf.pass;
  return report;
}

}  // namespace dprocess
