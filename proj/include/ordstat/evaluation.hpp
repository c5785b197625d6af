#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ordstat/estimators.hpp"
#include "ordstat/model.hpp"

namespace ordstat {

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Sample-count-weighted pooling of mean and variance.
MonteCarloResult merge_results(const MonteCarloResult& a, const MonteCarloResult& b);

struct EvalConfig {
  std::int64_t outer_samples = 100000;
  int chunks = 8;
  std::uint64_t seed = 0;
  RegionIntegrator integrator;
  FixedPointOptions fixed_point;
  // Worker cap; 0 consults ORDSTAT_THREADS, then hardware_concurrency.
  int threads = 0;
};

// Effective worker count for a config.
int resolve_thread_count(const EvalConfig& config);

// E||sort(X) - est(sort(Y))||^2 estimated over outer_samples draws. Every
// sample owns the substream derived from (seed, sample index), so the result
// is identical for any chunk/thread arrangement.
MonteCarloResult mse_of_estimator(const GaussianModel& model, EstimatorKind estimator,
                                  const EvalConfig& config);

// One row per sigma; per_estimator is ordered like SweepTable::estimators.
struct SweepRow {
  double sigma;
  std::vector<std::optional<MonteCarloResult>> per_estimator;
  double var_sorted;
  double mmse_unsorted;
};

struct SweepTable {
  int n = 0;
  std::vector<EstimatorKind> estimators;
  std::vector<SweepRow> rows;
};

// MSE of every requested estimator at every sigma, sharing the per-sample
// (X, Y) streams across estimators, plus the var_sorted / unsorted-MMSE
// reference columns.
SweepTable mmse_sweep(int n, std::span<const double> sigma_grid,
                      std::span<const EstimatorKind> estimators, const EvalConfig& config);

// Computable bound on fhat's excess MSE: the permutation sum of
// E[||X||^2 g(P_pi Y) | Y in sorted region], g(y) = p(y)(1 - p(y)).
// The conditioning is realized by sorting Y inside the joint draw.
MonteCarloResult delta_up(const GaussianModel& model, const EvalConfig& config);

// High-noise limit of delta_up: n (1 - 1/n!).
double delta_up_asymptote(int n);

// MMSE of the unsorted problem, n sigma^2 / (1 + sigma^2).
double mmse_unsorted(int n, double sigma);

struct RegularityReport {
  std::array<double, 2> components{};
  std::array<double, 2> std_error{};
  std::int64_t samples = 0;
};

// Conditional score mean E[phi | sorted observation = 0] for the n = 2,
// sigma = 1 instance, via the order-statistic reduction of the defining
// integral: -2 E[sorted(W)], W ~ N(0, I/2). Nonzero, so the prior-score
// regularity required by the Bayesian Cramer-Rao bound fails.
RegularityReport regularity_check(const GaussianModel& model, const EvalConfig& config);

// Same quantity by direct 2-D quadrature over the sorted region.
std::array<double, 2> regularity_check_quadrature(const GaussianModel& model);

}  // namespace ordstat
