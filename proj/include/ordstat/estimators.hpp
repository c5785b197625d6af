#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ordstat/model.hpp"
#include "ordstat/prob_core.hpp"

namespace ordstat {

enum class EstimatorKind { Optimal, FHat, HHat, MLE, Identity };

const char* to_string(EstimatorKind kind);
std::optional<EstimatorKind> estimator_from_string(std::string_view name);

struct FixedPointOptions {
  int max_iters = 500;
  double tolerance = 1e-8;  // sup-norm residual threshold
  int restarts = 3;         // start points taken from {y, prior order-stat means, 0}
  double damping = 0.5;
};

// Conditional mean of the sorted input given the sorted observation:
// the permutation sum of restricted posterior means. Output is nondecreasing.
std::vector<double> optimal_estimate(const GaussianModel& model, const SortedVector& y_sorted,
                                     const RegionIntegrator& integ, std::uint64_t stream = 0);

// Suboptimal estimator dropping the region conditioning inside the
// expectation: sum over permutations of posterior mean times region
// probability. Matches the optimal estimator as sigma -> 0.
std::vector<double> fhat_estimate(const GaussianModel& model, const SortedVector& y_sorted,
                                  const RegionIntegrator& integ, std::uint64_t stream = 0);

// Suboptimal estimator ignoring the observation: the prior order statistic
// means, independent of y. Optimal as sigma -> infinity.
std::vector<double> hhat_estimate(const GaussianModel& model,
                                  std::span<const double> order_stat_means);

// Maximum likelihood under the permutation mixture: damped fixed-point
// iteration of the softmax-weighted average map, restarted from several
// points; candidates must be nondecreasing with residual below tolerance,
// ties broken by mixture likelihood. Falls back to y when nothing converges.
std::vector<double> mle_estimate(const GaussianModel& model, const SortedVector& y_sorted,
                                 const FixedPointOptions& opts = {});

std::vector<double> identity_estimate(const SortedVector& y_sorted);

// Softmax-weighted average map whose fixed points are the MLE stationary
// points; exposed for property tests.
std::vector<double> mle_fixed_point_map(const GaussianModel& model,
                                        std::span<const Permutation> perms,
                                        std::span<const double> y_sorted,
                                        std::span<const double> t);

// log sum_pi f(P_pi y | t) up to the Gaussian normalizing constant.
double mle_log_mixture_likelihood(const GaussianModel& model,
                                  std::span<const Permutation> perms,
                                  std::span<const double> y_sorted, std::span<const double> t);

}  // namespace ordstat
