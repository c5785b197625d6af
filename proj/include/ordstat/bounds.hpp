#pragma once

#include <vector>

#include "ordstat/common.hpp"

namespace ordstat {

// Moments of the ascending order statistics of n iid standard normals.
struct OrderStatMoments {
  int n = 0;
  std::vector<double> means;  // E[X_(1)] <= ... <= E[X_(n)]
  double var_sorted = 0.0;    // n - sum of squared means
};

// Gauss-Legendre quadrature of E[X_(i)] on [-12, 12]. quad_points == 0 picks
// the default (513, raised automatically for n > 200 where the order
// statistic densities get too narrow for the default rule). 1 <= n <= 1000.
OrderStatMoments order_stat_moments(int n, int quad_points = 0);
std::vector<double> order_statistic_means(int n, int quad_points = 0);
double var_sorted(int n, int quad_points = 0);

// Process-wide memoized means with default quadrature settings.
const std::vector<double>& order_statistic_means_cached(int n);

struct VarRatioRow {
  int n;
  double var_sorted;
  double ratio;  // var_sorted / n
};
std::vector<VarRatioRow> var_ratio_curve(int n_max, int quad_points = 0);

// Quantile approximation of the i-th mean and its guarantee.
double quantile_mean_approx(int i, int n);
double quantile_mean_error_bound(int i, int n);

// Quantile approximation of the variance and its O(sqrt(n log n)) guarantee.
double var_approx(int n);
double var_approx_error_bound(int n);  // n >= 2

// Var(||X||) for the chi distribution with n degrees of freedom; lower bound
// on var_sorted, increasing to 1/2.
double chi_variance(int n);

// Entropy-based lower bounds.
double max_entropy_mmse_bound(int n, double sigma);
double max_entropy_var_bound(int n);
double sorted_entropy(int n);

// Upper bound on sum_i |quantile(i/(n+1))|^(2 eps); the eps == 4 branch is
// the analytic limit of the general expression.
double quantile_power_sum_bound(int n, double eps);

}  // namespace ordstat
