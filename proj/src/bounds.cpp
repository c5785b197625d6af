#include "ordstat/bounds.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "ordstat/prob_core.hpp"

namespace ordstat {

namespace {

constexpr int kMaxOrderStatDim = 1000;
constexpr double kQuadLo = -12.0;
constexpr double kQuadHi = 12.0;

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
QuadRule legendre_rule(int n) {
  QuadRule rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double z_prev, pp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z_prev = z;
      z = z_prev - p1 / pp;
    } while (std::abs(z - z_prev) > 1e-15);
    rule.nodes[static_cast<size_t>(i)] = -z;
    rule.nodes[static_cast<size_t>(n - 1 - i)] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[static_cast<size_t>(i)] = w;
    rule.weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  return rule;
}

const QuadRule& cached_rule(int points) {
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it == cache.end()) {
    it = cache.emplace(points, legendre_rule(points)).first;
  }
  return it->second;
}

int effective_points(int n, int requested) {
  if (requested > 0) return requested;
  if (n > 600) return 2049;
  if (n > 200) return 1025;
  return 513;
}

double log_ncdf(double x) { return std::log(std_normal_cdf(x)); }
double log_nsf(double x) { return std::log(std_normal_cdf(-x)); }

}  // namespace

OrderStatMoments order_stat_moments(int n, int quad_points) {
  if (n < 1 || n > kMaxOrderStatDim) {
    throw std::domain_error("order_stat_moments: n must lie in [1, 1000]");
  }
  const int pts = effective_points(n, quad_points);
  const QuadRule& rule = cached_rule(pts);

  // Map the rule onto [kQuadLo, kQuadHi] and precompute per-node factors.
  const double half = 0.5 * (kQuadHi - kQuadLo);
  const double mid = 0.5 * (kQuadHi + kQuadLo);
  std::vector<double> x(rule.nodes.size()), wphi_x(rule.nodes.size());
  std::vector<double> lcdf(rule.nodes.size()), lsf(rule.nodes.size());
  for (size_t j = 0; j < rule.nodes.size(); ++j) {
    x[j] = mid + half * rule.nodes[j];
    wphi_x[j] = half * rule.weights[j] * std_normal_pdf(x[j]) * x[j];
    lcdf[j] = log_ncdf(x[j]);
    lsf[j] = log_nsf(x[j]);
  }

  OrderStatMoments out;
  out.n = n;
  out.means.resize(static_cast<size_t>(n));
  const double lgn = std::lgamma(n + 1.0);
  for (int i = 1; i <= n; ++i) {
    // density of X_(i): binomial coefficient kept in log space.
    const double logc = lgn - std::lgamma(static_cast<double>(i)) -
                        std::lgamma(static_cast<double>(n - i + 1));
    double acc = 0.0;
    for (size_t j = 0; j < x.size(); ++j) {
      const double le = logc + (i - 1) * lcdf[j] + (n - i) * lsf[j];
      acc += wphi_x[j] * std::exp(le);
    }
    out.means[static_cast<size_t>(i - 1)] = acc;
  }

  double sumsq = 0.0;
  for (double m : out.means) sumsq += m * m;
  out.var_sorted = n - sumsq;
  return out;
}

std::vector<double> order_statistic_means(int n, int quad_points) {
  return order_stat_moments(n, quad_points).means;
}

double var_sorted(int n, int quad_points) {
  return order_stat_moments(n, quad_points).var_sorted;
}

const std::vector<double>& order_statistic_means_cached(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, order_statistic_means(n)).first;
  }
  return it->second;
}

std::vector<VarRatioRow> var_ratio_curve(int n_max, int quad_points) {
  if (n_max < 1 || n_max > kMaxOrderStatDim) {
    throw std::domain_error("var_ratio_curve: n_max must lie in [1, 1000]");
  }
  std::vector<VarRatioRow> rows;
  rows.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double v = var_sorted(n, quad_points);
    rows.push_back({n, v, v / n});
  }
  return rows;
}

double quantile_mean_approx(int i, int n) {
  if (i < 1 || i > n) throw std::out_of_range("quantile_mean_approx: i must lie in [1, n]");
  return std_normal_quantile(static_cast<double>(i) / (n + 1));
}

double quantile_mean_error_bound(int i, int n) {
  if (i < 1 || i > n) {
    throw std::out_of_range("quantile_mean_error_bound: i must lie in [1, n]");
  }
  const double a = 2.0 / i;
  const double b = 2.0 / (n + 1 - i);
  const double c = 1.0 / i - 1.0 / (2.0 * (n + 1 - i));
  return std::sqrt(std::numbers::pi / 2.0) * std::sqrt(a + b + c * c);
}

double var_approx(int n) {
  if (n < 1) throw std::domain_error("var_approx: n must be >= 1");
  double sumsq = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double q = std_normal_quantile(static_cast<double>(i) / (n + 1));
    sumsq += q * q;
  }
  return n - sumsq;
}

double var_approx_error_bound(int n) {
  if (n < 2) throw std::domain_error("var_approx_error_bound: n must be >= 2");
  const double l = 1.5 * std::numbers::pi * (2.0 * std::log(static_cast<double>(n)) + 1.0 / n + 1.0);
  return 2.0 * std::sqrt(18.0 * (n + 1) * l) + l;
}

double chi_variance(int n) {
  if (n < 1) throw std::domain_error("chi_variance: n must be >= 1");
  // log-gamma difference; the direct ratio overflows past n ~ 300.
  const double lr = std::lgamma((n + 1) / 2.0) - std::lgamma(n / 2.0);
  return n - 2.0 * std::exp(2.0 * lr);
}

double max_entropy_mmse_bound(int n, double sigma) {
  if (n < 1) throw std::domain_error("max_entropy_mmse_bound: n must be >= 1");
  if (!(sigma >= 0.0)) throw std::domain_error("max_entropy_mmse_bound: sigma must be >= 0");
  const double scale = std::exp(-2.0 / n * std::lgamma(n + 1.0));
  return scale * n * sigma * sigma / (1.0 + sigma * sigma);
}

double max_entropy_var_bound(int n) {
  if (n < 1) throw std::domain_error("max_entropy_var_bound: n must be >= 1");
  return n * std::exp(-2.0 / n * std::lgamma(n + 1.0));
}

double sorted_entropy(int n) {
  if (n < 1) throw std::domain_error("sorted_entropy: n must be >= 1");
  return 0.5 * n * std::log(2.0 * std::numbers::pi * std::numbers::e) - std::lgamma(n + 1.0);
}

double quantile_power_sum_bound(int n, double eps) {
  if (n < 1) throw std::domain_error("quantile_power_sum_bound: n must be >= 1");
  if (!(eps >= 0.0)) throw std::domain_error("quantile_power_sum_bound: eps must be >= 0");
  const double half_count = std::ceil((n + 1) / 2.0);
  const double r = 1.0 - eps / 4.0;
  // At eps == 4 the ratio degenerates; its limit is log(half_count).
  const double bracket =
      std::abs(r) < 1e-9 ? std::log(half_count) : (std::pow(half_count, r) - 1.0) / r;
  return std::exp2(11.0 * eps / 4.0 + 1.0) * std::pow(n + 1.0, eps / 4.0) * (1.0 + bracket);
}

}  // namespace ordstat
