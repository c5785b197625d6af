#include "ordstat/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ordstat/bounds.hpp"

namespace ordstat {

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Optimal: return "optimal";
    case EstimatorKind::FHat: return "fhat";
    case EstimatorKind::HHat: return "hhat";
    case EstimatorKind::MLE: return "mle";
    case EstimatorKind::Identity: return "identity";
  }
  return "?";
}

std::optional<EstimatorKind> estimator_from_string(std::string_view name) {
  if (name == "optimal") return EstimatorKind::Optimal;
  if (name == "fhat") return EstimatorKind::FHat;
  if (name == "hhat") return EstimatorKind::HHat;
  if (name == "mle") return EstimatorKind::MLE;
  if (name == "identity") return EstimatorKind::Identity;
  return std::nullopt;
}

namespace {

void check_length(const GaussianModel& model, const SortedVector& y) {
  if (y.size() != model.n) {
    throw std::invalid_argument("estimator: input length does not match model dimension");
  }
}

}  // namespace

std::vector<double> optimal_estimate(const GaussianModel& model, const SortedVector& y_sorted,
                                     const RegionIntegrator& integ, std::uint64_t stream) {
  check_length(model, y_sorted);
  const auto stats = region_stats_over_permutations(model, y_sorted.values(), integ, stream);
  std::vector<double> out(static_cast<size_t>(model.n), 0.0);
  for (int pi = 0; pi < stats.perm_count; ++pi) {
    const auto row = stats.mean_row(pi);
    for (int i = 0; i < model.n; ++i) out[static_cast<size_t>(i)] += row[static_cast<size_t>(i)];
  }
  return out;
}

std::vector<double> fhat_estimate(const GaussianModel& model, const SortedVector& y_sorted,
                                  const RegionIntegrator& integ, std::uint64_t stream) {
  check_length(model, y_sorted);
  const auto stats = region_stats_over_permutations(model, y_sorted.values(), integ, stream);
  const auto perms = all_permutations(model.n);
  const double c = model.posterior_mean_coef();

  std::vector<double> out(static_cast<size_t>(model.n), 0.0);
  std::vector<double> py(static_cast<size_t>(model.n));
  for (int pi = 0; pi < stats.perm_count; ++pi) {
    perms[static_cast<size_t>(pi)].apply_into(y_sorted.values(), py);
    const double p = stats.prob[static_cast<size_t>(pi)];
    for (int i = 0; i < model.n; ++i) {
      out[static_cast<size_t>(i)] += c * py[static_cast<size_t>(i)] * p;
    }
  }
  return out;
}

std::vector<double> hhat_estimate(const GaussianModel& model,
                                  std::span<const double> order_stat_means) {
  if (static_cast<int>(order_stat_means.size()) != model.n) {
    throw std::invalid_argument("hhat_estimate: order statistic means length mismatch");
  }
  return {order_stat_means.begin(), order_stat_means.end()};
}

std::vector<double> identity_estimate(const SortedVector& y_sorted) {
  return y_sorted.values();
}

std::vector<double> mle_fixed_point_map(const GaussianModel& model,
                                        std::span<const Permutation> perms,
                                        std::span<const double> y_sorted,
                                        std::span<const double> t) {
  const int n = model.n;
  const double inv_s2 = 1.0 / (model.sigma * model.sigma);

  std::vector<double> scores(perms.size());
  std::vector<double> py(static_cast<size_t>(n));
  double max_score = -std::numeric_limits<double>::infinity();
  for (size_t pi = 0; pi < perms.size(); ++pi) {
    perms[pi].apply_into(y_sorted, py);
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += py[static_cast<size_t>(i)] * t[static_cast<size_t>(i)];
    scores[pi] = dot * inv_s2;
    max_score = std::max(max_score, scores[pi]);
  }

  // Subtract the max exponent; at small sigma the raw weights overflow.
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  double total = 0.0;
  for (size_t pi = 0; pi < perms.size(); ++pi) {
    const double w = std::exp(scores[pi] - max_score);
    total += w;
    perms[pi].apply_into(y_sorted, py);
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] += w * py[static_cast<size_t>(i)];
  }
  for (double& v : out) v /= total;
  return out;
}

double mle_log_mixture_likelihood(const GaussianModel& model,
                                  std::span<const Permutation> perms,
                                  std::span<const double> y_sorted, std::span<const double> t) {
  const int n = model.n;
  const double inv_2s2 = 0.5 / (model.sigma * model.sigma);
  std::vector<double> exponents(perms.size());
  std::vector<double> py(static_cast<size_t>(n));
  double mx = -std::numeric_limits<double>::infinity();
  for (size_t pi = 0; pi < perms.size(); ++pi) {
    perms[pi].apply_into(y_sorted, py);
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = py[static_cast<size_t>(i)] - t[static_cast<size_t>(i)];
      d2 += d * d;
    }
    exponents[pi] = -d2 * inv_2s2;
    mx = std::max(mx, exponents[pi]);
  }
  double acc = 0.0;
  for (double e : exponents) acc += std::exp(e - mx);
  return mx + std::log(acc);
}

std::vector<double> mle_estimate(const GaussianModel& model, const SortedVector& y_sorted,
                                 const FixedPointOptions& opts) {
  check_length(model, y_sorted);
  if (opts.tolerance <= 0.0) throw std::invalid_argument("mle_estimate: tolerance must be > 0");
  if (opts.max_iters < 1) throw std::invalid_argument("mle_estimate: max_iters must be >= 1");
  if (opts.restarts < 1) throw std::invalid_argument("mle_estimate: restarts must be >= 1");

  const std::vector<double>& y = y_sorted.values();
  if (model.sigma == 0.0) return y;  // degenerate channel, the likelihood peaks at y

  const int n = model.n;
  const auto perms = all_permutations(n);

  std::vector<std::vector<double>> starts;
  starts.push_back(y);
  if (opts.restarts >= 2) starts.push_back(order_statistic_means_cached(n));
  if (opts.restarts >= 3) starts.emplace_back(static_cast<size_t>(n), 0.0);

  std::vector<double> best;
  double best_ll = -std::numeric_limits<double>::infinity();

  for (const auto& start : starts) {
    std::vector<double> t = start;
    bool accepted = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      const auto mapped = mle_fixed_point_map(model, perms, y, t);
      double residual = 0.0;
      for (int i = 0; i < n; ++i) {
        residual = std::max(residual, std::abs(mapped[static_cast<size_t>(i)] - t[static_cast<size_t>(i)]));
      }
      if (residual <= opts.tolerance) {
        accepted = is_in_sorted_region(t);
        break;
      }
      for (int i = 0; i < n; ++i) {
        t[static_cast<size_t>(i)] = (1.0 - opts.damping) * t[static_cast<size_t>(i)] +
                                    opts.damping * mapped[static_cast<size_t>(i)];
      }
    }
    if (accepted) {
      const double ll = mle_log_mixture_likelihood(model, perms, y, t);
      if (ll > best_ll) {
        best_ll = ll;
        best = std::move(t);
      }
    }
  }

  if (best.empty()) return y;  // fixed-point set treated as empty
  return best;
}

}  // namespace ordstat
