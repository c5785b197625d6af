#include "ordstat/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ordstat/bounds.hpp"
#include "ordstat/rng.hpp"

namespace ordstat {

MonteCarloResult merge_results(const MonteCarloResult& a, const MonteCarloResult& b) {
  if (a.samples == 0) return b;
  if (b.samples == 0) return a;
  MonteCarloResult out;
  out.samples = a.samples + b.samples;
  const double na = static_cast<double>(a.samples);
  const double nb = static_cast<double>(b.samples);
  const double n = na + nb;
  out.mean = (a.mean * na + b.mean * nb) / n;
  // Recover per-group sums of squared deviations from the standard errors,
  // then pool with the between-group term.
  const double m2a = a.std_error * a.std_error * na * (na - 1.0);
  const double m2b = b.std_error * b.std_error * nb * (nb - 1.0);
  const double delta = b.mean - a.mean;
  const double m2 = m2a + m2b + delta * delta * na * nb / n;
  const double s2 = out.samples > 1 ? m2 / (n - 1.0) : 0.0;
  out.std_error = std::sqrt(s2 / n);
  return out;
}

int resolve_thread_count(const EvalConfig& config) {
  int t = config.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("ORDSTAT_THREADS")) {
      t = std::atoi(env);
    }
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, t);
}

double mmse_unsorted(int n, double sigma) {
  return n * sigma * sigma / (1.0 + sigma * sigma);
}

double delta_up_asymptote(int n) {
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  return n * (1.0 - 1.0 / factorial);
}

namespace {

// Runs fn(i) for every sample index. Chunks only partition the index range
// across workers; each index owns its substream and output slot, so the
// numbers are identical for any chunk or thread count.
template <typename Fn>
void run_samples(std::int64_t total, int chunks, int threads, Fn&& fn) {
  chunks = std::max(1, chunks);
  threads = std::max(1, std::min(threads, chunks));

  if (threads == 1) {
    for (std::int64_t i = 0; i < total; ++i) fn(i);
    return;
  }

  std::atomic<int> next_chunk{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    try {
      for (;;) {
        const int c = next_chunk.fetch_add(1);
        if (c >= chunks || failed.load(std::memory_order_relaxed)) return;
        const std::int64_t lo = total * c / chunks;
        const std::int64_t hi = total * (c + 1) / chunks;
        for (std::int64_t i = lo; i < hi; ++i) {
          fn(i);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

MonteCarloResult summarize(std::span<const double> values) {
  MonteCarloResult out;
  out.samples = static_cast<std::int64_t>(values.size());
  if (out.samples == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.samples);
  double m2 = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    m2 += d * d;
  }
  const double s2 = out.samples > 1 ? m2 / static_cast<double>(out.samples - 1) : 0.0;
  out.std_error = std::sqrt(s2 / static_cast<double>(out.samples));
  return out;
}

double squared_error(std::span<const double> truth, std::span<const double> estimate) {
  double acc = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - estimate[i];
    acc += d * d;
  }
  return acc;
}

std::vector<MonteCarloResult> mse_many(const GaussianModel& model,
                                       std::span<const EstimatorKind> kinds,
                                       const EvalConfig& config) {
  if (config.outer_samples < 1) {
    throw std::invalid_argument("mse_of_estimator: outer_samples must be >= 1");
  }
  const int n = model.n;
  const auto perms = all_permutations(n);
  const int threads = resolve_thread_count(config);

  bool need_region_stats = false;
  bool need_hhat = false;
  for (EstimatorKind k : kinds) {
    need_region_stats |= (k == EstimatorKind::Optimal || k == EstimatorKind::FHat);
    need_hhat |= (k == EstimatorKind::HHat);
  }
  const std::vector<double> hhat_means =
      need_hhat ? order_statistic_means_cached(n) : std::vector<double>{};

  std::vector<std::vector<double>> errors(kinds.size());
  for (auto& e : errors) e.resize(static_cast<size_t>(config.outer_samples));

  run_samples(config.outer_samples, config.chunks, threads, [&](std::int64_t i) {
    NormalSampler rng(substream_key(config.seed, static_cast<std::uint64_t>(i)));
    auto [x, y] = sample_pair(model, rng);
    const SortedVector xs = sort_ascending(x);
    const SortedVector ys = sort_ascending(y);

    PermutationRegionStats stats;
    if (need_region_stats) {
      stats = region_stats_over_permutations(model, ys.values(), config.integrator,
                                             static_cast<std::uint64_t>(i), perms);
    }

    std::vector<double> est(static_cast<size_t>(n));
    std::vector<double> py(static_cast<size_t>(n));
    for (size_t k = 0; k < kinds.size(); ++k) {
      switch (kinds[k]) {
        case EstimatorKind::Optimal: {
          std::fill(est.begin(), est.end(), 0.0);
          for (int pi = 0; pi < stats.perm_count; ++pi) {
            const auto row = stats.mean_row(pi);
            for (int j = 0; j < n; ++j) est[static_cast<size_t>(j)] += row[static_cast<size_t>(j)];
          }
          errors[k][static_cast<size_t>(i)] = squared_error(xs.values(), est);
          break;
        }
        case EstimatorKind::FHat: {
          std::fill(est.begin(), est.end(), 0.0);
          const double c = model.posterior_mean_coef();
          for (int pi = 0; pi < stats.perm_count; ++pi) {
            perms[static_cast<size_t>(pi)].apply_into(ys.values(), py);
            const double p = stats.prob[static_cast<size_t>(pi)];
            for (int j = 0; j < n; ++j) {
              est[static_cast<size_t>(j)] += c * py[static_cast<size_t>(j)] * p;
            }
          }
          errors[k][static_cast<size_t>(i)] = squared_error(xs.values(), est);
          break;
        }
        case EstimatorKind::HHat:
          errors[k][static_cast<size_t>(i)] = squared_error(xs.values(), hhat_means);
          break;
        case EstimatorKind::MLE: {
          const auto t = mle_estimate(model, ys, config.fixed_point);
          errors[k][static_cast<size_t>(i)] = squared_error(xs.values(), t);
          break;
        }
        case EstimatorKind::Identity:
          errors[k][static_cast<size_t>(i)] = squared_error(xs.values(), ys.values());
          break;
      }
    }
  });

  std::vector<MonteCarloResult> out(kinds.size());
  for (size_t k = 0; k < kinds.size(); ++k) out[k] = summarize(errors[k]);
  return out;
}

}  // namespace

MonteCarloResult mse_of_estimator(const GaussianModel& model, EstimatorKind estimator,
                                  const EvalConfig& config) {
  const EstimatorKind kinds[] = {estimator};
  return mse_many(model, kinds, config)[0];
}

SweepTable mmse_sweep(int n, std::span<const double> sigma_grid,
                      std::span<const EstimatorKind> estimators, const EvalConfig& config) {
  SweepTable table;
  table.n = n;
  table.estimators.assign(estimators.begin(), estimators.end());
  const double vs = var_sorted(n);
  for (double sigma : sigma_grid) {
    const GaussianModel model(n, sigma);
    auto results = mse_many(model, estimators, config);
    SweepRow row;
    row.sigma = sigma;
    row.var_sorted = vs;
    row.mmse_unsorted = mmse_unsorted(n, sigma);
    row.per_estimator.reserve(results.size());
    for (const auto& r : results) row.per_estimator.emplace_back(r);
    table.rows.push_back(std::move(row));
  }
  return table;
}

MonteCarloResult delta_up(const GaussianModel& model, const EvalConfig& config) {
  if (!(model.sigma > 0.0)) {
    throw std::invalid_argument("delta_up: requires sigma > 0");
  }
  if (config.outer_samples < 1) {
    throw std::invalid_argument("delta_up: outer_samples must be >= 1");
  }
  const auto perms = all_permutations(model.n);
  const int threads = resolve_thread_count(config);

  std::vector<double> values(static_cast<size_t>(config.outer_samples));
  run_samples(config.outer_samples, config.chunks, threads, [&](std::int64_t i) {
    NormalSampler rng(substream_key(config.seed, static_cast<std::uint64_t>(i)));
    auto [x, y] = sample_pair(model, rng);
    // Sorting Y realizes the conditioning on Y in the sorted region; X stays
    // as drawn and only enters through its permutation-invariant norm.
    const SortedVector ys = sort_ascending(y);
    const auto stats = region_stats_over_permutations(model, ys.values(), config.integrator,
                                                      static_cast<std::uint64_t>(i), perms);
    double g_sum = 0.0;
    for (double p : stats.prob) g_sum += p * (1.0 - p);
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    values[static_cast<size_t>(i)] = norm2 * g_sum;
  });

  return summarize(values);
}

RegularityReport regularity_check(const GaussianModel& model, const EvalConfig& config) {
  if (model.n != 2 || model.sigma != 1.0) {
    throw config_error("regularity_check: defined for the n = 2, sigma = 1 instance");
  }
  if (config.outer_samples < 1) {
    throw std::invalid_argument("regularity_check: outer_samples must be >= 1");
  }
  const int threads = resolve_thread_count(config);
  const double w_sd = std::sqrt(0.5);

  std::vector<double> lo(static_cast<size_t>(config.outer_samples));
  std::vector<double> hi(static_cast<size_t>(config.outer_samples));
  run_samples(config.outer_samples, config.chunks, threads, [&](std::int64_t i) {
    NormalSampler rng(substream_key(config.seed, static_cast<std::uint64_t>(i)));
    const double a = w_sd * rng.normal();
    const double b = w_sd * rng.normal();
    lo[static_cast<size_t>(i)] = std::min(a, b);
    hi[static_cast<size_t>(i)] = std::max(a, b);
  });

  const MonteCarloResult first = summarize(lo);
  const MonteCarloResult second = summarize(hi);
  RegularityReport report;
  report.components = {-2.0 * first.mean, -2.0 * second.mean};
  report.std_error = {2.0 * first.std_error, 2.0 * second.std_error};
  report.samples = config.outer_samples;
  return report;
}

std::array<double, 2> regularity_check_quadrature(const GaussianModel& model) {
  if (model.n != 2 || model.sigma != 1.0) {
    throw config_error("regularity_check_quadrature: defined for the n = 2, sigma = 1 instance");
  }
  // -2 n! (4 pi)^(n/2) int_{x1<=x2} x f(0|x) f(x) dx with both densities
  // standard bivariate normals; the product is exp(-||x||^2) / (4 pi^2).
  // Parametrized as x1 = t, x2 = t + u with u >= 0.
  constexpr int kPoints = 600;
  constexpr double kT = 8.5;
  constexpr double kU = 12.0;
  std::array<double, 2> acc{0.0, 0.0};
  for (int a = 0; a < kPoints; ++a) {
    const double t = -kT + (2.0 * kT) * (a + 0.5) / kPoints;
    const double wt = 2.0 * kT / kPoints;
    for (int b = 0; b < kPoints; ++b) {
      const double u = kU * (b + 0.5) / kPoints;
      const double wu = kU / kPoints;
      const double x2 = t + u;
      const double dens = std::exp(-(t * t + x2 * x2));
      acc[0] += wt * wu * t * dens;
      acc[1] += wt * wu * x2 * dens;
    }
  }
  const double pi = std::numbers::pi;
  const double prefactor = -2.0 * 2.0 * (4.0 * pi) / (4.0 * pi * pi);
  return {prefactor * acc[0], prefactor * acc[1]};
}

}  // namespace ordstat
