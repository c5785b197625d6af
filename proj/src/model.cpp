#include "ordstat/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ordstat {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887;
}

GaussianModel::GaussianModel(int n_, double sigma_) : n(n_), sigma(sigma_) {
  if (n < 1) throw std::invalid_argument("GaussianModel: n must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("GaussianModel: sigma must be >= 0");
}

PosteriorParams posterior_params(const GaussianModel& model, std::span<const double> y) {
  if (static_cast<int>(y.size()) != model.n) {
    throw std::invalid_argument("posterior_params: length mismatch");
  }
  PosteriorParams out;
  out.component_var = model.posterior_component_var();
  const double c = model.posterior_mean_coef();
  out.mean.resize(y.size());
  for (size_t i = 0; i < y.size(); ++i) out.mean[i] = c * y[i];
  return out;
}

std::pair<std::vector<double>, std::vector<double>> sample_pair(const GaussianModel& model,
                                                                NormalSampler& rng) {
  std::vector<double> x(static_cast<size_t>(model.n));
  std::vector<double> y(static_cast<size_t>(model.n));
  rng.fill_normal(x);
  for (size_t i = 0; i < y.size(); ++i) {
    y[i] = x[i] + model.sigma * rng.normal();
  }
  return {std::move(x), std::move(y)};
}

RegionIntegrator RegionIntegrator::exact_n2(std::uint64_t seed) {
  RegionIntegrator r;
  r.kind = Kind::ExactN2;
  r.substream_seed = seed;
  return r;
}

RegionIntegrator RegionIntegrator::monte_carlo(int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("RegionIntegrator: mc_samples must be >= 1");
  RegionIntegrator r;
  r.kind = Kind::MonteCarlo;
  r.mc_samples = samples;
  r.substream_seed = seed;
  return r;
}

RegionIntegrator RegionIntegrator::default_for(int n, int mc_samples, std::uint64_t seed) {
  return n == 2 ? exact_n2(seed) : monte_carlo(mc_samples, seed);
}

namespace {

// Closed forms for n = 2 via the rotation S = X1+X2, D = X2-X1 (independent
// under an isotropic posterior):
//   P[D >= 0]      = Phi(mu_D / s_D)
//   E[D 1{D >= 0}] = mu_D Phi(mu_D/s_D) + s_D phi(mu_D/s_D)
//   E[X1 1{D>=0}]  = (E[S] P[D>=0] - E[D 1{D>=0}]) / 2.
struct ExactN2Stats {
  double prob;
  double m1;
  double m2;
};

ExactN2Stats exact_n2_stats(double mu1, double mu2, double tau) {
  const double mu_d = mu2 - mu1;
  const double mu_s = mu1 + mu2;
  const double s_d = tau * kSqrt2;
  const double z = mu_d / s_d;
  const double p = std_normal_cdf(z);
  const double e_d = mu_d * p + s_d * std_normal_pdf(z);
  ExactN2Stats out;
  out.prob = p;
  out.m1 = 0.5 * (mu_s * p - e_d);
  out.m2 = 0.5 * (mu_s * p + e_d);
  return out;
}

void validate_integrator(const GaussianModel& model, const RegionIntegrator& integ) {
  if (integ.kind == RegionIntegrator::Kind::ExactN2 && model.n != 2) {
    throw config_error("RegionIntegrator: ExactN2 requires n == 2");
  }
  if (integ.kind == RegionIntegrator::Kind::MonteCarlo && integ.mc_samples < 1) {
    throw std::invalid_argument("RegionIntegrator: mc_samples must be >= 1");
  }
}

// Fills prob/mean for the given posterior means (one row per permutation)
// using a single shared set of posterior noise draws.
void monte_carlo_stats(const std::vector<double>& mus, int n, double tau, int samples,
                       std::uint64_t key, std::span<double> prob, std::span<double> mean) {
  const int perm_count = static_cast<int>(prob.size());
  NormalSampler rng(key);
  std::vector<double> draws(static_cast<size_t>(samples) * static_cast<size_t>(n));
  rng.fill_normal(draws);

  std::vector<double> x(static_cast<size_t>(n));
  for (int pi = 0; pi < perm_count; ++pi) {
    const double* mu = mus.data() + static_cast<size_t>(pi) * static_cast<size_t>(n);
    double* acc = mean.data() + static_cast<size_t>(pi) * static_cast<size_t>(n);
    long hits = 0;
    for (int j = 0; j < samples; ++j) {
      const double* z = draws.data() + static_cast<size_t>(j) * static_cast<size_t>(n);
      bool inside = true;
      double prev = mu[0] + tau * z[0];
      x[0] = prev;
      for (int i = 1; i < n; ++i) {
        const double cur = mu[i] + tau * z[i];
        if (cur < prev) {
          inside = false;
          break;
        }
        x[static_cast<size_t>(i)] = cur;
        prev = cur;
      }
      if (inside) {
        ++hits;
        for (int i = 0; i < n; ++i) acc[i] += x[static_cast<size_t>(i)];
      }
    }
    prob[static_cast<size_t>(pi)] = static_cast<double>(hits) / samples;
    for (int i = 0; i < n; ++i) acc[i] /= samples;
  }
}

}  // namespace

PermutationRegionStats region_stats_over_permutations(const GaussianModel& model,
                                                      std::span<const double> y_sorted,
                                                      const RegionIntegrator& integ,
                                                      std::uint64_t stream) {
  const auto perms = all_permutations(model.n);
  return region_stats_over_permutations(model, y_sorted, integ, stream, perms);
}

PermutationRegionStats region_stats_over_permutations(const GaussianModel& model,
                                                      std::span<const double> y_sorted,
                                                      const RegionIntegrator& integ,
                                                      std::uint64_t stream,
                                                      std::span<const Permutation> perms) {
  if (static_cast<int>(y_sorted.size()) != model.n) {
    throw std::invalid_argument("region_stats_over_permutations: length mismatch");
  }
  validate_integrator(model, integ);

  const int n = model.n;
  const int perm_count = static_cast<int>(perms.size());

  PermutationRegionStats stats;
  stats.n = n;
  stats.perm_count = perm_count;
  stats.prob.assign(static_cast<size_t>(perm_count), 0.0);
  stats.mean.assign(static_cast<size_t>(perm_count) * static_cast<size_t>(n), 0.0);

  std::vector<double> py(static_cast<size_t>(n));

  if (model.sigma == 0.0) {
    // Degenerate posterior: the dominated-convergence limits of p and m.
    for (int pi = 0; pi < perm_count; ++pi) {
      perms[static_cast<size_t>(pi)].apply_into(y_sorted, py);
      const bool inside = is_in_sorted_region(py);
      stats.prob[static_cast<size_t>(pi)] = inside ? 1.0 : 0.0;
      if (inside) {
        for (int i = 0; i < n; ++i) {
          stats.mean[static_cast<size_t>(pi) * static_cast<size_t>(n) + static_cast<size_t>(i)] =
              py[static_cast<size_t>(i)];
        }
      }
    }
    return stats;
  }

  const double c = model.posterior_mean_coef();
  const double tau = std::sqrt(model.posterior_component_var());

  if (n == 1) {
    stats.prob[0] = 1.0;
    stats.mean[0] = c * y_sorted[0];
    return stats;
  }

  std::vector<double> mus(static_cast<size_t>(perm_count) * static_cast<size_t>(n));
  for (int pi = 0; pi < perm_count; ++pi) {
    perms[static_cast<size_t>(pi)].apply_into(y_sorted, py);
    for (int i = 0; i < n; ++i) {
      mus[static_cast<size_t>(pi) * static_cast<size_t>(n) + static_cast<size_t>(i)] =
          c * py[static_cast<size_t>(i)];
    }
  }

  if (integ.kind == RegionIntegrator::Kind::ExactN2) {
    for (int pi = 0; pi < perm_count; ++pi) {
      const auto s = exact_n2_stats(mus[static_cast<size_t>(2 * pi)],
                                    mus[static_cast<size_t>(2 * pi + 1)], tau);
      stats.prob[static_cast<size_t>(pi)] = s.prob;
      stats.mean[static_cast<size_t>(2 * pi)] = s.m1;
      stats.mean[static_cast<size_t>(2 * pi + 1)] = s.m2;
    }
    return stats;
  }

  monte_carlo_stats(mus, n, tau, integ.mc_samples, substream_key(integ.substream_seed, stream),
                    stats.prob, stats.mean);
  return stats;
}

namespace {

// Single-y evaluation shares the machinery above through a one-permutation view.
PermutationRegionStats region_stats_single(const GaussianModel& model, std::span<const double> y,
                                           const RegionIntegrator& integ, std::uint64_t stream) {
  if (static_cast<int>(y.size()) != model.n) {
    throw std::invalid_argument("region integrator: length mismatch");
  }
  validate_integrator(model, integ);

  const int n = model.n;
  PermutationRegionStats stats;
  stats.n = n;
  stats.perm_count = 1;
  stats.prob.assign(1, 0.0);
  stats.mean.assign(static_cast<size_t>(n), 0.0);

  if (model.sigma == 0.0) {
    const bool inside = is_in_sorted_region(y);
    stats.prob[0] = inside ? 1.0 : 0.0;
    if (inside) {
      for (int i = 0; i < n; ++i) stats.mean[static_cast<size_t>(i)] = y[static_cast<size_t>(i)];
    }
    return stats;
  }

  const double c = model.posterior_mean_coef();
  const double tau = std::sqrt(model.posterior_component_var());

  if (n == 1) {
    stats.prob[0] = 1.0;
    stats.mean[0] = c * y[0];
    return stats;
  }

  std::vector<double> mu(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) mu[static_cast<size_t>(i)] = c * y[static_cast<size_t>(i)];

  if (integ.kind == RegionIntegrator::Kind::ExactN2) {
    const auto s = exact_n2_stats(mu[0], mu[1], tau);
    stats.prob[0] = s.prob;
    stats.mean[0] = s.m1;
    stats.mean[1] = s.m2;
    return stats;
  }

  monte_carlo_stats(mu, n, tau, integ.mc_samples, substream_key(integ.substream_seed, stream),
                    stats.prob, stats.mean);
  return stats;
}

}  // namespace

double ordered_region_prob(const GaussianModel& model, std::span<const double> y,
                           const RegionIntegrator& integ, std::uint64_t stream) {
  return region_stats_single(model, y, integ, stream).prob[0];
}

std::vector<double> restricted_mean(const GaussianModel& model, std::span<const double> y,
                                    const RegionIntegrator& integ, std::uint64_t stream) {
  return region_stats_single(model, y, integ, stream).mean;
}

}  // namespace ordstat
