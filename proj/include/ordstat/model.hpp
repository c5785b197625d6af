#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ordstat/prob_core.hpp"
#include "ordstat/rng.hpp"

namespace ordstat {

// Prior X ~ N(0, I_n) observed through Y = X + sigma * Z, Z ~ N(0, I_n).
struct GaussianModel {
  int n;
  double sigma;

  GaussianModel(int n_, double sigma_);

  // Conjugate posterior X | Y=y is N(y * coef, component_var * I_n).
  double posterior_mean_coef() const { return 1.0 / (1.0 + sigma * sigma); }
  double posterior_component_var() const {
    return sigma * sigma / (1.0 + sigma * sigma);
  }
};

struct PosteriorParams {
  std::vector<double> mean;
  double component_var;
};

PosteriorParams posterior_params(const GaussianModel& model, std::span<const double> y);

// Draws (x, y) jointly; deterministic given the sampler state.
std::pair<std::vector<double>, std::vector<double>> sample_pair(const GaussianModel& model,
                                                                NormalSampler& rng);

// Numerical backend for the posterior ordered-region functionals
//   p(y) = P[X in sorted region | Y = y]
//   m(y) = E[X * 1{X in sorted region} | Y = y].
// ExactN2 is closed form (n == 2 only); MonteCarlo draws mc_samples posterior
// points. Each evaluation derives its own substream from
// (substream_seed, stream), so concurrent calls are deterministic.
struct RegionIntegrator {
  enum class Kind { ExactN2, MonteCarlo };

  Kind kind = Kind::MonteCarlo;
  int mc_samples = 4096;
  std::uint64_t substream_seed = 0;

  static RegionIntegrator exact_n2(std::uint64_t seed = 0);
  static RegionIntegrator monte_carlo(int samples, std::uint64_t seed = 0);
  // ExactN2 when n == 2, otherwise MonteCarlo with the given sample count.
  static RegionIntegrator default_for(int n, int mc_samples = 4096,
                                      std::uint64_t seed = 0);
};

double ordered_region_prob(const GaussianModel& model, std::span<const double> y,
                           const RegionIntegrator& integ, std::uint64_t stream = 0);

std::vector<double> restricted_mean(const GaussianModel& model, std::span<const double> y,
                                    const RegionIntegrator& integ, std::uint64_t stream = 0);

// p(P_pi y) and m(P_pi y) for every permutation pi in lexicographic order.
// MonteCarlo evaluations share one set of posterior noise draws across the
// permutations (common random numbers); mean is row-major [perm][component].
struct PermutationRegionStats {
  int n = 0;
  int perm_count = 0;
  std::vector<double> prob;
  std::vector<double> mean;

  std::span<const double> mean_row(int perm) const {
    return {mean.data() + static_cast<size_t>(perm) * static_cast<size_t>(n),
            static_cast<size_t>(n)};
  }
};

PermutationRegionStats region_stats_over_permutations(const GaussianModel& model,
                                                      std::span<const double> y_sorted,
                                                      const RegionIntegrator& integ,
                                                      std::uint64_t stream = 0);

// Same, with a caller-provided enumeration (avoids re-listing permutations in
// per-sample loops). perms must be all_permutations(model.n).
PermutationRegionStats region_stats_over_permutations(const GaussianModel& model,
                                                      std::span<const double> y_sorted,
                                                      const RegionIntegrator& integ,
                                                      std::uint64_t stream,
                                                      std::span<const Permutation> perms);

}  // namespace ordstat
