#include "ordstat.h"

#include <cstring>
#include <new>
#include <span>
#include <stdexcept>
#include <vector>

#include "ordstat/bounds.hpp"
#include "ordstat/common.hpp"
#include "ordstat/estimators.hpp"
#include "ordstat/evaluation.hpp"
#include "ordstat/model.hpp"
#include "ordstat/prob_core.hpp"

struct ordstat_model {
  ordstat::GaussianModel model;
};

struct ordstat_integrator {
  ordstat::RegionIntegrator integ;
};

struct ordstat_sweep_table {
  ordstat::SweepTable table;
};

namespace {

template <typename Fn>
ordstat_status guarded(Fn&& fn) {
  try {
    fn();
    return ORDSTAT_OK;
  } catch (const std::invalid_argument&) {
    return ORDSTAT_ERR_ARGUMENT;
  } catch (const std::out_of_range&) {
    return ORDSTAT_ERR_ARGUMENT;
  } catch (const std::domain_error&) {
    return ORDSTAT_ERR_DOMAIN;
  } catch (const ordstat::config_error&) {
    return ORDSTAT_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    return ORDSTAT_ERR_NUMERIC;
  } catch (const std::exception&) {
    return ORDSTAT_ERR_NUMERIC;
  }
}

ordstat::EstimatorKind to_kind(ordstat_estimator_kind kind) {
  switch (kind) {
    case ORDSTAT_EST_OPTIMAL: return ordstat::EstimatorKind::Optimal;
    case ORDSTAT_EST_FHAT: return ordstat::EstimatorKind::FHat;
    case ORDSTAT_EST_HHAT: return ordstat::EstimatorKind::HHat;
    case ORDSTAT_EST_MLE: return ordstat::EstimatorKind::MLE;
    case ORDSTAT_EST_IDENTITY: return ordstat::EstimatorKind::Identity;
  }
  throw std::invalid_argument("unknown estimator kind");
}

ordstat::EvalConfig to_config(const ordstat_eval_config* config,
                              const ordstat_integrator* integ) {
  if (config == nullptr) throw std::invalid_argument("config must not be null");
  ordstat::EvalConfig out;
  out.outer_samples = config->outer_samples;
  out.chunks = config->chunks;
  out.seed = config->seed;
  out.threads = config->threads;
  if (integ != nullptr) out.integrator = integ->integ;
  return out;
}

ordstat_mc_result to_c(const ordstat::MonteCarloResult& r) {
  return {r.mean, r.std_error, r.samples};
}

}  // namespace

extern "C" {

const char* ordstat_status_message(ordstat_status status) {
  switch (status) {
    case ORDSTAT_OK: return "ok";
    case ORDSTAT_ERR_ARGUMENT: return "invalid argument";
    case ORDSTAT_ERR_DOMAIN: return "argument outside domain";
    case ORDSTAT_ERR_CONFIG: return "inconsistent configuration";
    case ORDSTAT_ERR_NUMERIC: return "numeric failure";
  }
  return "unknown status";
}

const char* ordstat_version(void) { return ordstat::kVersion; }

double ordstat_std_normal_pdf(double x) { return ordstat::std_normal_pdf(x); }

double ordstat_std_normal_cdf(double x) { return ordstat::std_normal_cdf(x); }

ordstat_status ordstat_std_normal_quantile(double p, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::std_normal_quantile(p);
  });
}

ordstat_status ordstat_model_create(int32_t n, double sigma, ordstat_model** out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = new ordstat_model{ordstat::GaussianModel(n, sigma)};
  });
}

void ordstat_model_destroy(ordstat_model* model) { delete model; }

ordstat_status ordstat_integrator_create_exact_n2(uint64_t seed, ordstat_integrator** out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = new ordstat_integrator{ordstat::RegionIntegrator::exact_n2(seed)};
  });
}

ordstat_status ordstat_integrator_create_monte_carlo(int32_t samples, uint64_t seed,
                                                     ordstat_integrator** out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = new ordstat_integrator{ordstat::RegionIntegrator::monte_carlo(samples, seed)};
  });
}

void ordstat_integrator_destroy(ordstat_integrator* integ) { delete integ; }

ordstat_status ordstat_ordered_region_prob(const ordstat_model* model,
                                           const ordstat_integrator* integ, const double* y,
                                           int32_t len, uint64_t stream, double* out) {
  return guarded([&] {
    if (model == nullptr || integ == nullptr || y == nullptr || out == nullptr) {
      throw std::invalid_argument("null pointer");
    }
    *out = ordstat::ordered_region_prob(model->model,
                                        std::span<const double>(y, static_cast<size_t>(len)),
                                        integ->integ, stream);
  });
}

ordstat_status ordstat_restricted_mean(const ordstat_model* model,
                                       const ordstat_integrator* integ, const double* y,
                                       int32_t len, uint64_t stream, double* out) {
  return guarded([&] {
    if (model == nullptr || integ == nullptr || y == nullptr || out == nullptr) {
      throw std::invalid_argument("null pointer");
    }
    const auto m = ordstat::restricted_mean(
        model->model, std::span<const double>(y, static_cast<size_t>(len)), integ->integ, stream);
    std::memcpy(out, m.data(), m.size() * sizeof(double));
  });
}

void ordstat_fixed_point_defaults(ordstat_fixed_point_options* out) {
  if (out == nullptr) return;
  const ordstat::FixedPointOptions d;
  out->max_iters = d.max_iters;
  out->tolerance = d.tolerance;
  out->restarts = d.restarts;
  out->damping = d.damping;
}

ordstat_status ordstat_estimate(const ordstat_model* model, const ordstat_integrator* integ,
                                ordstat_estimator_kind kind, const double* y_sorted, int32_t len,
                                uint64_t stream, const ordstat_fixed_point_options* fp,
                                double* out) {
  return guarded([&] {
    if (model == nullptr || y_sorted == nullptr || out == nullptr) {
      throw std::invalid_argument("null pointer");
    }
    if (len != model->model.n) {
      throw std::invalid_argument("length does not match model dimension");
    }
    const ordstat::EstimatorKind k = to_kind(kind);
    const std::span<const double> y(y_sorted, static_cast<size_t>(len));
    const ordstat::SortedVector ys{std::vector<double>(y.begin(), y.end())};

    std::vector<double> est;
    switch (k) {
      case ordstat::EstimatorKind::Optimal:
      case ordstat::EstimatorKind::FHat: {
        if (integ == nullptr) throw std::invalid_argument("integrator required");
        est = (k == ordstat::EstimatorKind::Optimal)
                  ? ordstat::optimal_estimate(model->model, ys, integ->integ, stream)
                  : ordstat::fhat_estimate(model->model, ys, integ->integ, stream);
        break;
      }
      case ordstat::EstimatorKind::HHat:
        est = ordstat::hhat_estimate(model->model,
                                     ordstat::order_statistic_means_cached(model->model.n));
        break;
      case ordstat::EstimatorKind::MLE: {
        ordstat::FixedPointOptions opts;
        if (fp != nullptr) {
          opts.max_iters = fp->max_iters;
          opts.tolerance = fp->tolerance;
          opts.restarts = fp->restarts;
          opts.damping = fp->damping;
        }
        est = ordstat::mle_estimate(model->model, ys, opts);
        break;
      }
      case ordstat::EstimatorKind::Identity:
        est = ordstat::identity_estimate(ys);
        break;
    }
    std::memcpy(out, est.data(), est.size() * sizeof(double));
  });
}

ordstat_status ordstat_order_statistic_means(int32_t n, int32_t quad_points, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    const auto m = ordstat::order_statistic_means(n, quad_points);
    std::memcpy(out, m.data(), m.size() * sizeof(double));
  });
}

ordstat_status ordstat_var_sorted(int32_t n, int32_t quad_points, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::var_sorted(n, quad_points);
  });
}

ordstat_status ordstat_quantile_mean_approx(int32_t i, int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::quantile_mean_approx(i, n);
  });
}

ordstat_status ordstat_quantile_mean_error_bound(int32_t i, int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::quantile_mean_error_bound(i, n);
  });
}

ordstat_status ordstat_var_approx(int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::var_approx(n);
  });
}

ordstat_status ordstat_var_approx_error_bound(int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::var_approx_error_bound(n);
  });
}

ordstat_status ordstat_chi_variance(int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::chi_variance(n);
  });
}

ordstat_status ordstat_max_entropy_mmse_bound(int32_t n, double sigma, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::max_entropy_mmse_bound(n, sigma);
  });
}

ordstat_status ordstat_max_entropy_var_bound(int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::max_entropy_var_bound(n);
  });
}

ordstat_status ordstat_sorted_entropy(int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::sorted_entropy(n);
  });
}

ordstat_status ordstat_quantile_power_sum_bound(int32_t n, double eps, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    *out = ordstat::quantile_power_sum_bound(n, eps);
  });
}

void ordstat_eval_defaults(ordstat_eval_config* out) {
  if (out == nullptr) return;
  const ordstat::EvalConfig d;
  out->outer_samples = d.outer_samples;
  out->chunks = d.chunks;
  out->seed = d.seed;
  out->threads = d.threads;
}

ordstat_status ordstat_mse_of_estimator(const ordstat_model* model,
                                        const ordstat_integrator* integ,
                                        ordstat_estimator_kind kind,
                                        const ordstat_eval_config* config,
                                        ordstat_mc_result* out) {
  return guarded([&] {
    if (model == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
    const auto cfg = to_config(config, integ);
    *out = to_c(ordstat::mse_of_estimator(model->model, to_kind(kind), cfg));
  });
}

void ordstat_merge_results(const ordstat_mc_result* a, const ordstat_mc_result* b,
                           ordstat_mc_result* out) {
  if (a == nullptr || b == nullptr || out == nullptr) return;
  const ordstat::MonteCarloResult ra{a->mean, a->std_error, a->samples};
  const ordstat::MonteCarloResult rb{b->mean, b->std_error, b->samples};
  *out = to_c(ordstat::merge_results(ra, rb));
}

ordstat_status ordstat_delta_up(const ordstat_model* model, const ordstat_integrator* integ,
                                const ordstat_eval_config* config, ordstat_mc_result* out) {
  return guarded([&] {
    if (model == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
    const auto cfg = to_config(config, integ);
    *out = to_c(ordstat::delta_up(model->model, cfg));
  });
}

ordstat_status ordstat_delta_up_asymptote(int32_t n, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    if (n < 1) throw std::domain_error("n must be >= 1");
    *out = ordstat::delta_up_asymptote(n);
  });
}

ordstat_status ordstat_mmse_unsorted(int32_t n, double sigma, double* out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (!(sigma >= 0.0)) throw std::domain_error("sigma must be >= 0");
    *out = ordstat::mmse_unsorted(n, sigma);
  });
}

ordstat_status ordstat_regularity_check(const ordstat_model* model,
                                        const ordstat_eval_config* config,
                                        double components[2], double std_errors[2]) {
  return guarded([&] {
    if (model == nullptr || components == nullptr || std_errors == nullptr) {
      throw std::invalid_argument("null pointer");
    }
    const auto cfg = to_config(config, nullptr);
    const auto report = ordstat::regularity_check(model->model, cfg);
    components[0] = report.components[0];
    components[1] = report.components[1];
    std_errors[0] = report.std_error[0];
    std_errors[1] = report.std_error[1];
  });
}

ordstat_status ordstat_regularity_check_quadrature(const ordstat_model* model,
                                                   double components[2]) {
  return guarded([&] {
    if (model == nullptr || components == nullptr) throw std::invalid_argument("null pointer");
    const auto v = ordstat::regularity_check_quadrature(model->model);
    components[0] = v[0];
    components[1] = v[1];
  });
}

ordstat_status ordstat_sweep_run(int32_t n, const double* sigmas, int32_t sigma_count,
                                 const ordstat_estimator_kind* estimators,
                                 int32_t estimator_count, const ordstat_integrator* integ,
                                 const ordstat_eval_config* config, ordstat_sweep_table** out) {
  return guarded([&] {
    if (sigmas == nullptr || estimators == nullptr || out == nullptr) {
      throw std::invalid_argument("null pointer");
    }
    if (sigma_count < 1 || estimator_count < 1) {
      throw std::invalid_argument("sweep needs at least one sigma and one estimator");
    }
    std::vector<ordstat::EstimatorKind> kinds;
    kinds.reserve(static_cast<size_t>(estimator_count));
    for (int32_t i = 0; i < estimator_count; ++i) kinds.push_back(to_kind(estimators[i]));
    const auto cfg = to_config(config, integ);
    auto table = ordstat::mmse_sweep(
        n, std::span<const double>(sigmas, static_cast<size_t>(sigma_count)), kinds, cfg);
    *out = new ordstat_sweep_table{std::move(table)};
  });
}

int32_t ordstat_sweep_row_count(const ordstat_sweep_table* table) {
  return table == nullptr ? 0 : static_cast<int32_t>(table->table.rows.size());
}

ordstat_status ordstat_sweep_row_refs(const ordstat_sweep_table* table, int32_t row,
                                      double* sigma, double* var_sorted, double* mmse_unsorted) {
  return guarded([&] {
    if (table == nullptr) throw std::invalid_argument("null pointer");
    if (row < 0 || row >= static_cast<int32_t>(table->table.rows.size())) {
      throw std::out_of_range("row out of range");
    }
    const auto& r = table->table.rows[static_cast<size_t>(row)];
    if (sigma != nullptr) *sigma = r.sigma;
    if (var_sorted != nullptr) *var_sorted = r.var_sorted;
    if (mmse_unsorted != nullptr) *mmse_unsorted = r.mmse_unsorted;
  });
}

ordstat_status ordstat_sweep_get(const ordstat_sweep_table* table, int32_t row,
                                 ordstat_estimator_kind kind, ordstat_mc_result* out) {
  return guarded([&] {
    if (table == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
    if (row < 0 || row >= static_cast<int32_t>(table->table.rows.size())) {
      throw std::out_of_range("row out of range");
    }
    const ordstat::EstimatorKind k = to_kind(kind);
    const auto& t = table->table;
    for (size_t col = 0; col < t.estimators.size(); ++col) {
      if (t.estimators[col] == k) {
        const auto& cell = t.rows[static_cast<size_t>(row)].per_estimator[col];
        if (!cell.has_value()) throw std::invalid_argument("estimator not computed");
        *out = to_c(*cell);
        return;
      }
    }
    throw std::invalid_argument("estimator not in sweep");
  });
}

void ordstat_sweep_destroy(ordstat_sweep_table* table) { delete table; }

}  // extern "C"
