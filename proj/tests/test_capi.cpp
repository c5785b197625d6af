#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "doctest.h"
#include "ordstat.h"

namespace {

struct Model {
  ordstat_model* ptr = nullptr;
  Model(int n, double sigma) { REQUIRE(ordstat_model_create(n, sigma, &ptr) == ORDSTAT_OK); }
  ~Model() { ordstat_model_destroy(ptr); }
};

struct Integrator {
  ordstat_integrator* ptr = nullptr;
  ~Integrator() { ordstat_integrator_destroy(ptr); }
};

}  // namespace

TEST_CASE("capi version and status strings") {
  CHECK(std::string(ordstat_version()) == "0.1.0");
  CHECK(std::string(ordstat_status_message(ORDSTAT_OK)) == "ok");
  CHECK(std::strlen(ordstat_status_message(ORDSTAT_ERR_CONFIG)) > 0);
}

TEST_CASE("capi scalar functions") {
  CHECK(ordstat_std_normal_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(ordstat_std_normal_cdf(0.0) == 0.5);

  double q = 0.0;
  CHECK(ordstat_std_normal_quantile(0.975, &q) == ORDSTAT_OK);
  CHECK(q == doctest::Approx(1.959964).epsilon(1e-5));
  CHECK(ordstat_std_normal_quantile(1.5, &q) == ORDSTAT_ERR_DOMAIN);
  CHECK(ordstat_std_normal_quantile(0.5, nullptr) == ORDSTAT_ERR_ARGUMENT);
}

TEST_CASE("capi model and integrator lifecycle") {
  ordstat_model* bad = nullptr;
  CHECK(ordstat_model_create(0, 1.0, &bad) == ORDSTAT_ERR_ARGUMENT);
  CHECK(ordstat_model_create(2, -1.0, &bad) == ORDSTAT_ERR_ARGUMENT);

  Model m(2, 1.0);
  Integrator exact;
  REQUIRE(ordstat_integrator_create_exact_n2(0, &exact.ptr) == ORDSTAT_OK);

  Integrator mc;
  CHECK(ordstat_integrator_create_monte_carlo(0, 1, &mc.ptr) == ORDSTAT_ERR_ARGUMENT);
  REQUIRE(ordstat_integrator_create_monte_carlo(4096, 1, &mc.ptr) == ORDSTAT_OK);

  // ExactN2 against a three-dimensional model is a configuration error
  Model m3(3, 1.0);
  const double y3[3] = {0.0, 1.0, 2.0};
  double p = 0.0;
  CHECK(ordstat_ordered_region_prob(m3.ptr, exact.ptr, y3, 3, 0, &p) == ORDSTAT_ERR_CONFIG);

  const double y2[2] = {0.7, 0.7};
  CHECK(ordstat_ordered_region_prob(m.ptr, exact.ptr, y2, 2, 0, &p) == ORDSTAT_OK);
  CHECK(p == 0.5);

  double mean[2] = {0, 0};
  const double origin[2] = {0.0, 0.0};
  CHECK(ordstat_restricted_mean(m.ptr, exact.ptr, origin, 2, 0, mean) == ORDSTAT_OK);
  CHECK(mean[0] == doctest::Approx(-0.199471).epsilon(1e-5));
  CHECK(mean[1] == doctest::Approx(0.199471).epsilon(1e-5));
}

TEST_CASE("capi estimators") {
  Model m(2, 1.0);
  Integrator exact;
  REQUIRE(ordstat_integrator_create_exact_n2(0, &exact.ptr) == ORDSTAT_OK);

  const double origin[2] = {0.0, 0.0};
  double out[2] = {0, 0};
  CHECK(ordstat_estimate(m.ptr, exact.ptr, ORDSTAT_EST_OPTIMAL, origin, 2, 0, nullptr, out) ==
        ORDSTAT_OK);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  CHECK(out[0] == doctest::Approx(-c).epsilon(1e-9));
  CHECK(out[1] == doctest::Approx(c).epsilon(1e-9));

  CHECK(ordstat_estimate(m.ptr, nullptr, ORDSTAT_EST_HHAT, origin, 2, 0, nullptr, out) ==
        ORDSTAT_OK);
  CHECK(out[0] == doctest::Approx(-0.564190).epsilon(1e-5));

  const double y[2] = {-1.0, 2.0};
  CHECK(ordstat_estimate(m.ptr, nullptr, ORDSTAT_EST_IDENTITY, y, 2, 0, nullptr, out) ==
        ORDSTAT_OK);
  CHECK(out[0] == -1.0);
  CHECK(out[1] == 2.0);

  // missing integrator and unsorted input are argument errors
  CHECK(ordstat_estimate(m.ptr, nullptr, ORDSTAT_EST_OPTIMAL, y, 2, 0, nullptr, out) ==
        ORDSTAT_ERR_ARGUMENT);
  const double unsorted[2] = {2.0, -1.0};
  CHECK(ordstat_estimate(m.ptr, exact.ptr, ORDSTAT_EST_OPTIMAL, unsorted, 2, 0, nullptr, out) ==
        ORDSTAT_ERR_ARGUMENT);

  // MLE at negligible noise returns the observation
  Model low(2, 1e-3);
  ordstat_fixed_point_options fp;
  ordstat_fixed_point_defaults(&fp);
  CHECK(fp.max_iters == 500);
  CHECK(ordstat_estimate(low.ptr, nullptr, ORDSTAT_EST_MLE, y, 2, 0, &fp, out) == ORDSTAT_OK);
  CHECK(out[0] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(out[1] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("capi bounds") {
  double v = 0.0;
  CHECK(ordstat_var_sorted(2, 0, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(1.3633802).epsilon(1e-6));
  CHECK(ordstat_var_sorted(0, 0, &v) == ORDSTAT_ERR_DOMAIN);

  double means[3];
  CHECK(ordstat_order_statistic_means(3, 0, means) == ORDSTAT_OK);
  CHECK(means[2] == doctest::Approx(0.8462844).epsilon(1e-6));

  CHECK(ordstat_chi_variance(2, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(2.0 - std::numbers::pi / 2.0).epsilon(1e-12));

  CHECK(ordstat_quantile_mean_approx(3, 3, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(0.6744898).epsilon(1e-6));
  CHECK(ordstat_quantile_mean_approx(4, 3, &v) == ORDSTAT_ERR_ARGUMENT);

  CHECK(ordstat_quantile_mean_error_bound(1, 1, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(2.5837733).epsilon(1e-6));

  CHECK(ordstat_var_approx(2, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(1.6289480).epsilon(1e-6));
  CHECK(ordstat_var_approx_error_bound(1, &v) == ORDSTAT_ERR_DOMAIN);
  CHECK(ordstat_var_approx_error_bound(2, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(67.8036463).epsilon(1e-7));

  CHECK(ordstat_max_entropy_var_bound(2, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ordstat_max_entropy_mmse_bound(1, 1.0, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ordstat_sorted_entropy(2, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(2.1447299).epsilon(1e-6));

  CHECK(ordstat_quantile_power_sum_bound(5, 0.0, &v) == ORDSTAT_OK);
  CHECK(v == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("capi evaluation") {
  ordstat_eval_config cfg;
  ordstat_eval_defaults(&cfg);
  CHECK(cfg.outer_samples == 100000);
  cfg.outer_samples = 4000;
  cfg.seed = 9;

  Model zero(2, 0.0);
  Integrator exact;
  REQUIRE(ordstat_integrator_create_exact_n2(2, &exact.ptr) == ORDSTAT_OK);

  ordstat_mc_result r;
  CHECK(ordstat_mse_of_estimator(zero.ptr, exact.ptr, ORDSTAT_EST_IDENTITY, &cfg, &r) ==
        ORDSTAT_OK);
  CHECK(r.mean == 0.0);
  CHECK(r.samples == 4000);

  Model m(2, 1.0);
  CHECK(ordstat_mse_of_estimator(m.ptr, exact.ptr, ORDSTAT_EST_HHAT, &cfg, &r) == ORDSTAT_OK);
  CHECK(std::abs(r.mean - 1.3634) <= 4.0 * r.std_error);

  ordstat_mc_result merged;
  const ordstat_mc_result a{1.0, 0.1, 100};
  const ordstat_mc_result b{3.0, 0.1, 100};
  ordstat_merge_results(&a, &b, &merged);
  CHECK(merged.mean == doctest::Approx(2.0));
  CHECK(merged.samples == 200);

  double asym = 0.0;
  CHECK(ordstat_delta_up_asymptote(4, &asym) == ORDSTAT_OK);
  CHECK(asym == doctest::Approx(23.0 / 6.0).epsilon(1e-12));

  double unsorted_ref = 0.0;
  CHECK(ordstat_mmse_unsorted(2, 1.0, &unsorted_ref) == ORDSTAT_OK);
  CHECK(unsorted_ref == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(ordstat_delta_up(m.ptr, exact.ptr, &cfg, &r) == ORDSTAT_OK);
  CHECK(std::abs(r.mean - 0.574779) <= 4.0 * r.std_error);

  Model sigma0(2, 0.0);
  CHECK(ordstat_delta_up(sigma0.ptr, exact.ptr, &cfg, &r) == ORDSTAT_ERR_ARGUMENT);
}

TEST_CASE("capi regularity") {
  Model m(2, 1.0);
  ordstat_eval_config cfg;
  ordstat_eval_defaults(&cfg);
  cfg.outer_samples = 200000;
  cfg.seed = 19;

  double comps[2], ses[2];
  CHECK(ordstat_regularity_check(m.ptr, &cfg, comps, ses) == ORDSTAT_OK);
  const double expected = 2.0 / std::sqrt(2.0 * std::numbers::pi);
  CHECK(std::abs(comps[0] - expected) <= 5.0 * ses[0]);
  CHECK(std::abs(comps[1] + expected) <= 5.0 * ses[1]);

  double quad[2];
  CHECK(ordstat_regularity_check_quadrature(m.ptr, quad) == ORDSTAT_OK);
  CHECK(std::abs(quad[0] - expected) <= 1e-3);

  Model wrong(3, 1.0);
  CHECK(ordstat_regularity_check(wrong.ptr, &cfg, comps, ses) == ORDSTAT_ERR_CONFIG);
}

TEST_CASE("capi sweep table") {
  ordstat_eval_config cfg;
  ordstat_eval_defaults(&cfg);
  cfg.outer_samples = 5000;
  cfg.seed = 23;

  Integrator mc;
  REQUIRE(ordstat_integrator_create_monte_carlo(256, 3, &mc.ptr) == ORDSTAT_OK);

  const double sigmas[2] = {0.5, 1.0};
  const ordstat_estimator_kind ests[2] = {ORDSTAT_EST_OPTIMAL, ORDSTAT_EST_HHAT};
  ordstat_sweep_table* table = nullptr;
  REQUIRE(ordstat_sweep_run(1, sigmas, 2, ests, 2, mc.ptr, &cfg, &table) == ORDSTAT_OK);
  CHECK(ordstat_sweep_row_count(table) == 2);

  double sigma = 0, vs = 0, unsorted = 0;
  CHECK(ordstat_sweep_row_refs(table, 1, &sigma, &vs, &unsorted) == ORDSTAT_OK);
  CHECK(sigma == 1.0);
  CHECK(vs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(unsorted == doctest::Approx(0.5).epsilon(1e-12));

  ordstat_mc_result cell;
  CHECK(ordstat_sweep_get(table, 0, ORDSTAT_EST_OPTIMAL, &cell) == ORDSTAT_OK);
  CHECK(cell.samples == 5000);
  CHECK(ordstat_sweep_get(table, 0, ORDSTAT_EST_MLE, &cell) == ORDSTAT_ERR_ARGUMENT);
  CHECK(ordstat_sweep_get(table, 7, ORDSTAT_EST_OPTIMAL, &cell) == ORDSTAT_ERR_ARGUMENT);
  ordstat_sweep_destroy(table);

  // permutation sums cap the dimension at 8
  ordstat_sweep_table* big = nullptr;
  CHECK(ordstat_sweep_run(9, sigmas, 2, ests, 2, mc.ptr, &cfg, &big) == ORDSTAT_ERR_CONFIG);
}

TEST_CASE("capi estimate length mismatch") {
  Model m(3, 1.0);
  const double y[2] = {0.0, 1.0};
  double out[3];
  CHECK(ordstat_estimate(m.ptr, nullptr, ORDSTAT_EST_HHAT, y, 2, 0, nullptr, out) ==
        ORDSTAT_ERR_ARGUMENT);
}
