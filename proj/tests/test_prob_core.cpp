#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ordstat/prob_core.hpp"

using namespace ordstat;

TEST_CASE("std_normal_pdf values") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
  // direct evaluation against a series expansion of exp(-1/2)
  const double series = oracle::exp_series(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(std_normal_pdf(1.0) == doctest::Approx(series).epsilon(1e-14));
  CHECK(std_normal_pdf(1.0) == doctest::Approx(0.2419707245).epsilon(1e-9));
  CHECK(std_normal_pdf(-1.0) == std_normal_pdf(1.0));
  CHECK(std_normal_pdf(37.0) > 0.0);
}

TEST_CASE("std_normal_cdf values and symmetry") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_cdf(1.959964) - 0.975) < 1e-6);
  CHECK(std_normal_cdf(-8.0) < 1e-15);
  CHECK(std_normal_cdf(-8.0) > 0.0);
  for (double x : {0.1, 0.5, 1.0, 2.5, 4.0, 7.0}) {
    CHECK(std::abs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) < 1e-14);
  }
  // quadrature oracle
  for (double x : {-2.0, -0.3, 0.7, 1.0, 3.0}) {
    CHECK(std_normal_cdf(x) == doctest::Approx(oracle::normal_cdf(x)).epsilon(1e-10));
  }
  // monotone
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    const double c = std_normal_cdf(x);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("std_normal_quantile values") {
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(std_normal_quantile(0.975) - 1.959964) < 1e-6);
  CHECK(std::abs(std_normal_quantile(1.0 / 3.0) - (-0.430727)) < 1e-5);
  // bisection oracle on the quadrature CDF
  for (double p : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    CHECK(std_normal_quantile(p) == doctest::Approx(oracle::normal_quantile(p)).epsilon(1e-7));
  }
  CHECK_THROWS_AS((void)std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS((void)std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS((void)std_normal_quantile(-0.25), std::domain_error);
  CHECK_THROWS_AS((void)std_normal_quantile(1.5), std::domain_error);
}

TEST_CASE("quantile round trips") {
  // |Phi(Phi^-1(p)) - p| <= 1e-10 across (0, 1)
  std::vector<double> ps = {1e-12, 1e-8, 1e-4, 0.02425, 0.5, 0.97575, 1.0 - 1e-4, 1.0 - 1e-8};
  for (int k = 1; k < 100; ++k) ps.push_back(k / 100.0);
  for (double p : ps) {
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-10);
  }
  // Phi^-1(Phi(x)) recovers x within 1e-8 for |x| <= 6
  for (double x = -6.0; x <= 6.0; x += 0.125) {
    CHECK(std::abs(std_normal_quantile(std_normal_cdf(x)) - x) <= 1e-8);
  }
}

TEST_CASE("pdf lower bound along the quantile") {
  // f(Phi^-1(u)) >= sqrt(2/pi) min(u, 1-u)
  const double c = std::sqrt(2.0 / std::numbers::pi);
  std::vector<double> us = {1e-6, 1e-3, 1.0 - 1e-3, 1.0 - 1e-6};
  for (int k = 1; k < 1000; ++k) us.push_back(k / 1000.0);
  for (double u : us) {
    CHECK(std_normal_pdf(std_normal_quantile(u)) >= c * std::min(u, 1.0 - u) - 1e-12);
  }
}

TEST_CASE("permutation enumeration") {
  CHECK(all_permutations(1).size() == 1);
  CHECK(all_permutations(3).size() == 6);
  CHECK(all_permutations(4).size() == 24);
  CHECK_THROWS_AS((void)all_permutations(0), config_error);
  CHECK_THROWS_AS((void)all_permutations(9), config_error);

  // identity first, lexicographic order
  const auto p3 = all_permutations(3);
  CHECK(p3[0] == Permutation::identity(3));
  CHECK(p3[1].mapping() == std::vector<int>{0, 2, 1});
  CHECK(p3[5].mapping() == std::vector<int>{2, 1, 0});

  // pairwise distinct bijections for n <= 6
  for (int n = 1; n <= 6; ++n) {
    const auto perms = all_permutations(n);
    std::set<std::vector<int>> seen;
    for (const auto& p : perms) seen.insert(p.mapping());
    std::size_t fact = 1;
    for (int k = 2; k <= n; ++k) fact *= static_cast<std::size_t>(k);
    CHECK(seen.size() == fact);
  }
}

TEST_CASE("permutation application") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  CHECK(apply_permutation(Permutation::identity(3), v) == v);

  // one-line notation {2,3,1} maps (a,b,c) to (b,c,a)
  const Permutation pi({1, 2, 0});
  CHECK(apply_permutation(pi, v) == std::vector<double>{2.0, 3.0, 1.0});

  CHECK_THROWS_AS((void)pi.apply(std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), std::invalid_argument);

  // multiset preservation and inverse composition
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (const auto& p : all_permutations(4)) {
    std::vector<double> w(4);
    for (double& x : w) x = unif(eng);
    auto pw = p.apply(w);
    auto back = p.inverse().apply(pw);
    CHECK(back == w);
    std::sort(pw.begin(), pw.end());
    auto ws = w;
    std::sort(ws.begin(), ws.end());
    CHECK(pw == ws);
  }
}

TEST_CASE("sorting and the sorted region") {
  CHECK(sort_ascending(std::vector<double>{3.0, 1.0, 2.0}).values() ==
        std::vector<double>{1.0, 2.0, 3.0});
  CHECK(sort_ascending(std::vector<double>{0.0, 0.0}).values() == std::vector<double>{0.0, 0.0});

  std::mt19937_64 eng(11);
  std::normal_distribution<double> normal;
  std::vector<double> v(100);
  for (double& x : v) x = normal(eng);
  auto expected = v;
  std::sort(expected.begin(), expected.end());
  CHECK(sort_ascending(v).values() == expected);
  CHECK(is_in_sorted_region(sort_ascending(v).values()));

  CHECK(is_in_sorted_region(std::vector<double>{1.0, 2.0, 2.0}));
  CHECK_FALSE(is_in_sorted_region(std::vector<double>{2.0, 1.0}));
  CHECK(is_in_sorted_region(std::vector<double>{}));

  CHECK_THROWS_AS(SortedVector({2.0, 1.0}), std::invalid_argument);
  CHECK(SortedVector({1.0, 1.0, 4.0}).size() == 3);
}
