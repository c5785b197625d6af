#include "ordstat/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ordstat {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kSqrt2 = 1.4142135623730950488016887;
}  // namespace

double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

namespace {

// Acklam's rational approximation to the normal quantile (|rel err| < 1.2e-9
// before refinement).
double quantile_seed(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  }
  double x = quantile_seed(p);
  // One Newton step on the CDF; pdf(x) > 0 everywhere, and in the far tails
  // where the CDF saturates the seed is already at full precision.
  const double f = std_normal_pdf(x);
  if (f > 1e-300) {
    x -= (std_normal_cdf(x) - p) / f;
  }
  return x;
}

Permutation::Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
  const int n = static_cast<int>(map_.size());
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int v : map_) {
    if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) {
      throw std::invalid_argument("Permutation: mapping is not a bijection on [0, n)");
    }
    seen[static_cast<size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(static_cast<size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (size_t i = 0; i < map_.size(); ++i) {
    inv[static_cast<size_t>(map_[i])] = static_cast<int>(i);
  }
  return Permutation(std::move(inv));
}

void Permutation::apply_into(std::span<const double> v, std::span<double> out) const {
  if (v.size() != map_.size() || out.size() != map_.size()) {
    throw std::invalid_argument("Permutation::apply: length mismatch");
  }
  for (size_t i = 0; i < map_.size(); ++i) {
    out[i] = v[static_cast<size_t>(map_[i])];
  }
}

std::vector<double> Permutation::apply(std::span<const double> v) const {
  std::vector<double> out(map_.size());
  apply_into(v, out);
  return out;
}

std::vector<Permutation> all_permutations(int n) {
  if (n < 1 || n > kMaxPermutationDim) {
    throw config_error("all_permutations: n must lie in [1, 8]");
  }
  std::vector<int> m(static_cast<size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  std::vector<Permutation> out;
  std::size_t count = 1;
  for (int k = 2; k <= n; ++k) count *= static_cast<std::size_t>(k);
  out.reserve(count);
  do {
    out.push_back(Permutation(m));
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

std::vector<double> apply_permutation(const Permutation& perm, std::span<const double> v) {
  return perm.apply(v);
}

bool is_in_sorted_region(std::span<const double> v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] > v[i]) return false;
  }
  return true;
}

SortedVector::SortedVector(std::vector<double> values) : v_(std::move(values)) {
  if (!is_in_sorted_region(v_)) {
    throw std::invalid_argument("SortedVector: values are not nondecreasing");
  }
}

SortedVector SortedVector::sort_of(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::stable_sort(s.begin(), s.end());
  return SortedVector(std::move(s), already_sorted_tag{});
}

SortedVector sort_ascending(std::span<const double> v) {
  return SortedVector::sort_of(v);
}

}  // namespace ordstat
