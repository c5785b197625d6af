#pragma once

#include <span>
#include <vector>

#include "ordstat/common.hpp"

namespace ordstat {

// Scalar standard normal density.
double std_normal_pdf(double x);

// Standard normal CDF, computed through erfc (stable in both tails).
double std_normal_cdf(double x);

// Inverse of std_normal_cdf. Rational approximation polished by one Newton
// step on the CDF; absolute error well below 1e-10 across (0, 1).
// Throws std::domain_error unless 0 < p < 1.
double std_normal_quantile(double p);

// Index mapping on {0, ..., n-1}. apply() realizes the associated
// permutation matrix: out[i] = v[mapping[i]].
class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(map_.size()); }
  int operator[](int i) const { return map_[static_cast<size_t>(i)]; }
  const std::vector<int>& mapping() const { return map_; }

  Permutation inverse() const;
  std::vector<double> apply(std::span<const double> v) const;
  void apply_into(std::span<const double> v, std::span<double> out) const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> map_;
};

// Enumeration guard: n! terms appear in every permutation sum.
inline constexpr int kMaxPermutationDim = 8;

// All n! permutations in lexicographic order; the first is the identity.
// Throws config_error outside 1 <= n <= kMaxPermutationDim.
std::vector<Permutation> all_permutations(int n);

std::vector<double> apply_permutation(const Permutation& perm,
                                      std::span<const double> v);

bool is_in_sorted_region(std::span<const double> v);

// Real vector certified nondecreasing.
class SortedVector {
 public:
  // Validates; throws std::invalid_argument if values are not nondecreasing.
  explicit SortedVector(std::vector<double> values);

  // Stable ascending sort of arbitrary input.
  static SortedVector sort_of(std::span<const double> v);

  const std::vector<double>& values() const { return v_; }
  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[static_cast<size_t>(i)]; }

 private:
  struct already_sorted_tag {};
  SortedVector(std::vector<double> values, already_sorted_tag) : v_(std::move(values)) {}
  std::vector<double> v_;
};

SortedVector sort_ascending(std::span<const double> v);

}  // namespace ordstat
