#pragma once

#include <cstdint>
#include <vector>

#include "osm/rng.hpp"

namespace osm {

// Exact law of a random subset of {0,...,n-1}, n <= 16.
struct SubsetDistribution {
  int n = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;  // (mask, prob), sorted by mask

  std::vector<double> marginals() const;
  double prob_superset_of(std::uint32_t mask) const;   // Pr[out >= mask]
  double prob_disjoint_from(std::uint32_t mask) const;  // Pr[out & mask == 0]
};

// Linear-order pivotal sampling of v in [0,1]^n. Repeatedly pairs the two
// lowest-index fractional entries and resolves one of them with a
// sum-preserving coin; a final lone fractional entry is rounded on its own.
// The order of v encodes the caller's priority (highest first).
std::vector<int> ps_sample(const std::vector<double>& v, Rng& rng);

// Exact output law of ps_sample, by exhaustive recursion over the same
// pivot-pair rule and coin probabilities. Guarded to n <= 16.
SubsetDistribution ps_exact_distribution(const std::vector<double>& v);

// Product law of independent Ber(v_i) indicators, for baselines and tests.
SubsetDistribution independent_distribution(const std::vector<double>& v);

struct NcdReport {
  double max_violation_ones = 0.0;   // max over I of Pr[all in I on] - prod v_i
  double max_violation_zeros = 0.0;  // max over I of Pr[all in I off] - prod (1-v_i)
  double max_violation() const {
    return max_violation_ones > max_violation_zeros ? max_violation_ones : max_violation_zeros;
  }
  bool ok(double tol = 1e-12) const { return max_violation() <= tol; }
};

// Checks negative cylinder dependence of dist against the marginals v.
NcdReport check_ncd(const SubsetDistribution& dist, const std::vector<double>& v);

}  // namespace osm
