#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osm/pivotal.hpp"

namespace osm {

// X = sum c_i X_i with c_i in [0,1] and X_i ~ Ber(q_i); either independent
// or carrying an explicit joint law over the X_i.
struct WeightedBernoulliSystem {
  std::vector<double> c;
  std::vector<double> q;
  std::optional<SubsetDistribution> dist;  // nullopt = independent

  bool independent() const { return !dist.has_value(); }
  int size() const { return static_cast<int>(c.size()); }
};

std::vector<std::string> validate(const WeightedBernoulliSystem& sys);

// Scaled geometric decay factor: (1 - (1-theta){x/(1-theta)}) * theta^floor(x/(1-theta)),
// continuous and non-increasing for x >= 0; theta in [0,1).
double g_theta(double theta, double x);

// E[min(1, X)], exactly: outcome enumeration with early pruning in the
// independent mode (n <= 20), support summation in the explicit mode.
double exact_min1(const WeightedBernoulliSystem& sys);

double mean_of(const WeightedBernoulliSystem& sys);
double variance_of(const WeightedBernoulliSystem& sys);

// 1 - prod (1 - c_i q_i).
double independent_coin_bound(const WeightedBernoulliSystem& sys);

// 1 - prod_B (1 - sum_{i in B} c_i q_i); buckets partition [n] with
// sum_{i in B} c_i <= 1 each.
double bucketing_bound(const WeightedBernoulliSystem& sys,
                       const std::vector<std::vector<int>>& buckets);

// 1 - g_theta(mu_S) * prod_{i not in S} (1 - c_i q_i) with
// S = {i : q_i >= 1-theta}, mu_S = sum_{i in S} c_i q_i.
double fractional_bucketing_bound(const WeightedBernoulliSystem& sys, double theta);

// max(0, mean - 0.5 sqrt(var * mean)); requires mean <= 1.
double variance_bound(double mean, double var);

// Sum-preserving coefficient merge of a fractional pair (j,k); rho is the
// largest shift keeping all four moved coefficients in [0,1]. E[X] is
// preserved and min over the two branches lower-bounds E[f(X)] for concave f.
enum class MergeDirection { Plus, Minus };

struct MergeResult {
  std::vector<double> c;
  double rho = 0.0;
};

MergeResult merge_pair(const WeightedBernoulliSystem& sys, int j, int k, MergeDirection dir);

// The certified edge-weighted curve: 1 - g_{theta_hat}((1-eps) z) * exp(-(1+delta)(1-z)).
double k_func(double eps, double delta, double z);

// 1 - g_theta(x) * (1 - y/(1-x))^{(1-x)^2 / y} on {0 <= x < 1, 0 < y <= (1-x)^2};
// y = 0 takes the limit 1 - g_theta(x) exp(-(1-x)) (also used when x = 1).
double conv_raw(double theta, double x, double y);

// Vertex-weighted two-branch objective over (x, y) in [0, 0.5]^2.
double vertex_B(double x, double y);

// 1 - sqrt(z)/2.
double f_var(double z);

struct BoundReport {
  std::string name;
  double value = 0.0;
  std::string params;
  std::optional<double> exact;
};

}  // namespace osm
