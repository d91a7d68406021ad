#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "osm/instance.hpp"

namespace osm {

// Optimal online policy value from the exact dynamic program over
// (free-set bitmask, time). Keys are (mask, t, j) with j = -1 for Bernoulli
// arrivals; actions are the matched offline index or -1 for skip.
using PolicyKey = std::tuple<std::uint32_t, int, int>;
using Policy = std::map<PolicyKey, int>;

struct MdpValue {
  double value = 0.0;
  Policy policy;
};

MdpValue opt_online(const BernoulliInstance& inst);         // n <= 20
MdpValue opt_online_general(const GeneralInstance& inst);   // n <= 20

// Expected value of a fixed policy (missing states default to skip).
double evaluate_policy(const BernoulliInstance& inst, const Policy& policy);
double evaluate_policy_general(const GeneralInstance& inst, const Policy& policy);

// Expected number of satisfied clauses under optimal play: odd (1-based)
// variables are chosen, even variables are uniform random. n <= 16.
double opt_stochastic_3sat(const Stochastic3SatFormula& formula);

// App-style two-sided bound for the SAT reduction, exact DP on both sides.
struct SandwichReport {
  double opt_sat = 0.0;     // optimal expected satisfied clauses
  double dp_value = 0.0;    // optimal online value on the built instance
  double lower = 0.0;       // 3n/4 + p*opt_sat - n*C_k*p^2
  double upper = 0.0;       // 3n/4 + p*opt_sat
  double c_k = 0.0;         // k^2 * 2^k
  bool inside = false;
};

SandwichReport hardness_sandwich(const Stochastic3SatFormula& formula, double p,
                                 double tol = 1e-9);

// Offline (prophet) baseline -------------------------------------------------

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo average of the maximum-weight matching of the realized graph.
McEstimate prophet_value_mc(const BernoulliInstance& inst, std::int64_t reps, std::uint64_t seed,
                            int workers = 1);

// Exact expectation over all 2^T arrival patterns; guarded to T <= 20.
double prophet_value_exact(const BernoulliInstance& inst);

// Maximum-weight bipartite matching (not necessarily perfect; weights >= 0)
// via shortest augmenting paths with potentials. w[l][r] = 0 means no gain.
double max_weight_bipartite_matching(const std::vector<std::vector<double>>& w);

}  // namespace osm
