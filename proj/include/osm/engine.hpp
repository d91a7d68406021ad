#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "osm/instance.hpp"
#include "osm/lp.hpp"
#include "osm/rng.hpp"

namespace osm {

enum class Sampler { Pivotal, Independent };

// Input masses for the proposal process, with derived cumulative masses and
// proposal rates. Valid inputs satisfy x <= p_t (1 - y) per entry.
struct ProposalRates {
  int n = 0, T = 0;
  std::vector<double> x, y, r;  // dense n*T, row-major (i*T + t)

  double xv(int i, int t) const { return x[static_cast<std::size_t>(i) * T + t]; }
  double yv(int i, int t) const { return y[static_cast<std::size_t>(i) * T + t]; }
  double rv(int i, int t) const { return r[static_cast<std::size_t>(i) * T + t]; }
};

ProposalRates make_rates(const BernoulliInstance& inst, const std::vector<double>& x_dense);
ProposalRates make_rates(const LpSolution& sol);

// Step-function rescaling of an LP solution: mass is integrated against
// f = (1-eps) on [0,theta], (1+delta) on (theta,1], theta = delta/(delta+eps).
struct RescaledSolution {
  double epsilon = 0.0, delta = 0.0;
  double theta = 0.0, theta_hat = 0.0;
  ProposalRates rates;
};

RescaledSolution rescale(const LpSolution& sol, double eps, double delta);

struct MatchEdge {
  int i = 0, t = 0;
  double w = 0.0;
};

struct StepTrace {
  int t = 0;
  std::vector<int> proposers;  // offline ids, top weight first
  int chosen = -1;
  bool arrived = false;
  std::vector<int> discarded;
};

struct RunResult {
  std::vector<MatchEdge> matching;
  double total_weight = 0.0;
  std::vector<StepTrace> trace;  // populated only when requested
  // Free-set snapshots before each step plus the final one (T+1 masks),
  // recorded whenever n <= 64.
  std::vector<std::uint64_t> free_masks;
};

// One pass of the proposal process: at each time, pivotal (or independent)
// sampling over the free nodes sorted by decreasing edge weight picks the
// proposers; the top proposer is matched if t arrives and every other
// proposer is discarded with an independent p_t coin.
RunResult run_core(const BernoulliInstance& inst, const ProposalRates& rates, Rng& rng,
                   Sampler sampler = Sampler::Pivotal, bool record_trace = false);

// Solve, rescale with (eps, delta), then run the core process.
RunResult run_edge_weighted(const BernoulliInstance& inst, Rng& rng, double eps = 0.11,
                            double delta = 0.18);

// Solve and run unscaled; requires a vertex-weighted instance.
RunResult run_vertex_weighted(const BernoulliInstance& inst, Rng& rng);

// General (finite-type) arrivals ---------------------------------------------

struct GeneralRates {
  int n = 0, T = 0;
  std::vector<std::vector<double>> type_p;          // [t][j]
  std::vector<std::vector<std::vector<double>>> x;  // [t][j][i]
  std::vector<double> y;                            // [i*T + t]
  std::vector<std::vector<std::vector<double>>> r;  // [t][j][i]
};

GeneralRates make_general_rates(const GeneralLpSolution& sol);
GeneralRates rescale_general(const GeneralLpSolution& sol, double eps, double delta);

// Generalized proposal process: the realized type's proposer set is sampled
// and its top-weight proposer matched; there is no discard step.
RunResult run_general(const GeneralInstance& inst, const GeneralRates& rates, Rng& rng,
                      bool record_trace = false);

// Algorithm selection ---------------------------------------------------------

struct AlgorithmSpec {
  enum class Kind { Core, CoreIndependent, EdgeWeighted, VertexWeighted, General };
  Kind kind = Kind::Core;
  double eps = 0.11, delta = 0.18;

  static AlgorithmSpec parse(const std::string& text);
  std::string str() const;
};

// Monte Carlo -----------------------------------------------------------------

struct SimReport {
  int n = 0, T = 0;
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  double mean_weight = 0.0;
  double std_error = 0.0;
  std::vector<double> match_freq;  // n*T
  std::vector<double> free_freq;   // n*(T+1), Pr[i free before step t]

  double match_freq_at(int i, int t) const { return match_freq[static_cast<std::size_t>(i) * T + t]; }
};

// Deterministic given (seed, replications) for any worker count: replication
// r always uses Rng::for_replication(seed, r) and results reduce in
// replication order.
SimReport simulate(const BernoulliInstance& inst, const AlgorithmSpec& alg, std::int64_t reps,
                   std::uint64_t seed, int workers = 1);
SimReport simulate_general(const GeneralInstance& inst, const AlgorithmSpec& alg,
                           std::int64_t reps, std::uint64_t seed, int workers = 1);

// Exact evaluation (tiny instances) ------------------------------------------

struct ExactReport {
  int n = 0, T = 0;
  double expected_weight = 0.0;
  std::vector<double> match_prob;  // n*T
  // Law of the free set before each step; index t in [0, T], masks over [n].
  std::vector<std::vector<std::pair<std::uint32_t, double>>> free_dist;
  // Per time step: (threshold w, E[min(1, R_{t,w})]) for w = 0 and every
  // distinct edge weight at t, ascending.
  std::vector<std::vector<std::pair<double, double>>> emin1;

  double match_prob_at(int i, int t) const { return match_prob[static_cast<std::size_t>(i) * T + t]; }
  double free_prob(int i, int t) const;  // Pr[i free before step t], t in [0, T]
};

// Exhaustive recursion over sampler branches, the arrival coin and the
// discard coins. Guarded to n <= 4, T <= 4 and 10^4 branches per step.
ExactReport exact_evaluate(const BernoulliInstance& inst, const ProposalRates& rates,
                           Sampler sampler = Sampler::Pivotal);

struct GeneralExactReport {
  int n = 0, T = 0;
  double expected_weight = 0.0;
  std::vector<double> match_prob;  // n*T, summed over types
  std::vector<std::vector<std::pair<std::uint32_t, double>>> free_dist;

  double free_prob(int i, int t) const;
};

GeneralExactReport exact_evaluate_general(const GeneralInstance& inst, const GeneralRates& rates);

}  // namespace osm
