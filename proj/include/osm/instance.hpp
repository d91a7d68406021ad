#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace osm {

// One weighted edge between offline node i and online arrival t.
// Indices are 0-based internally; the JSON format is 1-based.
struct Edge {
  int i = 0;
  int t = 0;
  double w = 0.0;
};

// Bernoulli-arrival instance: online node t materializes with probability
// p[t], revealing the stored edge weights; an absent edge means weight 0.
struct BernoulliInstance {
  int n = 0;
  int T = 0;
  std::vector<double> p;                              // length T
  std::vector<Edge> edges;                            // sorted by (t, i), unique
  std::optional<std::vector<double>> vertex_weights;  // length n when present

  bool vertex_weighted() const { return vertex_weights.has_value(); }
  double weight(int i, int t) const;  // 0 when the edge is absent
  // Edges grouped per time step, each list sorted by offline index.
  std::vector<std::vector<std::pair<int, double>>> adjacency_by_time() const;
  void normalize();  // sort edges by (t, i); rejects duplicate edges
};

// One possible realization of an online arrival in the general model.
struct GeneralType {
  double p = 0.0;
  std::vector<std::pair<int, double>> edges;  // (i, w), sorted by i
};

// General (finite-type) arrivals: at time t, type j realizes with
// probability types[t][j].p, and the residual mass is an empty arrival.
struct GeneralInstance {
  int n = 0;
  int T = 0;
  std::vector<std::vector<GeneralType>> types;  // outer length T
};

std::vector<std::string> validate(const BernoulliInstance& inst);
std::vector<std::string> validate(const GeneralInstance& inst);

// Stochastic 3-CNF: odd-indexed variables (1-based) are set by the
// algorithm, even-indexed ones uniformly at random by nature.
struct Stochastic3SatFormula {
  int num_vars = 0;
  int k = 3;                              // max clause appearances per variable
  std::vector<std::vector<int>> clauses;  // signed 1-based literals, <= 3 each
};

std::vector<std::string> validate(const Stochastic3SatFormula& formula);

// Named generators -----------------------------------------------------------

// n diagonal online nodes of weight 1 arriving w.p. 1-1/n, then one final
// arrival of weight W (w.p. 1) adjacent to every offline node.
BernoulliInstance gen_rescale_example(int n, double W = 1000.0);

// Single deterministic arrival adjacent to all n offline nodes, unit weights.
BernoulliInstance gen_uniform_star(int n);

struct RandomInstanceConfig {
  int n = 1;
  int T = 1;
  double density = 0.5;  // independent edge-presence probability
  double w_lo = 0.0;
  double w_hi = 1.0;
  bool vertex_weighted = false;
  std::uint64_t seed = 0;
};

BernoulliInstance gen_random(const RandomInstanceConfig& cfg);

// Unweighted matching instance of the stochastic-SAT reduction, plus the
// offline-node labels needed to reason about it.
struct SatReduction {
  BernoulliInstance instance;
  std::vector<int> true_node;   // per variable (0-based), -1 for even variables
  std::vector<int> false_node;  // per variable (0-based)
  std::vector<int> clause_time;  // arrival time (0-based) of each clause node
};

SatReduction build_from_3sat_detailed(const Stochastic3SatFormula& formula, double p);
BernoulliInstance build_from_3sat(const Stochastic3SatFormula& formula, double p);

}  // namespace osm
