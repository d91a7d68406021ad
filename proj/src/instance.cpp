#include "osm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "osm/rng.hpp"

namespace osm {

double BernoulliInstance::weight(int i, int t) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(t, i),
                             [](const Edge& e, const std::pair<int, int>& key) {
                               return std::make_pair(e.t, e.i) < key;
                             });
  if (it != edges.end() && it->t == t && it->i == i) return it->w;
  return 0.0;
}

std::vector<std::vector<std::pair<int, double>>> BernoulliInstance::adjacency_by_time() const {
  std::vector<std::vector<std::pair<int, double>>> adj(T);
  for (const Edge& e : edges) {
    if (e.t >= 0 && e.t < T) adj[e.t].emplace_back(e.i, e.w);
  }
  return adj;
}

void BernoulliInstance::normalize() {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::make_pair(a.t, a.i) < std::make_pair(b.t, b.i);
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].t == edges[k - 1].t)
      throw std::invalid_argument("duplicate edge (" + std::to_string(edges[k].i + 1) + "," +
                                  std::to_string(edges[k].t + 1) + ")");
  }
}

std::vector<std::string> validate(const BernoulliInstance& inst) {
  std::vector<std::string> out;
  if (inst.n < 0 || inst.T < 0) out.push_back("negative dimension");
  if (static_cast<int>(inst.p.size()) != inst.T)
    out.push_back("arrival probability vector has wrong length");
  for (int t = 0; t < static_cast<int>(inst.p.size()); ++t) {
    if (!(inst.p[t] >= 0.0 && inst.p[t] <= 1.0))
      out.push_back("arrival probability out of range at t=" + std::to_string(t + 1));
  }
  for (const Edge& e : inst.edges) {
    if (e.i < 0 || e.i >= inst.n || e.t < 0 || e.t >= inst.T)
      out.push_back("edge index out of range (" + std::to_string(e.i + 1) + "," +
                    std::to_string(e.t + 1) + ")");
    if (!(e.w >= 0.0)) out.push_back("negative edge weight at (" + std::to_string(e.i + 1) + "," +
                                     std::to_string(e.t + 1) + ")");
  }
  if (inst.vertex_weights) {
    if (static_cast<int>(inst.vertex_weights->size()) != inst.n) {
      out.push_back("vertex weight vector has wrong length");
    } else {
      for (int i = 0; i < inst.n; ++i)
        if (!((*inst.vertex_weights)[i] >= 0.0))
          out.push_back("negative vertex weight at i=" + std::to_string(i + 1));
      for (const Edge& e : inst.edges) {
        if (e.i >= 0 && e.i < inst.n && e.w != (*inst.vertex_weights)[e.i])
          out.push_back("edge weight differs from vertex weight at (" + std::to_string(e.i + 1) +
                        "," + std::to_string(e.t + 1) + ")");
      }
    }
  }
  return out;
}

std::vector<std::string> validate(const GeneralInstance& inst) {
  std::vector<std::string> out;
  if (inst.n < 0 || inst.T < 0) out.push_back("negative dimension");
  if (static_cast<int>(inst.types.size()) != inst.T) out.push_back("type table has wrong length");
  for (int t = 0; t < static_cast<int>(inst.types.size()); ++t) {
    double mass = 0.0;
    for (const GeneralType& ty : inst.types[t]) {
      if (!(ty.p >= 0.0 && ty.p <= 1.0))
        out.push_back("type probability out of range at t=" + std::to_string(t + 1));
      mass += ty.p;
      std::set<int> seen;
      for (const auto& [i, w] : ty.edges) {
        if (i < 0 || i >= inst.n)
          out.push_back("type edge index out of range at t=" + std::to_string(t + 1));
        if (!(w >= 0.0)) out.push_back("negative type edge weight at t=" + std::to_string(t + 1));
        if (!seen.insert(i).second)
          out.push_back("duplicate type edge at t=" + std::to_string(t + 1));
      }
    }
    if (mass > 1.0 + 1e-12)
      out.push_back("type probabilities exceed 1 at t=" + std::to_string(t + 1));
  }
  return out;
}

std::vector<std::string> validate(const Stochastic3SatFormula& formula) {
  std::vector<std::string> out;
  if (formula.num_vars < 0) out.push_back("negative variable count");
  if (formula.k < 1) out.push_back("appearance bound k must be positive");
  std::vector<int> appearances(std::max(formula.num_vars, 0), 0);
  for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
    const auto& clause = formula.clauses[c];
    if (clause.empty() || clause.size() > 3)
      out.push_back("clause " + std::to_string(c + 1) + " must have 1..3 literals");
    for (int lit : clause) {
      int v = std::abs(lit);
      if (v < 1 || v > formula.num_vars) {
        out.push_back("literal out of range in clause " + std::to_string(c + 1));
        continue;
      }
      appearances[v - 1]++;
      if (lit < 0 && v % 2 == 0)
        out.push_back("even-indexed variable x" + std::to_string(v) + " appears negated");
    }
  }
  for (int v = 0; v < formula.num_vars; ++v) {
    if (appearances[v] > formula.k)
      out.push_back("variable x" + std::to_string(v + 1) + " appears in more than k clauses");
  }
  return out;
}

BernoulliInstance gen_rescale_example(int n, double W) {
  if (n < 1) throw std::invalid_argument("gen_rescale_example requires n >= 1");
  BernoulliInstance inst;
  inst.n = n;
  inst.T = n + 1;
  inst.p.assign(n + 1, 1.0 - 1.0 / n);
  inst.p[n] = 1.0;
  for (int t = 0; t < n; ++t) inst.edges.push_back({t, t, 1.0});
  for (int i = 0; i < n; ++i) inst.edges.push_back({i, n, W});
  inst.normalize();
  return inst;
}

BernoulliInstance gen_uniform_star(int n) {
  if (n < 1) throw std::invalid_argument("gen_uniform_star requires n >= 1");
  BernoulliInstance inst;
  inst.n = n;
  inst.T = 1;
  inst.p = {1.0};
  for (int i = 0; i < n; ++i) inst.edges.push_back({i, 0, 1.0});
  inst.vertex_weights = std::vector<double>(n, 1.0);
  inst.normalize();
  return inst;
}

BernoulliInstance gen_random(const RandomInstanceConfig& cfg) {
  if (cfg.n < 1 || cfg.T < 1) throw std::invalid_argument("gen_random requires n,T >= 1");
  if (!(cfg.density >= 0.0 && cfg.density <= 1.0))
    throw std::invalid_argument("density must lie in [0,1]");
  if (!(cfg.w_lo >= 0.0) || cfg.w_lo > cfg.w_hi)
    throw std::invalid_argument("empty or negative weight range");
  Rng rng(cfg.seed);
  BernoulliInstance inst;
  inst.n = cfg.n;
  inst.T = cfg.T;
  std::vector<double> vw;
  if (cfg.vertex_weighted) {
    vw.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) vw[i] = rng.uniform(cfg.w_lo, cfg.w_hi);
  }
  inst.p.resize(cfg.T);
  for (int t = 0; t < cfg.T; ++t) inst.p[t] = 1.0 - rng.uniform01();  // (0,1]
  for (int i = 0; i < cfg.n; ++i) {
    for (int t = 0; t < cfg.T; ++t) {
      if (rng.bernoulli(cfg.density)) {
        double w = cfg.vertex_weighted ? vw[i] : rng.uniform(cfg.w_lo, cfg.w_hi);
        inst.edges.push_back({i, t, w});
      }
    }
  }
  if (cfg.vertex_weighted) inst.vertex_weights = vw;
  inst.normalize();
  return inst;
}

SatReduction build_from_3sat_detailed(const Stochastic3SatFormula& formula, double p) {
  auto problems = validate(formula);
  if (!problems.empty()) throw std::invalid_argument("invalid formula: " + problems.front());
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("clause arrival probability must lie in (0,1]");

  SatReduction red;
  const int n = formula.num_vars;
  red.true_node.assign(n, -1);
  red.false_node.assign(n, -1);

  BernoulliInstance& inst = red.instance;
  int next_offline = 0;
  for (int v = 0; v < n; ++v) {
    if ((v + 1) % 2 == 1) red.true_node[v] = next_offline++;
    red.false_node[v] = next_offline++;
  }
  inst.n = next_offline;
  inst.T = n + static_cast<int>(formula.clauses.size());
  inst.p.resize(inst.T);

  for (int v = 0; v < n; ++v) {
    const bool odd = (v + 1) % 2 == 1;
    inst.p[v] = odd ? 1.0 : 0.5;
    if (odd) inst.edges.push_back({red.true_node[v], v, 1.0});
    inst.edges.push_back({red.false_node[v], v, 1.0});
  }
  for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
    const int t = n + static_cast<int>(c);
    red.clause_time.push_back(t);
    inst.p[t] = p;
    for (int lit : formula.clauses[c]) {
      const int v = std::abs(lit) - 1;
      const int node = lit > 0 ? red.false_node[v] : red.true_node[v];
      inst.edges.push_back({node, t, 1.0});
    }
  }
  inst.vertex_weights = std::vector<double>(inst.n, 1.0);
  inst.normalize();
  return red;
}

BernoulliInstance build_from_3sat(const Stochastic3SatFormula& formula, double p) {
  return build_from_3sat_detailed(formula, p).instance;
}

}  // namespace osm
