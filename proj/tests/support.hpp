#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <string>
#include <vector>

#include "osm/engine.hpp"
#include "osm/instance.hpp"
#include "osm/lp.hpp"

namespace osm::testsupport {

inline std::vector<double> dense_x(const BernoulliInstance& inst,
                                   const std::vector<std::pair<std::pair<int, int>, double>>& entries) {
  std::vector<double> x(static_cast<std::size_t>(inst.n) * inst.T, 0.0);
  for (const auto& [it, v] : entries) x[static_cast<std::size_t>(it.first) * inst.T + it.second] = v;
  return x;
}

struct LawCheck {
  double marginal_err = 0.0;   // |Pr[F_{i,t}] - (1 - y_{i,t})|
  double value_law_err = 0.0;  // |Pr[match at t with weight >= w] - p_t E[min(1,R_{t,w})]|
  double ncd_violation = 0.0;  // positive part of both cylinder inequalities
};

// Exact process laws of the proposal algorithm on a tiny instance.
inline LawCheck check_process_laws(const BernoulliInstance& inst, const ProposalRates& rates,
                                   Sampler sampler) {
  const ExactReport report = exact_evaluate(inst, rates, sampler);
  LawCheck out;
  std::vector<double> w(static_cast<std::size_t>(inst.n) * inst.T, 0.0);
  for (const Edge& e : inst.edges) w[static_cast<std::size_t>(e.i) * inst.T + e.t] = e.w;

  for (int t = 0; t <= inst.T; ++t) {
    for (int i = 0; i < inst.n; ++i) {
      const double y =
          t < inst.T ? rates.yv(i, t) : rates.yv(i, inst.T - 1) + rates.xv(i, inst.T - 1);
      out.marginal_err =
          std::max(out.marginal_err, std::fabs(report.free_prob(i, t) - (1.0 - y)));
    }
  }
  for (int t = 0; t < inst.T; ++t) {
    for (const auto& [threshold, emin] : report.emin1[t]) {
      double match_above = 0.0;
      for (int i = 0; i < inst.n; ++i)
        if (w[static_cast<std::size_t>(i) * inst.T + t] >= threshold)
          match_above += report.match_prob_at(i, t);
      out.value_law_err =
          std::max(out.value_law_err, std::fabs(match_above - inst.p[t] * emin));
    }
  }
  for (int t = 0; t <= inst.T; ++t) {
    for (std::uint32_t subset = 1; subset < (1u << inst.n); ++subset) {
      double all_free = 0.0, all_occupied = 0.0;
      for (const auto& [mask, prob] : report.free_dist[t]) {
        if ((mask & subset) == subset) all_free += prob;
        if ((mask & subset) == 0) all_occupied += prob;
      }
      double prod_free = 1.0, prod_occ = 1.0;
      for (int i = 0; i < inst.n; ++i) {
        if (!((subset >> i) & 1u)) continue;
        const double y =
            t < inst.T ? rates.yv(i, t) : rates.yv(i, inst.T - 1) + rates.xv(i, inst.T - 1);
        prod_free *= 1.0 - y;
        prod_occ *= y;
      }
      out.ncd_violation = std::max(out.ncd_violation, all_free - prod_free);
      out.ncd_violation = std::max(out.ncd_violation, all_occupied - prod_occ);
    }
  }
  return out;
}

// The 30-instance tiny corpus: every (n, T) in {1,2,3}^2 at three densities,
// plus three named shapes.
inline std::vector<BernoulliInstance> tiny_corpus() {
  std::vector<BernoulliInstance> corpus;
  std::uint64_t seed = 100;
  for (int n = 1; n <= 3; ++n) {
    for (int T = 1; T <= 3; ++T) {
      for (double density : {0.4, 0.7, 1.0}) {
        RandomInstanceConfig cfg;
        cfg.n = n;
        cfg.T = T;
        cfg.density = density;
        cfg.w_lo = 0.1;
        cfg.w_hi = 2.0;
        cfg.seed = ++seed;
        corpus.push_back(gen_random(cfg));
      }
    }
  }
  corpus.push_back(gen_uniform_star(2));
  corpus.push_back(gen_uniform_star(3));
  corpus.push_back(gen_rescale_example(2, 50.0));
  return corpus;
}

}  // namespace osm::testsupport
