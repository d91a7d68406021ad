#include "osm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "osm/pivotal.hpp"

namespace osm {

namespace {

constexpr double kFeasTol = 1e-9;

std::vector<double> dense_weights(const BernoulliInstance& inst) {
  std::vector<double> w(static_cast<std::size_t>(inst.n) * inst.T, 0.0);
  for (const Edge& e : inst.edges) w[static_cast<std::size_t>(e.i) * inst.T + e.t] = e.w;
  return w;
}

void check_rates_feasible(const BernoulliInstance& inst, const ProposalRates& rates) {
  if (rates.n != inst.n || rates.T != inst.T)
    throw std::invalid_argument("rates dimensions do not match the instance");
  for (int i = 0; i < inst.n; ++i) {
    for (int t = 0; t < inst.T; ++t) {
      const double xv = rates.xv(i, t);
      if (xv < -kFeasTol || xv > inst.p[t] * (1.0 - rates.yv(i, t)) + kFeasTol)
        throw std::invalid_argument("infeasible input mass at (" + std::to_string(i + 1) + "," +
                                    std::to_string(t + 1) + ")");
    }
  }
}

// Free nodes sorted by decreasing weight, ties to the lower offline index.
std::vector<int> sorted_free(const std::vector<char>& free_flag, const std::vector<double>& w,
                             int n, int T, int t) {
  std::vector<int> order;
  order.reserve(n);
  for (int i = 0; i < n; ++i)
    if (free_flag[i]) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return w[static_cast<std::size_t>(a) * T + t] > w[static_cast<std::size_t>(b) * T + t];
  });
  return order;
}

std::vector<int> independent_sample(const std::vector<double>& v, Rng& rng) {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(v.size()); ++k)
    if (rng.bernoulli(v[k])) out.push_back(k);
  return out;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Integral of the two-piece step function over [lo, hi].
double step_integral(double lo, double hi, double theta, double eps, double delta) {
  const double low_part = std::max(0.0, std::min(hi, theta) - std::min(lo, theta));
  const double high_part = (hi - lo) - low_part;
  return (1.0 - eps) * low_part + (1.0 + delta) * high_part;
}

}  // namespace

ProposalRates make_rates(const BernoulliInstance& inst, const std::vector<double>& x_dense) {
  if (x_dense.size() != static_cast<std::size_t>(inst.n) * inst.T)
    throw std::invalid_argument("x has wrong dimensions");
  ProposalRates rates;
  rates.n = inst.n;
  rates.T = inst.T;
  rates.x = x_dense;
  derive_rates(inst.n, inst.T, inst.p, rates.x, rates.y, rates.r);
  return rates;
}

ProposalRates make_rates(const LpSolution& sol) {
  ProposalRates rates;
  rates.n = sol.n;
  rates.T = sol.T;
  rates.x = sol.x;
  rates.y = sol.y;
  rates.r = sol.r;
  return rates;
}

RescaledSolution rescale(const LpSolution& sol, double eps, double delta) {
  if (!(eps >= 0.0 && eps <= 1.0 && delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("eps and delta must lie in [0,1]");
  RescaledSolution out;
  out.epsilon = eps;
  out.delta = delta;
  out.theta = (eps + delta > 0.0) ? delta / (delta + eps) : 0.0;
  out.theta_hat = out.theta * (1.0 - eps);
  out.rates.n = sol.n;
  out.rates.T = sol.T;
  out.rates.x.assign(sol.x.size(), 0.0);
  for (int i = 0; i < sol.n; ++i) {
    for (int t = 0; t < sol.T; ++t) {
      const std::size_t k = static_cast<std::size_t>(i) * sol.T + t;
      if (sol.x[k] <= 0.0) continue;
      out.rates.x[k] = step_integral(sol.y[k], sol.y[k] + sol.x[k], out.theta, eps, delta);
    }
  }
  derive_rates(sol.n, sol.T, sol.p, out.rates.x, out.rates.y, out.rates.r);
  return out;
}

RunResult run_core(const BernoulliInstance& inst, const ProposalRates& rates, Rng& rng,
                   Sampler sampler, bool record_trace) {
  check_rates_feasible(inst, rates);
  const std::vector<double> w = dense_weights(inst);
  std::vector<char> free_flag(inst.n, 1);
  RunResult result;
  if (inst.n <= 64) result.free_masks.reserve(inst.T + 1);
  auto snapshot = [&]() {
    if (inst.n > 64) return;
    std::uint64_t mask = 0;
    for (int i = 0; i < inst.n; ++i)
      if (free_flag[i]) mask |= 1ull << i;
    result.free_masks.push_back(mask);
  };
  snapshot();
  std::vector<double> v;
  for (int t = 0; t < inst.T; ++t) {
    const std::vector<int> order = sorted_free(free_flag, w, inst.n, inst.T, t);
    v.resize(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) v[k] = clamp01(rates.rv(order[k], t));
    const std::vector<int> picks =
        sampler == Sampler::Pivotal ? ps_sample(v, rng) : independent_sample(v, rng);
    if (picks.empty()) {
      snapshot();
      if (record_trace) result.trace.push_back({t, {}, -1, false, {}});
      continue;
    }
    StepTrace trace;
    trace.t = t;
    if (record_trace)
      for (int k : picks) trace.proposers.push_back(order[k]);
    const int top = order[picks.front()];
    trace.arrived = rng.bernoulli(inst.p[t]);
    if (trace.arrived) {
      const double wt = w[static_cast<std::size_t>(top) * inst.T + t];
      result.matching.push_back({top, t, wt});
      result.total_weight += wt;
      free_flag[top] = 0;
      trace.chosen = top;
    }
    for (std::size_t k = 1; k < picks.size(); ++k) {
      const int node = order[picks[k]];
      if (rng.bernoulli(inst.p[t])) {
        free_flag[node] = 0;
        if (record_trace) trace.discarded.push_back(node);
      }
    }
    snapshot();
    if (record_trace) result.trace.push_back(std::move(trace));
  }
  return result;
}

RunResult run_edge_weighted(const BernoulliInstance& inst, Rng& rng, double eps, double delta) {
  const LpSolution sol = solve_lp(inst);
  const RescaledSolution scaled = rescale(sol, eps, delta);
  return run_core(inst, scaled.rates, rng, Sampler::Pivotal);
}

RunResult run_vertex_weighted(const BernoulliInstance& inst, Rng& rng) {
  if (!inst.vertex_weighted())
    throw std::invalid_argument("run_vertex_weighted requires a vertex-weighted instance");
  const LpSolution sol = solve_lp(inst);
  return run_core(inst, make_rates(sol), rng, Sampler::Pivotal);
}

GeneralRates make_general_rates(const GeneralLpSolution& sol) {
  GeneralRates rates;
  rates.n = sol.n;
  rates.T = sol.T;
  rates.type_p = sol.type_p;
  rates.x = sol.x;
  rates.y = sol.y;
  rates.r = sol.r;
  return rates;
}

GeneralRates rescale_general(const GeneralLpSolution& sol, double eps, double delta) {
  if (!(eps >= 0.0 && eps <= 1.0 && delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("eps and delta must lie in [0,1]");
  const double theta = (eps + delta > 0.0) ? delta / (delta + eps) : 0.0;
  GeneralRates rates;
  rates.n = sol.n;
  rates.T = sol.T;
  rates.type_p = sol.type_p;
  rates.x.resize(sol.T);
  rates.r.resize(sol.T);
  // Every type at time t integrates upward from the same pre-t mass y_{i,t}.
  for (int t = 0; t < sol.T; ++t) {
    const int J = static_cast<int>(sol.x[t].size());
    rates.x[t].assign(J, std::vector<double>(sol.n, 0.0));
    rates.r[t].assign(J, std::vector<double>(sol.n, 0.0));
    for (int j = 0; j < J; ++j)
      for (int i = 0; i < sol.n; ++i) {
        const double xv = sol.x[t][j][i];
        if (xv <= 0.0) continue;
        const double lo = sol.y[static_cast<std::size_t>(i) * sol.T + t];
        rates.x[t][j][i] = step_integral(lo, lo + xv, theta, eps, delta);
      }
  }
  rates.y.assign(static_cast<std::size_t>(sol.n) * sol.T, 0.0);
  for (int i = 0; i < sol.n; ++i) {
    double cum = 0.0;
    for (int t = 0; t < sol.T; ++t) {
      rates.y[static_cast<std::size_t>(i) * sol.T + t] = cum;
      for (int j = 0; j < static_cast<int>(rates.x[t].size()); ++j) cum += rates.x[t][j][i];
    }
  }
  for (int t = 0; t < sol.T; ++t)
    for (int j = 0; j < static_cast<int>(rates.x[t].size()); ++j)
      for (int i = 0; i < sol.n; ++i) {
        const double xv = rates.x[t][j][i];
        if (xv <= 0.0) continue;
        const double denom =
            rates.type_p[t][j] * (1.0 - rates.y[static_cast<std::size_t>(i) * sol.T + t]);
        if (denom <= 0.0) throw std::invalid_argument("infeasible rescaled mass");
        rates.r[t][j][i] = xv / denom;
      }
  return rates;
}

RunResult run_general(const GeneralInstance& inst, const GeneralRates& rates, Rng& rng,
                      bool record_trace) {
  if (rates.n != inst.n || rates.T != inst.T)
    throw std::invalid_argument("rates dimensions do not match the instance");
  for (int t = 0; t < inst.T; ++t)
    for (int j = 0; j < static_cast<int>(rates.x[t].size()); ++j)
      for (int i = 0; i < inst.n; ++i) {
        const double xv = rates.x[t][j][i];
        const double cap =
            rates.type_p[t][j] * (1.0 - rates.y[static_cast<std::size_t>(i) * inst.T + t]);
        if (xv < -kFeasTol || xv > cap + kFeasTol)
          throw std::invalid_argument("infeasible input mass at (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + "," + std::to_string(t + 1) + ")");
      }

  std::vector<char> free_flag(inst.n, 1);
  RunResult result;
  if (inst.n <= 64) result.free_masks.reserve(inst.T + 1);
  auto snapshot = [&]() {
    if (inst.n > 64) return;
    std::uint64_t mask = 0;
    for (int i = 0; i < inst.n; ++i)
      if (free_flag[i]) mask |= 1ull << i;
    result.free_masks.push_back(mask);
  };
  snapshot();
  for (int t = 0; t < inst.T; ++t) {
    // Realize the arrival type (residual mass = empty arrival).
    const double u = rng.uniform01();
    double acc = 0.0;
    int j = -1;
    for (int cand = 0; cand < static_cast<int>(inst.types[t].size()); ++cand) {
      acc += inst.types[t][cand].p;
      if (u < acc) {
        j = cand;
        break;
      }
    }
    if (j < 0) {
      snapshot();
      if (record_trace) result.trace.push_back({t, {}, -1, false, {}});
      continue;
    }
    std::vector<double> wj(inst.n, 0.0);
    for (const auto& [i, wv] : inst.types[t][j].edges) wj[i] = wv;
    std::vector<int> order;
    for (int i = 0; i < inst.n; ++i)
      if (free_flag[i]) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return wj[a] > wj[b]; });
    std::vector<double> v(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) v[k] = clamp01(rates.r[t][j][order[k]]);
    const std::vector<int> picks = ps_sample(v, rng);
    if (!picks.empty()) {
      const int top = order[picks.front()];
      result.matching.push_back({top, t, wj[top]});
      result.total_weight += wj[top];
      free_flag[top] = 0;
      if (record_trace) {
        StepTrace trace;
        trace.t = t;
        for (int k : picks) trace.proposers.push_back(order[k]);
        trace.chosen = top;
        trace.arrived = true;
        result.trace.push_back(std::move(trace));
      }
    } else if (record_trace) {
      result.trace.push_back({t, {}, -1, true, {}});
    }
    snapshot();
  }
  return result;
}

AlgorithmSpec AlgorithmSpec::parse(const std::string& text) {
  AlgorithmSpec spec;
  std::string head = text;
  std::string params;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    params = text.substr(pos + 1);
  }
  if (head == "core") {
    spec.kind = Kind::Core;
  } else if (head == "core-independent") {
    spec.kind = Kind::CoreIndependent;
  } else if (head == "edge-weighted") {
    spec.kind = Kind::EdgeWeighted;
  } else if (head == "vertex-weighted") {
    spec.kind = Kind::VertexWeighted;
  } else if (head == "general") {
    spec.kind = Kind::General;
  } else {
    throw std::invalid_argument("unknown algorithm '" + text + "'");
  }
  if (!params.empty()) {
    if (spec.kind != Kind::EdgeWeighted && spec.kind != Kind::General)
      throw std::invalid_argument("algorithm '" + head + "' takes no parameters");
    const auto comma = params.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("expected 'eps,delta' after ':' in '" + text + "'");
    try {
      spec.eps = std::stod(params.substr(0, comma));
      spec.delta = std::stod(params.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("could not parse eps,delta in '" + text + "'");
    }
    if (!(spec.eps >= 0.0 && spec.eps <= 1.0 && spec.delta >= 0.0 && spec.delta <= 1.0))
      throw std::invalid_argument("eps and delta must lie in [0,1]");
  }
  return spec;
}

std::string AlgorithmSpec::str() const {
  switch (kind) {
    case Kind::Core:
      return "core";
    case Kind::CoreIndependent:
      return "core-independent";
    case Kind::EdgeWeighted:
      return "edge-weighted:" + std::to_string(eps) + "," + std::to_string(delta);
    case Kind::VertexWeighted:
      return "vertex-weighted";
    case Kind::General:
      return "general:" + std::to_string(eps) + "," + std::to_string(delta);
  }
  return "?";
}

namespace {

template <typename RunOnce>
SimReport run_replications(int n, int T, std::int64_t reps, std::uint64_t seed, int workers,
                           RunOnce&& run_once) {
  if (reps < 1) throw std::invalid_argument("replications must be >= 1");
  workers = std::max(1, workers);
  if (n > 64) throw std::invalid_argument("simulation trajectories guarded to n <= 64");

  struct Accum {
    std::vector<std::int64_t> match_counts;
    std::vector<std::int64_t> free_counts;
  };
  std::vector<Accum> acc(workers);
  std::vector<double> rep_weight(reps, 0.0);

  auto work = [&](int wkr, std::int64_t lo, std::int64_t hi) {
    Accum& a = acc[wkr];
    a.match_counts.assign(static_cast<std::size_t>(n) * T, 0);
    a.free_counts.assign(static_cast<std::size_t>(n) * (T + 1), 0);
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      Rng rng = Rng::for_replication(seed, static_cast<std::uint64_t>(rep));
      const RunResult result = run_once(rng);
      rep_weight[rep] = result.total_weight;
      for (const MatchEdge& m : result.matching)
        a.match_counts[static_cast<std::size_t>(m.i) * T + m.t]++;
      for (int t = 0; t <= T; ++t) {
        const std::uint64_t mask = result.free_masks[t];
        for (int i = 0; i < n; ++i)
          if ((mask >> i) & 1ull) a.free_counts[static_cast<std::size_t>(i) * (T + 1) + t]++;
      }
    }
  };

  if (workers == 1) {
    work(0, 0, reps);
  } else {
    std::vector<std::thread> threads;
    for (int wkr = 0; wkr < workers; ++wkr) {
      const std::int64_t lo = reps * wkr / workers;
      const std::int64_t hi = reps * (wkr + 1) / workers;
      threads.emplace_back(work, wkr, lo, hi);
    }
    for (auto& th : threads) th.join();
  }

  SimReport report;
  report.n = n;
  report.T = T;
  report.replications = reps;
  report.seed = seed;
  std::vector<std::int64_t> match_counts(static_cast<std::size_t>(n) * T, 0);
  std::vector<std::int64_t> free_counts(static_cast<std::size_t>(n) * (T + 1), 0);
  for (const Accum& a : acc) {
    for (std::size_t k = 0; k < match_counts.size(); ++k) match_counts[k] += a.match_counts[k];
    for (std::size_t k = 0; k < free_counts.size(); ++k) free_counts[k] += a.free_counts[k];
  }
  double total = 0.0;
  for (std::int64_t rep = 0; rep < reps; ++rep) total += rep_weight[rep];
  report.mean_weight = total / static_cast<double>(reps);
  double ss = 0.0;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    const double d = rep_weight[rep] - report.mean_weight;
    ss += d * d;
  }
  report.std_error =
      reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps)) : 0.0;
  report.match_freq.resize(match_counts.size());
  for (std::size_t k = 0; k < match_counts.size(); ++k)
    report.match_freq[k] = static_cast<double>(match_counts[k]) / static_cast<double>(reps);
  report.free_freq.resize(free_counts.size());
  for (std::size_t k = 0; k < free_counts.size(); ++k)
    report.free_freq[k] = static_cast<double>(free_counts[k]) / static_cast<double>(reps);
  return report;
}

}  // namespace

SimReport simulate(const BernoulliInstance& inst, const AlgorithmSpec& alg, std::int64_t reps,
                   std::uint64_t seed, int workers) {
  if (alg.kind == AlgorithmSpec::Kind::General)
    throw std::invalid_argument("algorithm 'general' requires a general instance");
  if (alg.kind == AlgorithmSpec::Kind::VertexWeighted && !inst.vertex_weighted())
    throw std::invalid_argument("vertex-weighted algorithm on a non-vertex-weighted instance");
  const LpSolution sol = solve_lp(inst);
  ProposalRates rates;
  Sampler sampler = Sampler::Pivotal;
  switch (alg.kind) {
    case AlgorithmSpec::Kind::Core:
      rates = make_rates(sol);
      break;
    case AlgorithmSpec::Kind::CoreIndependent:
      rates = make_rates(sol);
      sampler = Sampler::Independent;
      break;
    case AlgorithmSpec::Kind::EdgeWeighted:
      rates = rescale(sol, alg.eps, alg.delta).rates;
      break;
    case AlgorithmSpec::Kind::VertexWeighted:
      rates = make_rates(sol);
      break;
    default:
      break;
  }
  return run_replications(inst.n, inst.T, reps, seed, workers,
                          [&](Rng& rng) { return run_core(inst, rates, rng, sampler); });
}

SimReport simulate_general(const GeneralInstance& inst, const AlgorithmSpec& alg,
                           std::int64_t reps, std::uint64_t seed, int workers) {
  if (alg.kind != AlgorithmSpec::Kind::General)
    throw std::invalid_argument("general instances run the 'general' algorithm");
  const GeneralLpSolution sol = solve_lp_general(inst);
  const GeneralRates rates = rescale_general(sol, alg.eps, alg.delta);
  return run_replications(inst.n, inst.T, reps, seed, workers,
                          [&](Rng& rng) { return run_general(inst, rates, rng); });
}

double ExactReport::free_prob(int i, int t) const {
  double prob = 0.0;
  for (const auto& [mask, p] : free_dist[t])
    if ((mask >> i) & 1u) prob += p;
  return prob;
}

double GeneralExactReport::free_prob(int i, int t) const {
  double prob = 0.0;
  for (const auto& [mask, p] : free_dist[t])
    if ((mask >> i) & 1u) prob += p;
  return prob;
}

ExactReport exact_evaluate(const BernoulliInstance& inst, const ProposalRates& rates,
                           Sampler sampler) {
  if (inst.n > 4 || inst.T > 4)
    throw std::invalid_argument("exact_evaluate guarded to n <= 4, T <= 4");
  check_rates_feasible(inst, rates);
  const std::vector<double> w = dense_weights(inst);

  ExactReport report;
  report.n = inst.n;
  report.T = inst.T;
  report.match_prob.assign(static_cast<std::size_t>(inst.n) * inst.T, 0.0);
  report.free_dist.resize(inst.T + 1);
  report.emin1.resize(inst.T);

  std::map<std::uint32_t, double> dist;
  dist[(1u << inst.n) - 1] = 1.0;

  for (int t = 0; t < inst.T; ++t) {
    report.free_dist[t].assign(dist.begin(), dist.end());

    // E[min(1, R_{t,w})] at w = 0 and every distinct edge weight at t.
    std::vector<double> thresholds = {0.0};
    for (const Edge& e : inst.edges)
      if (e.t == t) thresholds.push_back(e.w);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    for (double threshold : thresholds) {
      double value = 0.0;
      for (const auto& [mask, prob] : dist) {
        double request = 0.0;
        for (int i = 0; i < inst.n; ++i)
          if (((mask >> i) & 1u) && w[static_cast<std::size_t>(i) * inst.T + t] >= threshold)
            request += rates.rv(i, t);
        value += prob * std::min(1.0, request);
      }
      report.emin1[t].emplace_back(threshold, value);
    }

    const double pt = inst.p[t];
    std::map<std::uint32_t, double> next;
    std::int64_t branches = 0;
    for (const auto& [mask, prob] : dist) {
      std::vector<char> free_flag(inst.n, 0);
      for (int i = 0; i < inst.n; ++i) free_flag[i] = (mask >> i) & 1u;
      const std::vector<int> order = sorted_free(free_flag, w, inst.n, inst.T, t);
      std::vector<double> v(order.size());
      for (std::size_t k = 0; k < order.size(); ++k) v[k] = clamp01(rates.rv(order[k], t));
      const SubsetDistribution sd =
          sampler == Sampler::Pivotal ? ps_exact_distribution(v) : independent_distribution(v);
      for (const auto& [sel, q] : sd.entries) {
        if (q <= 0.0) continue;
        if (sel == 0) {
          next[mask] += prob * q;
          ++branches;
          continue;
        }
        int top_pos = 0;
        while (!((sel >> top_pos) & 1u)) ++top_pos;
        const int top = order[top_pos];
        std::vector<int> others;
        for (int k = top_pos + 1; k < static_cast<int>(order.size()); ++k)
          if ((sel >> k) & 1u) others.push_back(order[k]);

        report.match_prob[static_cast<std::size_t>(top) * inst.T + t] += prob * q * pt;

        for (int arrived = 0; arrived < 2; ++arrived) {
          const double ap = arrived ? pt : 1.0 - pt;
          if (ap <= 0.0) continue;
          std::uint32_t base = arrived ? mask & ~(1u << top) : mask;
          const int d = static_cast<int>(others.size());
          for (std::uint32_t dmask = 0; dmask < (1u << d); ++dmask) {
            double dp = 1.0;
            std::uint32_t removed = 0;
            for (int k = 0; k < d; ++k) {
              if ((dmask >> k) & 1u) {
                dp *= pt;
                removed |= 1u << others[k];
              } else {
                dp *= 1.0 - pt;
              }
            }
            if (dp <= 0.0) continue;
            next[base & ~removed] += prob * q * ap * dp;
            if (++branches > 10000)
              throw std::invalid_argument("exact_evaluate branch budget exceeded");
          }
        }
      }
    }
    dist = std::move(next);
  }
  report.free_dist[inst.T].assign(dist.begin(), dist.end());
  for (int i = 0; i < inst.n; ++i)
    for (int t = 0; t < inst.T; ++t)
      report.expected_weight += report.match_prob[static_cast<std::size_t>(i) * inst.T + t] *
                                w[static_cast<std::size_t>(i) * inst.T + t];
  return report;
}

GeneralExactReport exact_evaluate_general(const GeneralInstance& inst, const GeneralRates& rates) {
  if (inst.n > 4 || inst.T > 4)
    throw std::invalid_argument("exact_evaluate_general guarded to n <= 4, T <= 4");
  GeneralExactReport report;
  report.n = inst.n;
  report.T = inst.T;
  report.match_prob.assign(static_cast<std::size_t>(inst.n) * inst.T, 0.0);
  report.free_dist.resize(inst.T + 1);

  std::map<std::uint32_t, double> dist;
  dist[(1u << inst.n) - 1] = 1.0;
  double expected = 0.0;

  for (int t = 0; t < inst.T; ++t) {
    report.free_dist[t].assign(dist.begin(), dist.end());
    std::map<std::uint32_t, double> next;
    for (const auto& [mask, prob] : dist) {
      double arrival_mass = 0.0;
      for (int j = 0; j < static_cast<int>(inst.types[t].size()); ++j) {
        const double pj = inst.types[t][j].p;
        arrival_mass += pj;
        if (pj <= 0.0) continue;
        std::vector<double> wj(inst.n, 0.0);
        for (const auto& [i, wv] : inst.types[t][j].edges) wj[i] = wv;
        std::vector<int> order;
        for (int i = 0; i < inst.n; ++i)
          if ((mask >> i) & 1u) order.push_back(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return wj[a] > wj[b]; });
        std::vector<double> v(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) v[k] = clamp01(rates.r[t][j][order[k]]);
        const SubsetDistribution sd = ps_exact_distribution(v);
        for (const auto& [sel, q] : sd.entries) {
          if (q <= 0.0) continue;
          if (sel == 0) {
            next[mask] += prob * pj * q;
            continue;
          }
          int top_pos = 0;
          while (!((sel >> top_pos) & 1u)) ++top_pos;
          const int top = order[top_pos];
          report.match_prob[static_cast<std::size_t>(top) * inst.T + t] += prob * pj * q;
          expected += prob * pj * q * wj[top];
          next[mask & ~(1u << top)] += prob * pj * q;
        }
      }
      const double residual = 1.0 - arrival_mass;
      if (residual > 0.0) next[mask] += prob * residual;
    }
    dist = std::move(next);
  }
  report.free_dist[inst.T].assign(dist.begin(), dist.end());
  report.expected_weight = expected;
  return report;
}

}  // namespace osm
