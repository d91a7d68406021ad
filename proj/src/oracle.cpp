#include "osm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "osm/rng.hpp"

namespace osm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost perfect assignment on a square 1-based cost matrix, by shortest
// augmenting paths with potentials.
double assignment_min_cost(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  const int m = n;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double cost = 0.0;
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) cost += a[p[j]][j];
  return cost;
}

struct BernoulliDp {
  const BernoulliInstance& inst;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<std::unordered_map<std::uint32_t, double>> memo;
  Policy* policy = nullptr;
  const Policy* fixed = nullptr;  // when set, follow this policy instead of optimizing

  explicit BernoulliDp(const BernoulliInstance& instance)
      : inst(instance), adj(instance.adjacency_by_time()), memo(instance.T + 1) {}

  double value(std::uint32_t mask, int t) {
    if (t == inst.T) return 0.0;
    auto it = memo[t].find(mask);
    if (it != memo[t].end()) return it->second;
    const double skip = value(mask, t + 1);
    double on_arrival = skip;
    int action = -1;
    if (fixed) {
      auto pit = fixed->find({mask, t, -1});
      if (pit != fixed->end() && pit->second >= 0 && ((mask >> pit->second) & 1u)) {
        action = pit->second;
        double w = 0.0;
        for (const auto& [i, wv] : adj[t])
          if (i == action) w = wv;
        on_arrival = w + value(mask & ~(1u << action), t + 1);
      }
    } else {
      for (const auto& [i, w] : adj[t]) {
        if (!((mask >> i) & 1u)) continue;
        const double cand = w + value(mask & ~(1u << i), t + 1);
        if (cand > on_arrival + 1e-15) {
          on_arrival = cand;
          action = i;
        }
      }
      if (policy) (*policy)[{mask, t, -1}] = action;
    }
    const double result = (1.0 - inst.p[t]) * skip + inst.p[t] * on_arrival;
    memo[t][mask] = result;
    return result;
  }
};

struct GeneralDp {
  const GeneralInstance& inst;
  std::vector<std::unordered_map<std::uint32_t, double>> memo;
  Policy* policy = nullptr;
  const Policy* fixed = nullptr;

  explicit GeneralDp(const GeneralInstance& instance)
      : inst(instance), memo(instance.T + 1) {}

  double value(std::uint32_t mask, int t) {
    if (t == inst.T) return 0.0;
    auto it = memo[t].find(mask);
    if (it != memo[t].end()) return it->second;
    const double skip = value(mask, t + 1);
    double total = 0.0;
    double arrival_mass = 0.0;
    for (int j = 0; j < static_cast<int>(inst.types[t].size()); ++j) {
      const GeneralType& ty = inst.types[t][j];
      arrival_mass += ty.p;
      double best = skip;
      int action = -1;
      if (fixed) {
        auto pit = fixed->find({mask, t, j});
        if (pit != fixed->end() && pit->second >= 0 && ((mask >> pit->second) & 1u)) {
          action = pit->second;
          double w = 0.0;
          for (const auto& [i, wv] : ty.edges)
            if (i == action) w = wv;
          best = w + value(mask & ~(1u << action), t + 1);
        }
      } else {
        for (const auto& [i, w] : ty.edges) {
          if (!((mask >> i) & 1u)) continue;
          const double cand = w + value(mask & ~(1u << i), t + 1);
          if (cand > best + 1e-15) {
            best = cand;
            action = i;
          }
        }
        if (policy) (*policy)[{mask, t, j}] = action;
      }
      total += ty.p * best;
    }
    total += (1.0 - arrival_mass) * skip;
    memo[t][mask] = total;
    return total;
  }
};

}  // namespace

MdpValue opt_online(const BernoulliInstance& inst) {
  if (inst.n > 20) throw std::invalid_argument("opt_online guarded to n <= 20");
  auto problems = validate(inst);
  if (!problems.empty()) throw std::invalid_argument("invalid instance: " + problems.front());
  MdpValue out;
  BernoulliDp dp(inst);
  dp.policy = &out.policy;
  out.value = dp.value((1u << inst.n) - 1, 0);
  return out;
}

MdpValue opt_online_general(const GeneralInstance& inst) {
  if (inst.n > 20) throw std::invalid_argument("opt_online_general guarded to n <= 20");
  auto problems = validate(inst);
  if (!problems.empty()) throw std::invalid_argument("invalid instance: " + problems.front());
  MdpValue out;
  GeneralDp dp(inst);
  dp.policy = &out.policy;
  out.value = dp.value((1u << inst.n) - 1, 0);
  return out;
}

double evaluate_policy(const BernoulliInstance& inst, const Policy& policy) {
  BernoulliDp dp(inst);
  dp.fixed = &policy;
  return dp.value((1u << inst.n) - 1, 0);
}

double evaluate_policy_general(const GeneralInstance& inst, const Policy& policy) {
  GeneralDp dp(inst);
  dp.fixed = &policy;
  return dp.value((1u << inst.n) - 1, 0);
}

namespace {

int satisfied_clauses(const Stochastic3SatFormula& formula, std::uint32_t assignment) {
  int count = 0;
  for (const auto& clause : formula.clauses) {
    for (int lit : clause) {
      const int v = std::abs(lit) - 1;
      const bool value = (assignment >> v) & 1u;
      if ((lit > 0) == value) {
        ++count;
        break;
      }
    }
  }
  return count;
}

double sat_rec(const Stochastic3SatFormula& formula, int t, std::uint32_t assignment) {
  if (t == formula.num_vars)
    return static_cast<double>(satisfied_clauses(formula, assignment));
  const double set_true = sat_rec(formula, t + 1, assignment | (1u << t));
  const double set_false = sat_rec(formula, t + 1, assignment);
  if ((t + 1) % 2 == 1) return std::max(set_true, set_false);  // algorithm's move
  return 0.5 * (set_true + set_false);                         // nature's move
}

}  // namespace

double opt_stochastic_3sat(const Stochastic3SatFormula& formula) {
  if (formula.num_vars > 16) throw std::invalid_argument("opt_stochastic_3sat guarded to n <= 16");
  auto problems = validate(formula);
  if (!problems.empty()) throw std::invalid_argument("invalid formula: " + problems.front());
  return sat_rec(formula, 0, 0);
}

SandwichReport hardness_sandwich(const Stochastic3SatFormula& formula, double p, double tol) {
  SandwichReport report;
  report.opt_sat = opt_stochastic_3sat(formula);
  const BernoulliInstance inst = build_from_3sat(formula, p);
  report.dp_value = opt_online(inst).value;
  const double n = formula.num_vars;
  report.c_k = static_cast<double>(formula.k) * formula.k * std::pow(2.0, formula.k);
  report.upper = 3.0 * n / 4.0 + p * report.opt_sat;
  report.lower = report.upper - n * report.c_k * p * p;
  report.inside = report.dp_value >= report.lower - tol && report.dp_value <= report.upper + tol;
  return report;
}

double max_weight_bipartite_matching(const std::vector<std::vector<double>>& w) {
  const int L = static_cast<int>(w.size());
  const int R = L > 0 ? static_cast<int>(w[0].size()) : 0;
  if (L == 0 || R == 0) return 0.0;
  const int N = std::max(L, R);
  std::vector<std::vector<double>> a(N + 1, std::vector<double>(N + 1, 0.0));
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < R; ++j) a[i + 1][j + 1] = -w[i][j];
  return -assignment_min_cost(a);
}

namespace {

double realized_matching_value(const BernoulliInstance& inst,
                               const std::vector<std::vector<std::pair<int, double>>>& adj,
                               const std::vector<int>& arrivals) {
  if (arrivals.empty()) return 0.0;
  std::vector<std::vector<double>> w(arrivals.size(), std::vector<double>(inst.n, 0.0));
  for (std::size_t row = 0; row < arrivals.size(); ++row)
    for (const auto& [i, wv] : adj[arrivals[row]]) w[row][i] = wv;
  return max_weight_bipartite_matching(w);
}

}  // namespace

McEstimate prophet_value_mc(const BernoulliInstance& inst, std::int64_t reps, std::uint64_t seed,
                            int workers) {
  if (reps < 1) throw std::invalid_argument("replications must be >= 1");
  workers = std::max(1, workers);
  const auto adj = inst.adjacency_by_time();
  std::vector<double> values(reps, 0.0);
  auto work = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      Rng rng = Rng::for_replication(seed, static_cast<std::uint64_t>(rep));
      std::vector<int> arrivals;
      for (int t = 0; t < inst.T; ++t)
        if (rng.bernoulli(inst.p[t])) arrivals.push_back(t);
      values[rep] = realized_matching_value(inst, adj, arrivals);
    }
  };
  if (workers == 1) {
    work(0, reps);
  } else {
    std::vector<std::thread> threads;
    for (int wkr = 0; wkr < workers; ++wkr)
      threads.emplace_back(work, reps * wkr / workers, reps * (wkr + 1) / workers);
    for (auto& th : threads) th.join();
  }
  McEstimate est;
  double total = 0.0;  // reduce in replication order
  for (double v : values) total += v;
  est.mean = total / static_cast<double>(reps);
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  est.std_error =
      reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps)) : 0.0;
  return est;
}

double prophet_value_exact(const BernoulliInstance& inst) {
  if (inst.T > 20) throw std::invalid_argument("prophet_value_exact guarded to T <= 20");
  const auto adj = inst.adjacency_by_time();
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << inst.T); ++mask) {
    double prob = 1.0;
    std::vector<int> arrivals;
    for (int t = 0; t < inst.T; ++t) {
      if ((mask >> t) & 1u) {
        prob *= inst.p[t];
        arrivals.push_back(t);
      } else {
        prob *= 1.0 - inst.p[t];
      }
    }
    if (prob <= 0.0) continue;
    total += prob * realized_matching_value(inst, adj, arrivals);
  }
  return total;
}

}  // namespace osm
