#include "osm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace osm {

namespace {

void pivot(std::vector<std::vector<double>>& tab, int row, int col) {
  const int rows = static_cast<int>(tab.size());
  const int cols = static_cast<int>(tab[0].size());
  const double piv = tab[row][col];
  for (int j = 0; j < cols; ++j) tab[row][j] /= piv;
  for (int r = 0; r < rows; ++r) {
    if (r == row) continue;
    const double factor = tab[r][col];
    if (factor == 0.0) continue;
    for (int j = 0; j < cols; ++j) tab[r][j] -= factor * tab[row][j];
    tab[r][col] = 0.0;
  }
}

}  // namespace

SimplexResult DenseSimplexBackend::maximize(const DenseLp& lp) const {
  const int n = static_cast<int>(lp.c.size());
  const int m = static_cast<int>(lp.A.size());
  SimplexResult res;
  res.x.assign(n, 0.0);
  if (n == 0) {
    res.optimal = true;
    return res;
  }
  for (double bi : lp.b)
    if (bi < -tol_) throw std::invalid_argument("simplex requires b >= 0");

  // Tableau [A | I | b] with the objective row appended; slacks start basic.
  std::vector<std::vector<double>> tab(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) tab[r][j] = lp.A[r][j];
    tab[r][n + r] = 1.0;
    tab[r][n + m] = std::max(lp.b[r], 0.0);
  }
  for (int j = 0; j < n; ++j) tab[m][j] = -lp.c[j];

  std::vector<int> basis(m);
  std::iota(basis.begin(), basis.end(), n);

  const int max_iters = max_iterations_ > 0 ? max_iterations_ : 2000 + 200 * (n + m);
  for (res.iterations = 0;; ++res.iterations) {
    if (res.iterations > max_iters) {
      res.message = "iteration limit " + std::to_string(max_iters) + " reached after " +
                    std::to_string(res.iterations) + " pivots";
      return res;
    }
    int enter = -1;  // Bland: lowest improving index
    for (int j = 0; j < n + m; ++j) {
      if (tab[m][j] < -tol_) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < m; ++r) {
      if (tab[r][enter] > tol_) {
        const double ratio = tab[r][n + m] / tab[r][enter];
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) {
      res.message = "unbounded direction at column " + std::to_string(enter);
      return res;
    }
    pivot(tab, leave, enter);
    basis[leave] = enter;
  }

  for (int r = 0; r < m; ++r)
    if (basis[r] < n) res.x[basis[r]] = std::max(tab[r][n + m], 0.0);
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) res.objective += lp.c[j] * res.x[j];
  res.optimal = true;
  return res;
}

void derive_rates(int n, int T, const std::vector<double>& p, const std::vector<double>& x,
                  std::vector<double>& y, std::vector<double>& r) {
  y.assign(static_cast<std::size_t>(n) * T, 0.0);
  r.assign(static_cast<std::size_t>(n) * T, 0.0);
  for (int i = 0; i < n; ++i) {
    double cum = 0.0;
    for (int t = 0; t < T; ++t) {
      const std::size_t k = static_cast<std::size_t>(i) * T + t;
      y[k] = cum;
      if (x[k] > 0.0) {
        const double denom = p[t] * (1.0 - cum);
        if (denom <= 0.0)
          throw std::invalid_argument("infeasible mass at (" + std::to_string(i + 1) + "," +
                                      std::to_string(t + 1) + "): positive x with zero capacity");
        r[k] = x[k] / denom;
      }
      cum += x[k];
    }
  }
}

LpSolution solve_lp(const BernoulliInstance& inst, const LpBackend* backend) {
  auto problems = validate(inst);
  if (!problems.empty()) throw std::invalid_argument("invalid instance: " + problems.front());

  const int T = inst.T;
  const int E = static_cast<int>(inst.edges.size());
  DenseLp lp;
  lp.c.resize(E);
  for (int e = 0; e < E; ++e) lp.c[e] = inst.edges[e].w;

  // Row block 1: per-time mass, sum_i x_{i,t} <= p_t.
  // Row block 2, linearized: x_{i,t} + p_t * sum_{t'<t} x_{i,t'} <= p_t.
  lp.A.assign(T + E, std::vector<double>(E, 0.0));
  lp.b.assign(T + E, 0.0);
  for (int t = 0; t < T; ++t) lp.b[t] = inst.p[t];
  for (int e = 0; e < E; ++e) {
    lp.A[inst.edges[e].t][e] = 1.0;
    const int row = T + e;
    lp.A[row][e] += 1.0;
    for (int e2 = 0; e2 < E; ++e2)
      if (inst.edges[e2].i == inst.edges[e].i && inst.edges[e2].t < inst.edges[e].t)
        lp.A[row][e2] += inst.p[inst.edges[e].t];
    lp.b[row] = inst.p[inst.edges[e].t];
  }

  DenseSimplexBackend default_backend;
  const LpBackend& solver = backend ? *backend : static_cast<const LpBackend&>(default_backend);
  SimplexResult res = solver.maximize(lp);
  if (!res.optimal) throw std::runtime_error("lp solver failed: " + res.message);

  LpSolution sol;
  sol.n = inst.n;
  sol.T = T;
  sol.p = inst.p;
  sol.x.assign(static_cast<std::size_t>(inst.n) * T, 0.0);
  for (int e = 0; e < E; ++e)
    sol.x[static_cast<std::size_t>(inst.edges[e].i) * T + inst.edges[e].t] = res.x[e];
  derive_rates(sol.n, sol.T, sol.p, sol.x, sol.y, sol.r);
  sol.objective = res.objective;
  sol.basic = true;
  return sol;
}

GeneralLpSolution solve_lp_general(const GeneralInstance& inst, const LpBackend* backend) {
  auto problems = validate(inst);
  if (!problems.empty()) throw std::invalid_argument("invalid instance: " + problems.front());

  struct Var {
    int t, j, i;
    double w, p;
  };
  std::vector<Var> vars;
  for (int t = 0; t < inst.T; ++t)
    for (int j = 0; j < static_cast<int>(inst.types[t].size()); ++j)
      for (const auto& [i, w] : inst.types[t][j].edges)
        vars.push_back({t, j, i, w, inst.types[t][j].p});

  const int E = static_cast<int>(vars.size());
  DenseLp lp;
  lp.c.resize(E);
  for (int e = 0; e < E; ++e) lp.c[e] = vars[e].w;

  // Row block 1: per-(j,t) mass. Row block 2: linearized availability,
  // x_{i,j,t} + p_{j,t} * sum_{t'<t, j'} x_{i,j',t'} <= p_{j,t}.
  std::vector<std::pair<int, int>> type_rows;  // (t, j)
  for (int t = 0; t < inst.T; ++t)
    for (int j = 0; j < static_cast<int>(inst.types[t].size()); ++j) type_rows.emplace_back(t, j);
  const int TR = static_cast<int>(type_rows.size());
  lp.A.assign(TR + E, std::vector<double>(E, 0.0));
  lp.b.assign(TR + E, 0.0);
  for (int row = 0; row < TR; ++row) {
    lp.b[row] = inst.types[type_rows[row].first][type_rows[row].second].p;
    for (int e = 0; e < E; ++e)
      if (vars[e].t == type_rows[row].first && vars[e].j == type_rows[row].second)
        lp.A[row][e] = 1.0;
  }
  for (int e = 0; e < E; ++e) {
    const int row = TR + e;
    lp.A[row][e] += 1.0;
    for (int e2 = 0; e2 < E; ++e2)
      if (vars[e2].i == vars[e].i && vars[e2].t < vars[e].t) lp.A[row][e2] += vars[e].p;
    lp.b[row] = vars[e].p;
  }

  DenseSimplexBackend default_backend;
  const LpBackend& solver = backend ? *backend : static_cast<const LpBackend&>(default_backend);
  SimplexResult res = solver.maximize(lp);
  if (!res.optimal) throw std::runtime_error("lp solver failed: " + res.message);

  GeneralLpSolution sol;
  sol.n = inst.n;
  sol.T = inst.T;
  sol.type_p.resize(inst.T);
  sol.x.resize(inst.T);
  sol.r.resize(inst.T);
  for (int t = 0; t < inst.T; ++t) {
    const int J = static_cast<int>(inst.types[t].size());
    sol.type_p[t].resize(J);
    sol.x[t].assign(J, std::vector<double>(inst.n, 0.0));
    sol.r[t].assign(J, std::vector<double>(inst.n, 0.0));
    for (int j = 0; j < J; ++j) sol.type_p[t][j] = inst.types[t][j].p;
  }
  for (int e = 0; e < E; ++e) sol.x[vars[e].t][vars[e].j][vars[e].i] = res.x[e];

  sol.y.assign(static_cast<std::size_t>(inst.n) * inst.T, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    double cum = 0.0;
    for (int t = 0; t < inst.T; ++t) {
      sol.y[static_cast<std::size_t>(i) * inst.T + t] = cum;
      for (int j = 0; j < static_cast<int>(sol.x[t].size()); ++j) cum += sol.x[t][j][i];
    }
  }
  for (int t = 0; t < inst.T; ++t) {
    for (int j = 0; j < static_cast<int>(sol.x[t].size()); ++j) {
      for (int i = 0; i < inst.n; ++i) {
        const double xv = sol.x[t][j][i];
        if (xv > 0.0) {
          const double denom =
              sol.type_p[t][j] * (1.0 - sol.y[static_cast<std::size_t>(i) * inst.T + t]);
          if (denom <= 0.0) throw std::runtime_error("degenerate rate in general solution");
          sol.r[t][j][i] = xv / denom;
        }
      }
    }
  }
  sol.objective = res.objective;
  sol.basic = true;
  return sol;
}

FeasibilityReport check_feasibility(const std::vector<double>& x, const BernoulliInstance& inst,
                                    double tol) {
  if (x.size() != static_cast<std::size_t>(inst.n) * inst.T)
    throw std::invalid_argument("x has wrong dimensions");
  FeasibilityReport report;
  for (int t = 0; t < inst.T; ++t) {
    double mass = 0.0;
    for (int i = 0; i < inst.n; ++i) mass += x[static_cast<std::size_t>(i) * inst.T + t];
    const double slack = inst.p[t] - mass;
    if (slack < -tol)
      report.violations.push_back({"time-mass t=" + std::to_string(t + 1), slack});
  }
  for (int i = 0; i < inst.n; ++i) {
    double cum = 0.0;
    double survive = 1.0;  // prod_{t'<t} (1 - p_{t'})
    for (int t = 0; t < inst.T; ++t) {
      const double xv = x[static_cast<std::size_t>(i) * inst.T + t];
      if (xv < -tol)
        report.violations.push_back(
            {"nonnegativity (" + std::to_string(i + 1) + "," + std::to_string(t + 1) + ")", xv});
      const double slack = inst.p[t] * (1.0 - cum) - xv;
      if (slack < -tol)
        report.violations.push_back(
            {"availability (" + std::to_string(i + 1) + "," + std::to_string(t + 1) + ")", slack});
      cum += xv;
      const double degree_slack = (1.0 - survive * (1.0 - inst.p[t])) - cum;
      if (degree_slack < -tol)
        report.violations.push_back(
            {"cumulative-degree (" + std::to_string(i + 1) + "," + std::to_string(t + 1) + ")",
             degree_slack});
      survive *= 1.0 - inst.p[t];
    }
  }
  return report;
}

LpStatistics lp_statistics(const LpSolution& sol, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0,1]");
  LpStatistics st;
  st.theta = theta;
  for (std::size_t k = 0; k < sol.x.size(); ++k) st.total_mass += sol.x[k];
  if (st.total_mass <= 0.0) {
    st.zero_mass = true;
    return st;
  }
  double alpha = 0.0, beta_le = 0.0, beta_gt = 0.0, s_le = 0.0, s_gt = 0.0;
  for (std::size_t k = 0; k < sol.x.size(); ++k) {
    const double xv = sol.x[k], yv = sol.y[k], rv = sol.r[k];
    if (xv == 0.0) continue;
    alpha += rv * yv * xv;
    if (yv <= theta) {
      beta_le += rv * (1.0 - yv) * xv;
      s_le += rv * xv;
    } else {
      beta_gt += rv * (1.0 - yv) * xv;
      s_gt += rv * xv;
    }
  }
  st.alpha = alpha / st.total_mass;
  st.beta_le = beta_le / st.total_mass;
  st.beta_gt = beta_gt / st.total_mass;
  st.S_le = s_le / st.total_mass;
  st.S_gt = s_gt / st.total_mass;
  return st;
}

int fractional_rate_count(const LpSolution& sol, double tol) {
  int count = 0;
  for (double rv : sol.r)
    if (std::fabs(rv) > tol && std::fabs(rv - 1.0) > tol) ++count;
  return count;
}

}  // namespace osm
