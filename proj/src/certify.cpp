#include "osm/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "osm/bounds.hpp"
#include "osm/rng.hpp"

namespace osm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct GridMin {
  double value = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
  bool finite = true;
};

// Minimum of f over indices [0, count); chunked across workers and reduced
// by (value, index), so the result is identical for any worker count.
GridMin grid_minimum(std::int64_t count, int workers,
                     const std::function<double(std::int64_t)>& f) {
  workers = std::max(1, workers);
  std::vector<GridMin> partial(workers);
  auto work = [&](int wkr, std::int64_t lo, std::int64_t hi) {
    GridMin local;
    for (std::int64_t k = lo; k < hi; ++k) {
      const double v = f(k);
      if (!std::isfinite(v)) {
        local.finite = false;
        local.value = v;
        local.index = k;
        break;
      }
      if (v < local.value) {
        local.value = v;
        local.index = k;
      }
    }
    partial[wkr] = local;
  };
  if (workers == 1) {
    work(0, 0, count);
  } else {
    std::vector<std::thread> threads;
    for (int wkr = 0; wkr < workers; ++wkr)
      threads.emplace_back(work, wkr, count * wkr / workers, count * (wkr + 1) / workers);
    for (auto& th : threads) th.join();
  }
  GridMin best;
  for (const GridMin& p : partial) {
    if (!p.finite) return p;
    if (p.index < 0) continue;
    if (p.value < best.value || (p.value == best.value && p.index < best.index)) best = p;
  }
  return best;
}

void finish_report(CertificateReport& report, const GridMin& gm, Clock::time_point start) {
  report.wall_seconds = seconds_since(start);
  if (!gm.finite) {
    report.pass = false;
    report.grid_min = gm.value;
    report.diagnostics = "non-finite value at grid index " + std::to_string(gm.index);
    return;
  }
  report.grid_min = gm.value;
  report.pass = gm.value >= report.tau + report.margin;
}

}  // namespace

CertificateReport certify_grid_1d(const std::function<double(double)>& f, double a, double b,
                                  double h, double L, double tau, const std::string& name,
                                  int workers) {
  if (!(h > 0.0) || L < 0.0) throw std::invalid_argument("certify_grid_1d requires h > 0, L >= 0");
  const auto start = Clock::now();
  CertificateReport report;
  report.target = name;
  report.domain = "[" + std::to_string(a) + ", " + std::to_string(b) + "]";
  report.h = h;
  report.L = L;
  report.tau = tau;
  report.margin = L * h;
  const std::int64_t count = static_cast<std::int64_t>(std::llround((b - a) / h)) + 1;
  report.points = count;
  const GridMin gm = grid_minimum(count, workers, [&](std::int64_t k) {
    const double z = std::min(a + static_cast<double>(k) * h, b);
    return f(z);
  });
  finish_report(report, gm, start);
  if (gm.finite && gm.index >= 0)
    report.argmin = {std::min(a + static_cast<double>(gm.index) * h, b)};
  return report;
}

CertificateReport certify_k(double eps, double delta, double h, double tau,
                            std::vector<std::pair<double, double>>* curve, int workers) {
  CertificateReport report = certify_grid_1d(
      [=](double z) { return k_func(eps, delta, z); }, 0.0, 1.0, h, 3.0, tau,
      "k-curve eps=" + std::to_string(eps) + " delta=" + std::to_string(delta), workers);
  report.L_source = "analytic slope bound of the scaled-decay curve (product rule)";
  if (curve) {
    curve->clear();
    const std::int64_t count = static_cast<std::int64_t>(std::llround(1.0 / h)) + 1;
    curve->reserve(count);
    for (std::int64_t k = 0; k < count; ++k) {
      const double z = std::min(static_cast<double>(k) * h, 1.0);
      curve->emplace_back(z, k_func(eps, delta, z));
    }
  }
  return report;
}

CertificateReport certify_linear_lb(double h, const std::array<double, 3>& constants,
                                    int workers) {
  if (!(h > 0.0)) throw std::invalid_argument("certify_linear_lb requires h > 0");
  const auto start = Clock::now();
  const double a = constants[0], b = constants[1], c = constants[2];
  CertificateReport report;
  report.target = "linear envelope (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                  std::to_string(c) + ")";
  report.domain = "{0 <= x < 1, 0 < y <= (1-x)^2}, grid points inside the domain";
  report.h = h;
  report.L = 3.0;
  report.L_source = "sum of the decay-curve slope bound and the linear part's coefficients";
  report.tau = 0.0;
  report.margin = report.L * h;

  // Row-major enumeration over x rows; y offsets start at h (the y -> 0 and
  // x -> 1 boundaries are covered by the analytic limit, not the grid).
  const std::int64_t x_count = static_cast<std::int64_t>(std::ceil(1.0 / h));
  std::vector<std::int64_t> row_len(x_count), row_start(x_count);
  std::int64_t total = 0;
  for (std::int64_t jx = 0; jx < x_count; ++jx) {
    const double x = static_cast<double>(jx) * h;
    const double cap = (1.0 - x) * (1.0 - x);
    row_start[jx] = total;
    row_len[jx] = static_cast<std::int64_t>(std::floor(cap / h + 1e-9));
    total += row_len[jx];
  }
  report.points = total;

  const GridMin gm = grid_minimum(total, workers, [&](std::int64_t k) {
    const auto row =
        std::upper_bound(row_start.begin(), row_start.end(), k) - row_start.begin() - 1;
    const double x = static_cast<double>(row) * h;
    const double y = static_cast<double>(k - row_start[row] + 1) * h;
    return conv_raw(0.5, x, y) - (a + b * x + c * y);
  });
  finish_report(report, gm, start);
  if (gm.finite && gm.index >= 0) {
    const auto row =
        std::upper_bound(row_start.begin(), row_start.end(), gm.index) - row_start.begin() - 1;
    report.argmin = {static_cast<double>(row) * h,
                     static_cast<double>(gm.index - row_start[row] + 1) * h};
  }
  return report;
}

CertificateReport certify_vertex_bound(double h, double tau, int workers) {
  if (!(h > 0.0)) throw std::invalid_argument("certify_vertex_bound requires h > 0");
  const auto start = Clock::now();
  CertificateReport report;
  report.target = "vertex objective";
  report.domain = "x in [0, 0.5], y in [0.25, 0.5]";
  report.h = h;
  report.L = 1.0;
  report.L_source = "slope bounds of both branches on the restricted domain";
  report.tau = tau;
  report.margin = report.L * h;

  const std::int64_t x_count = static_cast<std::int64_t>(std::llround(0.5 / h)) + 1;
  const std::int64_t y_count = static_cast<std::int64_t>(std::llround(0.25 / h)) + 1;
  report.points = x_count * y_count;
  const GridMin gm = grid_minimum(report.points, workers, [&](std::int64_t k) {
    const double x = std::min(static_cast<double>(k / y_count) * h, 0.5);
    const double y = std::min(0.25 + static_cast<double>(k % y_count) * h, 0.5);
    return vertex_B(x, y);
  });
  finish_report(report, gm, start);
  if (gm.finite && gm.index >= 0)
    report.argmin = {std::min(static_cast<double>(gm.index / y_count) * h, 0.5),
                     std::min(0.25 + static_cast<double>(gm.index % y_count) * h, 0.5)};

  // Closed form for y <= 0.25: the variance branch alone stays above 0.7.
  bool low_ok = true;
  double low_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 10; ++k) {
    const double y = 0.25 * static_cast<double>(k) / 10.0;
    const double value = 1.0 - 0.5 * std::sqrt(0.125 + y - y * y / 2.0);
    low_min = std::min(low_min, value);
    if (value < 0.7) low_ok = false;
  }
  report.diagnostics = "closed-form branch on y <= 0.25: min " + std::to_string(low_min) +
                       (low_ok ? " >= 0.7" : " < 0.7 (violated)");
  if (!low_ok) report.pass = false;
  report.wall_seconds = seconds_since(start);
  return report;
}

StructuralReport check_structural(const LpSolution& sol, double theta) {
  StructuralReport report;
  report.theta = theta;
  const LpStatistics st = lp_statistics(sol, theta);
  constexpr double tol = 1e-7;

  report.checks.push_back({"beta_gt >= S_gt^2 / 2",
                           st.beta_gt - st.S_gt * st.S_gt / 2.0, true});
  report.checks.push_back(
      {"beta_le >= S_le (1 - theta + S_le/2)",
       st.beta_le - st.S_le * (1.0 - theta + st.S_le / 2.0), true});

  double degree_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sol.n; ++i) {
    double cum = 0.0, survive = 1.0;
    for (int t = 0; t < sol.T; ++t) {
      cum += sol.xv(i, t);
      survive *= 1.0 - sol.p[t];
      degree_slack = std::min(degree_slack, (1.0 - survive) - cum);
    }
  }
  if (!std::isfinite(degree_slack)) degree_slack = 0.0;
  report.checks.push_back({"cumulative degree bound", degree_slack, true});

  const int fractional = fractional_rate_count(sol);
  report.checks.push_back({"near-binary rates (<= T fractional)",
                           static_cast<double>(sol.T - fractional),
                           !sol.basic || fractional <= sol.T});

  for (auto& check : report.checks)
    if (check.slack < -tol) check.pass = false;

  if (st.alpha <= 0.5 + tol) report.ratio_floor = f_var(std::max(0.0, st.alpha));
  return report;
}

AnalysisReport validate_analysis_inequalities(std::uint64_t seed, std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  AnalysisReport report;
  report.trials = trials;
  Rng rng(seed);
  constexpr double tol = 1e-9;
  auto record = [&](const std::string& witness) {
    ++report.violations;
    if (report.witnesses.size() < 16) report.witnesses.push_back(witness);
  };

  for (std::int64_t trial = 0; trial < trials; ++trial) {
    // Power-sum lower bound: sum z_i^k >= C^{k-1} / S^{k-2}.
    const int n = 1 + static_cast<int>(rng.below(8));
    std::vector<double> z(n);
    double S = 0.0, C = 0.0;
    for (double& v : z) {
      v = rng.uniform01();
      S += v;
      C += v * v;
    }
    for (int k = 2; k <= 4; ++k) {
      double lhs = 0.0;
      for (double v : z) lhs += std::pow(v, k);
      const double rhs = S > 0.0 ? std::pow(C, k - 1) / std::pow(S, k - 2) : 0.0;
      if (lhs < rhs - tol)
        record("power-sum violation at k=" + std::to_string(k) + ", n=" + std::to_string(n));
    }

    // Product bound: prod (1 - z_i) <= exp((S^2/C) ln(1 - C/S)).
    if (S > 0.0 && C > 0.0) {
      double prod = 1.0;
      for (double v : z) prod *= 1.0 - v;
      const double ratio = 1.0 - C / S;
      const double rhs = ratio <= 0.0 ? 0.0 : std::exp((S * S / C) * std::log(ratio));
      if (prod > rhs + tol) record("product bound violation at n=" + std::to_string(n));
    }

    // Monotonicity of x -> (1 - g_theta(Cx) A^x) / (Bx) for A in [0,1].
    {
      const double A = rng.uniform01();
      const double B = rng.uniform(0.1, 3.0);
      const double Cc = rng.uniform(0.0, 3.0);
      const double theta = rng.uniform(0.05, 0.95);
      double prev = std::numeric_limits<double>::infinity();
      for (int step = 1; step <= 60; ++step) {
        const double x = 0.05 * static_cast<double>(step);
        const double value = (1.0 - g_theta(theta, Cc * x) * std::pow(A, x)) / (B * x);
        if (value > prev + tol) {
          record("decay-curve monotonicity violation at x=" + std::to_string(x));
          break;
        }
        prev = value;
      }
    }

    // Logarithm envelope: x(1-x) <= (x-1) log(1-x) <= x on [0,1).
    {
      const double x = rng.uniform01() * (1.0 - 1e-9);
      const double mid = (x - 1.0) * std::log1p(-x);
      if (mid < x * (1.0 - x) - tol || mid > x + tol)
        record("logarithm envelope violation at x=" + std::to_string(x));
    }
  }
  return report;
}

}  // namespace osm
