#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "osm/lp.hpp"

namespace osm {

// Outcome of one Lipschitz grid certification. Pass holds exactly when
// grid_min >= tau + L*h: the full-spacing slack L*h conservatively covers
// every off-grid point, which is within h/2 of a grid point in 1D and
// within l1-distance h of one on the 2D grids used here.
struct CertificateReport {
  std::string target;
  std::string domain;
  double h = 0.0;
  double L = 0.0;
  std::string L_source;
  double tau = 0.0;
  double margin = 0.0;  // L*h
  double grid_min = 0.0;
  std::vector<double> argmin;
  std::int64_t points = 0;
  bool pass = false;
  double wall_seconds = 0.0;
  std::string diagnostics;
};

CertificateReport certify_grid_1d(const std::function<double(double)>& f, double a, double b,
                                  double h, double L, double tau, const std::string& name = "f",
                                  int workers = 1);

// Certifies k_{eps,delta}(z) >= tau on [0,1]; optionally collects the (z, k)
// curve for CSV emission.
CertificateReport certify_k(double eps = 0.11, double delta = 0.18, double h = 1e-4,
                            double tau = 0.678,
                            std::vector<std::pair<double, double>>* curve = nullptr,
                            int workers = 1);

// Certifies 1 - g_{1/2}(x) (1-y/(1-x))^{(1-x)^2/y} - (a + b x + c y) >= L*h
// on the grid points of {0 <= x < 1, 0 < y <= (1-x)^2}.
CertificateReport certify_linear_lb(double h, const std::array<double, 3>& constants,
                                    int workers = 1);

// Certifies the two-branch vertex objective >= tau on x in [0, 0.5],
// y in [0.25, 0.5]; the y <= 0.25 region is covered by a closed-form branch
// asserted separately (recorded in the diagnostics).
CertificateReport certify_vertex_bound(double h = 1e-4, double tau = 0.685, int workers = 1);

// Structural inequalities of a solved LP at threshold theta, with slacks.
struct StructuralCheck {
  std::string name;
  double slack = 0.0;  // negative = violated
  bool pass = true;
};

struct StructuralReport {
  double theta = 0.0;
  std::vector<StructuralCheck> checks;
  double ratio_floor = 0.0;  // f_var(alpha) when alpha <= 1/2, else 0
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

StructuralReport check_structural(const LpSolution& sol, double theta);

// Randomized numeric checks of the scalar analysis inequalities: the power-sum
// lower bound, the product-vs-exponential bound, monotonicity of the scaled
// decay curve, and the logarithm envelope.
struct AnalysisReport {
  std::int64_t trials = 0;
  int violations = 0;
  std::vector<std::string> witnesses;
  bool ok() const { return violations == 0; }
};

AnalysisReport validate_analysis_inequalities(std::uint64_t seed, std::int64_t trials);

}  // namespace osm
