#pragma once

#include <memory>
#include <string>
#include <vector>

#include "osm/instance.hpp"

namespace osm {

// Dense LP in the form  max c.x  s.t.  A x <= b,  x >= 0  (b >= 0).
struct DenseLp {
  std::vector<double> c;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
};

struct SimplexResult {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  bool optimal = false;
  std::string message;
};

// Pluggable solver seam; the default backend is the dense tableau simplex
// below (Bland's rule, anti-cycling, feasibility/optimality tol 1e-9).
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual SimplexResult maximize(const DenseLp& lp) const = 0;
};

class DenseSimplexBackend : public LpBackend {
 public:
  explicit DenseSimplexBackend(double tol = 1e-9, int max_iterations = 0)
      : tol_(tol), max_iterations_(max_iterations) {}
  SimplexResult maximize(const DenseLp& lp) const override;

 private:
  double tol_;
  int max_iterations_;  // 0 = automatic
};

// Fractional matching x with the derived cumulative masses y and proposal
// rates r (r = x / (p_t (1-y)), with r := 0 whenever x = 0).
struct LpSolution {
  int n = 0, T = 0;
  std::vector<double> p;        // arrival probabilities, copied from the instance
  std::vector<double> x, y, r;  // dense n*T, row-major (i*T + t)
  double objective = 0.0;
  bool basic = true;

  double xv(int i, int t) const { return x[static_cast<std::size_t>(i) * T + t]; }
  double yv(int i, int t) const { return y[static_cast<std::size_t>(i) * T + t]; }
  double rv(int i, int t) const { return r[static_cast<std::size_t>(i) * T + t]; }
};

struct GeneralLpSolution {
  int n = 0, T = 0;
  std::vector<std::vector<double>> type_p;         // type_p[t][j]
  std::vector<std::vector<std::vector<double>>> x; // x[t][j][i], dense over i
  std::vector<double> y;                           // y[i*T + t] = sum_{t'<t, j} x
  std::vector<std::vector<std::vector<double>>> r;
  double objective = 0.0;
  bool basic = true;
};

LpSolution solve_lp(const BernoulliInstance& inst, const LpBackend* backend = nullptr);
GeneralLpSolution solve_lp_general(const GeneralInstance& inst, const LpBackend* backend = nullptr);

struct FeasibilityViolation {
  std::string constraint;
  double slack = 0.0;  // negative = violated amount
};

struct FeasibilityReport {
  std::vector<FeasibilityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the per-time mass constraint, the conditional-availability
// constraint, and the implied cumulative degree bound on a dense x.
FeasibilityReport check_feasibility(const std::vector<double>& x_dense,
                                    const BernoulliInstance& inst, double tol);

// Weighted averages of r*y, r*(1-y) and r (weights x), split at threshold
// theta on y; the raw material of the structural inequalities.
struct LpStatistics {
  double theta = 0.0;
  double alpha = 0.0;
  double beta_le = 0.0, beta_gt = 0.0;
  double S_le = 0.0, S_gt = 0.0;
  double total_mass = 0.0;
  bool zero_mass = false;
};

LpStatistics lp_statistics(const LpSolution& sol, double theta);

// Entries of r farther than tol from both 0 and 1.
int fractional_rate_count(const LpSolution& sol, double tol = 1e-7);

// Builds y (cumulative mass before t) and r from a dense x; shared by the
// solver, the rescaler and callers feeding hand-built vectors.
void derive_rates(int n, int T, const std::vector<double>& p, const std::vector<double>& x,
                  std::vector<double>& y, std::vector<double>& r);

}  // namespace osm
