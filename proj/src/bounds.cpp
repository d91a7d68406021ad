#include "osm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace osm {

namespace {

constexpr double kIntSnap = 1e-12;

void check_system(const WeightedBernoulliSystem& sys) {
  auto problems = validate(sys);
  if (!problems.empty()) throw std::invalid_argument("invalid system: " + problems.front());
}

double min1_independent(const std::vector<double>& c, const std::vector<double>& q, int i,
                        double prob, double sum) {
  if (prob <= 0.0) return 0.0;
  if (sum >= 1.0) return prob;  // every completion already contributes 1
  if (i == static_cast<int>(c.size())) return prob * sum;
  return min1_independent(c, q, i + 1, prob * q[i], sum + c[i]) +
         min1_independent(c, q, i + 1, prob * (1.0 - q[i]), sum);
}

}  // namespace

std::vector<std::string> validate(const WeightedBernoulliSystem& sys) {
  std::vector<std::string> out;
  if (sys.c.size() != sys.q.size()) out.push_back("coefficient/marginal length mismatch");
  for (double v : sys.c)
    if (!(v >= 0.0 && v <= 1.0)) out.push_back("coefficient out of [0,1]");
  for (double v : sys.q)
    if (!(v >= 0.0 && v <= 1.0)) out.push_back("marginal out of [0,1]");
  if (sys.dist) {
    if (sys.dist->n != sys.size()) {
      out.push_back("distribution dimension mismatch");
    } else {
      double total = 0.0;
      for (const auto& [mask, p] : sys.dist->entries) {
        if (p < 0.0) out.push_back("negative probability in distribution");
        total += p;
      }
      if (std::fabs(total - 1.0) > 1e-12) out.push_back("distribution does not sum to 1");
      const std::vector<double> m = sys.dist->marginals();
      for (int i = 0; i < sys.size(); ++i)
        if (std::fabs(m[i] - sys.q[i]) > 1e-12)
          out.push_back("distribution marginal differs from q at index " + std::to_string(i + 1));
    }
  }
  return out;
}

double g_theta(double theta, double x) {
  if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("g_theta requires theta in [0,1)");
  if (x < 0.0) throw std::invalid_argument("g_theta requires x >= 0");
  const double z = x / (1.0 - theta);
  const double k = std::floor(z + kIntSnap);
  double frac = z - k;
  if (frac < 0.0) frac = 0.0;  // snapped to an integer multiple
  return (1.0 - (1.0 - theta) * frac) * std::pow(theta, k);
}

double exact_min1(const WeightedBernoulliSystem& sys) {
  check_system(sys);
  if (sys.dist) {
    double total = 0.0;
    for (const auto& [mask, p] : sys.dist->entries) {
      double sum = 0.0;
      for (int i = 0; i < sys.size(); ++i)
        if ((mask >> i) & 1u) sum += sys.c[i];
      total += p * std::min(1.0, sum);
    }
    return total;
  }
  if (sys.size() > 20) throw std::invalid_argument("exact_min1 independent mode guarded to n <= 20");
  return min1_independent(sys.c, sys.q, 0, 1.0, 0.0);
}

double mean_of(const WeightedBernoulliSystem& sys) {
  double mean = 0.0;
  for (int i = 0; i < sys.size(); ++i) mean += sys.c[i] * sys.q[i];
  return mean;
}

double variance_of(const WeightedBernoulliSystem& sys) {
  if (sys.dist) {
    double ex = 0.0, ex2 = 0.0;
    for (const auto& [mask, p] : sys.dist->entries) {
      double sum = 0.0;
      for (int i = 0; i < sys.size(); ++i)
        if ((mask >> i) & 1u) sum += sys.c[i];
      ex += p * sum;
      ex2 += p * sum * sum;
    }
    return std::max(0.0, ex2 - ex * ex);
  }
  double var = 0.0;
  for (int i = 0; i < sys.size(); ++i) var += sys.c[i] * sys.c[i] * sys.q[i] * (1.0 - sys.q[i]);
  return var;
}

double independent_coin_bound(const WeightedBernoulliSystem& sys) {
  check_system(sys);
  double prod = 1.0;
  for (int i = 0; i < sys.size(); ++i) prod *= 1.0 - sys.c[i] * sys.q[i];
  return 1.0 - prod;
}

double bucketing_bound(const WeightedBernoulliSystem& sys,
                       const std::vector<std::vector<int>>& buckets) {
  check_system(sys);
  std::vector<char> seen(sys.size(), 0);
  double prod = 1.0;
  for (const auto& bucket : buckets) {
    double weight = 0.0, mass = 0.0;
    for (int i : bucket) {
      if (i < 0 || i >= sys.size() || seen[i])
        throw std::invalid_argument("buckets must partition the index set");
      seen[i] = 1;
      weight += sys.c[i];
      mass += sys.c[i] * sys.q[i];
    }
    if (weight > 1.0 + 1e-12)
      throw std::invalid_argument("bucket coefficient sum exceeds 1");
    prod *= 1.0 - mass;
  }
  for (char s : seen)
    if (!s) throw std::invalid_argument("buckets must cover every index");
  return 1.0 - prod;
}

double fractional_bucketing_bound(const WeightedBernoulliSystem& sys, double theta) {
  check_system(sys);
  if (!(theta >= 0.0 && theta < 1.0))
    throw std::invalid_argument("fractional bucketing requires theta in [0,1)");
  double mu = 0.0, prod = 1.0;
  for (int i = 0; i < sys.size(); ++i) {
    if (sys.q[i] >= 1.0 - theta)
      mu += sys.c[i] * sys.q[i];
    else
      prod *= 1.0 - sys.c[i] * sys.q[i];
  }
  return 1.0 - g_theta(theta, mu) * prod;
}

double variance_bound(double mean, double var) {
  if (!(mean >= 0.0 && mean <= 1.0 + 1e-12))
    throw std::invalid_argument("variance bound requires mean in [0,1]");
  if (var < 0.0) throw std::invalid_argument("variance must be nonnegative");
  mean = std::min(mean, 1.0);
  return std::max(0.0, mean - 0.5 * std::sqrt(var * mean));
}

MergeResult merge_pair(const WeightedBernoulliSystem& sys, int j, int k, MergeDirection dir) {
  check_system(sys);
  if (j < 0 || k < 0 || j >= sys.size() || k >= sys.size() || j == k)
    throw std::invalid_argument("merge_pair requires two distinct indices");
  const double cj = sys.c[j], ck = sys.c[k];
  if (!(cj > 0.0 && cj < 1.0 && ck > 0.0 && ck < 1.0))
    throw std::invalid_argument("merge_pair requires fractional coefficients");
  const double qj = sys.q[j], qk = sys.q[k];
  if (qj <= 0.0 && qk <= 0.0)
    throw std::invalid_argument("merge_pair undefined for a zero-marginal pair");

  MergeResult out;
  out.c = sys.c;
  double rho;
  if (dir == MergeDirection::Plus) {
    rho = std::min(qk > 0.0 ? (1.0 - cj) / qk : std::numeric_limits<double>::infinity(),
                   qj > 0.0 ? ck / qj : std::numeric_limits<double>::infinity());
    out.c[j] = std::min(1.0, cj + rho * qk);
    out.c[k] = std::max(0.0, ck - rho * qj);
  } else {
    rho = std::min(qk > 0.0 ? cj / qk : std::numeric_limits<double>::infinity(),
                   qj > 0.0 ? (1.0 - ck) / qj : std::numeric_limits<double>::infinity());
    out.c[j] = std::max(0.0, cj - rho * qk);
    out.c[k] = std::min(1.0, ck + rho * qj);
  }
  out.rho = rho;
  return out;
}

double k_func(double eps, double delta, double z) {
  if (!(eps >= 0.0 && delta >= 0.0 && eps + delta > 0.0))
    throw std::invalid_argument("k_func requires eps + delta > 0");
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("k_func requires z in [0,1]");
  const double theta = delta / (delta + eps);
  const double theta_hat = theta * (1.0 - eps);
  return 1.0 - g_theta(theta_hat, (1.0 - eps) * z) * std::exp(-(1.0 + delta) * (1.0 - z));
}

double conv_raw(double theta, double x, double y) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("conv_raw requires x in [0,1]");
  const double cap = (1.0 - x) * (1.0 - x);
  if (!(y >= 0.0 && y <= cap + 1e-12)) throw std::invalid_argument("conv_raw requires 0 <= y <= (1-x)^2");
  if (y <= 0.0 || x >= 1.0) return 1.0 - g_theta(theta, x) * std::exp(-(1.0 - x));
  const double ratio = y / (1.0 - x);
  const double powed = std::exp((cap / y) * std::log1p(-ratio));
  return 1.0 - g_theta(theta, x) * powed;
}

double vertex_B(double x, double y) {
  const double radicand = x + y - x * (0.5 + x / 2.0) - y * y / 2.0;
  const double variance_branch = 1.0 - 0.5 * std::sqrt(std::max(0.0, radicand));
  const double linear_branch = 0.614 + 0.122 * 0.5 + 0.197 * y * y / 2.0;
  return std::max(variance_branch, linear_branch);
}

double f_var(double z) {
  if (z < 0.0) throw std::invalid_argument("f_var requires z >= 0");
  return 1.0 - 0.5 * std::sqrt(z);
}

}  // namespace osm
