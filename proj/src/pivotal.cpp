#include "osm/pivotal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace osm {

namespace {

constexpr double kFracTol = 1e-12;

bool is_fractional(double v) { return std::fabs(v - std::round(v)) > kFracTol; }

void check_input(const std::vector<double>& v) {
  for (double x : v) {
    if (!(x >= -kFracTol && x <= 1.0 + kFracTol))
      throw std::invalid_argument("pivotal sampling requires entries in [0,1]");
  }
}

// One pivot on entries (a, b) of v: returns the two outcome vectors and the
// probability of the first. Preserves v_a + v_b and both expectations.
struct PivotOutcomes {
  double va1, vb1, p1;
  double va2, vb2;
};

PivotOutcomes pivot_outcomes(double va, double vb) {
  const double s = va + vb;
  if (s <= 1.0) {
    return {s, 0.0, va / s, 0.0, s};
  }
  return {1.0, s - 1.0, (1.0 - vb) / (2.0 - s), s - 1.0, 1.0};
}

std::vector<int> selected_indices(const std::vector<double>& v) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] > 0.5) out.push_back(i);
  return out;
}

void exact_rec(std::vector<double>& v, double prob, std::map<std::uint32_t, double>& acc) {
  if (prob <= 0.0) return;
  int a = -1, b = -1;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (is_fractional(v[i])) {
      if (a < 0) {
        a = i;
      } else {
        b = i;
        break;
      }
    }
  }
  if (a < 0) {
    std::uint32_t mask = 0;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (v[i] > 0.5) mask |= 1u << i;
    acc[mask] += prob;
    return;
  }
  if (b < 0) {  // lone fractional entry: independent rounding
    const double q = v[a];
    v[a] = 1.0;
    exact_rec(v, prob * q, acc);
    v[a] = 0.0;
    exact_rec(v, prob * (1.0 - q), acc);
    v[a] = q;
    return;
  }
  const double va = v[a], vb = v[b];
  const PivotOutcomes o = pivot_outcomes(va, vb);
  v[a] = o.va1;
  v[b] = o.vb1;
  exact_rec(v, prob * o.p1, acc);
  v[a] = o.va2;
  v[b] = o.vb2;
  exact_rec(v, prob * (1.0 - o.p1), acc);
  v[a] = va;
  v[b] = vb;
}

}  // namespace

std::vector<int> ps_sample(const std::vector<double>& v_in, Rng& rng) {
  check_input(v_in);
  std::vector<double> v = v_in;
  for (;;) {
    int a = -1, b = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      if (is_fractional(v[i])) {
        if (a < 0) {
          a = i;
        } else {
          b = i;
          break;
        }
      }
    }
    if (a < 0) break;
    if (b < 0) {
      const bool on = rng.bernoulli(v[a]);
      v[a] = on ? 1.0 : 0.0;
      break;
    }
    const PivotOutcomes o = pivot_outcomes(v[a], v[b]);
    if (rng.bernoulli(o.p1)) {
      v[a] = o.va1;
      v[b] = o.vb1;
    } else {
      v[a] = o.va2;
      v[b] = o.vb2;
    }
  }
  return selected_indices(v);
}

SubsetDistribution ps_exact_distribution(const std::vector<double>& v) {
  if (v.size() > 16) throw std::invalid_argument("ps_exact_distribution guarded to n <= 16");
  check_input(v);
  std::map<std::uint32_t, double> acc;
  std::vector<double> work = v;
  exact_rec(work, 1.0, acc);
  SubsetDistribution dist;
  dist.n = static_cast<int>(v.size());
  dist.entries.assign(acc.begin(), acc.end());
  return dist;
}

SubsetDistribution independent_distribution(const std::vector<double>& v) {
  if (v.size() > 16) throw std::invalid_argument("independent_distribution guarded to n <= 16");
  check_input(v);
  const int n = static_cast<int>(v.size());
  SubsetDistribution dist;
  dist.n = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) prob *= (mask >> i) & 1u ? v[i] : 1.0 - v[i];
    if (prob > 0.0) dist.entries.emplace_back(mask, prob);
  }
  return dist;
}

std::vector<double> SubsetDistribution::marginals() const {
  std::vector<double> m(n, 0.0);
  for (const auto& [mask, prob] : entries)
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) m[i] += prob;
  return m;
}

double SubsetDistribution::prob_superset_of(std::uint32_t mask) const {
  double p = 0.0;
  for (const auto& [m, prob] : entries)
    if ((m & mask) == mask) p += prob;
  return p;
}

double SubsetDistribution::prob_disjoint_from(std::uint32_t mask) const {
  double p = 0.0;
  for (const auto& [m, prob] : entries)
    if ((m & mask) == 0) p += prob;
  return p;
}

NcdReport check_ncd(const SubsetDistribution& dist, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != dist.n)
    throw std::invalid_argument("marginal vector length mismatch");
  NcdReport report;
  for (std::uint32_t mask = 1; mask < (1u << dist.n); ++mask) {
    double prod_on = 1.0, prod_off = 1.0;
    for (int i = 0; i < dist.n; ++i) {
      if ((mask >> i) & 1u) {
        prod_on *= v[i];
        prod_off *= 1.0 - v[i];
      }
    }
    report.max_violation_ones =
        std::max(report.max_violation_ones, dist.prob_superset_of(mask) - prod_on);
    report.max_violation_zeros =
        std::max(report.max_violation_zeros, dist.prob_disjoint_from(mask) - prod_off);
  }
  return report;
}

}  // namespace osm
