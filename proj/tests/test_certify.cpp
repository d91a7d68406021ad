#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "osm/certify.hpp"
#include "osm/instance.hpp"
#include "osm/lp.hpp"

using namespace osm;

TEST_CASE("grid certification margin discipline") {
  const auto identity = [](double z) { return z; };
  const CertificateReport pass = certify_grid_1d(identity, 0.0, 1.0, 0.1, 1.0, -0.2);
  CHECK(pass.pass);
  CHECK(pass.grid_min == doctest::Approx(0.0));
  CHECK(pass.margin == doctest::Approx(0.1));

  const CertificateReport fail = certify_grid_1d(identity, 0.0, 1.0, 0.1, 1.0, 0.0);
  CHECK(!fail.pass);  // min 0 < tau + margin

  const CertificateReport bad =
      certify_grid_1d([](double z) { return z < 0.5 ? 1.0 : std::nan(""); }, 0.0, 1.0, 0.1, 1.0,
                      0.0);
  CHECK(!bad.pass);
  CHECK(bad.diagnostics.find("non-finite") != std::string::npos);
}

TEST_CASE("grid evaluation is worker-count independent") {
  const auto f = [](double z) { return std::cos(7.0 * z) + z; };
  const CertificateReport one = certify_grid_1d(f, 0.0, 2.0, 1e-4, 8.0, -2.0, "f", 1);
  const CertificateReport many = certify_grid_1d(f, 0.0, 2.0, 1e-4, 8.0, -2.0, "f", 7);
  CHECK(one.grid_min == many.grid_min);
  CHECK(one.argmin == many.argmin);
}

TEST_CASE("k-curve certificate") {
  std::vector<std::pair<double, double>> curve;
  const CertificateReport report = certify_k(0.11, 0.18, 1e-4, 0.678, &curve, 4);
  CHECK(report.pass);
  CHECK(report.grid_min >= 0.678 + 3e-4);
  CHECK(report.points == 10001);
  CHECK(curve.size() == 10001);
  CHECK(curve.front().first == 0.0);
  CHECK(curve.back().first == 1.0);
  // interior minimum
  REQUIRE(report.argmin.size() == 1);
  CHECK(report.argmin[0] > 0.0);
  CHECK(report.argmin[0] < 1.0);

  const CertificateReport too_high = certify_k(0.11, 0.18, 1e-3, 0.70, nullptr, 2);
  CHECK(!too_high.pass);

  const CertificateReport odd = certify_k(0.5, 0.5, 1e-3, 0.678, nullptr, 2);
  CHECK(odd.pass == (odd.grid_min >= odd.tau + odd.margin));
}

TEST_CASE("linear envelope certificate") {
  // the operative constants hold strictly inside the domain at coarse spacing
  const CertificateReport coarse = certify_linear_lb(2e-3, {0.614, 0.122, 0.197}, 4);
  CHECK(coarse.grid_min > 0.0);
  CHECK(coarse.pass == (coarse.grid_min >= coarse.margin));

  // a deliberately bad linear part dips negative near x -> 1
  const CertificateReport bad = certify_linear_lb(5e-3, {0.9, 0.0, 0.0}, 4);
  CHECK(!bad.pass);
  CHECK(bad.grid_min < 0.0);
}

TEST_CASE("linear envelope includes the curved y boundary") {
  // h = 0.25: at x = 0.5 the cap (1-x)^2 = 0.25 admits exactly y = 0.25
  const CertificateReport tiny = certify_linear_lb(0.25, {0.614, 0.122, 0.197}, 1);
  CHECK(tiny.points == 4 + 2 + 1 + 0);  // rows at x = 0, 0.25, 0.5, 0.75
}

TEST_CASE("vertex bound certificate") {
  const CertificateReport coarse = certify_vertex_bound(1e-2, 0.685, 2);
  CHECK(coarse.pass == (coarse.grid_min >= 0.685 + 1e-2));
  CHECK(coarse.diagnostics.find(">= 0.7") != std::string::npos);
  // the closed-form branch never trips at reasonable spacings
  CHECK(coarse.grid_min > 0.68);

  // raising the threshold by 0.02 flips the verdict: the check is not vacuous
  const CertificateReport raised = certify_vertex_bound(1e-4, 0.705, 4);
  CHECK(!raised.pass);
  const CertificateReport k_raised = certify_k(0.11, 0.18, 1e-4, 0.698, nullptr, 4);
  CHECK(!k_raised.pass);
}

TEST_CASE("structural checks on solved LPs") {
  SUBCASE("single saturated edge is the tight case") {
    BernoulliInstance inst;
    inst.n = 1;
    inst.T = 1;
    inst.p = {0.7};
    inst.edges = {{0, 0, 1.0}};
    const StructuralReport report = check_structural(solve_lp(inst), 0.5);
    CHECK(report.ok());
    // low-side inequality holds with equality
    CHECK(report.checks[1].slack == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("zero solution passes trivially") {
    BernoulliInstance inst;
    inst.n = 1;
    inst.T = 1;
    inst.p = {0.0};
    inst.edges = {{0, 0, 1.0}};
    const StructuralReport report = check_structural(solve_lp(inst), 0.5);
    CHECK(report.ok());
  }
  SUBCASE("the forced rescale optimum satisfies every check at theta = 1/2") {
    const StructuralReport report = check_structural(solve_lp(gen_rescale_example(4)), 0.5);
    CHECK(report.ok());
  }
  SUBCASE("random corpus: high-side, degree and binarity checks never trip") {
    // The low-side inequality is a statement about infinitesimally divided
    // mass; solver outputs with chunky masses can sit below it (take one
    // node, p = (0.5, 1), x = (0.5, 0.5) at theta = 1/2), so only its slack
    // is reported. The other three checks hold for arbitrary solutions.
    int low_side_violations = 0;
    for (std::uint64_t seed = 201; seed <= 215; ++seed) {
      RandomInstanceConfig cfg;
      cfg.n = 2 + static_cast<int>(seed % 5);
      cfg.T = 2 + static_cast<int>((3 * seed) % 5);
      cfg.density = 0.7;
      cfg.w_lo = 0.1;
      cfg.w_hi = 2.0;
      cfg.seed = seed;
      const LpSolution sol = solve_lp(gen_random(cfg));
      for (double theta : {0.25, 0.5, 0.75}) {
        const StructuralReport report = check_structural(sol, theta);
        for (const auto& check : report.checks) {
          if (check.name.find("beta_le") != std::string::npos) {
            if (!check.pass) ++low_side_violations;
          } else {
            CHECK(check.pass);
          }
        }
      }
    }
    CHECK(low_side_violations > 0);  // the documented counterexample class is real
  }
  SUBCASE("the chunky-mass counterexample to the low-side inequality") {
    BernoulliInstance inst;
    inst.n = 1;
    inst.T = 2;
    inst.p = {0.5, 1.0};
    inst.edges = {{0, 0, 1.0}, {0, 1, 1.0}};
    const LpSolution sol = solve_lp(inst);
    const LpStatistics st = lp_statistics(sol, 0.5);
    CHECK(st.S_le == doctest::Approx(1.0));
    CHECK(st.beta_le == doctest::Approx(0.75));  // < S_le (1 - theta + S_le/2) = 1
    const StructuralReport report = check_structural(sol, 0.5);
    CHECK(!report.checks[1].pass);
  }
}

TEST_CASE("analysis inequalities hold on random trials") {
  const AnalysisReport report = validate_analysis_inequalities(42, 2000);
  CHECK(report.ok());
  CHECK(report.trials == 2000);
}
