#include <stdexcept>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "osm/instance.hpp"
#include "osm/json_io.hpp"

using namespace osm;

TEST_CASE("validate accepts a well-formed 2x2 instance") {
  BernoulliInstance inst;
  inst.n = 2;
  inst.T = 2;
  inst.p = {0.5, 1.0};
  inst.edges = {{0, 0, 1.0}, {1, 1, 2.0}};
  inst.normalize();
  CHECK(validate(inst).empty());
}

TEST_CASE("validate flags out-of-range arrival probability") {
  BernoulliInstance inst;
  inst.n = 1;
  inst.T = 1;
  inst.p = {1.5};
  auto report = validate(inst);
  REQUIRE(!report.empty());
  CHECK(report.front().find("arrival probability out of range") != std::string::npos);
}

TEST_CASE("validate flags vertex-weight mismatch") {
  BernoulliInstance inst;
  inst.n = 2;
  inst.T = 1;
  inst.p = {1.0};
  inst.edges = {{0, 0, 1.0}, {1, 0, 3.0}};
  inst.vertex_weights = std::vector<double>{1.0, 2.0};
  auto report = validate(inst);
  REQUIRE(!report.empty());
  CHECK(report.front().find("differs from vertex weight") != std::string::npos);
}

TEST_CASE("gen_rescale_example shapes") {
  SUBCASE("n=2") {
    const BernoulliInstance inst = gen_rescale_example(2, 1000.0);
    CHECK(inst.n == 2);
    CHECK(inst.T == 3);
    CHECK(inst.p == std::vector<double>{0.5, 0.5, 1.0});
    CHECK(inst.weight(0, 0) == 1.0);
    CHECK(inst.weight(1, 1) == 1.0);
    CHECK(inst.weight(0, 2) == 1000.0);
    CHECK(inst.weight(1, 2) == 1000.0);
    CHECK(inst.edges.size() == 4);
  }
  SUBCASE("n=1 has p=(0,1)") {
    const BernoulliInstance inst = gen_rescale_example(1);
    CHECK(inst.p == std::vector<double>{0.0, 1.0});
  }
  SUBCASE("n=10 has 20 edges and p_t=0.9") {
    const BernoulliInstance inst = gen_rescale_example(10);
    CHECK(inst.edges.size() == 20);
    for (int t = 0; t < 10; ++t) CHECK(inst.p[t] == doctest::Approx(0.9));
    CHECK(inst.p[10] == 1.0);
  }
  SUBCASE("n=0 rejected") { CHECK_THROWS_AS(gen_rescale_example(0), std::invalid_argument); }
}

TEST_CASE("gen_uniform_star shapes") {
  const BernoulliInstance one = gen_uniform_star(1);
  CHECK(one.edges.size() == 1);
  CHECK(one.p == std::vector<double>{1.0});
  const BernoulliInstance star = gen_uniform_star(3);
  CHECK(star.edges.size() == 3);
  for (const Edge& e : star.edges) CHECK(e.w == 1.0);
  CHECK(star.vertex_weighted());
}

TEST_CASE("gen_random determinism and density edges") {
  RandomInstanceConfig cfg;
  cfg.n = 6;
  cfg.T = 6;
  cfg.density = 0.5;
  cfg.seed = 1;
  const std::string a = write_json(gen_random(cfg));
  const std::string b = write_json(gen_random(cfg));
  CHECK(a == b);

  cfg.density = 0.0;
  CHECK(gen_random(cfg).edges.empty());

  cfg.density = 1.0;
  cfg.n = 2;
  cfg.T = 2;
  cfg.seed = 7;
  const BernoulliInstance full = gen_random(cfg);
  CHECK(full.edges.size() == 4);
  CHECK(write_json(full) == write_json(gen_random(cfg)));

  cfg.w_lo = 2.0;
  cfg.w_hi = 1.0;
  CHECK_THROWS_AS(gen_random(cfg), std::invalid_argument);
}

TEST_CASE("build_from_3sat wires clause neighborhoods by literal sign") {
  // x1 negated -> T^1; x3, x5 positive -> F^3, F^5.
  Stochastic3SatFormula formula;
  formula.num_vars = 5;
  formula.k = 3;
  formula.clauses = {{-1, 3, 5}};
  const SatReduction red = build_from_3sat_detailed(formula, 0.05);
  const BernoulliInstance& inst = red.instance;
  CHECK(inst.n == 3 + 5);  // T^1,T^3,T^5 and F^1..F^5
  CHECK(inst.T == 6);
  const int clause_t = red.clause_time.front();
  CHECK(inst.p[clause_t] == 0.05);
  std::set<int> neighbors;
  for (const Edge& e : inst.edges)
    if (e.t == clause_t) neighbors.insert(e.i);
  CHECK(neighbors == std::set<int>{red.true_node[0], red.false_node[2], red.false_node[4]});
  for (const Edge& e : inst.edges) CHECK(e.w == 1.0);
}

TEST_CASE("build_from_3sat with one odd variable and no clauses") {
  Stochastic3SatFormula formula;
  formula.num_vars = 1;
  formula.clauses = {};
  const BernoulliInstance inst = build_from_3sat(formula, 0.05);
  CHECK(inst.n == 2);
  CHECK(inst.T == 1);
  CHECK(inst.p == std::vector<double>{1.0});
}

TEST_CASE("build_from_3sat offline-node count and clause degree") {
  Stochastic3SatFormula formula;
  formula.num_vars = 6;
  formula.k = 3;
  formula.clauses = {{1, 2, 3}, {-1, 4}, {5, 6}, {-3, 2}};
  const BernoulliInstance inst = build_from_3sat(formula, 0.05);
  CHECK(inst.n == 2 * 3 + 3);
  std::vector<int> degree(inst.T, 0);
  for (const Edge& e : inst.edges) degree[e.t]++;
  for (int t = 6; t < inst.T; ++t) CHECK(degree[t] <= 3);
}

TEST_CASE("build_from_3sat rejects negated even variables") {
  Stochastic3SatFormula formula;
  formula.num_vars = 2;
  formula.clauses = {{-2}};
  CHECK_THROWS_AS(build_from_3sat(formula, 0.05), std::invalid_argument);
}

TEST_CASE("instance JSON round-trip") {
  const BernoulliInstance star = gen_uniform_star(4);
  const BernoulliInstance back = read_bernoulli_json(write_json(star));
  CHECK(write_json(back) == write_json(star));

  RandomInstanceConfig cfg;
  cfg.n = 5;
  cfg.T = 4;
  cfg.density = 0.7;
  cfg.vertex_weighted = true;
  cfg.seed = 11;
  const BernoulliInstance rnd = gen_random(cfg);
  CHECK(write_json(read_bernoulli_json(write_json(rnd))) == write_json(rnd));
}

TEST_CASE("general instance JSON round-trip and invariants") {
  GeneralInstance inst;
  inst.n = 2;
  inst.T = 2;
  inst.types.resize(2);
  inst.types[0].push_back({0.5, {{0, 1.0}}});
  inst.types[0].push_back({0.3, {{1, 2.0}}});
  inst.types[1].push_back({1.0, {{0, 1.5}, {1, 0.5}}});
  CHECK(validate(inst).empty());
  const GeneralInstance back = read_general_json(write_json(inst));
  CHECK(write_json(back) == write_json(inst));

  inst.types[0][1].p = 0.7;  // mass 1.2 at t=1
  auto report = validate(inst);
  REQUIRE(!report.empty());
  CHECK(report.front().find("exceed 1") != std::string::npos);
  CHECK_THROWS_AS(read_general_json(write_json(inst)), std::invalid_argument);
}

TEST_CASE("instance JSON rejects missing and unknown fields") {
  CHECK_THROWS_WITH_AS(read_bernoulli_json(R"({"kind":"bernoulli","n":1,"T":1,"edges":[]})"),
                       doctest::Contains("missing field 'p'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      read_bernoulli_json(R"({"kind":"bernoulli","n":1,"T":1,"p":[1.0],"edges":[],"zzz":1})"),
      doctest::Contains("unknown field 'zzz'"), std::invalid_argument);
  CHECK_THROWS_AS(read_instance_json("{"), std::invalid_argument);
}

TEST_CASE("formula JSON round-trip") {
  Stochastic3SatFormula formula;
  formula.num_vars = 4;
  formula.k = 2;
  formula.clauses = {{1, 2}, {-3, 4}};
  const Stochastic3SatFormula back = read_formula_json(write_json(formula));
  CHECK(back.num_vars == 4);
  CHECK(back.k == 2);
  CHECK(back.clauses == formula.clauses);
}
