#pragma once

#include <string>

#include "osm/bounds.hpp"
#include "osm/certify.hpp"
#include "osm/engine.hpp"
#include "osm/instance.hpp"
#include "osm/lp.hpp"

namespace osm {

// Instances; the file format is 1-based and rejects unknown fields.
// Bernoulli: {"kind":"bernoulli","n":..,"T":..,"p":[..],"edges":[{"i","t","w"}],
//             "vertex_weights":[..]?}
// General:   {"kind":"general","n":..,"T":..,
//             "types":[{"t":..,"j":..,"p":..,"edges":[{"i","w"}]}]}
struct AnyInstance {
  bool is_general = false;
  BernoulliInstance bernoulli;
  GeneralInstance general;
};

std::string write_json(const BernoulliInstance& inst);
std::string write_json(const GeneralInstance& inst);
AnyInstance read_instance_json(const std::string& text);
BernoulliInstance read_bernoulli_json(const std::string& text);
GeneralInstance read_general_json(const std::string& text);

// {"num_vars":..,"k":..,"clauses":[[signed literals]]}
std::string write_json(const Stochastic3SatFormula& formula);
Stochastic3SatFormula read_formula_json(const std::string& text);

// {"c":[..],"q":[..],"dist":[{"on":[1-based indices],"p":..}]?}; no "dist"
// means independent coordinates.
std::string write_json(const WeightedBernoulliSystem& sys);
WeightedBernoulliSystem read_system_json(const std::string& text);

// Solutions: {"x":[{"i","t",("j")?,"v"}],"objective":..}
std::string write_json(const LpSolution& sol);
std::string write_json(const GeneralLpSolution& sol);

// Reports (one-way, for CLI output).
std::string write_json(const SimReport& report);
std::string write_json(const CertificateReport& report);
std::string write_json(const StructuralReport& report);
std::string write_json(const AnalysisReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace osm
