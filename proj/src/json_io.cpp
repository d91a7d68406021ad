#include "osm/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace osm {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw std::invalid_argument("unknown field '" + key + "' in " + where);
  }
}

const json& require_field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw std::invalid_argument("missing field '" + key + "' in " + where);
  return *it;
}

json parse(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw std::invalid_argument("malformed JSON document");
  return doc;
}

void check_valid(const std::vector<std::string>& problems) {
  if (!problems.empty()) throw std::invalid_argument("invalid instance: " + problems.front());
}

}  // namespace

std::string write_json(const BernoulliInstance& inst) {
  json doc;
  doc["kind"] = "bernoulli";
  doc["n"] = inst.n;
  doc["T"] = inst.T;
  doc["p"] = inst.p;
  json edges = json::array();
  for (const Edge& e : inst.edges) edges.push_back({{"i", e.i + 1}, {"t", e.t + 1}, {"w", e.w}});
  doc["edges"] = edges;
  if (inst.vertex_weights) doc["vertex_weights"] = *inst.vertex_weights;
  return doc.dump(2) + "\n";
}

std::string write_json(const GeneralInstance& inst) {
  json doc;
  doc["kind"] = "general";
  doc["n"] = inst.n;
  doc["T"] = inst.T;
  json types = json::array();
  for (int t = 0; t < inst.T; ++t) {
    for (int j = 0; j < static_cast<int>(inst.types[t].size()); ++j) {
      json edges = json::array();
      for (const auto& [i, w] : inst.types[t][j].edges)
        edges.push_back({{"i", i + 1}, {"w", w}});
      types.push_back({{"t", t + 1}, {"j", j + 1}, {"p", inst.types[t][j].p}, {"edges", edges}});
    }
  }
  doc["types"] = types;
  return doc.dump(2) + "\n";
}

namespace {

BernoulliInstance bernoulli_from(const json& doc) {
  reject_unknown_fields(doc, {"kind", "n", "T", "p", "edges", "vertex_weights"}, "instance");
  BernoulliInstance inst;
  inst.n = require_field(doc, "n", "instance").get<int>();
  inst.T = require_field(doc, "T", "instance").get<int>();
  inst.p = require_field(doc, "p", "instance").get<std::vector<double>>();
  for (const json& e : require_field(doc, "edges", "instance")) {
    reject_unknown_fields(e, {"i", "t", "w"}, "edge");
    inst.edges.push_back({require_field(e, "i", "edge").get<int>() - 1,
                          require_field(e, "t", "edge").get<int>() - 1,
                          require_field(e, "w", "edge").get<double>()});
  }
  if (doc.contains("vertex_weights"))
    inst.vertex_weights = doc["vertex_weights"].get<std::vector<double>>();
  inst.normalize();
  check_valid(validate(inst));
  return inst;
}

GeneralInstance general_from(const json& doc) {
  reject_unknown_fields(doc, {"kind", "n", "T", "types"}, "instance");
  GeneralInstance inst;
  inst.n = require_field(doc, "n", "instance").get<int>();
  inst.T = require_field(doc, "T", "instance").get<int>();
  if (inst.T < 0) throw std::invalid_argument("negative T");
  inst.types.resize(inst.T);
  struct Item {
    int t, j;
    GeneralType type;
  };
  std::vector<Item> items;
  for (const json& ty : require_field(doc, "types", "instance")) {
    reject_unknown_fields(ty, {"t", "j", "p", "edges"}, "type");
    Item item;
    item.t = require_field(ty, "t", "type").get<int>() - 1;
    item.j = require_field(ty, "j", "type").get<int>() - 1;
    item.type.p = require_field(ty, "p", "type").get<double>();
    for (const json& e : require_field(ty, "edges", "type")) {
      reject_unknown_fields(e, {"i", "w"}, "type edge");
      item.type.edges.emplace_back(require_field(e, "i", "type edge").get<int>() - 1,
                                   require_field(e, "w", "type edge").get<double>());
    }
    std::sort(item.type.edges.begin(), item.type.edges.end());
    items.push_back(std::move(item));
  }
  for (auto& item : items) {
    if (item.t < 0 || item.t >= inst.T) throw std::invalid_argument("type time out of range");
    if (item.j != static_cast<int>(inst.types[item.t].size()))
      throw std::invalid_argument("type indices at each t must be 1..J in order");
    inst.types[item.t].push_back(std::move(item.type));
  }
  check_valid(validate(inst));
  return inst;
}

}  // namespace

AnyInstance read_instance_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.is_object()) throw std::invalid_argument("instance document must be an object");
  const std::string kind = require_field(doc, "kind", "instance").get<std::string>();
  AnyInstance any;
  if (kind == "bernoulli") {
    any.bernoulli = bernoulli_from(doc);
  } else if (kind == "general") {
    any.is_general = true;
    any.general = general_from(doc);
  } else {
    throw std::invalid_argument("unknown instance kind '" + kind + "'");
  }
  return any;
}

BernoulliInstance read_bernoulli_json(const std::string& text) {
  AnyInstance any = read_instance_json(text);
  if (any.is_general) throw std::invalid_argument("expected a bernoulli instance");
  return any.bernoulli;
}

GeneralInstance read_general_json(const std::string& text) {
  AnyInstance any = read_instance_json(text);
  if (!any.is_general) throw std::invalid_argument("expected a general instance");
  return any.general;
}

std::string write_json(const Stochastic3SatFormula& formula) {
  json doc;
  doc["num_vars"] = formula.num_vars;
  doc["k"] = formula.k;
  doc["clauses"] = formula.clauses;
  return doc.dump(2) + "\n";
}

Stochastic3SatFormula read_formula_json(const std::string& text) {
  const json doc = parse(text);
  reject_unknown_fields(doc, {"num_vars", "k", "clauses"}, "formula");
  Stochastic3SatFormula formula;
  formula.num_vars = require_field(doc, "num_vars", "formula").get<int>();
  formula.k = doc.value("k", 3);
  formula.clauses = require_field(doc, "clauses", "formula").get<std::vector<std::vector<int>>>();
  auto problems = validate(formula);
  if (!problems.empty()) throw std::invalid_argument("invalid formula: " + problems.front());
  return formula;
}

std::string write_json(const WeightedBernoulliSystem& sys) {
  json doc;
  doc["c"] = sys.c;
  doc["q"] = sys.q;
  if (sys.dist) {
    json dist = json::array();
    for (const auto& [mask, p] : sys.dist->entries) {
      json on = json::array();
      for (int i = 0; i < sys.dist->n; ++i)
        if ((mask >> i) & 1u) on.push_back(i + 1);
      dist.push_back({{"on", on}, {"p", p}});
    }
    doc["dist"] = dist;
  }
  return doc.dump(2) + "\n";
}

WeightedBernoulliSystem read_system_json(const std::string& text) {
  const json doc = parse(text);
  reject_unknown_fields(doc, {"c", "q", "dist"}, "system");
  WeightedBernoulliSystem sys;
  sys.c = require_field(doc, "c", "system").get<std::vector<double>>();
  sys.q = require_field(doc, "q", "system").get<std::vector<double>>();
  if (doc.contains("dist")) {
    SubsetDistribution dist;
    dist.n = sys.size();
    std::map<std::uint32_t, double> acc;
    for (const json& entry : doc["dist"]) {
      reject_unknown_fields(entry, {"on", "p"}, "dist entry");
      std::uint32_t mask = 0;
      for (int idx : require_field(entry, "on", "dist entry").get<std::vector<int>>()) {
        if (idx < 1 || idx > sys.size())
          throw std::invalid_argument("dist index out of range");
        mask |= 1u << (idx - 1);
      }
      acc[mask] += require_field(entry, "p", "dist entry").get<double>();
    }
    dist.entries.assign(acc.begin(), acc.end());
    sys.dist = std::move(dist);
  }
  auto problems = validate(sys);
  if (!problems.empty()) throw std::invalid_argument("invalid system: " + problems.front());
  return sys;
}

std::string write_json(const LpSolution& sol) {
  json entries = json::array();
  for (int i = 0; i < sol.n; ++i)
    for (int t = 0; t < sol.T; ++t)
      if (sol.xv(i, t) != 0.0)
        entries.push_back({{"i", i + 1}, {"t", t + 1}, {"v", sol.xv(i, t)}});
  json doc;
  doc["x"] = entries;
  doc["objective"] = sol.objective;
  return doc.dump(2) + "\n";
}

std::string write_json(const GeneralLpSolution& sol) {
  json entries = json::array();
  for (int t = 0; t < sol.T; ++t)
    for (int j = 0; j < static_cast<int>(sol.x[t].size()); ++j)
      for (int i = 0; i < sol.n; ++i)
        if (sol.x[t][j][i] != 0.0)
          entries.push_back({{"i", i + 1}, {"t", t + 1}, {"j", j + 1}, {"v", sol.x[t][j][i]}});
  json doc;
  doc["x"] = entries;
  doc["objective"] = sol.objective;
  return doc.dump(2) + "\n";
}

std::string write_json(const SimReport& report) {
  json doc;
  doc["replications"] = report.replications;
  doc["seed"] = report.seed;
  doc["mean"] = report.mean_weight;
  doc["stderr"] = report.std_error;
  json freq = json::array();
  for (int i = 0; i < report.n; ++i)
    for (int t = 0; t < report.T; ++t)
      if (report.match_freq_at(i, t) > 0.0)
        freq.push_back({{"i", i + 1}, {"t", t + 1}, {"f", report.match_freq_at(i, t)}});
  doc["match_freq"] = freq;
  json traj = json::array();
  for (int i = 0; i < report.n; ++i) {
    json row = json::array();
    for (int t = 0; t <= report.T; ++t)
      row.push_back(report.free_freq[static_cast<std::size_t>(i) * (report.T + 1) + t]);
    traj.push_back(row);
  }
  doc["free_trajectory"] = traj;
  return doc.dump(2) + "\n";
}

std::string write_json(const CertificateReport& report) {
  json doc;
  doc["target"] = report.target;
  doc["domain"] = report.domain;
  doc["h"] = report.h;
  doc["L"] = report.L;
  doc["L_source"] = report.L_source;
  doc["tau"] = report.tau;
  doc["margin"] = report.margin;
  doc["grid_min"] = report.grid_min;
  doc["argmin"] = report.argmin;
  doc["points"] = report.points;
  doc["pass"] = report.pass;
  doc["wall_seconds"] = report.wall_seconds;
  if (!report.diagnostics.empty()) doc["diagnostics"] = report.diagnostics;
  return doc.dump(2) + "\n";
}

std::string write_json(const StructuralReport& report) {
  json checks = json::array();
  for (const auto& check : report.checks)
    checks.push_back({{"name", check.name}, {"slack", check.slack}, {"pass", check.pass}});
  json doc;
  doc["theta"] = report.theta;
  doc["checks"] = checks;
  doc["ratio_floor"] = report.ratio_floor;
  doc["ok"] = report.ok();
  return doc.dump(2) + "\n";
}

std::string write_json(const AnalysisReport& report) {
  json doc;
  doc["trials"] = report.trials;
  doc["violations"] = report.violations;
  doc["witnesses"] = report.witnesses;
  doc["ok"] = report.ok();
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace osm
