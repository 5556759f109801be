#include "qpb/packs.hpp"

#include <fstream>
#include <sstream>

#include "qpb/errors.hpp"
#include "qpb/expr.hpp"

namespace qpb {

namespace {

// Fundamental corepresentation u = [[alpha, -mu gamma*], [gamma, alpha*]];
// relations oriented toward alpha^k gamma^m gamma*^n and alpha*^k gamma^m gamma*^n.
const char* kSuq2 = R"json({
  "group": {
    "name": "suq2",
    "generators": ["alpha", "alpha*", "gamma", "gamma*"],
    "star": {"alpha": "alpha*", "gamma": "gamma*"},
    "relations": [
      ["gamma alpha", "mu^-1*alpha gamma"],
      ["gamma* alpha", "mu^-1*alpha gamma*"],
      ["gamma alpha*", "mu*alpha* gamma"],
      ["gamma* alpha*", "mu*alpha* gamma*"],
      ["gamma* gamma", "gamma gamma*"],
      ["alpha alpha*", "1-mu^2*gamma gamma*"],
      ["alpha* alpha", "1-gamma gamma*"]
    ],
    "matrices": [[["alpha", "-mu*gamma*"], ["gamma", "alpha*"]]]
  }
})json";

const char* kU1 = R"json({
  "group": {
    "name": "u1",
    "generators": ["z", "z*"],
    "star": {"z": "z*"},
    "relations": [["z z*", "1"], ["z* z", "1"]],
    "matrices": [[["z"]], [["z*"]]]
  }
})json";

const char* k3d = R"json({
  "calculus": {
    "name": "3d",
    "group": "suq2",
    "basis": ["ep", "em", "eta"],
    "pi": {"alpha": "1/(1+mu^2)*eta", "alpha*": "-mu^2/(1+mu^2)*eta", "gamma": "ep", "gamma*": "em"},
    "circ": {
      "ep":  {"alpha": "mu^-1*ep", "alpha*": "mu*ep", "gamma": "0", "gamma*": "0"},
      "em":  {"alpha": "mu^-1*em", "alpha*": "mu*em", "gamma": "0", "gamma*": "0"},
      "eta": {"alpha": "mu^-2*eta", "alpha*": "mu^2*eta", "gamma": "0", "gamma*": "0"}
    },
    "preimages": {"ep": "gamma", "em": "gamma*", "eta": "alpha-alpha*"},
    "ideal": ["gamma^2", "gamma gamma*", "gamma*^2", "alpha gamma-gamma", "alpha gamma*-gamma*",
              "mu^2*alpha+alpha*-(1+mu^2)"],
    "mode": "envelope"
  }
})json";

const char* k4dplus = R"json({
  "calculus": {
    "name": "4d+",
    "group": "suq2",
    "basis": ["tau", "ep", "eta", "em"],
    "pi": {"alpha": "(tau+eta)/(1+mu^2)", "alpha*": "(tau-mu^2*eta)/(1+mu^2)", "gamma": "ep", "gamma*": "em"},
    "circ": {
      "ep": {"alpha": "ep", "alpha*": "ep", "gamma": "0",
             "gamma*": "-(1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))*tau-(1-mu^2)/(mu*(1+mu^2))*eta"},
      "em": {"alpha": "em", "alpha*": "em", "gamma*": "0",
             "gamma": "-(1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))*tau-(1-mu^2)/(mu*(1+mu^2))*eta"},
      "eta": {"gamma": "-(1-mu^2)/mu*ep", "gamma*": "-(1-mu^2)/mu*em",
              "alpha*": "-((1+mu)*(1-mu^2)/(mu*(1+mu^2)*(1-mu^3))*tau-2*mu/(1+mu^2)*eta)",
              "alpha": "mu*(1+mu)*(1-mu^2)/((1+mu^2)*(1-mu^3))*tau+2*mu/(1+mu^2)*eta"},
      "tau": {"gamma": "(1-mu)*(1-mu^3)/mu*ep", "gamma*": "(1-mu)*(1-mu^3)/mu*em",
              "alpha*": "(1+mu^4)/(mu*(1+mu^2))*tau-mu*(1-mu)*(1-mu^3)/(1+mu^2)*eta",
              "alpha": "(1+mu^4)/(mu*(1+mu^2))*tau+(1-mu)*(1-mu^3)/(mu*(1+mu^2))*eta"}
    },
    "preimages": {"tau": "mu^2*alpha+alpha*-(1+mu^2)", "ep": "gamma", "eta": "alpha-alpha*", "em": "gamma*"},
    "ideal": [
      "(mu^2*alpha+alpha*-(mu^3+1/mu))*(mu^2*alpha+alpha*-(1+mu^2))",
      "(mu^2*alpha+alpha*-(mu^3+1/mu))*gamma",
      "(mu^2*alpha+alpha*-(mu^3+1/mu))*(alpha-alpha*)",
      "(mu^2*alpha+alpha*-(mu^3+1/mu))*gamma*",
      "gamma^2", "gamma*(alpha-alpha*)",
      "mu^2*alpha*^2-(1+mu^2)*(alpha alpha*-gamma gamma*)+alpha^2",
      "gamma* (alpha-alpha*)", "gamma*^2"
    ],
    "mode": "exterior"
  }
})json";

const char* kU1From3d = R"json({
  "calculus": {
    "name": "u1-from-3d",
    "group": "u1",
    "basis": ["zeta"],
    "pi": {"z": "1/(1+mu^2)*zeta", "z*": "-mu^2/(1+mu^2)*zeta"},
    "circ": {"zeta": {"z": "mu^-2*zeta", "z*": "mu^2*zeta"}},
    "preimages": {"zeta": "z-z*"},
    "ideal": ["mu^2*z+z*-(1+mu^2)"],
    "mode": "envelope"
  }
})json";

// The preimage of zeta is chosen so that the embedded differential vanishes.
const char* kU1From4dplus = R"json({
  "calculus": {
    "name": "u1-from-4d+",
    "group": "u1",
    "basis": ["zeta"],
    "pi": {"z": "mu/(1+mu)*zeta", "z*": "-1/(1+mu)*zeta"},
    "circ": {"zeta": {"z": "mu*zeta", "z*": "mu^-1*zeta"}},
    "preimages": {"zeta": "((1+mu)^2*(z-1)-(z^2-1))/mu^2"},
    "ideal": ["z+mu*z*-(1+mu)"],
    "mode": "envelope"
  }
})json";

const char* kU1Line = R"json({
  "calculus": {
    "name": "u1-line",
    "group": "u1",
    "basis": ["zeta"],
    "pi": {"z": "lambda/(1+lambda)*zeta", "z*": "-1/(1+lambda)*zeta"},
    "circ": {"zeta": {"z": "lambda*zeta", "z*": "lambda^-1*zeta"}},
    "preimages": {"zeta": "z-z*"},
    "ideal": ["z*+z/lambda-(1+1/lambda)"],
    "mode": "envelope"
  }
})json";

const char* kU1Classical = R"json({
  "calculus": {
    "name": "u1-classical",
    "group": "u1",
    "basis": ["zeta"],
    "pi": {"z": "1/2*zeta", "z*": "-1/2*zeta"},
    "circ": {"zeta": {"z": "zeta", "z*": "zeta"}},
    "preimages": {"zeta": "z-z*"},
    "ideal": ["z+z*-2"],
    "mode": "envelope"
  }
})json";

const char* kBaseDefault = R"json({
  "base": {
    "name": "default",
    "generators": ["e1", "e2"],
    "graded_commutative": true,
    "relations": [],
    "differential": {"e1": "0", "e2": "0"},
    "star": {"e1": "e1", "e2": "e2"}
  }
})json";

const char* kBaseHeisenberg = R"json({
  "base": {
    "name": "heisenberg",
    "generators": ["e1", "e2", "e3"],
    "graded_commutative": true,
    "relations": [],
    "differential": {"e1": "0", "e2": "0", "e3": "e1 e2"},
    "star": {"e1": "e1", "e2": "e2", "e3": "e3"}
  }
})json";

const char* kBaseNilpotent = R"json({
  "base": {
    "name": "nilpotent",
    "generators": ["x"],
    "graded_commutative": false,
    "relations": ["x^3"],
    "differential": {"x": "0"},
    "star": {"x": "x"}
  }
})json";

const std::map<std::string, const char*>& table() {
  static const std::map<std::string, const char*> t{
      {"suq2", kSuq2},
      {"u1", kU1},
      {"3d", k3d},
      {"4d+", k4dplus},
      {"u1-from-3d", kU1From3d},
      {"u1-from-4d+", kU1From4dplus},
      {"u1-line", kU1Line},
      {"u1-classical", kU1Classical},
      {"default", kBaseDefault},
      {"heisenberg", kBaseHeisenberg},
      {"nilpotent", kBaseNilpotent},
  };
  return t;
}

}  // namespace

Json builtin_pack(const std::string& id) {
  auto it = table().find(id);
  if (it == table().end()) throw InvalidInput("unknown pack '" + id + "'");
  return Json::parse(it->second);
}

std::vector<std::string> builtin_pack_ids() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

Json resolve_pack(const std::string& ref) {
  if (table().count(ref)) return builtin_pack(ref);
  std::ifstream in(ref);
  if (!in) throw InvalidInput("pack '" + ref + "' is neither built in nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw ParseError("pack '" + ref + "': " + e.what());
  }
}

std::shared_ptr<Presentation> load_group(const Json& pack) {
  if (!pack.contains("group")) throw InvalidInput("pack has no group section");
  const Json& g = pack.at("group");
  std::vector<std::string> gens = g.at("generators").get<std::vector<std::string>>();
  auto lookup = [&gens](const std::string& n) {
    for (size_t k = 0; k < gens.size(); ++k)
      if (gens[k] == n) return static_cast<int>(k);
    return -1;
  };
  std::vector<int> star(gens.size(), -1);
  for (auto it = g.at("star").begin(); it != g.at("star").end(); ++it) {
    int a = lookup(it.key());
    int b = lookup(it.value().get<std::string>());
    if (a < 0 || b < 0) throw InvalidInput("star table names an unknown generator");
    star[a] = b;
    star[b] = a;
  }
  std::vector<Rule> rules;
  for (const Json& rel : g.at("relations")) {
    Lin lhs = parse_free(rel.at(0).get<std::string>(), lookup);
    if (lhs.size() != 1 || !lhs.begin()->second.is_one() || lhs.begin()->first.empty())
      throw InvalidInput("relation left side must be a single word: " + rel.at(0).get<std::string>());
    rules.push_back({lhs.begin()->first, parse_free(rel.at(1).get<std::string>(), lookup)});
  }
  auto p = std::make_shared<Presentation>(g.at("name").get<std::string>(), gens, star, rules);
  auto bad = p->check_confluence();
  if (!bad.empty()) throw InvalidInput("rewrite system of '" + p->name() + "' is not confluent: " + bad.front());
  std::vector<std::vector<std::vector<Lin>>> mats;
  for (const Json& m : g.at("matrices")) {
    std::vector<std::vector<Lin>> rows;
    for (const Json& r : m) {
      std::vector<Lin> row;
      for (const Json& e : r) row.push_back(parse_free(e.get<std::string>(), lookup));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  p->derive_from_matrices(mats);
  return p;
}

std::shared_ptr<Presentation> builtin_group(const std::string& id) { return load_group(builtin_pack(id)); }

Scalar parse_scalar_param(const std::string& text, const Params& params) {
  Scalar s = Scalar::parse(text);
  for (const auto& [v, val] : params) s = s.subst(v, val);
  return s;
}

}  // namespace qpb
