#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qpb {

using OJson = nlohmann::ordered_json;

struct ScenarioConfig {
  std::string scenario;
  std::string group;     // axioms suite: one built-in group, empty for all
  std::string calculus;  // calculus/graded suites and trivial-default; empty for the defaults
  std::string bundle;    // bundle/connection suites: one scenario id, empty for all
  std::string pack;      // pack file (or built-in id) overriding group/calculus
  int cap = 3;
  std::string mode;      // envelope | exterior; empty for the scenario default
  std::string t = "t";
  std::string lambda;    // empty keeps lambda symbolic
  std::string mu_value;  // rational spot-check point, empty for none
  std::string omega_sq = "zero";
  std::string potential = "0";
  int degree = 0;        // export omegaM
  int kdeg = 2;
};

/// Result of a command.  `status` is the process exit code: 0 when every
/// target matched, 1 on a verification failure.  Configuration problems are
/// thrown as qpb::Error and map to exit code 2.
struct Report {
  OJson body;
  int status = 0;
};

std::vector<std::string> scenario_ids();
/// Validates the config (cap, mode, scenario id, packs); throws InvalidInput.
void check_config(const ScenarioConfig& cfg);

Report run_scenario(const ScenarioConfig& cfg);
/// Suites: axioms, calculus, graded, bundle, connection, all.
Report run_suite(const std::string& suite, const ScenarioConfig& cfg);
/// Kinds: relations, omegaM, curvature.
Report export_data(const std::string& kind, const ScenarioConfig& cfg);

std::string render_text(const Report& r);
std::string render_json(const Report& r);

}  // namespace qpb
