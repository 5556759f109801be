// qpb: runs bundle scenarios, verification suites and exports.
// Exit codes: 0 success, 1 verification failure, 2 configuration or I/O error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qpb/cli.hpp"
#include "qpb/errors.hpp"

namespace {

void add_common(CLI::App* sub, qpb::ScenarioConfig& cfg, std::string& output) {
  sub->add_option("--group", cfg.group, "built-in group id (suq2, u1)");
  sub->add_option("--calculus", cfg.calculus, "built-in calculus id");
  sub->add_option("--bundle", cfg.bundle, "restrict bundle/connection suites to one scenario");
  sub->add_option("--pack", cfg.pack, "data pack file or built-in pack id");
  sub->add_option("--cap", cfg.cap, "degree cap (>= 2)");
  sub->add_option("--mode", cfg.mode, "quotient mode of the structure-group forms")->check(CLI::IsMember({"envelope", "exterior"}));
  sub->add_option("--t", cfg.t, "value of the 4D+ family parameter (default: symbolic t)");
  sub->add_option("--lambda", cfg.lambda, "value of lambda (default: symbolic)");
  sub->add_option("--mu-value", cfg.mu_value, "rational mu for numeric spot checks");
  sub->add_option("--omega-sq", cfg.omega_sq, "line bundle: potential with zero or nonzero omega(zeta)^2")
      ->check(CLI::IsMember({"zero", "nonzero"}));
  sub->add_option("--potential", cfg.potential, "trivial-default: potential A(zeta) in base forms");
  sub->add_option("--output", output, "report format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum principal bundles: scenarios, verification suites and exports"};
  app.require_subcommand(1);
  qpb::ScenarioConfig cfg;
  std::string output = "text";
  std::string suite = "all";
  std::string kind;
  std::string out_file;

  CLI::App* run = app.add_subcommand("run", "run a named scenario and compare with its targets");
  run->add_option("scenario", cfg.scenario, "hopf-3d | hopf-4dplus | hopf-classical | line-bundle | trivial-default")->required();
  add_common(run, cfg, output);

  CLI::App* verify = app.add_subcommand("verify", "run invariant batteries");
  verify->add_option("--suite", suite, "axioms | calculus | graded | bundle | connection | all");
  add_common(verify, cfg, output);

  CLI::App* exp = app.add_subcommand("export", "write relations, Omega(M) bases or curvatures as JSON");
  exp->add_option("kind", kind, "relations | omegaM | curvature")->required();
  exp->add_option("--scenario", cfg.scenario, "scenario providing the bundle")->required();
  exp->add_option("--degree", cfg.degree, "omegaM: form degree");
  exp->add_option("--base-degree", cfg.kdeg, "omegaM: maximal base word degree");
  exp->add_option("--out", out_file, "output file (default: stdout)");
  add_common(exp, cfg, output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    qpb::Report r;
    if (run->parsed()) r = qpb::run_scenario(cfg);
    else if (verify->parsed()) r = qpb::run_suite(suite, cfg);
    else r = qpb::export_data(kind, cfg);
    std::string text = output == "json" || exp->parsed() ? qpb::render_json(r) : qpb::render_text(r);
    if (!out_file.empty()) {
      std::ofstream f(out_file, std::ios::binary);
      if (!(f << text)) {
        std::cerr << "error: cannot write '" << out_file << "'\n";
        return 2;
      }
    } else {
      std::cout << text;
    }
    return r.status;
  } catch (const qpb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
